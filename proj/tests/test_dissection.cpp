#include <gtest/gtest.h>

#include "qseries/dissection.hpp"

using namespace qseries;

namespace {

const DissectionSpec kP1{14, 3, 7, 7};

// (1 - q^k) products expanded factor by factor, independent of pochhammer_multi.
LaurentSeries naive_product(const std::vector<std::pair<std::int64_t, std::int64_t>>& factors, std::int64_t base,
                            std::int64_t order) {
    LaurentSeries acc = LaurentSeries::monomial(1, 0, order);
    for (const auto& [e, pw] : factors) {
        for (std::int64_t k = e; k < order; k += base) {
            const auto f = sub(LaurentSeries::monomial(1, 0, order), LaurentSeries::monomial(1, k, order));
            acc = mul(acc, power(f, pw));
        }
    }
    return acc;
}

}  // namespace

TEST(Dissection, CombinedEqualsLeftSide) {
    const auto d = p_dissect(kP1, 120);
    EXPECT_EQ(d.combined, dissection_lhs(kP1, 120));
    const auto want = naive_product({{14, 2}, {10, 1}, {4, 1}, {7, -2}, {3, -1}, {11, -1}}, 14, 120);
    EXPECT_EQ(d.combined, want);
}

TEST(Dissection, ComponentsSitOnTheirProgression) {
    const auto d = p_dissect(kP1, 120);
    ASSERT_EQ(d.components.size(), 7u);
    for (std::int64_t j = 0; j < 7; ++j) {
        for (const auto& [e, c] : d.components[static_cast<std::size_t>(j)].terms()) {
            ASSERT_TRUE(e.is_integer());
            EXPECT_EQ(((e.num() - j * kP1.r) % 7 + 7) % 7, 0) << "component " << j << " at q^" << e;
        }
    }
}

TEST(Dissection, ProgressionOfCombinedIsOneComponent) {
    const auto d = p_dissect(kP1, 120);
    for (std::int64_t j = 0; j < 7; ++j) {
        const std::int64_t c = (j * kP1.r) % 7;
        EXPECT_EQ(extract_progression(d.combined, 7, c), extract_progression(d.components[static_cast<std::size_t>(j)], 7, c))
            << "j = " << j;
    }
}

TEST(Dissection, ZeroComponent) {
    const auto d = p_dissect(kP1, 120);
    EXPECT_TRUE(d.components[5].is_zero());
    EXPECT_TRUE(dissection_component_term(kP1, 5).normalize().zero);
    for (std::int64_t j : {0, 1, 2, 3, 4, 6}) EXPECT_FALSE(d.components[static_cast<std::size_t>(j)].is_zero()) << j;
}

TEST(Dissection, TrivialDissection) {
    const DissectionSpec d{5, 1, 2, 1};
    const auto r = p_dissect(d, 60);
    ASSERT_EQ(r.components.size(), 1u);
    EXPECT_EQ(r.components[0], dissection_lhs(d, 60));
}

TEST(Dissection, Validation) {
    EXPECT_THROW(p_dissect({14, 7, 7, 7}, 20), DissectionError);
    EXPECT_THROW(p_dissect({14, 0, 7, 7}, 20), DissectionError);
    try {
        validate({10, 3, 1, 2});
        FAIL() << "expected DissectionError";
    } catch (const DissectionError& e) {
        EXPECT_NE(std::string(e.what()).find("exponent q^"), std::string::npos) << e.what();
    }
}

TEST(Dissection, Normalization) {
    // (q^-14; q^98) = -q^-14 (1 - q^14) (q^84; q^98).
    const ProductTerm t{1, 0, 98, {{-14, 1}}};
    const auto n = t.normalize();
    EXPECT_EQ(n.sign, -1);
    EXPECT_EQ(n.shift, -14);
    EXPECT_EQ(n.poch.at(84), 1);
    EXPECT_EQ(n.binomial.at(14), 1);
    EXPECT_EQ(ProductTerm::from_normal(n).series(60), t.series(60));
    // (q^17; q^14) = (q^3; q^14) / (1 - q^3).
    const ProductTerm u{1, 0, 14, {{17, 1}}};
    EXPECT_EQ(u.series(80), naive_product({{17, 1}}, 14, 80));
    EXPECT_THROW(ProductTerm({1, 0, 14, {{0, -1}}}).normalize(), DissectionError);
}

TEST(Dissection, DerivedExpansionMatches) {
    EXPECT_TRUE(verify_diss_derived(120).pass);
    EXPECT_EQ(diss_derived_terms().size(), 6u);
}

TEST(Dissection, PrintedExpansionAtOrder120) {
    const auto r = verify_diss_expansion(120);
    EXPECT_TRUE(r.pass) << "first mismatch at q^" << r.first_mismatch->exponent;
}

TEST(Dissection, PrintedExpansionVacuousAtOrder3) { EXPECT_TRUE(verify_diss_expansion(3).pass); }

TEST(Dissection, DroppedTermFails) { EXPECT_FALSE(verify_diss_expansion(120, 4).pass); }

TEST(Dissection, TermByTermReport) {
    const auto rs = diss_term_report(120);
    ASSERT_EQ(rs.size(), 6u);
    for (std::size_t k = 0; k < 5; ++k) EXPECT_TRUE(rs[k].pass) << rs[k].id;
    // Sixth term: printed and derived share the q^4 prefactor but differ in sign.
    EXPECT_EQ(diss_printed_terms()[5].shift, 4);
    EXPECT_EQ(diss_derived_terms()[5].shift, 4);
    EXPECT_EQ(diss_derived_terms()[5].sign, -1);
}

TEST(Dissection, VanishingFamilies) {
    const std::vector<std::pair<std::string, std::int64_t>> want{{"S1*", 72}, {"S2*", 71}, {"S3*", 71},
                                                                 {"V1*", 36}, {"V2*", 36}, {"V3*", 35}};
    for (const auto& [name, checked] : want) {
        const auto f = vanishing_family(name);
        ASSERT_TRUE(f.has_value()) << name;
        const auto cert = vanishing_scan(*f, 500);
        EXPECT_TRUE(cert.result.pass) << name;
        EXPECT_EQ(cert.checked, checked) << name;
        EXPECT_FALSE(cert.witnesses.empty()) << name;
        EXPECT_GT(cert.max_abs_off_class, 0) << name;
    }
}

TEST(Dissection, VanishingAgainstDirectExtraction) {
    for (const auto& f : vanishing_families()) {
        const auto s = pochhammer_multi(f.product, 300);
        EXPECT_TRUE(extract_progression(s, f.modulus, f.residue).is_zero()) << f.name;
    }
}

TEST(Dissection, WrongResidueFails) {
    auto f = *vanishing_family("S1*");
    f.residue = 2;
    const auto cert = vanishing_scan(f, 500);
    ASSERT_FALSE(cert.result.pass);
    const auto s = pochhammer_multi(f.product, 50);
    std::int64_t first = -1;
    for (std::int64_t n = 2; n < 50 && first < 0; n += 7) {
        if (s.coefficient(n) != 0) first = n;
    }
    EXPECT_EQ(cert.result.first_mismatch->exponent, Rational(first));
}
