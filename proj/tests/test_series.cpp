#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "qseries/laurent_series.hpp"

using namespace qseries;

namespace {

// Plain truncated polynomials over int64, used as an independent oracle.
using Poly = std::vector<long long>;

Poly poly_mul(const Poly& a, const Poly& b, std::size_t n) {
    Poly c(n, 0);
    for (std::size_t i = 0; i < a.size() && i < n; ++i) {
        for (std::size_t j = 0; j < b.size() && i + j < n; ++j) c[i + j] += a[i] * b[j];
    }
    return c;
}

LaurentSeries from_poly(const Poly& p, std::int64_t order) {
    std::vector<Integer> c(p.begin(), p.end());
    return LaurentSeries::from_dense(1, 0, c, order);
}

Poly random_poly(std::mt19937& rng, std::size_t n, bool unit) {
    std::uniform_int_distribution<int> d(-3, 3);
    Poly p(n);
    for (auto& c : p) c = d(rng);
    if (unit) p[0] = 1;
    return p;
}

}  // namespace

TEST(Rational, NormalizesAndParses) {
    EXPECT_EQ(Rational(6, -4).str(), "-3/2");
    EXPECT_EQ(Rational::parse("14/28"), Rational(1, 2));
    EXPECT_EQ(Rational::parse("-7"), Rational(-7));
    EXPECT_THROW(Rational::parse("1/0"), std::invalid_argument);
    EXPECT_THROW(Rational::parse("x"), std::invalid_argument);
    EXPECT_THROW(Rational(1, 0), std::domain_error);
}

TEST(LaurentSeries, MonomialAndCoefficient) {
    const auto s = LaurentSeries::monomial(5, Rational(3, 4), 10);
    EXPECT_EQ(s.scale(), 4);
    EXPECT_EQ(s.coefficient(Rational(3, 4)), 5);
    EXPECT_EQ(s.coefficient(Rational(1, 3)), 0);
    EXPECT_THROW((void)s.coefficient(10), SeriesError);
    EXPECT_THROW(LaurentSeries::monomial(1, 10, 10), SeriesError);
}

TEST(LaurentSeries, ProductMatchesOracle) {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const Poly a = random_poly(rng, 20, false);
        const Poly b = random_poly(rng, 20, false);
        const auto got = mul(from_poly(a, 20), from_poly(b, 20));
        const Poly want = poly_mul(a, b, 20);
        for (std::int64_t k = 0; k < got.order().num(); ++k) EXPECT_EQ(got.coefficient(k), want[k]) << "trial " << trial;
    }
}

TEST(LaurentSeries, InverseTimesSelfIsOne) {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const Poly a = random_poly(rng, 25, true);
        const auto s = from_poly(a, 25);
        const auto prod = mul(s, inverse(s));
        EXPECT_EQ(prod.order(), Rational(25));
        EXPECT_EQ(prod.terms().size(), 1u);
        EXPECT_EQ(prod.coefficient(0), 1);
    }
}

TEST(LaurentSeries, InverseOfNegativeValuation) {
    // 1/(q^-1 - 1) = q/(1 - q), known below N - 2v = 12.
    const auto s = sub(LaurentSeries::monomial(1, -1, 10), LaurentSeries::monomial(1, 0, 10));
    const auto inv = inverse(s);
    EXPECT_EQ(inv.order(), Rational(12));
    for (std::int64_t k = 1; k < 12; ++k) EXPECT_EQ(inv.coefficient(k), 1);
    EXPECT_EQ(inv.coefficient(0), 0);
}

TEST(LaurentSeries, InverseRejectsNonUnitLead) {
    EXPECT_THROW(inverse(LaurentSeries::monomial(2, 0, 5)), SeriesError);
    EXPECT_THROW(inverse(LaurentSeries::zero(5)), SeriesError);
}

TEST(LaurentSeries, OrderTracksValuation) {
    const auto a = LaurentSeries::monomial(1, 3, 20);
    const auto b = LaurentSeries::monomial(1, 0, 10);
    EXPECT_EQ(mul(a, b).order(), Rational(13));
    EXPECT_EQ(add(a, b).order(), Rational(10));
}

TEST(LaurentSeries, MixedGridsPromoteToLcm) {
    const auto a = LaurentSeries::monomial(1, Rational(1, 4), 5);
    const auto b = LaurentSeries::monomial(1, Rational(1, 6), 5);
    const auto s = add(a, b);
    EXPECT_EQ(s.scale(), 12);
    EXPECT_EQ(mul(a, b).coefficient(Rational(5, 12)), 1);
}

TEST(LaurentSeries, PowerMatchesRepeatedProduct) {
    const auto s = from_poly({1, -1, 2, 0, 1}, 30);
    EXPECT_EQ(power(s, 5), mul(mul(mul(mul(s, s), s), s), s));
    EXPECT_EQ(mul(power(s, -3), power(s, 3)), LaurentSeries::monomial(1, 0, 30));
}

TEST(LaurentSeries, Substitutions) {
    const auto s = from_poly({1, 2, 3}, 3);
    const auto sq = substitute_power(s, 2);
    EXPECT_EQ(sq.order(), Rational(6));
    EXPECT_EQ(sq.coefficient(4), 3);
    EXPECT_EQ(sq.coefficient(3), 0);
    const auto half = substitute_scaled(s, Rational(1, 2));
    EXPECT_EQ(half.coefficient(Rational(1, 2)), 2);
    EXPECT_EQ(half.order(), Rational(3, 2));
    const auto neg = substitute_negate(s);
    EXPECT_EQ(neg.coefficient(1), -2);
    EXPECT_EQ(neg.coefficient(2), 3);
    EXPECT_THROW(substitute_negate(LaurentSeries::monomial(1, Rational(1, 2), 3)), SeriesError);
}

TEST(LaurentSeries, ExtractProgression) {
    Poly p(30);
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = static_cast<long long>(k);
    const auto s = from_poly(p, 30);
    const auto e = extract_progression(s, 7, 3);
    // Exponents 3, 10, 17, 24 are known; 31 is not.
    EXPECT_EQ(e.order(), Rational(4));
    for (std::int64_t n = 0; n < 4; ++n) EXPECT_EQ(e.coefficient(n), 7 * n + 3);
    EXPECT_THROW(extract_progression(s, 7, 7), SeriesError);
}

TEST(LaurentSeries, FirstDifferenceReportsLowestMismatch) {
    const auto a = from_poly({1, 2, 3, 4}, 4);
    const auto b = from_poly({1, 2, 5, 4}, 4);
    const auto d = first_difference(a, b);
    ASSERT_TRUE(d.has_value());
    EXPECT_EQ(d->exponent, Rational(2));
    EXPECT_EQ(d->lhs, 3);
    EXPECT_EQ(d->rhs, 5);
    EXPECT_FALSE(first_difference(a, b, Rational(2)).has_value());
}

TEST(LaurentSeries, BigCoefficientsStayExact) {
    // (1 - q)^-200 has coefficient C(n+199, 199) at q^n.
    const auto s = power(inverse(from_poly({1, -1}, 40)), 200);
    Integer want = 1;
    for (int k = 1; k <= 39; ++k) want = want * (199 + k) / k;
    EXPECT_EQ(s.coefficient(39), want);
    EXPECT_GT(want, Integer(std::numeric_limits<std::int64_t>::max()));
}

TEST(LaurentSeries, ToString) {
    EXPECT_EQ(from_poly({1, -2, 0, 1}, 4).to_string(), "1 - 2q + q^3");
    EXPECT_EQ(LaurentSeries::monomial(-1, Rational(13, 4), 5).to_string(), "-q^{13/4}");
}
