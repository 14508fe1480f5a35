#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "qseries/identities.hpp"
#include "qseries/laurent_series.hpp"
#include "qseries/theta.hpp"

namespace qseries {

class DissectionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// sign * q^shift * prod_e (q^e; q^base)_inf^{powers[e]}, with integer
/// exponents of any sign. Exponents outside (0, base] are normalized before
/// expansion: (q^e; q^M) = (1 - q^e)(q^{e+M}; q^M) and (q^e; q^M) =
/// (q^{e-M}; q^M) / (1 - q^{e-M}).
struct ProductTerm {
    int sign = 1;
    std::int64_t shift = 0;
    std::int64_t base = 1;
    std::vector<std::pair<std::int64_t, std::int64_t>> factors;  // (exponent, power)

    /// Canonical form: every Pochhammer exponent in (0, base], leftover
    /// binomials (1 - q^k) with k > 0, and a flag for an identically zero term.
    struct Normal {
        int sign = 1;
        std::int64_t shift = 0;
        std::int64_t base = 1;
        bool zero = false;
        std::map<std::int64_t, std::int64_t> poch;      // exponent -> power
        std::map<std::int64_t, std::int64_t> binomial;  // k -> power of (1 - q^k)

        friend bool operator==(const Normal&, const Normal&) = default;
    };

    [[nodiscard]] Normal normalize() const {
        if (base <= 0) throw DissectionError("product base must be positive");
        Normal n{sign, shift, base, false, {}, {}};
        for (auto [e, pw] : factors) {
            if (pw == 0) continue;
            while (e <= 0) {
                if (e == 0) {
                    // (1; q^M) contains the factor 1 - 1.
                    if (pw < 0) throw DissectionError("division by (1; q^" + std::to_string(base) + ")_inf");
                    n.zero = true;
                    return n;
                }
                // 1 - q^e = -q^e (1 - q^{-e})
                if (pw % 2 != 0) n.sign = -n.sign;
                n.shift += e * pw;
                n.binomial[-e] += pw;
                e += base;
            }
            while (e > base) {
                e -= base;
                n.binomial[e] -= pw;
            }
            n.poch[e] += pw;
        }
        // (q^k; q^M) for k in (0, M] against binomials of the same k cancel only
        // partially, so both are kept; drop zero powers.
        std::erase_if(n.poch, [](const auto& kv) { return kv.second == 0; });
        std::erase_if(n.binomial, [](const auto& kv) { return kv.second == 0; });
        return n;
    }

    [[nodiscard]] LaurentSeries series(const Rational& order) const {
        const Normal n = normalize();
        if (n.zero) return LaurentSeries::zero(order);
        const Rational inner = order - Rational(n.shift);
        if (inner <= Rational(0)) return LaurentSeries::zero(order);
        PochhammerSpec spec;
        for (const auto& [e, pw] : n.poch) spec.push_back({SignedMonomial::q(e), SignedMonomial::q(base), pw});
        LaurentSeries body = pochhammer_multi(spec, inner);
        for (const auto& [k, pw] : n.binomial) {
            const LaurentSeries b = sub(LaurentSeries::monomial(1, 0, inner), SignedMonomial::q(k).series(inner));
            body = mul(body, power(b, pw));
        }
        return qseries::shift(body, Rational(n.shift), Integer(n.sign));
    }

    /// Rebuilds a term from its canonical form; leftover binomials become
    /// factors (q^k; q^base) / (q^{k+base}; q^base).
    static ProductTerm from_normal(const Normal& n) {
        ProductTerm t{n.sign, n.shift, n.base, {}};
        std::map<std::int64_t, std::int64_t> f(n.poch);
        for (const auto& [k, pw] : n.binomial) {
            f[k] += pw;
            f[k + n.base] -= pw;
        }
        for (const auto& [pw_sign, _] : std::map<int, int>{{1, 0}, {-1, 0}}) {
            for (const auto& [e, pw] : f) {
                if (pw != 0 && (pw > 0) == (pw_sign > 0)) t.factors.emplace_back(e, pw);
            }
        }
        return t;
    }

    /// Text such as "-q^4 (q^7,q^21;q^98)^2 / (q^14;q^98)".
    [[nodiscard]] std::string str() const {
        std::string num;
        std::string den;
        for (const auto& [e, pw] : factors) {
            std::string f = "(q^" + std::to_string(e) + ";q^" + std::to_string(base) + ")";
            const std::int64_t a = pw < 0 ? -pw : pw;
            if (a != 1) f += "^" + std::to_string(a);
            std::string& side = pw > 0 ? num : den;
            if (!side.empty()) side += " ";
            side += f;
        }
        std::string out = sign < 0 ? "-" : "";
        out += "q^" + std::to_string(shift) + " " + (num.empty() ? "1" : num);
        if (!den.empty()) out += " / " + den;
        return out;
    }
};

inline LaurentSeries sum_terms(const std::vector<ProductTerm>& terms, const Rational& order) {
    LaurentSeries acc = LaurentSeries::zero(order);
    for (const auto& t : terms) acc = add(acc, t.series(order));
    return acc;
}

/// Parameters of the p-dissection of
///   (q^t, q^t, q^{r+s}, q^{t-r-s}; q^t)_inf / (q^s, q^{t-s}, q^r, q^{t-r}; q^t)_inf.
struct DissectionSpec {
    std::int64_t t = 1;
    std::int64_t r = 1;
    std::int64_t s = 1;
    std::int64_t p = 1;
};

/// Checks the parameter constraints and that every product exponent on the
/// dissected side is a multiple of p.
inline void validate(const DissectionSpec& d) {
    if (d.t <= 0 || d.r <= 0 || d.s <= 0 || d.p <= 0) throw DissectionError("t, r, s, p must be positive");
    if (std::gcd(d.r, d.p) != 1) {
        throw DissectionError("gcd(r, p) = " + std::to_string(std::gcd(d.r, d.p)) + ", must be 1");
    }
    if (d.r >= d.t) throw DissectionError("r must be less than t");
    if (d.s >= d.t) throw DissectionError("s must be less than t");
    for (std::int64_t j = 0; j < d.p; ++j) {
        const std::int64_t exps[] = {d.p * d.t,
                                     d.p * d.r + d.s + j * d.t,
                                     (d.p - j) * d.t - d.p * d.r - d.s,
                                     j * d.t + d.s,
                                     (d.p - j) * d.t - d.s,
                                     d.p * d.r,
                                     (d.t - d.r) * d.p};
        for (std::int64_t e : exps) {
            if (e % d.p != 0) {
                throw DissectionError("component " + std::to_string(j) + ": exponent q^" + std::to_string(e) +
                                      " is not a multiple of p = " + std::to_string(d.p));
            }
        }
    }
}

inline ProductTerm dissection_lhs_term(const DissectionSpec& d) {
    return {1, 0, d.t, {{d.t, 1}, {d.t, 1}, {d.r + d.s, 1}, {d.t - d.r - d.s, 1}, {d.s, -1}, {d.t - d.s, -1}, {d.r, -1}, {d.t - d.r, -1}}};
}

/// Component j as printed by the formula, before normalization.
inline ProductTerm dissection_component_term(const DissectionSpec& d, std::int64_t j) {
    const std::int64_t M = d.p * d.t;
    return {1,
            j * d.r,
            M,
            {{M, 1},
             {M, 1},
             {d.p * d.r + d.s + j * d.t, 1},
             {(d.p - j) * d.t - d.p * d.r - d.s, 1},
             {j * d.t + d.s, -1},
             {(d.p - j) * d.t - d.s, -1},
             {d.p * d.r, -1},
             {(d.t - d.r) * d.p, -1}}};
}

struct Dissection {
    std::vector<ProductTerm> terms;
    std::vector<LaurentSeries> components;
    LaurentSeries combined;
};

inline Dissection p_dissect(const DissectionSpec& d, const Rational& order) {
    validate(d);
    Dissection out;
    out.combined = LaurentSeries::zero(order);
    for (std::int64_t j = 0; j < d.p; ++j) {
        out.terms.push_back(dissection_component_term(d, j));
        out.components.push_back(out.terms.back().series(order));
        out.combined = add(out.combined, out.components.back());
    }
    return out;
}

inline LaurentSeries dissection_lhs(const DissectionSpec& d, const Rational& order) {
    return dissection_lhs_term(d).series(order);
}

namespace diss {

inline ProductTerm term(std::int64_t shift, std::initializer_list<std::int64_t> num1, std::initializer_list<std::int64_t> num2,
                        std::initializer_list<std::int64_t> den1, std::initializer_list<std::int64_t> den2, int sign = 1) {
    ProductTerm t{sign, shift, 98, {}};
    for (auto e : num1) t.factors.emplace_back(e, 1);
    for (auto e : num2) t.factors.emplace_back(e, 2);
    for (auto e : den1) t.factors.emplace_back(e, -1);
    for (auto e : den2) t.factors.emplace_back(e, -2);
    return t;
}

}  // namespace diss

/// The six-term expansion of 1/S1* = (q^4,q^10;q^14)/(q^3,q^11;q^14) exactly as printed.
inline std::vector<ProductTerm> diss_printed_terms() {
    using diss::term;
    return {
        term(0, {7, 21, 77, 91}, {35, 49, 63}, {28, 70}, {14, 42, 56, 84}),
        term(3, {}, {7, 35, 49, 63, 91}, {42, 56}, {14, 28, 70, 84}),
        term(6, {21, 35, 63, 77}, {7, 49, 91}, {42, 56}, {14, 28, 70, 84}),
        term(9, {21, 77}, {7, 35, 63, 91}, {28, 70}, {14, 42, 56, 84}),
        term(12, {21, 35, 63, 77}, {7, 49, 91}, {14, 84}, {28, 42, 56, 70}),
        term(4, {}, {35, 49, 63}, {14, 84}, {42, 56, 70, 84}),
    };
}

/// The same expansion obtained by multiplying each component of the
/// (t,r,s,p) = (14,3,7,7) dissection by (q^7;q^14)^2/(q^14;q^14)^2, written in
/// base q^98. The vanishing component (j = 5) is omitted.
inline std::vector<ProductTerm> diss_derived_terms() {
    const DissectionSpec d{14, 3, 7, 7};
    std::vector<ProductTerm> out;
    for (std::int64_t j = 0; j < d.p; ++j) {
        ProductTerm t = dissection_component_term(d, j);
        if (t.normalize().zero) continue;
        for (std::int64_t e = 7; e < 98; e += 14) t.factors.emplace_back(e, 2);
        for (std::int64_t e = 14; e <= 98; e += 14) t.factors.emplace_back(e, -2);
        out.push_back(ProductTerm::from_normal(t.normalize()));
    }
    return out;
}

/// 1/S1* expanded directly from its product.
inline LaurentSeries inv_s1_star(const Rational& order) {
    return pochhammer_multi(poch_list({4, 10}, 14) + poch_list({3, 11}, 14, -1), order);
}

/// 1/S1* against the printed six-term expansion; `drop` removes one printed
/// term (0-based) to seed a failure.
inline CheckResult verify_diss_expansion(const Rational& order, std::optional<std::size_t> drop = std::nullopt) {
    IdentityCheck c{"diss", inv_s1_star,
                    [drop](const Rational& w) {
                        std::vector<ProductTerm> terms = diss_printed_terms();
                        if (drop && *drop < terms.size()) terms.erase(terms.begin() + static_cast<std::ptrdiff_t>(*drop));
                        return sum_terms(terms, w);
                    },
                    1};
    return check(c, order);
}

/// 1/S1* against the six terms derived from the dissection.
inline CheckResult verify_diss_derived(const Rational& order) {
    IdentityCheck c{"diss.derived", inv_s1_star, [](const Rational& w) { return sum_terms(diss_derived_terms(), w); }, 1};
    return check(c, order);
}

/// Printed term k against derived term k, one result per term.
inline std::vector<CheckResult> diss_term_report(const Rational& order) {
    const auto printed = diss_printed_terms();
    const auto derived = diss_derived_terms();
    std::vector<CheckResult> out;
    for (std::size_t k = 0; k < printed.size() && k < derived.size(); ++k) {
        IdentityCheck c{"diss.T" + std::to_string(k + 1), [p = printed[k]](const Rational& w) { return p.series(w); },
                        [q = derived[k]](const Rational& w) { return q.series(w); }, 1};
        out.push_back(check(c, order));
    }
    return out;
}

/// A product quotient whose coefficients vanish on one residue class.
struct VanishingFamily {
    std::string name;
    PochhammerSpec product;
    std::int64_t modulus = 1;
    std::int64_t residue = 0;
};

inline std::vector<VanishingFamily> vanishing_families() {
    return {
        {"S1*", poch_list({4, 10}, 14) + poch_list({3, 11}, 14, -1), 7, 1},
        {"S2*", poch_list({2, 12}, 14) + poch_list({5, 9}, 14, -1), 7, 6},
        {"S3*", poch_list({6, 8}, 14) + poch_list({1, 13}, 14, -1), 7, 6},
        {"V1*", poch_list({1, 27}, 28) + poch_list({13, 15}, 28, -1), 14, 7},
        {"V2*", poch_list({3, 25}, 28) + poch_list({11, 17}, 28, -1), 14, 4},
        {"V3*", poch_list({5, 23}, 28) + poch_list({9, 19}, 28, -1), 14, 11},
    };
}

inline std::optional<VanishingFamily> vanishing_family(const std::string& name) {
    for (auto& f : vanishing_families()) {
        if (f.name == name) return f;
    }
    return std::nullopt;
}

struct VanishingCertificate {
    CheckResult result;
    std::int64_t checked = 0;  // coefficients examined in the vanishing class
    Integer max_abs_off_class = 0;
    /// First nonzero coefficient in each other residue class: (residue, exponent, coefficient).
    std::vector<std::tuple<std::int64_t, std::int64_t, Integer>> witnesses;
};

/// Expands the family through q^n_max and checks every coefficient at
/// exponents congruent to residue mod modulus is zero.
inline VanishingCertificate vanishing_scan(const VanishingFamily& f, std::int64_t n_max) {
    if (f.modulus <= 0 || f.residue < 0 || f.residue >= f.modulus) throw DissectionError("residue must lie in [0, modulus)");
    if (n_max < f.residue) throw DissectionError("n_max must be at least the residue");
    const LaurentSeries s = pochhammer_multi(f.product, n_max + 1);
    VanishingCertificate cert{{"vanish." + f.name, Rational(n_max + 1), true, std::nullopt, {}}, 0, 0, {}};
    std::vector<bool> seen(static_cast<std::size_t>(f.modulus), false);
    for (std::int64_t n = 0; n <= n_max; ++n) {
        const Integer c = s.coefficient(n);
        const std::int64_t cls = n % f.modulus;
        if (cls == f.residue) {
            ++cert.checked;
            if (c != 0 && cert.result.pass) {
                cert.result.pass = false;
                cert.result.first_mismatch = Mismatch{Rational(n), c, 0};
            }
            continue;
        }
        const Integer a = c < 0 ? Integer(-c) : c;
        if (a > cert.max_abs_off_class) cert.max_abs_off_class = a;
        if (c != 0 && !seen[static_cast<std::size_t>(cls)]) {
            seen[static_cast<std::size_t>(cls)] = true;
            cert.witnesses.emplace_back(cls, n, c);
        }
    }
    std::sort(cert.witnesses.begin(), cert.witnesses.end(),
              [](const auto& x, const auto& y) { return std::get<0>(x) < std::get<0>(y); });
    return cert;
}

}  // namespace qseries
