#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qseries/cfrac.hpp"
#include "qseries/laurent_series.hpp"
#include "qseries/theta.hpp"

namespace qseries {

/// A series-valued expression evaluated at a working truncation order.
using SeriesFn = std::function<LaurentSeries(const Rational&)>;

struct IdentityCheck {
    std::string id;
    SeriesFn lhs;
    SeriesFn rhs;
    std::int64_t grid_scale = 1;
};

struct CheckResult {
    std::string id;
    Rational order;
    bool pass = false;
    std::optional<Mismatch> first_mismatch;
    std::string note;
};

class EvaluationError : public std::runtime_error {
public:
    EvaluationError(const std::string& id, const std::string& what) : std::runtime_error(id + ": " + what), id_(id) {}
    [[nodiscard]] const std::string& id() const { return id_; }

private:
    std::string id_;
};

/// Evaluates `fn` at increasing working orders until the result is known
/// below `target`. Negative valuations and quotients lose precision in a way
/// that is additive in the working order, so a few rounds suffice.
inline LaurentSeries evaluate_to(const SeriesFn& fn, const Rational& target, int max_rounds = 8) {
    Rational work = target;
    for (int round = 0; round < max_rounds; ++round) {
        LaurentSeries s = fn(work);
        if (s.order() >= target) return s;
        work = work + (target - s.order()) + Rational(1);
    }
    throw SeriesError("could not reach order " + target.str() + " after " + std::to_string(max_rounds) + " rounds");
}

inline CheckResult check(const IdentityCheck& identity, const Rational& order) {
    CheckResult result{identity.id, order, false, std::nullopt, {}};
    try {
        const LaurentSeries lhs = evaluate_to(identity.lhs, order);
        const LaurentSeries rhs = evaluate_to(identity.rhs, order);
        result.first_mismatch = first_difference(lhs, rhs);
        result.pass = !result.first_mismatch.has_value();
    } catch (const SeriesError& e) {
        throw EvaluationError(identity.id, e.what());
    }
    return result;
}

inline std::vector<CheckResult> run_checks(const std::vector<IdentityCheck>& checks, const Rational& order) {
    std::vector<CheckResult> out;
    out.reserve(checks.size());
    for (const auto& c : checks) out.push_back(check(c, order));
    return out;
}

/// Multiplies the right side by (1 + q^at); used to seed failures.
inline IdentityCheck perturbed(IdentityCheck c, const Rational& at) {
    c.rhs = [rhs = c.rhs, at](const Rational& w) {
        const LaurentSeries r = rhs(w);
        return mul(r, add(LaurentSeries::monomial(1, 0, r.order() + at + Rational(1)),
                          LaurentSeries::monomial(1, at, r.order() + at + Rational(1))));
    };
    return c;
}

namespace ident {

inline SignedMonomial q(const Rational& e, int sign = 1) { return SignedMonomial::q(e, sign); }
inline SignedMonomial mq(const Rational& e) { return SignedMonomial::q(e, -1); }
inline LaurentSeries one(const Rational& w) { return LaurentSeries::monomial(1, 0, max(w, Rational(1))); }
inline LaurentSeries f(const SignedMonomial& a, const SignedMonomial& b, const Rational& w) { return theta_sum(a, b, w); }

/// X evaluated at q -> q^k, with X computed at the matching working order.
inline LaurentSeries at_power(const SeriesFn& x, std::int64_t k, const Rational& w) {
    return substitute_power(x(w / Rational(k)), k);
}

inline LaurentSeries named(CFName n, const Rational& w) { return named_cf(n, CFForm::product, w); }

inline LaurentSeries recip_minus(const LaurentSeries& s) { return sub(inverse(s), s); }
inline LaurentSeries recip_plus(const LaurentSeries& s) { return add(inverse(s), s); }

}  // namespace ident

/// Right sides of the order-14 identities for 1/S_i -+ S_i.
/// index 0,1,2 for S1,S2,S3; `plus` selects the + variant.
inline LaurentSeries thm21_rhs(int index, bool plus, const Rational& w) {
    using namespace ident;
    struct Row {
        Rational pre;
        Rational a, b;     // f(-+q^a, -+q^b) in the numerator
        Rational c, d;     // f(-q^c, -q^d) in the denominator
    };
    static const Row rows[3] = {
        {Rational(1, 4), Rational(1, 2), Rational(13, 2), 3, 4},
        {Rational(3, 4), Rational(3, 2), Rational(11, 2), 2, 5},
        {Rational(5, 4), Rational(5, 2), Rational(9, 2), 1, 6},
    };
    const Row& r = rows[index];
    const LaurentSeries num = plus ? mul(phi(mq(Rational(7, 2)), w), f(q(r.a), q(r.b), w))
                                   : mul(phi(q(Rational(7, 2)), w), f(mq(r.a), mq(r.b), w));
    const LaurentSeries den = mul(psi(q(7), w), f(mq(r.c), mq(r.d), w));
    return shift(divide(num, den), -r.pre);
}

/// Right sides of the order-28 identities for 1/V_i -+ V_i.
inline LaurentSeries thm22_rhs(int index, bool plus, const Rational& w) {
    using namespace ident;
    struct Row {
        Rational pre;
        Rational a, b;
        Rational c, d;
    };
    static const Row rows[3] = {
        {3, 6, 8, 1, 13},
        {2, 4, 10, 3, 11},
        {1, 2, 12, 5, 9},
    };
    const Row& r = rows[index];
    const LaurentSeries num = plus ? mul(phi(mq(7), w), f(q(r.a), q(r.b), w)) : mul(phi(q(7), w), f(mq(r.a), mq(r.b), w));
    const LaurentSeries den = mul(psi(q(14), w), f(mq(r.c), mq(r.d), w));
    return shift(divide(num, den), -r.pre);
}

/// Theorem parts (i)-(viii) for the order-fourteen fractions.
inline std::vector<IdentityCheck> thm21_checks() {
    using namespace ident;
    static const CFName names[3] = {CFName::S1, CFName::S2, CFName::S3};
    static const char* roman[8] = {"i", "ii", "iii", "iv", "v", "vi", "vii", "viii"};
    std::vector<IdentityCheck> out;
    for (int i = 0; i < 3; ++i) {
        for (int plus = 0; plus < 2; ++plus) {
            const CFName n = names[i];
            out.push_back({std::string("thm2.1.") + roman[2 * i + plus],
                           [n, plus](const Rational& w) { return plus ? recip_plus(named(n, w)) : recip_minus(named(n, w)); },
                           [i, plus](const Rational& w) { return thm21_rhs(i, plus != 0, w); }, 4});
        }
    }
    for (int plus = 0; plus < 2; ++plus) {
        out.push_back({std::string("thm2.1.") + roman[6 + plus],
                       [plus](const Rational& w) {
                           LaurentSeries acc = one(w);
                           for (CFName n : names) {
                               const LaurentSeries s = at_power([n](const Rational& u) { return named(n, u); }, 2, w);
                               acc = mul(acc, plus ? recip_plus(s) : recip_minus(s));
                           }
                           return acc;
                       },
                       [plus](const Rational& w) {
                           // phi^3(+-q^7) psi(+-q^7) / (q^{9/2} psi^3(q^14) psi(q))
                           const SignedMonomial x = plus ? mq(7) : q(7);
                           const LaurentSeries num = mul(power(phi(x, w), 3), psi(x, w));
                           const LaurentSeries den = mul(power(psi(q(14), w), 3), psi(q(1), w));
                           return shift(divide(num, den), Rational(-9, 2));
                       },
                       2});
    }
    return out;
}

/// Theorem parts (i)-(viii) for the order-twenty-eight fractions.
inline std::vector<IdentityCheck> thm22_checks() {
    using namespace ident;
    static const CFName names[3] = {CFName::V1, CFName::V2, CFName::V3};
    static const char* roman[8] = {"i", "ii", "iii", "iv", "v", "vi", "vii", "viii"};
    std::vector<IdentityCheck> out;
    for (int i = 0; i < 3; ++i) {
        for (int plus = 0; plus < 2; ++plus) {
            const CFName n = names[i];
            out.push_back({std::string("thm2.2.") + roman[2 * i + plus],
                           [n, plus](const Rational& w) { return plus ? recip_plus(named(n, w)) : recip_minus(named(n, w)); },
                           [i, plus](const Rational& w) { return thm22_rhs(i, plus != 0, w); }, 1});
        }
    }
    auto lhs_product = [](bool plus) {
        return [plus](const Rational& w) {
            LaurentSeries acc = one(w);
            for (CFName n : names) acc = mul(acc, plus ? recip_plus(named(n, w)) : recip_minus(named(n, w)));
            return acc;
        };
    };
    out.push_back({"thm2.2.vii", lhs_product(false),
                   [](const Rational& w) {
                       // phi^3(q^7) psi(q) / (q^6 psi^3(q^14) psi(q^7))
                       const LaurentSeries num = mul(power(phi(q(7), w), 3), psi(q(1), w));
                       const LaurentSeries den = mul(power(psi(q(14), w), 3), psi(q(7), w));
                       return shift(divide(num, den), -6);
                   },
                   1});
    out.push_back({"thm2.2.viii", lhs_product(true),
                   [](const Rational& w) {
                       // phi^3(-q^7) phi(-q^14) / (q^6 psi^3(q^14) psi(q^7) chi(-q^2) chi(-q))
                       const LaurentSeries num = mul(power(phi(mq(7), w), 3), phi(mq(14), w));
                       LaurentSeries den = mul(power(psi(q(14), w), 3), psi(q(7), w));
                       den = mul(den, mul(chi(mq(2), w), chi(mq(1), w)));
                       return shift(divide(num, den), -6);
                   },
                   1});
    return out;
}

/// Sign of V_i^n(q^2) in V_i^n(q) V_i^n(-q): negative for V1 and V3 when n is odd.
inline int thm23_sign(int index, std::int64_t n) {
    if (index == 1) return 1;
    return (3 * n) % 2 == 0 ? 1 : -1;
}

inline std::vector<IdentityCheck> thm23_checks(std::int64_t n_max) {
    using namespace ident;
    static const CFName names[3] = {CFName::V1, CFName::V2, CFName::V3};
    static const char* roman[3] = {"i", "ii", "iii"};
    std::vector<IdentityCheck> out;
    for (int i = 0; i < 3; ++i) {
        for (std::int64_t n = 1; n <= n_max; ++n) {
            const CFName name = names[i];
            const int sign = thm23_sign(i, n);
            out.push_back({std::string("thm2.3.") + roman[i] + ".n" + std::to_string(n),
                           [name, n](const Rational& w) {
                               const LaurentSeries v = named(name, w);
                               return mul(power(v, n), power(substitute_negate(v), n));
                           },
                           [name, n, sign](const Rational& w) {
                               const LaurentSeries v2 = at_power([name](const Rational& u) { return named(name, u); }, 2, w);
                               return scale_by(power(v2, n), sign);
                           },
                           1});
        }
    }
    return out;
}

/// Auxiliary identities used along the way: three-term theta relations at the
/// instances where they are applied, cubic product identities, f(-1,a) = 0 and
/// the intermediate equalities of the order-14 derivation.
inline std::vector<IdentityCheck> auxiliary_checks() {
    using namespace ident;
    using R = Rational;
    std::vector<IdentityCheck> out;

    // f(a,b) = f(a^3 b, a b^3) + a f(b/a, a^5 b^3)
    auto fa1 = [](const std::string& id, SignedMonomial a, SignedMonomial b) {
        return IdentityCheck{id, [a, b](const R& w) { return f(a, b, w); },
                             [a, b](const R& w) {
                                 return add(f(a.pow(3) * b, a * b.pow(3), w),
                                            mul(a.series(w + R(1)), f(b / a, a.pow(5) * b.pow(3), w)));
                             },
                             4};
    };
    out.push_back(fa1("aux.s2", mq(R(1, 4)), q(R(13, 4))));
    out.push_back(fa1("aux.s3", q(R(1, 4)), mq(R(13, 4))));
    // Printed forms of the two instances.
    out.push_back({"aux.s2.printed", [](const R& w) { return f(mq(R(1, 4)), q(R(13, 4)), w); },
                   [](const R& w) { return sub(f(mq(4), mq(10), w), shift(f(mq(3), mq(11), w), R(1, 4))); }, 4});
    out.push_back({"aux.s3.printed", [](const R& w) { return f(q(R(1, 4)), mq(R(13, 4)), w); },
                   [](const R& w) { return add(f(mq(4), mq(10), w), shift(f(mq(3), mq(11), w), R(1, 4))); }, 4});

    // f(a, ab^2) f(b, a^2 b) = f(a,b) psi(ab)
    out.push_back({"aux.s7", [](const R& w) { return mul(f(mq(3), mq(11), w), f(mq(4), mq(10), w)); },
                   [](const R& w) { return mul(f(mq(3), mq(4), w), psi(q(7), w)); }, 1});
    auto tf2 = [](const std::string& id, SignedMonomial a, SignedMonomial b) {
        return IdentityCheck{id, [a, b](const R& w) { return mul(f(a, a * b.pow(2), w), f(b, a.pow(2) * b, w)); },
                             [a, b](const R& w) { return mul(f(a, b, w), psi(a * b, w)); }, 1};
    };
    out.push_back(tf2("aux.tf2.s7", mq(3), mq(4)));

    // f(a,b) f(-a,-b) = f(-a^2,-b^2) phi(-ab)
    auto sr3 = [](const std::string& id, SignedMonomial a, SignedMonomial b, std::int64_t scale) {
        return IdentityCheck{id, [a, b](const R& w) { return mul(f(a, b, w), f(a.negated(), b.negated(), w)); },
                             [a, b](const R& w) {
                                 return mul(f(a.pow(2).negated(), b.pow(2).negated(), w), phi((a * b).negated(), w));
                             },
                             scale};
    };
    out.push_back(sr3("aux.s8", mq(R(1, 4)), q(R(13, 4)), 2));
    out.push_back({"aux.s8.printed", [](const R& w) { return mul(f(mq(R(1, 4)), q(R(13, 4)), w), f(q(R(1, 4)), mq(R(13, 4)), w)); },
                   [](const R& w) { return mul(f(mq(R(1, 2)), mq(R(13, 2)), w), phi(q(R(7, 2)), w)); }, 2});
    out.push_back(sr3("aux.vabc", q(1), q(27), 1));
    out.push_back(sr3("aux.vabcd", q(13), q(15), 1));

    // f^2(a,b) = f(a^2,b^2) phi(ab) + 2a f(b/a, a^3 b) psi(a^2 b^2)
    auto as3 = [](const std::string& id, SignedMonomial a, SignedMonomial b) {
        return IdentityCheck{id, [a, b](const R& w) { return power(f(a, b, w), 2); },
                             [a, b](const R& w) {
                                 const LaurentSeries first = mul(f(a.pow(2), b.pow(2), w), phi(a * b, w));
                                 const LaurentSeries second = mul(f(b / a, a.pow(3) * b, w), psi(a.pow(2) * b.pow(2), w));
                                 return add(first, scale_by(mul(a.series(w + R(1)), second), 2));
                             },
                             4};
    };
    out.push_back(as3("aux.s10", q(R(1, 4)), mq(R(13, 4))));
    out.push_back({"aux.s10.printed", [](const R& w) { return power(f(q(R(1, 4)), mq(R(13, 4)), w), 2); },
                   [](const R& w) {
                       const LaurentSeries first = mul(f(q(R(1, 2)), q(R(13, 2)), w), phi(mq(R(7, 2)), w));
                       const LaurentSeries second = mul(f(mq(3), mq(4), w), psi(q(7), w));
                       return add(first, scale_by(shift(second, R(1, 4)), 2));
                   },
                   4});

    // Cubic products of theta functions at modulus 7 and 14.
    out.push_back({"aux.y40", [](const R& w) { return mul(mul(f(q(1), q(6), w), f(q(2), q(5), w)), f(q(3), q(4), w)); },
                   [](const R& w) {
                       return divide(mul(power(f_neg(q(7), w), 2), phi(mq(7), w)), chi(mq(1), w));
                   },
                   1});
    out.push_back({"aux.y41", [](const R& w) { return mul(mul(f(mq(1), mq(6), w), f(mq(2), mq(5), w)), f(mq(3), mq(4), w)); },
                   [](const R& w) { return mul(f_neg(q(1), w), power(f_neg(q(7), w), 2)); }, 1});
    out.push_back({"aux.y42", [](const R& w) { return mul(mul(f(q(1), q(13), w), f(q(3), q(11), w)), f(q(5), q(9), w)); },
                   [](const R& w) { return mul(mul(chi(q(1), w), psi(mq(7), w)), power(f_neg(q(14), w), 2)); }, 1});

    // f(-1, a) = 0.
    for (const auto& [id, a] : {std::pair{"aux.entry8.q", q(1)}, std::pair{"aux.entry8.q2", q(2)},
                                std::pair{"aux.entry8.q1/2", q(R(1, 2))}}) {
        const SignedMonomial arg = a;
        out.push_back({id, [arg](const R& w) { return f(mq(0), arg, w); },
                       [](const R& w) { return LaurentSeries::zero(w); }, arg.exp.den()});
    }

    // Intermediate equalities of the order-14 derivation. The square-root
    // forms are checked squared: (1/sqrt(S) -+ sqrt(S))^2 = 1/S + S -+ 2.
    auto s_den = [](const R& w) { return shift(mul(f(mq(3), mq(11), w), f(mq(4), mq(10), w)), R(1, 4)); };
    auto s1 = [](const R& w) { return named(CFName::S1, w); };
    out.push_back({"aux.s4.squared", [s1](const R& w) { return sub(recip_plus(s1(w)), scale_by(one(w), 2)); },
                   [s_den](const R& w) { return divide(power(f(mq(R(1, 4)), q(R(13, 4)), w), 2), s_den(w)); }, 4});
    out.push_back({"aux.s5.squared", [s1](const R& w) { return add(recip_plus(s1(w)), scale_by(one(w), 2)); },
                   [s_den](const R& w) { return divide(power(f(q(R(1, 4)), mq(R(13, 4)), w), 2), s_den(w)); }, 4});
    out.push_back({"aux.s6", [s1](const R& w) { return recip_minus(s1(w)); },
                   [s_den](const R& w) {
                       return divide(mul(f(mq(R(1, 4)), q(R(13, 4)), w), f(q(R(1, 4)), mq(R(13, 4)), w)), s_den(w));
                   },
                   4});
    out.push_back({"aux.s9", [s1](const R& w) { return recip_plus(s1(w)); },
                   [s_den](const R& w) {
                       return sub(divide(power(f(q(R(1, 4)), mq(R(13, 4)), w), 2), s_den(w)), scale_by(one(w), 2));
                   },
                   4});

    auto thm21_vii_lhs = [](const R& w) {
        LaurentSeries acc = one(w);
        for (CFName n : {CFName::S1, CFName::S2, CFName::S3}) {
            acc = mul(acc, recip_minus(at_power([n](const R& u) { return named(n, u); }, 2, w)));
        }
        return acc;
    };
    out.push_back({"aux.y43", thm21_vii_lhs,
                   [](const R& w) {
                       LaurentSeries num = mul(power(phi(q(7), w), 3), f(mq(1), mq(13), w));
                       num = mul(num, mul(f(mq(3), mq(11), w), f(mq(5), mq(9), w)));
                       LaurentSeries den = mul(power(psi(q(14), w), 3), f(mq(6), mq(8), w));
                       den = mul(den, mul(f(mq(4), mq(10), w), f(mq(2), mq(12), w)));
                       return shift(divide(num, den), R(-9, 2));
                   },
                   2});
    out.push_back({"aux.y44", thm21_vii_lhs,
                   [](const R& w) {
                       const LaurentSeries num = mul(mul(power(phi(q(7), w), 3), psi(q(7), w)), chi(mq(1), w));
                       const LaurentSeries den = mul(power(psi(q(14), w), 3), f_neg(q(2), w));
                       return shift(divide(num, den), R(-9, 2));
                   },
                   2});
    // The product of parts (i), (iii), (v) at q^2 reproduces the right side of (vii).
    out.push_back({"aux.vii.from-factors",
                   [](const R& w) {
                       LaurentSeries acc = one(w);
                       for (int i = 0; i < 3; ++i) {
                           acc = mul(acc, at_power([i](const R& u) { return thm21_rhs(i, false, u); }, 2, w));
                       }
                       return acc;
                   },
                   [](const R& w) {
                       const LaurentSeries num = mul(power(phi(q(7), w), 3), psi(q(7), w));
                       const LaurentSeries den = mul(power(psi(q(14), w), 3), psi(q(1), w));
                       return shift(divide(num, den), R(-9, 2));
                   },
                   2});
    // V1(q) V1(-q) = -q^6 f(-q^2,-q^54)/f(-q^26,-q^30)
    out.push_back({"aux.vcc",
                   [](const R& w) {
                       const LaurentSeries v = named(CFName::V1, w);
                       return mul(v, substitute_negate(v));
                   },
                   [](const R& w) { return shift(divide(f(mq(2), mq(54), w), f(mq(26), mq(30), w)), 6, -1); }, 1});
    return out;
}

/// Part (viii) of the order-fourteen theorem with psi(-q) in place of psi(q)
/// in the denominator. The printed form disagrees at q^{-7/2}; this variant
/// agrees to every order tested.
inline IdentityCheck thm21_viii_variant() {
    using namespace ident;
    IdentityCheck c = thm21_checks()[7];
    c.id = "thm2.1.viii.psi-minus-q";
    c.rhs = [](const Rational& w) {
        const LaurentSeries num = mul(power(phi(mq(7), w), 3), psi(mq(7), w));
        const LaurentSeries den = mul(power(psi(q(14), w), 3), psi(mq(1), w));
        return shift(divide(num, den), Rational(-9, 2));
    };
    return c;
}

inline std::vector<CheckResult> suite_thm21(const Rational& order) { return run_checks(thm21_checks(), order); }
inline std::vector<CheckResult> suite_thm22(const Rational& order) { return run_checks(thm22_checks(), order); }
inline std::vector<CheckResult> suite_thm23(std::int64_t n_max, const Rational& order) {
    if (n_max < 1) throw SeriesError("n_max must be at least 1");
    return run_checks(thm23_checks(n_max), order);
}
inline std::vector<CheckResult> suite_auxiliary(const Rational& order) { return run_checks(auxiliary_checks(), order); }

}  // namespace qseries
