#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "qseries/laurent_series.hpp"
#include "qseries/theta.hpp"

namespace qseries {

/// Parameters of Ramanujan's general continued fraction
///
///   (a^2 Q^3; Q^4)(b^2 Q^3; Q^4) / (a^2 Q; Q^4)(b^2 Q; Q^4)
///     = 1/(1 - ab + (a - bQ)(b - aQ)/((1 - ab)(Q^2 + 1) + (a - bQ^3)(b - aQ^3)/(...)))
///
/// with Q = q^{q_power}. An empty a or b stands for 0.
struct Entry12Params {
    std::optional<SignedMonomial> a;
    std::optional<SignedMonomial> b;
    Rational q_power{1};
};

enum class CFName { R, S1, S2, S3, V1, V2, V3 };

enum class CFForm { product, cf };

/// Either an explicit Entry-12 instance or one of the named fractions.
using CFSpec = std::variant<Entry12Params, CFName>;

struct ConvergentReport {
    std::int64_t depth_used = 0;
    bool stabilized = false;
    LaurentSeries series;
};

/// Partial quotients of 1/(d_0 + n_1/(d_1 + n_2/(d_2 + ...))).
struct CFLevels {
    std::function<LaurentSeries(std::int64_t, const Rational&)> numerator;    // n_k, k >= 1
    std::function<LaurentSeries(std::int64_t, const Rational&)> denominator;  // d_k, k >= 0
    Rational growth{1};  // lower bound on the valuation each level adds
};

namespace detail {

struct NamedCFData {
    std::string_view name;
    std::optional<Entry12Params> entry12;  // empty for R
    Rational prefactor;                    // q^prefactor in front of the fraction
    std::int64_t correction = 0;           // (1 - q^correction) factor of the cf form
    std::array<Rational, 4> theta;         // q^p f(-q^t0,-q^t1)/f(-q^t2,-q^t3)
};

inline const NamedCFData& named_data(CFName name) {
    using R = Rational;
    static const std::array<NamedCFData, 7> table{{
        {"R", std::nullopt, R(1, 5), 0, {R(1), R(4), R(2), R(3)}},
        {"S1", Entry12Params{SignedMonomial::q(R(1, 4)), SignedMonomial::q(R(13, 4)), R(7, 2)}, R(1, 4), 3,
         {R(3), R(11), R(4), R(10)}},
        {"S2", Entry12Params{SignedMonomial::q(R(3, 4)), SignedMonomial::q(R(11, 4)), R(7, 2)}, R(3, 4), 2,
         {R(2), R(12), R(5), R(9)}},
        {"S3", Entry12Params{SignedMonomial::q(R(5, 4)), SignedMonomial::q(R(9, 4)), R(7, 2)}, R(5, 4), 1,
         {R(1), R(13), R(6), R(8)}},
        {"V1", Entry12Params{SignedMonomial::q(R(3)), SignedMonomial::q(R(4)), R(7)}, R(3), 1,
         {R(1), R(27), R(13), R(15)}},
        {"V2", Entry12Params{SignedMonomial::q(R(2)), SignedMonomial::q(R(5)), R(7)}, R(2), 3,
         {R(3), R(25), R(11), R(17)}},
        {"V3", Entry12Params{SignedMonomial::q(R(1)), SignedMonomial::q(R(6)), R(7)}, R(1), 5,
         {R(5), R(23), R(9), R(19)}},
    }};
    return table[static_cast<std::size_t>(name)];
}

inline LaurentSeries one(const Rational& order) { return LaurentSeries::monomial(1, 0, max(order, Rational(1))); }

// a - b Q^j with possibly-zero monomials.
inline LaurentSeries monomial_difference(const std::optional<SignedMonomial>& a, const std::optional<SignedMonomial>& b,
                                         const SignedMonomial& qj, const Rational& order) {
    LaurentSeries out = LaurentSeries::zero(order);
    if (a) out = add(out, a->series(order));
    if (b) out = sub(out, (*b * qj).series(order));
    return out;
}

}  // namespace detail

inline std::string_view to_string(CFName name) { return detail::named_data(name).name; }

inline std::optional<CFName> parse_cf_name(std::string_view s) {
    for (CFName n : {CFName::R, CFName::S1, CFName::S2, CFName::S3, CFName::V1, CFName::V2, CFName::V3}) {
        if (to_string(n) == s) return n;
    }
    return std::nullopt;
}

/// Entry-12 parameters of a named fraction; R has none.
inline std::optional<Entry12Params> entry12_params(CFName name) { return detail::named_data(name).entry12; }

/// Levels of the Entry-12 fraction under q -> q^{q_power}.
inline CFLevels entry12_levels(const Entry12Params& p) {
    std::optional<SignedMonomial> ab;
    if (p.a && p.b) ab = *p.a * *p.b;
    if (ab && ab->exp <= Rational(0)) throw SeriesError("Entry 12 needs ab of positive exponent");
    const SignedMonomial Q = SignedMonomial::q(p.q_power);
    auto one_minus_ab = [ab](const Rational& order) {
        LaurentSeries s = detail::one(order);
        return ab ? sub(s, ab->series(order)) : s;
    };
    CFLevels levels;
    levels.denominator = [=](std::int64_t k, const Rational& order) {
        if (k == 0) return one_minus_ab(order);
        return mul(one_minus_ab(order), add(detail::one(order), Q.pow(2 * k).series(order)));
    };
    levels.numerator = [=](std::int64_t k, const Rational& order) {
        const SignedMonomial qj = Q.pow(2 * k - 1);
        return mul(detail::monomial_difference(p.a, p.b, qj, order), detail::monomial_difference(p.b, p.a, qj, order));
    };
    // Each level contributes at least val(ab), or val(b^2)+... when a is absent.
    if (ab) levels.growth = ab->exp;
    else if (p.a) levels.growth = p.a->exp * Rational(2) + p.q_power;
    else if (p.b) levels.growth = p.b->exp * Rational(2) + p.q_power;
    return levels;
}

/// 1/(1 + q/(1 + q^2/(1 + q^3/(1 + ...)))).
inline CFLevels rogers_ramanujan_levels() {
    CFLevels levels;
    levels.denominator = [](std::int64_t, const Rational& order) { return detail::one(order); };
    levels.numerator = [](std::int64_t k, const Rational& order) { return SignedMonomial::q(k).series(order); };
    levels.growth = 1;
    return levels;
}

inline CFLevels cf_levels(const CFSpec& spec) {
    if (const auto* p = std::get_if<Entry12Params>(&spec)) return entry12_levels(*p);
    const auto name = std::get<CFName>(spec);
    if (name == CFName::R) return rogers_ramanujan_levels();
    return entry12_levels(*entry12_params(name));
}

/// Convergent with `depth` partial denominators, evaluated bottom-up.
inline LaurentSeries convergent(const CFLevels& levels, std::int64_t depth, const Rational& order) {
    if (depth < 1) throw SeriesError("convergent depth must be positive");
    LaurentSeries t = levels.denominator(depth - 1, order);
    for (std::int64_t k = depth - 1; k >= 1; --k) {
        try {
            t = add(levels.denominator(k - 1, order), divide(levels.numerator(k, order), t));
        } catch (const SeriesError& e) {
            throw SeriesError("continued fraction level " + std::to_string(k) + ": " + e.what());
        }
    }
    try {
        return inverse(t).truncated(order);
    } catch (const SeriesError& e) {
        throw SeriesError(std::string("continued fraction level 0: ") + e.what());
    }
}

/// Left side of Entry 12: (a^2Q^3, b^2Q^3; Q^4)_inf / (a^2Q, b^2Q; Q^4)_inf.
inline LaurentSeries entry12_product(const Entry12Params& p, const Rational& order) {
    const SignedMonomial Q = SignedMonomial::q(p.q_power);
    const SignedMonomial Q4 = Q.pow(4);
    PochhammerSpec spec;
    for (const auto& m : {p.a, p.b}) {
        if (!m) continue;
        const SignedMonomial sq = m->pow(2);
        spec.push_back({sq * Q.pow(3), Q4, 1});
        spec.push_back({sq * Q, Q4, -1});
    }
    return pochhammer_multi(spec, order);
}

inline LaurentSeries entry12_product(const CFSpec& spec, const Rational& order) {
    if (const auto* p = std::get_if<Entry12Params>(&spec)) return entry12_product(*p, order);
    const auto name = std::get<CFName>(spec);
    if (name == CFName::R) {
        return pochhammer_multi(poch_list({1, 4}, 5) + poch_list({2, 3}, 5, -1), order);
    }
    return entry12_product(*entry12_params(name), order);
}

inline LaurentSeries entry12_convergent(const CFSpec& spec, std::int64_t depth, const Rational& order) {
    return convergent(cf_levels(spec), depth, order);
}

/// Smallest depth whose convergent agrees with the next one strictly below
/// `order`. Agreement is monotone in depth, so after an upward search from the
/// seed a bisection finds the smallest such depth.
inline ConvergentReport auto_depth(const CFSpec& spec, const Rational& order, std::int64_t depth_cap = 0) {
    const CFLevels levels = cf_levels(spec);
    if (depth_cap <= 0) depth_cap = std::max<std::int64_t>(4 * order.ceil(), 8);
    std::map<std::int64_t, LaurentSeries> cache;
    auto conv = [&](std::int64_t d) -> const LaurentSeries& {
        auto it = cache.find(d);
        if (it == cache.end()) it = cache.emplace(d, convergent(levels, d, order)).first;
        return it->second;
    };
    auto stable = [&](std::int64_t d) { return !first_difference(conv(d), conv(d + 1), order).has_value(); };

    std::int64_t d = std::min(depth_cap, (order / levels.growth).ceil() + 2);
    d = std::max<std::int64_t>(d, 1);
    while (!stable(d)) {
        if (d >= depth_cap) return {depth_cap, false, conv(depth_cap)};
        d = std::min(depth_cap, 2 * d);
    }
    std::int64_t lo = 1;
    std::int64_t hi = d;
    while (lo < hi) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (stable(mid)) hi = mid;
        else lo = mid + 1;
    }
    return {lo, true, conv(lo)};
}

/// A named fraction including its q-power prefactor, in product or
/// continued-fraction form.
inline LaurentSeries named_cf(CFName name, CFForm form, const Rational& order) {
    const auto& data = detail::named_data(name);
    const Rational inner = order - data.prefactor;
    if (inner <= Rational(0)) return LaurentSeries::zero(order, data.prefactor.den());
    LaurentSeries body;
    if (form == CFForm::product) {
        const auto& t = data.theta;
        const auto m = [](const Rational& e) { return SignedMonomial::q(e, -1); };
        body = divide(theta_sum(m(t[0]), m(t[1]), inner), theta_sum(m(t[2]), m(t[3]), inner));
    } else {
        const ConvergentReport rep = auto_depth(name, inner);
        if (!rep.stabilized) throw SeriesError(std::string("continued fraction ") + std::string(data.name) + " did not stabilize");
        body = rep.series;
        if (data.correction > 0) {
            body = mul(body, sub(detail::one(inner), SignedMonomial::q(data.correction).series(inner)));
        }
    }
    return shift(body, data.prefactor);
}

}  // namespace qseries
