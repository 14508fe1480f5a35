#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "qseries/laurent_series.hpp"
#include "qseries/rational.hpp"

namespace qseries {

/// sign * q^exp. The only argument form accepted by theta and Pochhammer
/// constructors.
struct SignedMonomial {
    int sign = 1;
    Rational exp{0};

    static SignedMonomial q(const Rational& e = 1, int sign = 1) { return {sign, e}; }

    [[nodiscard]] SignedMonomial negated() const { return {-sign, exp}; }
    [[nodiscard]] SignedMonomial pow(std::int64_t n) const {
        return {(n % 2 != 0) ? sign : 1, exp * Rational(n)};
    }
    [[nodiscard]] LaurentSeries series(const Rational& order) const {
        if (exp >= order) return LaurentSeries::zero(order, exp.den());
        return LaurentSeries::monomial(sign, exp, order);
    }
    [[nodiscard]] std::string str() const {
        std::string s = sign < 0 ? "-q" : "q";
        if (exp != Rational(1)) s += "^" + (exp.is_integer() && exp.num() >= 0 ? exp.str() : "{" + exp.str() + "}");
        return s;
    }

    friend SignedMonomial operator*(const SignedMonomial& a, const SignedMonomial& b) {
        return {a.sign * b.sign, a.exp + b.exp};
    }
    friend SignedMonomial operator/(const SignedMonomial& a, const SignedMonomial& b) {
        return {a.sign * b.sign, a.exp - b.exp};
    }
    friend bool operator==(const SignedMonomial&, const SignedMonomial&) = default;
};

/// One factor (mono; base)_inf^power of a product of q-Pochhammer symbols.
struct PochhammerFactor {
    SignedMonomial mono;
    SignedMonomial base;
    std::int64_t power = 1;
};

using PochhammerSpec = std::vector<PochhammerFactor>;

/// (q^{e_1}, ..., q^{e_k}; q^step)_inf^power, in compressed notation.
inline PochhammerSpec poch_list(std::initializer_list<Rational> exps, const Rational& step, std::int64_t power = 1) {
    PochhammerSpec out;
    for (const auto& e : exps) out.push_back({SignedMonomial::q(e), SignedMonomial::q(step), power});
    return out;
}

inline PochhammerSpec operator+(PochhammerSpec a, const PochhammerSpec& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

namespace detail {

// Dense integer-grid polynomial truncated at `limit` grid points, updated in
// place by binomials (1 - s u^e). Multiplication walks downward so each
// coefficient is read before it is overwritten; division walks upward.
struct DenseProduct {
    std::vector<Integer> c;

    explicit DenseProduct(std::int64_t limit) : c(static_cast<std::size_t>(std::max<std::int64_t>(limit, 0))) {
        if (!c.empty()) c[0] = 1;
    }

    void multiply_binomial(std::int64_t e, int s) {
        if (e <= 0) throw SeriesError("binomial exponent must be positive");
        const auto n = static_cast<std::int64_t>(c.size());
        for (std::int64_t i = n - 1; i >= e; --i) {
            if (c[static_cast<std::size_t>(i - e)] == 0) continue;
            if (s > 0) c[static_cast<std::size_t>(i)] -= c[static_cast<std::size_t>(i - e)];
            else c[static_cast<std::size_t>(i)] += c[static_cast<std::size_t>(i - e)];
        }
    }

    void divide_binomial(std::int64_t e, int s) {
        if (e <= 0) throw SeriesError("binomial exponent must be positive");
        const auto n = static_cast<std::int64_t>(c.size());
        for (std::int64_t i = e; i < n; ++i) {
            if (c[static_cast<std::size_t>(i - e)] == 0) continue;
            if (s > 0) c[static_cast<std::size_t>(i)] += c[static_cast<std::size_t>(i - e)];
            else c[static_cast<std::size_t>(i)] -= c[static_cast<std::size_t>(i - e)];
        }
    }
};

}  // namespace detail

/// Product of Pochhammer symbols raised to integer powers, truncated at `order`.
/// Negative powers divide by each binomial factor in turn, which is exact
/// because every factor has constant term 1.
inline LaurentSeries pochhammer_multi(const PochhammerSpec& spec, const Rational& order) {
    std::int64_t d = order.den();
    for (const auto& f : spec) {
        if (f.power == 0) continue;
        if (f.mono.exp <= Rational(0)) {
            throw SeriesError("divergent product: (" + f.mono.str() + "; " + f.base.str() + ")_inf has exponent <= 0");
        }
        if (f.base.exp <= Rational(0)) throw SeriesError("divergent product: base " + f.base.str() + " has exponent <= 0");
        d = std::lcm(d, std::lcm(f.mono.exp.den(), f.base.exp.den()));
    }
    if (order <= Rational(0)) return LaurentSeries::zero(order, d);
    const std::int64_t limit = detail::grid_limit(order, d);
    detail::DenseProduct acc(limit);
    for (const auto& f : spec) {
        if (f.power == 0) continue;
        const std::int64_t e0 = (f.mono.exp * Rational(d)).num();
        const std::int64_t step = (f.base.exp * Rational(d)).num();
        const std::int64_t reps = f.power < 0 ? -f.power : f.power;
        for (std::int64_t t = 0; e0 + t * step < limit; ++t) {
            // lambda * base^t = sign * q^{e0 + t step}; the binomial is (1 - that).
            const int s = f.mono.sign * ((t % 2 != 0) ? f.base.sign : 1);
            for (std::int64_t k = 0; k < reps; ++k) {
                if (f.power > 0) acc.multiply_binomial(e0 + t * step, s);
                else acc.divide_binomial(e0 + t * step, s);
            }
        }
    }
    return LaurentSeries::from_dense(d, 0, std::move(acc.c), order);
}

/// (mono; q^step)_inf = prod_{t>=0} (1 - mono q^{t step}).
inline LaurentSeries pochhammer(const SignedMonomial& mono, const Rational& step, const Rational& order) {
    if (step <= Rational(0)) throw SeriesError("pochhammer step must be positive");
    return pochhammer_multi({{mono, SignedMonomial::q(step), 1}}, order);
}

/// (mono; base)_inf with a signed base, e.g. (-q; -q)_inf.
inline LaurentSeries pochhammer(const SignedMonomial& mono, const SignedMonomial& base, const Rational& order) {
    return pochhammer_multi({{mono, base, 1}}, order);
}

/// Ramanujan's general theta function f(a,b) = sum_t a^{t(t+1)/2} b^{t(t-1)/2},
/// summed directly over every t whose term lies below `order`.
inline LaurentSeries theta_sum(const SignedMonomial& a, const SignedMonomial& b, const Rational& order) {
    const Rational total = a.exp + b.exp;
    if (total <= Rational(0)) throw SeriesError("|ab| >= 1 formally: f(" + a.str() + ", " + b.str() + ")");
    const std::int64_t d = std::lcm(std::lcm(a.exp.den(), b.exp.den()), order.den());
    // The term exponent is a convex quadratic in t with vertex at (b-a)/(2(a+b)).
    const Rational vertex = (b.exp - a.exp) / (Rational(2) * total);
    std::map<std::int64_t, Integer> acc;
    auto visit = [&](std::int64_t t) {
        const std::int64_t ta = t * (t + 1) / 2;
        const std::int64_t tb = t * (t - 1) / 2;
        const Rational e = a.exp * Rational(ta) + b.exp * Rational(tb);
        if (e >= order) return false;
        int s = 1;
        if (a.sign < 0 && ta % 2 != 0) s = -s;
        if (b.sign < 0 && tb % 2 != 0) s = -s;
        acc[(e * Rational(d)).num()] += s;
        return true;
    };
    for (std::int64_t t = 0;; ++t) {
        if (!visit(t) && Rational(t) > vertex) break;
    }
    for (std::int64_t t = -1;; --t) {
        if (!visit(t) && Rational(t) < vertex) break;
    }
    if (acc.empty()) return LaurentSeries::zero(order, d);
    const std::int64_t lo = acc.begin()->first;
    std::vector<Integer> dense(static_cast<std::size_t>(acc.rbegin()->first - lo + 1));
    for (auto& [i, c] : acc) dense[static_cast<std::size_t>(i - lo)] = std::move(c);
    return LaurentSeries::from_dense(d, lo, std::move(dense), order);
}

/// Jacobi triple product form (-a; ab)_inf (-b; ab)_inf (ab; ab)_inf.
inline LaurentSeries theta_product(const SignedMonomial& a, const SignedMonomial& b, const Rational& order) {
    if (a.exp <= Rational(0) || b.exp <= Rational(0)) {
        throw SeriesError("divergent product: triple product needs positive exponents");
    }
    const SignedMonomial ab = a * b;
    return pochhammer_multi({{a.negated(), ab, 1}, {b.negated(), ab, 1}, {ab, ab, 1}}, order);
}

/// phi(x) = f(x, x).
inline LaurentSeries phi(const SignedMonomial& x, const Rational& order) { return theta_sum(x, x, order); }
/// psi(x) = f(x, x^3).
inline LaurentSeries psi(const SignedMonomial& x, const Rational& order) { return theta_sum(x, x.pow(3), order); }
/// f(-x) = f(-x, -x^2).
inline LaurentSeries f_neg(const SignedMonomial& x, const Rational& order) {
    return theta_sum(x.negated(), x.pow(2).negated(), order);
}
/// chi(x) = (-x; x^2)_inf.
inline LaurentSeries chi(const SignedMonomial& x, const Rational& order) {
    return pochhammer(x.negated(), x.pow(2), order);
}

inline LaurentSeries phi(const Rational& q_power, const Rational& order) { return phi(SignedMonomial::q(q_power), order); }
inline LaurentSeries psi(const Rational& q_power, const Rational& order) { return psi(SignedMonomial::q(q_power), order); }
inline LaurentSeries f_neg(const Rational& q_power, const Rational& order) { return f_neg(SignedMonomial::q(q_power), order); }
inline LaurentSeries chi(const Rational& q_power, const Rational& order) { return chi(SignedMonomial::q(q_power), order); }

}  // namespace qseries
