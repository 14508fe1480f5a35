#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qseries/rational.hpp"

namespace qseries {

using Integer = boost::multiprecision::cpp_int;

class SeriesError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::int64_t lcm64(std::int64_t a, std::int64_t b) { return std::lcm(a, b); }

/// Number of grid points u^i (u = q^{1/scale}) with i/scale < order.
inline std::int64_t grid_limit(const Rational& order, std::int64_t scale) {
    return (order * Rational(scale)).ceil();
}

}  // namespace detail

/// Truncated Laurent series in u = q^{1/D} with arbitrary-precision integer
/// coefficients.
///
/// The coefficient of q^{i/D} is known exactly for every i/D < order(); all
/// information at or above the order is discarded. Stored coefficients run
/// from the lowest to the highest nonzero term, so a series built from a
/// handful of monomials stays small regardless of its order.
class LaurentSeries {
public:
    LaurentSeries() = default;

    /// The zero series known below `order`.
    static LaurentSeries zero(const Rational& order, std::int64_t scale = 1) {
        LaurentSeries s;
        s.scale_ = scale;
        s.order_ = order;
        return s;
    }

    /// c * q^e, exact below `order`.
    static LaurentSeries monomial(const Integer& c, const Rational& e, const Rational& order) {
        if (order <= e) throw SeriesError("empty window: order " + order.str() + " <= exponent " + e.str());
        LaurentSeries s;
        s.scale_ = e.den();
        s.order_ = order;
        if (c != 0) {
            s.min_index_ = e.num();
            s.coeffs_.push_back(c);
        }
        return s;
    }

    /// Builds a series from dense coefficients starting at grid index `first_index`.
    /// Entries at or beyond the truncation limit are dropped.
    static LaurentSeries from_dense(std::int64_t scale, std::int64_t first_index, std::vector<Integer> coeffs,
                                    const Rational& order) {
        if (scale <= 0) throw SeriesError("grid scale must be positive");
        LaurentSeries s;
        s.scale_ = scale;
        s.order_ = order;
        s.min_index_ = first_index;
        s.coeffs_ = std::move(coeffs);
        s.trim();
        return s;
    }

    [[nodiscard]] std::int64_t scale() const { return scale_; }
    [[nodiscard]] const Rational& order() const { return order_; }
    [[nodiscard]] bool is_zero() const { return coeffs_.empty(); }

    /// Grid index of the first stored coefficient; meaningful only when nonzero.
    [[nodiscard]] std::int64_t first_index() const { return min_index_; }
    /// Stored coefficients, lowest and highest entries nonzero.
    [[nodiscard]] const std::vector<Integer>& dense() const { return coeffs_; }

    /// Exclusive bound on grid indices that are known.
    [[nodiscard]] std::int64_t limit_index() const { return detail::grid_limit(order_, scale_); }

    /// Exponent of the lowest nonzero term.
    [[nodiscard]] std::optional<Rational> valuation() const {
        if (is_zero()) return std::nullopt;
        return Rational(min_index_, scale_);
    }

    /// Valuation, or the order for a series with no known nonzero term.
    [[nodiscard]] Rational valuation_or_order() const {
        auto v = valuation();
        return v ? *v : order_;
    }

    [[nodiscard]] const Integer& leading_coefficient() const {
        if (is_zero()) throw SeriesError("zero series has no leading coefficient");
        return coeffs_.front();
    }

    /// Exact coefficient of q^e; zero when e is off the grid or unstored.
    [[nodiscard]] Integer coefficient(const Rational& e) const {
        if (e >= order_) throw SeriesError("beyond truncation: exponent " + e.str() + " >= order " + order_.str());
        const Rational idx = e * Rational(scale_);
        if (!idx.is_integer()) return 0;
        return at_index(idx.num());
    }

    [[nodiscard]] Integer at_index(std::int64_t i) const {
        if (is_zero() || i < min_index_ || i >= min_index_ + static_cast<std::int64_t>(coeffs_.size())) return 0;
        return coeffs_[static_cast<std::size_t>(i - min_index_)];
    }

    /// Nonzero terms in ascending exponent order.
    [[nodiscard]] std::vector<std::pair<Rational, Integer>> terms() const {
        std::vector<std::pair<Rational, Integer>> out;
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            if (coeffs_[k] != 0) out.emplace_back(Rational(min_index_ + static_cast<std::int64_t>(k), scale_), coeffs_[k]);
        }
        return out;
    }

    /// Same coefficients on the grid q^{1/new_scale}; new_scale must be a multiple of scale().
    [[nodiscard]] LaurentSeries rescaled(std::int64_t new_scale) const {
        if (new_scale <= 0 || new_scale % scale_ != 0) {
            throw SeriesError("cannot rescale grid 1/" + std::to_string(scale_) + " to 1/" + std::to_string(new_scale));
        }
        if (new_scale == scale_) return *this;
        const std::int64_t f = new_scale / scale_;
        LaurentSeries s;
        s.scale_ = new_scale;
        s.order_ = order_;
        if (!is_zero()) {
            s.min_index_ = min_index_ * f;
            s.coeffs_.assign((coeffs_.size() - 1) * static_cast<std::size_t>(f) + 1, Integer(0));
            for (std::size_t k = 0; k < coeffs_.size(); ++k) s.coeffs_[k * static_cast<std::size_t>(f)] = coeffs_[k];
        }
        return s;
    }

    /// Smallest grid that carries every nonzero term.
    [[nodiscard]] std::int64_t minimal_scale() const {
        std::int64_t g = scale_;
        for (std::size_t k = 0; k < coeffs_.size() && g > 1; ++k) {
            if (coeffs_[k] != 0) g = std::gcd(g, min_index_ + static_cast<std::int64_t>(k));
        }
        return scale_ / g;
    }

    /// Same series on its minimal grid.
    [[nodiscard]] LaurentSeries reduced() const {
        const std::int64_t target = minimal_scale();
        if (target == scale_) return *this;
        const std::int64_t f = scale_ / target;
        LaurentSeries s;
        s.scale_ = target;
        s.order_ = order_;
        if (!is_zero()) {
            s.min_index_ = min_index_ / f;
            s.coeffs_.assign((coeffs_.size() - 1) / static_cast<std::size_t>(f) + 1, Integer(0));
            for (std::size_t k = 0; k < coeffs_.size(); k += static_cast<std::size_t>(f)) {
                s.coeffs_[k / static_cast<std::size_t>(f)] = coeffs_[k];
            }
        }
        return s;
    }

    /// Lowers the truncation order (never raises it).
    [[nodiscard]] LaurentSeries truncated(const Rational& order) const {
        if (order >= order_) return *this;
        LaurentSeries s = *this;
        s.order_ = order;
        s.trim();
        return s;
    }

    [[nodiscard]] std::string to_string() const;

private:
    void trim() {
        const std::int64_t limit = limit_index();
        if (!coeffs_.empty()) {
            const std::int64_t keep = std::max<std::int64_t>(0, limit - min_index_);
            if (static_cast<std::int64_t>(coeffs_.size()) > keep) coeffs_.resize(static_cast<std::size_t>(keep));
        }
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
        std::size_t lead = 0;
        while (lead < coeffs_.size() && coeffs_[lead] == 0) ++lead;
        if (lead == coeffs_.size()) {
            coeffs_.clear();
            min_index_ = 0;
            return;
        }
        if (lead > 0) {
            coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(lead));
            min_index_ += static_cast<std::int64_t>(lead);
        }
    }

    std::int64_t scale_ = 1;
    std::int64_t min_index_ = 0;
    std::vector<Integer> coeffs_;
    Rational order_{0};
};

namespace detail {

inline std::string exponent_text(const Rational& e) {
    if (e.is_integer() && e.num() >= 0) return "^" + e.str();
    return "^{" + e.str() + "}";
}

}  // namespace detail

/// ASCII rendering in ascending exponent order, e.g. "1 + 2q + 2q^4 - q^{13/4}".
inline std::string LaurentSeries::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms()) {
        const bool negative = c < 0;
        const Integer mag = negative ? Integer(-c) : c;
        if (first) {
            if (negative) os << '-';
        } else {
            os << (negative ? " - " : " + ");
        }
        first = false;
        if (e == Rational(0)) {
            os << mag;
            continue;
        }
        if (mag != 1) os << mag;
        os << 'q';
        if (e != Rational(1)) os << detail::exponent_text(e);
    }
    return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const LaurentSeries& s) {
    return os << s.to_string() << " + O(q^" << s.order().str() << ")";
}

/// Both operands on the grid lcm(a.scale, b.scale).
inline std::pair<LaurentSeries, LaurentSeries> on_common_grid(const LaurentSeries& a, const LaurentSeries& b) {
    const std::int64_t d = detail::lcm64(a.scale(), b.scale());
    return {a.rescaled(d), b.rescaled(d)};
}

inline LaurentSeries add(const LaurentSeries& x, const LaurentSeries& y) {
    auto [a, b] = on_common_grid(x, y);
    const Rational order = min(a.order(), b.order());
    if (a.is_zero()) return b.truncated(order);
    if (b.is_zero()) return a.truncated(order);
    const std::int64_t lo = std::min(a.first_index(), b.first_index());
    const std::int64_t hi = std::max(a.first_index() + static_cast<std::int64_t>(a.dense().size()),
                                     b.first_index() + static_cast<std::int64_t>(b.dense().size()));
    std::vector<Integer> out(static_cast<std::size_t>(hi - lo));
    for (std::size_t k = 0; k < a.dense().size(); ++k) out[static_cast<std::size_t>(a.first_index() - lo) + k] += a.dense()[k];
    for (std::size_t k = 0; k < b.dense().size(); ++k) out[static_cast<std::size_t>(b.first_index() - lo) + k] += b.dense()[k];
    return LaurentSeries::from_dense(a.scale(), lo, std::move(out), order);
}

inline LaurentSeries negate(const LaurentSeries& a) {
    std::vector<Integer> out = a.dense();
    for (auto& c : out) c = -c;
    return LaurentSeries::from_dense(a.scale(), a.first_index(), std::move(out), a.order());
}

inline LaurentSeries sub(const LaurentSeries& a, const LaurentSeries& b) { return add(a, negate(b)); }

inline LaurentSeries scale_by(const LaurentSeries& a, const Integer& k) {
    std::vector<Integer> out = a.dense();
    for (auto& c : out) c *= k;
    return LaurentSeries::from_dense(a.scale(), a.first_index(), std::move(out), a.order());
}

/// Multiplies by the exact monomial c*q^e: exponents shift by e and so does the order.
inline LaurentSeries shift(const LaurentSeries& a, const Rational& e, const Integer& c = 1) {
    const std::int64_t d = detail::lcm64(a.scale(), e.den());
    const LaurentSeries s = a.rescaled(d);
    std::vector<Integer> out = s.dense();
    if (c != 1) {
        for (auto& v : out) v *= c;
    }
    return LaurentSeries::from_dense(d, s.first_index() + (e * Rational(d)).num(), std::move(out), s.order() + e);
}

/// Cauchy product. The result is known below
/// min(a.order + val(b), b.order + val(a)), where a series with no known
/// nonzero term contributes its order as valuation.
inline LaurentSeries mul(const LaurentSeries& x, const LaurentSeries& y) {
    const Rational order = min(x.order() + y.valuation_or_order(), y.order() + x.valuation_or_order());
    const std::int64_t out_scale = detail::lcm64(x.scale(), y.scale());
    if (x.is_zero() || y.is_zero()) return LaurentSeries::zero(order, out_scale);

    // Work on the coarsest grid that carries both operands; theta sums on a
    // quarter grid are often integral after reduction.
    auto [a, b] = on_common_grid(x.reduced(), y.reduced());
    const std::int64_t d = a.scale();
    const std::int64_t lo = a.first_index() + b.first_index();
    const std::int64_t limit = detail::grid_limit(order, d);
    if (limit <= lo) return LaurentSeries::zero(order, out_scale);
    const std::size_t len = static_cast<std::size_t>(limit - lo);

    // Iterate the sparser operand in the outer loop.
    const LaurentSeries* outer = &a;
    const LaurentSeries* inner = &b;
    const auto nnz = [](const LaurentSeries& s) {
        return std::count_if(s.dense().begin(), s.dense().end(), [](const Integer& c) { return c != 0; });
    };
    if (nnz(b) < nnz(a)) std::swap(outer, inner);

    std::vector<Integer> out(len);
    const auto& oc = outer->dense();
    const auto& ic = inner->dense();
    Integer tmp;
    for (std::size_t i = 0; i < oc.size() && i < len; ++i) {
        if (oc[i] == 0) continue;
        const std::size_t jmax = std::min(ic.size(), len - i);
        for (std::size_t j = 0; j < jmax; ++j) {
            if (ic[j] == 0) continue;
            boost::multiprecision::multiply(tmp, oc[i], ic[j]);
            out[i + j] += tmp;
        }
    }
    return LaurentSeries::from_dense(d, lo, std::move(out), order).rescaled(out_scale);
}

/// Multiplicative inverse. The lowest nonzero coefficient must be +1 or -1.
/// For a = c q^v (1 + h) known below N, the inverse is known below N - 2v.
inline LaurentSeries inverse(const LaurentSeries& x) {
    if (x.is_zero()) throw SeriesError("non-invertible leading term: zero series below order " + x.order().str());
    const Integer& lead = x.leading_coefficient();
    if (lead != 1 && lead != -1) {
        throw SeriesError("non-invertible leading term: coefficient " + lead.str() + " at q^" + x.valuation()->str());
    }
    const LaurentSeries a = x.reduced();
    const std::int64_t d = a.scale();
    const Rational v = *a.valuation();
    const Rational order = a.order() - v - v;
    // Unit part u = a q^{-v}, known below a.order - v; so is its inverse.
    const std::int64_t n = detail::grid_limit(a.order() - v, d);
    const int c = lead == 1 ? 1 : -1;
    const auto& u = a.dense();

    std::vector<std::size_t> support;
    for (std::size_t k = 1; k < u.size() && static_cast<std::int64_t>(k) < n; ++k) {
        if (u[k] != 0) support.push_back(k);
    }
    std::vector<Integer> g(static_cast<std::size_t>(std::max<std::int64_t>(n, 0)));
    Integer acc;
    Integer tmp;
    for (std::size_t m = 0; m < g.size(); ++m) {
        if (m == 0) {
            g[0] = c;
            continue;
        }
        acc = 0;
        for (std::size_t k : support) {
            if (k > m) break;
            boost::multiprecision::multiply(tmp, u[k], g[m - k]);
            acc += tmp;
        }
        g[m] = c == 1 ? Integer(-acc) : acc;
    }
    return LaurentSeries::from_dense(d, -a.first_index(), std::move(g), order).rescaled(x.scale());
}

inline LaurentSeries divide(const LaurentSeries& a, const LaurentSeries& b) { return mul(a, inverse(b)); }

/// Integer power; negative exponents go through inverse().
inline LaurentSeries power(const LaurentSeries& a, std::int64_t n) {
    if (n < 0) return power(inverse(a), -n);
    if (n == 0) return LaurentSeries::monomial(1, 0, max(a.order(), Rational(1)));
    std::optional<LaurentSeries> result;
    LaurentSeries base = a;
    while (n > 0) {
        if (n & 1) result = result ? mul(*result, base) : base;
        n >>= 1;
        if (n > 0) base = mul(base, base);
    }
    return *result;
}

/// q -> q^k for a positive integer k.
inline LaurentSeries substitute_power(const LaurentSeries& a, std::int64_t k) {
    if (k <= 0) throw SeriesError("substitute_power requires a positive integer");
    if (a.is_zero()) return LaurentSeries::zero(a.order() * Rational(k), a.scale());
    if (k == 1) return a;
    const auto& c = a.dense();
    std::vector<Integer> out((c.size() - 1) * static_cast<std::size_t>(k) + 1);
    for (std::size_t i = 0; i < c.size(); ++i) out[i * static_cast<std::size_t>(k)] = c[i];
    return LaurentSeries::from_dense(a.scale(), a.first_index() * k, std::move(out), a.order() * Rational(k));
}

/// q -> q^k for a positive rational k (e.g. q -> q^{7/2}).
inline LaurentSeries substitute_scaled(const LaurentSeries& a, const Rational& k) {
    if (k <= Rational(0)) throw SeriesError("substitution exponent must be positive");
    const LaurentSeries s = substitute_power(a, k.num());
    if (k.den() == 1) return s;
    return LaurentSeries::from_dense(s.scale() * k.den(), s.first_index(), s.dense(), a.order() * k);
}

/// q -> -q. Defined only when every nonzero term sits at an integer exponent.
inline LaurentSeries substitute_negate(const LaurentSeries& x) {
    const LaurentSeries a = x.reduced();
    if (a.scale() != 1) throw SeriesError("negation undefined on fractional grid");
    std::vector<Integer> out = a.dense();
    for (std::size_t k = 0; k < out.size(); ++k) {
        const std::int64_t e = a.first_index() + static_cast<std::int64_t>(k);
        if (e % 2 != 0) out[k] = -out[k];
    }
    return LaurentSeries::from_dense(1, a.first_index(), std::move(out), a.order()).rescaled(x.scale());
}

/// Sum_n c_{mn+r} q^n over an integer-grid series. Known below ceil((order - r)/m).
inline LaurentSeries extract_progression(const LaurentSeries& x, std::int64_t m, std::int64_t r) {
    if (m <= 0 || r < 0 || r >= m) throw SeriesError("extract_progression requires 0 <= r < m");
    const LaurentSeries a = x.reduced();
    if (a.scale() != 1) throw SeriesError("extract_progression requires an integer grid");
    const std::int64_t order = ((a.order() - Rational(r)) / Rational(m)).ceil();
    if (a.is_zero()) return LaurentSeries::zero(order);
    // Smallest n with m n + r >= first index.
    const std::int64_t first = a.first_index();
    std::int64_t n0 = (first - r) / m;
    if (n0 * m + r < first) ++n0;
    std::vector<Integer> out;
    for (std::int64_t n = n0;; ++n) {
        const std::int64_t e = n * m + r;
        if (e >= first + static_cast<std::int64_t>(a.dense().size())) break;
        out.push_back(a.at_index(e));
    }
    return LaurentSeries::from_dense(1, n0, std::move(out), order);
}

struct Mismatch {
    Rational exponent;
    Integer lhs;
    Integer rhs;
};

/// First exponent below min(a.order, b.order, bound) where the series differ.
inline std::optional<Mismatch> first_difference(const LaurentSeries& x, const LaurentSeries& y,
                                                std::optional<Rational> bound = std::nullopt) {
    auto [a, b] = on_common_grid(x, y);
    Rational order = min(a.order(), b.order());
    if (bound) order = min(order, *bound);
    const std::int64_t limit = detail::grid_limit(order, a.scale());
    std::int64_t lo = limit;
    if (!a.is_zero()) lo = std::min(lo, a.first_index());
    if (!b.is_zero()) lo = std::min(lo, b.first_index());
    for (std::int64_t i = lo; i < limit; ++i) {
        Integer ca = a.at_index(i);
        Integer cb = b.at_index(i);
        if (ca != cb) return Mismatch{Rational(i, a.scale()), std::move(ca), std::move(cb)};
    }
    return std::nullopt;
}

/// Agreement of all coefficients strictly below min(a.order, b.order).
inline bool operator==(const LaurentSeries& a, const LaurentSeries& b) { return !first_difference(a, b).has_value(); }

inline LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) { return add(a, b); }
inline LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return sub(a, b); }
inline LaurentSeries operator-(const LaurentSeries& a) { return negate(a); }
inline LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) { return mul(a, b); }
inline LaurentSeries operator/(const LaurentSeries& a, const LaurentSeries& b) { return divide(a, b); }

}  // namespace qseries
