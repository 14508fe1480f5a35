#pragma once

#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qseries/cfrac.hpp"
#include "qseries/dsl/ast.hpp"
#include "qseries/dsl/parser.hpp"
#include "qseries/identities.hpp"
#include "qseries/theta.hpp"

namespace qseries::dsl {

namespace detail {

// X(mono) for a named fraction X: q -> q^k, then q -> -q for a negative sign.
inline LaurentSeries named_at(CFName name, CFForm form, const SignedMonomial& m, const Rational& w) {
    if (m.exp <= Rational(0)) throw SeriesError("substituted monomial must have positive exponent");
    LaurentSeries s = named_cf(name, form, w / m.exp);
    s = m.exp.is_integer() ? substitute_power(s, m.exp.num()) : substitute_scaled(s, m.exp);
    return m.sign < 0 ? substitute_negate(s) : s;
}

inline LaurentSeries eval(const Node& n, const Rational& w) {
    try {
        switch (n.kind) {
            case NodeKind::Int:
                return n.value == 0 ? LaurentSeries::zero(w) : LaurentSeries::monomial(n.value, 0, max(w, Rational(1)));
            case NodeKind::Monomial: {
                const SignedMonomial& m = n.monos[0];
                return m.exp >= w ? LaurentSeries::zero(w, m.exp.den()) : LaurentSeries::monomial(m.sign, m.exp, w);
            }
            case NodeKind::Theta: return theta_sum(n.monos[0], n.monos[1], w);
            case NodeKind::Phi: return phi(n.monos[0], w);
            case NodeKind::Psi: return psi(n.monos[0], w);
            case NodeKind::Chi: return chi(n.monos[0], w);
            case NodeKind::FNeg: return f_neg(n.monos[0], w);
            case NodeKind::Poch: {
                PochhammerSpec spec;
                const SignedMonomial& step = n.monos.back();
                for (std::size_t i = 0; i + 1 < n.monos.size(); ++i) spec.push_back({n.monos[i], step, 1});
                return pochhammer_multi(spec, w);
            }
            case NodeKind::NamedCF:
                return n.argument ? named_at(n.cf, n.form, *n.argument, w) : named_cf(n.cf, n.form, w);
            case NodeKind::Add: return add(eval(*n.lhs, w), eval(*n.rhs, w));
            case NodeKind::Sub: return sub(eval(*n.lhs, w), eval(*n.rhs, w));
            case NodeKind::Mul: return mul(eval(*n.lhs, w), eval(*n.rhs, w));
            case NodeKind::Div: return divide(eval(*n.lhs, w), eval(*n.rhs, w));
            case NodeKind::Pow: return power(eval(*n.lhs, w), n.value);
            case NodeKind::Neg: return negate(eval(*n.lhs, w));
        }
    } catch (const DslError&) {
        throw;
    } catch (const std::exception& e) {
        throw DslError(n.pos, e.what());
    }
    throw DslError(n.pos, "unknown node");
}

}  // namespace detail

/// Evaluates at working order `order`; the result may be known to a lower
/// order when the expression divides or has negative valuation.
inline LaurentSeries evaluate(const NodePtr& ast, const Rational& order) { return detail::eval(*ast, order); }

/// Evaluates, raising the working order until the result is known below `order`.
inline LaurentSeries evaluate_to(const NodePtr& ast, const Rational& order) {
    try {
        return qseries::evaluate_to([ast](const Rational& w) { return detail::eval(*ast, w); }, order);
    } catch (const DslError&) {
        throw;
    } catch (const std::exception& e) {
        throw DslError(ast->pos, e.what());
    }
}

inline std::int64_t grid_of(const Node& n) {
    std::int64_t d = 1;
    for (const auto& m : n.monos) d = std::lcm(d, m.exp.den());
    if (n.kind == NodeKind::NamedCF) {
        if (n.cf == CFName::R) d = std::lcm<std::int64_t>(d, 5);
        else if (n.cf == CFName::S1 || n.cf == CFName::S2 || n.cf == CFName::S3) d = std::lcm<std::int64_t>(d, 4);
    }
    if (n.lhs) d = std::lcm(d, grid_of(*n.lhs));
    if (n.rhs) d = std::lcm(d, grid_of(*n.rhs));
    return d;
}

inline std::vector<IdentityCheck> to_checks(const IdentityFile& file) {
    std::vector<IdentityCheck> out;
    for (const auto& s : file.statements) {
        IdentityCheck c;
        c.id = s.id;
        c.lhs = [ast = s.lhs](const Rational& w) { return detail::eval(*ast, w); };
        c.rhs = [ast = s.rhs](const Rational& w) { return detail::eval(*ast, w); };
        c.grid_scale = file.scale.value_or(std::lcm(grid_of(*s.lhs), grid_of(*s.rhs)));
        out.push_back(std::move(c));
    }
    return out;
}

/// Parses and checks every statement at the file's #order (60 if absent),
/// or at `order_override` when given.
inline std::vector<CheckResult> check_text(std::string_view text, std::optional<Rational> order_override = std::nullopt) {
    const IdentityFile file = parse_file(text);
    const Rational order = order_override.value_or(file.order.value_or(Rational(60)));
    std::vector<CheckResult> out;
    const auto checks = to_checks(file);
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const Statement& s = file.statements[i];
        try {
            out.push_back(check(checks[i], order));
        } catch (const DslError& d) {
            throw DslError(d.position(), s.id + ": " + d.message());
        } catch (const EvaluationError& e) {
            throw DslError(s.pos, e.what());
        }
    }
    return out;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::vector<CheckResult> check_file(const std::string& path, std::optional<Rational> order_override = std::nullopt) {
    return check_text(read_file(path), order_override);
}

}  // namespace qseries::dsl
