#pragma once

#include <string>

#include "qseries/dsl/ast.hpp"

namespace qseries::dsl {

/// "q", "-q^3", "q^-7/2"; parses back to the same monomial.
inline std::string render_mono(const SignedMonomial& m) {
    std::string s = m.sign < 0 ? "-q" : "q";
    if (m.exp != Rational(1)) s += "^" + m.exp.str();
    return s;
}

/// Canonical, fully parenthesized text of an expression.
inline std::string render(const Node& n) {
    auto args = [&n](std::string_view name) {
        std::string s(name);
        s += "(";
        for (std::size_t i = 0; i < n.monos.size(); ++i) {
            if (i > 0) s += ", ";
            s += render_mono(n.monos[i]);
        }
        return s + ")";
    };
    switch (n.kind) {
        case NodeKind::Int: return std::to_string(n.value);
        case NodeKind::Monomial: {
            const std::string m = render_mono(n.monos[0]);
            return n.monos[0].sign < 0 ? "(" + m + ")" : m;
        }
        case NodeKind::Theta: return args("f");
        case NodeKind::Phi: return args("phi");
        case NodeKind::Psi: return args("psi");
        case NodeKind::Chi: return args("chi");
        case NodeKind::FNeg: return args("fneg");
        case NodeKind::Poch: return args("poch");
        case NodeKind::NamedCF: {
            std::string s(to_string(n.cf));
            if (n.form == CFForm::cf) s += "_cf";
            if (n.argument) s += "(" + render_mono(*n.argument) + ")";
            return s;
        }
        case NodeKind::Add: return "(" + render(*n.lhs) + " + " + render(*n.rhs) + ")";
        case NodeKind::Sub: return "(" + render(*n.lhs) + " - " + render(*n.rhs) + ")";
        case NodeKind::Mul: return "(" + render(*n.lhs) + " * " + render(*n.rhs) + ")";
        case NodeKind::Div: {
            // "q^3 / 2" would lex as q^{3/2}.
            std::string lhs = render(*n.lhs);
            if (n.lhs->kind == NodeKind::Monomial && lhs.front() != '(') lhs = "(" + lhs + ")";
            return "(" + lhs + " / " + render(*n.rhs) + ")";
        }
        case NodeKind::Pow: return "((" + render(*n.lhs) + ")^" + std::to_string(n.value) + ")";
        case NodeKind::Neg: return "(-" + render(*n.lhs) + ")";
    }
    return "?";
}

inline std::string render(const NodePtr& n) { return render(*n); }

inline std::string render(const Statement& s) { return render(*s.lhs) + " == " + render(*s.rhs) + ";"; }

}  // namespace qseries::dsl
