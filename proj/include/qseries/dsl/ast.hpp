#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qseries/cfrac.hpp"
#include "qseries/dsl/lexer.hpp"
#include "qseries/theta.hpp"

namespace qseries::dsl {

enum class NodeKind { Int, Monomial, Theta, Phi, Psi, Chi, FNeg, Poch, NamedCF, Add, Sub, Mul, Div, Pow, Neg };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    NodeKind kind = NodeKind::Int;
    Position pos;
    std::int64_t value = 0;             // Int literal; Pow exponent
    std::vector<SignedMonomial> monos;  // Monomial: 1; Theta: 2; Phi..FNeg: 1; Poch: factors then step
    CFName cf = CFName::R;
    CFForm form = CFForm::product;
    std::optional<SignedMonomial> argument;  // NamedCF evaluated at this monomial
    NodePtr lhs;                             // binary left, unary operand, Pow base
    NodePtr rhs;
};

/// Structural equality, ignoring source positions.
inline bool same(const Node& a, const Node& b) {
    if (a.kind != b.kind || a.value != b.value || a.monos != b.monos || a.argument != b.argument) return false;
    if (a.kind == NodeKind::NamedCF && (a.cf != b.cf || a.form != b.form)) return false;
    auto child = [](const NodePtr& x, const NodePtr& y) { return (!x && !y) || (x && y && same(*x, *y)); };
    return child(a.lhs, b.lhs) && child(a.rhs, b.rhs);
}

struct Statement {
    std::string id;
    Position pos;
    NodePtr lhs;
    NodePtr rhs;
};

struct IdentityFile {
    std::optional<Rational> order;
    std::optional<std::int64_t> scale;
    std::vector<Statement> statements;
};

namespace make {

inline NodePtr node(Node n) { return std::make_shared<const Node>(std::move(n)); }
inline Node blank(NodeKind k, Position p) {
    Node n;
    n.kind = k;
    n.pos = p;
    return n;
}
inline NodePtr integer(std::int64_t v, Position p = {}) {
    Node n = blank(NodeKind::Int, p);
    n.value = v;
    return node(std::move(n));
}
inline NodePtr mono(SignedMonomial m, Position p = {}) {
    Node n = blank(NodeKind::Monomial, p);
    n.monos = {m};
    return node(std::move(n));
}
inline NodePtr unary(NodeKind k, NodePtr x, Position p = {}) {
    Node n = blank(k, p);
    n.lhs = std::move(x);
    return node(std::move(n));
}
inline NodePtr binary(NodeKind k, NodePtr a, NodePtr b, Position p = {}) {
    Node n = blank(k, p);
    n.lhs = std::move(a);
    n.rhs = std::move(b);
    return node(std::move(n));
}
inline NodePtr pow(NodePtr base, std::int64_t e, Position p = {}) {
    Node n = blank(NodeKind::Pow, p);
    n.value = e;
    n.lhs = std::move(base);
    return node(std::move(n));
}
inline NodePtr call(NodeKind k, std::vector<SignedMonomial> args, Position p = {}) {
    Node n = blank(k, p);
    n.monos = std::move(args);
    return node(std::move(n));
}
inline NodePtr named(CFName name, CFForm form, std::optional<SignedMonomial> arg = std::nullopt, Position p = {}) {
    Node n = blank(NodeKind::NamedCF, p);
    n.cf = name;
    n.form = form;
    n.argument = arg;
    return node(std::move(n));
}

}  // namespace make

}  // namespace qseries::dsl
