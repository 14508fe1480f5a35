#pragma once

#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "qseries/dsl/ast.hpp"
#include "qseries/dsl/lexer.hpp"

namespace qseries::dsl {

/// Recursive-descent parser over a token vector.
///
///   file      := directive* stmt*
///   directive := '#order' INT | '#scale' INT
///   stmt      := expr '==' expr ';'
///   expr      := term (('+' | '-') term)*
///   term      := unary (('*' | '/') unary)*
///   unary     := '-' unary | factor
///   factor    := atom ('^' '-'? INT)?
///   atom      := mono | INT | call | cf | '(' expr ')'
///   mono      := '-'? 'q' ('^' '-'? INT ('/' INT)?)?
///   call      := f(mono, mono) | phi(mono) | psi(mono) | chi(mono)
///              | fneg(mono | INT ('/' INT)?) | poch(mono, ..., mono)
///   cf        := NAME ['(' mono ')']   NAME in S1 S2 S3 V1 V2 V3 R, optional _cf suffix
///
/// In an exponent, INT '/' INT is always read as a fraction: q^7/2 is q^{7/2}.
class Parser {
public:
    explicit Parser(std::vector<Token> tokens) {
        for (auto& t : tokens) {
            if (t.kind == TokenKind::LABEL) labels_.push_back(std::move(t));
            else tokens_.push_back(std::move(t));
        }
    }

    IdentityFile parse_file() {
        IdentityFile file;
        while (peek().kind == TokenKind::DIRECTIVE) {
            const Token d = take();
            const Token v = expect({TokenKind::INT});
            if (v.value <= 0) throw DslError(v.pos, d.lexeme + " must be positive");
            if (d.lexeme == "#order") file.order = Rational(v.value);
            else file.scale = v.value;
        }
        std::size_t label = 0;
        Position previous_end{0, 0};
        while (peek().kind != TokenKind::END) {
            if (peek().kind == TokenKind::DIRECTIVE) throw DslError(peek().pos, "directives must precede all statements");
            Statement s;
            s.pos = peek().pos;
            s.lhs = expr();
            expect({TokenKind::EQEQ});
            s.rhs = expr();
            const Token semi = expect({TokenKind::SEMI});
            std::string name;
            while (label < labels_.size() && before(labels_[label].pos, s.pos)) {
                if (!before(labels_[label].pos, previous_end)) name = labels_[label].lexeme;
                ++label;
            }
            s.id = name.empty() ? "stmt" + std::to_string(file.statements.size() + 1) : name;
            previous_end = semi.pos;
            file.statements.push_back(std::move(s));
        }
        return file;
    }

    NodePtr parse_expression() {
        NodePtr e = expr();
        expect({TokenKind::END});
        return e;
    }

private:
    static bool before(Position a, Position b) { return a.line < b.line || (a.line == b.line && a.column < b.column); }

    [[nodiscard]] const Token& peek(std::size_t ahead = 0) const {
        const std::size_t k = std::min(i_ + ahead, tokens_.size() - 1);
        return tokens_[k];
    }
    Token take() {
        Token t = peek();
        if (i_ < tokens_.size() - 1) ++i_;
        return t;
    }
    bool accept(TokenKind k) {
        if (peek().kind != k) return false;
        take();
        return true;
    }
    [[noreturn]] void fail(std::initializer_list<std::string_view> expected) const {
        std::string msg = "expected ";
        std::size_t n = 0;
        for (auto e : expected) {
            if (n++ > 0) msg += n == expected.size() ? " or " : ", ";
            msg += e;
        }
        const Token& t = peek();
        msg += ", found " + (t.kind == TokenKind::END ? std::string("end of input") : "'" + t.lexeme + "'");
        throw DslError(t.pos, msg);
    }
    Token expect(std::initializer_list<TokenKind> kinds) {
        for (auto k : kinds) {
            if (peek().kind == k) return take();
        }
        std::vector<std::string_view> names;
        for (auto k : kinds) names.push_back(kind_name(k));
        std::string msg = "expected ";
        for (std::size_t n = 0; n < names.size(); ++n) {
            if (n > 0) msg += n + 1 == names.size() ? " or " : ", ";
            msg += names[n];
        }
        const Token& t = peek();
        msg += ", found " + (t.kind == TokenKind::END ? std::string("end of input") : "'" + t.lexeme + "'");
        throw DslError(t.pos, msg);
    }

    NodePtr expr() {
        NodePtr a = term();
        while (peek().kind == TokenKind::PLUS || peek().kind == TokenKind::MINUS) {
            const Token op = take();
            a = make::binary(op.kind == TokenKind::PLUS ? NodeKind::Add : NodeKind::Sub, a, term(), op.pos);
        }
        return a;
    }

    NodePtr term() {
        NodePtr a = unary();
        while (peek().kind == TokenKind::STAR || peek().kind == TokenKind::SLASH) {
            const Token op = take();
            a = make::binary(op.kind == TokenKind::STAR ? NodeKind::Mul : NodeKind::Div, a, unary(), op.pos);
        }
        return a;
    }

    NodePtr unary() {
        if (peek().kind == TokenKind::MINUS && peek(1).kind != TokenKind::Q) {
            const Token op = take();
            NodePtr x = unary();
            if (x->kind == NodeKind::Monomial) return make::mono(x->monos[0].negated(), op.pos);
            return make::unary(NodeKind::Neg, x, op.pos);
        }
        return factor();
    }

    NodePtr factor() {
        NodePtr a = atom();
        if (peek().kind == TokenKind::CARET) {
            const Token op = take();
            const bool neg = accept(TokenKind::MINUS);
            const Token n = expect({TokenKind::INT});
            a = make::pow(a, neg ? -n.value : n.value, op.pos);
        }
        return a;
    }

    Rational exponent() {
        const bool neg = accept(TokenKind::MINUS);
        const Token n = expect({TokenKind::INT});
        std::int64_t den = 1;
        if (peek().kind == TokenKind::SLASH && peek(1).kind == TokenKind::INT) {
            take();
            const Token d = take();
            if (d.value == 0) throw DslError(d.pos, "zero denominator in exponent");
            den = d.value;
        }
        return {neg ? -n.value : n.value, den};
    }

    SignedMonomial mono() {
        const int sign = accept(TokenKind::MINUS) ? -1 : 1;
        expect({TokenKind::Q});
        Rational e = 1;
        if (accept(TokenKind::CARET)) e = exponent();
        return SignedMonomial::q(e, sign);
    }

    // A call argument that must be a lone signed monomial.
    SignedMonomial mono_argument(std::string_view what) {
        const Token start = peek();
        if (start.kind != TokenKind::MINUS && start.kind != TokenKind::Q) {
            throw DslError(start.pos, std::string(what) + " argument must be a signed monomial");
        }
        if (start.kind == TokenKind::MINUS && peek(1).kind != TokenKind::Q) {
            throw DslError(start.pos, std::string(what) + " argument must be a signed monomial");
        }
        const SignedMonomial m = mono();
        switch (peek().kind) {
            case TokenKind::COMMA:
            case TokenKind::RPAREN: return m;
            case TokenKind::END:
            case TokenKind::SEMI:
            case TokenKind::EQEQ: expect({TokenKind::COMMA, TokenKind::RPAREN}); [[fallthrough]];
            default: throw DslError(start.pos, std::string(what) + " argument must be a signed monomial");
        }
    }

    std::vector<SignedMonomial> mono_arguments(std::string_view what, std::size_t min, std::size_t max) {
        const Token open = expect({TokenKind::LPAREN});
        std::vector<SignedMonomial> args;
        if (peek().kind != TokenKind::RPAREN) {
            args.push_back(mono_argument(what));
            while (accept(TokenKind::COMMA)) args.push_back(mono_argument(what));
        }
        expect({TokenKind::RPAREN});
        if (args.size() < min || args.size() > max) {
            const std::string count = min == max ? std::to_string(min) : "at least " + std::to_string(min);
            throw DslError(open.pos, std::string(what) + " call takes " + count + " argument(s), got " + std::to_string(args.size()));
        }
        return args;
    }

    NodePtr atom() {
        const Token& t = peek();
        switch (t.kind) {
            case TokenKind::MINUS:
            case TokenKind::Q: {
                const Position p = t.pos;
                return make::mono(mono(), p);
            }
            case TokenKind::INT: {
                const Token n = take();
                return make::integer(n.value, n.pos);
            }
            case TokenKind::LPAREN: {
                take();
                NodePtr e = expr();
                expect({TokenKind::RPAREN});
                return e;
            }
            case TokenKind::IDENT: return call();
            default: fail({"'q'", "integer", "identifier", "'('", "'-'"});
        }
    }

    NodePtr call() {
        const Token name = take();
        const std::string& id = name.lexeme;
        if (id == "f") return make::call(NodeKind::Theta, mono_arguments("theta", 2, 2), name.pos);
        if (id == "phi") return make::call(NodeKind::Phi, mono_arguments("theta", 1, 1), name.pos);
        if (id == "psi") return make::call(NodeKind::Psi, mono_arguments("theta", 1, 1), name.pos);
        if (id == "chi") return make::call(NodeKind::Chi, mono_arguments("theta", 1, 1), name.pos);
        if (id == "poch") return make::call(NodeKind::Poch, mono_arguments("Pochhammer", 2, 64), name.pos);
        if (id == "fneg") {
            expect({TokenKind::LPAREN});
            SignedMonomial m;
            if (peek().kind == TokenKind::INT) m = SignedMonomial::q(exponent());
            else m = mono_argument("theta");
            expect({TokenKind::RPAREN});
            return make::call(NodeKind::FNeg, {m}, name.pos);
        }
        std::string_view base = id;
        CFForm form = CFForm::product;
        if (base.size() > 3 && base.substr(base.size() - 3) == "_cf") {
            base.remove_suffix(3);
            form = CFForm::cf;
        }
        if (const auto cf = parse_cf_name(base)) {
            std::optional<SignedMonomial> arg;
            if (accept(TokenKind::LPAREN)) {
                arg = mono_argument("continued fraction");
                expect({TokenKind::RPAREN});
            }
            return make::named(*cf, form, arg, name.pos);
        }
        throw DslError(name.pos, "unknown name '" + id + "' (expected f, phi, psi, chi, fneg, poch, S1, S2, S3, V1, V2, V3 or R)");
    }

    std::vector<Token> tokens_;
    std::vector<Token> labels_;
    std::size_t i_ = 0;
};

inline IdentityFile parse_file(std::string_view src) { return Parser(tokenize(src)).parse_file(); }
inline NodePtr parse_expression(std::string_view src) { return Parser(tokenize(src)).parse_expression(); }

}  // namespace qseries::dsl
