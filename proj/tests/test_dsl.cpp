#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "qseries/qseries.hpp"

using namespace qseries;
using namespace qseries::dsl;

namespace {

std::vector<TokenKind> kinds(std::string_view src) {
    std::vector<TokenKind> out;
    for (const auto& t : tokenize(src)) out.push_back(t.kind);
    return out;
}

// Random ASTs restricted to shapes the parser can produce: negative
// monomials are folded, so Neg never wraps a monomial, and integer literals
// are nonnegative.
class AstGen {
public:
    explicit AstGen(std::uint32_t seed) : rng_(seed) {}

    NodePtr expr(int depth) {
        const int pick = depth <= 0 ? uniform(0, 3) : uniform(0, 11);
        switch (pick) {
            case 0: return make::integer(uniform(0, 50));
            case 1: return make::mono(mono());
            case 2: return call();
            case 3: return named();
            case 4: return make::binary(NodeKind::Add, expr(depth - 1), expr(depth - 1));
            case 5: return make::binary(NodeKind::Sub, expr(depth - 1), expr(depth - 1));
            case 6: return make::binary(NodeKind::Mul, expr(depth - 1), expr(depth - 1));
            case 7: return make::binary(NodeKind::Div, expr(depth - 1), expr(depth - 1));
            case 8: return make::pow(expr(depth - 1), uniform(-4, 6));
            case 9: {
                NodePtr x = expr(depth - 1);
                if (x->kind == NodeKind::Monomial) return make::mono(x->monos[0].negated());
                return make::unary(NodeKind::Neg, x);
            }
            default: return make::binary(NodeKind::Mul, call(), named());
        }
    }

private:
    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    SignedMonomial mono() {
        const int den = std::vector<int>{1, 1, 2, 4, 5}[static_cast<std::size_t>(uniform(0, 4))];
        return SignedMonomial::q(Rational(uniform(-12, 30), den), uniform(0, 1) ? 1 : -1);
    }

    NodePtr call() {
        switch (uniform(0, 5)) {
            case 0: return make::call(NodeKind::Theta, {mono(), mono()});
            case 1: return make::call(NodeKind::Phi, {mono()});
            case 2: return make::call(NodeKind::Psi, {mono()});
            case 3: return make::call(NodeKind::Chi, {mono()});
            case 4: return make::call(NodeKind::FNeg, {mono()});
            default: {
                std::vector<SignedMonomial> args;
                const int n = uniform(2, 6);
                for (int k = 0; k < n; ++k) args.push_back(mono());
                return make::call(NodeKind::Poch, args);
            }
        }
    }

    NodePtr named() {
        const auto name = static_cast<CFName>(uniform(0, 6));
        const CFForm form = uniform(0, 1) ? CFForm::product : CFForm::cf;
        std::optional<SignedMonomial> arg;
        if (uniform(0, 1)) arg = mono();
        return make::named(name, form, arg);
    }

    std::mt19937 rng_;
};

std::string fixture(const std::string& rel) { return std::string(QSERIES_FIXTURE_DIR) + "/" + rel; }

}  // namespace

TEST(Lexer, FractionalExponentTokens) {
    using K = TokenKind;
    EXPECT_EQ(kinds("phi(q^7/2)"),
              (std::vector<K>{K::IDENT, K::LPAREN, K::Q, K::CARET, K::INT, K::SLASH, K::INT, K::RPAREN, K::END}));
    const auto toks = tokenize("phi(q^7/2)");
    EXPECT_EQ(toks[4].value, 7);
    EXPECT_EQ(toks[6].value, 2);
}

TEST(Lexer, ThetaCallHasTwelveTokens) {
    auto toks = tokenize("f(-q^3,-q^11)");
    ASSERT_EQ(toks.back().kind, TokenKind::END);
    EXPECT_EQ(toks.size() - 1, 12u);
}

TEST(Lexer, CommentsDirectivesLabels) {
    const auto toks = tokenize("#order 40\n# id: my.id\n# plain comment\nq == q; # trailing\n");
    EXPECT_EQ(toks[0].kind, TokenKind::DIRECTIVE);
    EXPECT_EQ(toks[2].kind, TokenKind::LABEL);
    EXPECT_EQ(toks[2].lexeme, "my.id");
    EXPECT_EQ(toks[3].kind, TokenKind::Q);
    EXPECT_EQ(toks[3].pos.line, 4);
}

TEST(Lexer, RejectsStrayBytes) {
    try {
        tokenize("q + $");
        FAIL();
    } catch (const DslError& e) {
        EXPECT_EQ(e.position().column, 5);
    }
    EXPECT_THROW(tokenize("q = q"), DslError);
}

TEST(Parser, DoubleCaretAtColumnThree) {
    try {
        parse_expression("q^^2");
        FAIL();
    } catch (const DslError& e) {
        EXPECT_EQ(e.position().line, 1);
        EXPECT_EQ(e.position().column, 3);
    }
}

TEST(Parser, TheoremTranscriptionShape) {
    const auto file = parse_file("1/S1 - S1 == phi(q^7/2)*f(-q^1/2,-q^13/2) / (q^1/4 * psi(q^7) * f(-q^3,-q^4));");
    ASSERT_EQ(file.statements.size(), 1u);
    EXPECT_EQ(file.statements[0].lhs->kind, NodeKind::Sub);
    EXPECT_EQ(file.statements[0].rhs->kind, NodeKind::Div);
    EXPECT_EQ(file.statements[0].rhs->lhs->lhs->monos[0], SignedMonomial::q(Rational(7, 2)));
}

TEST(Parser, TrivialStatement) {
    const auto file = parse_file("q == q;");
    ASSERT_EQ(file.statements.size(), 1u);
    EXPECT_TRUE(same(*file.statements[0].lhs, *make::mono(SignedMonomial::q(1))));
    EXPECT_EQ(file.statements[0].id, "stmt1");
}

TEST(Parser, ThetaArgumentMustBeMonomial) {
    try {
        parse_expression("f(q+1, q)");
        FAIL();
    } catch (const DslError& e) {
        EXPECT_EQ(e.message(), "theta argument must be a signed monomial");
    }
}

TEST(Parser, Precedence) {
    // '^' binds tighter than unary minus, which binds tighter than '*'.
    const auto e = parse_expression("-phi(q)^2 * 3 + 1");
    ASSERT_EQ(e->kind, NodeKind::Add);
    ASSERT_EQ(e->lhs->kind, NodeKind::Mul);
    ASSERT_EQ(e->lhs->lhs->kind, NodeKind::Neg);
    EXPECT_EQ(e->lhs->lhs->lhs->kind, NodeKind::Pow);
    EXPECT_EQ(render(e), "(((-((phi(q))^2)) * 3) + 1)");
    // Left associativity.
    EXPECT_EQ(render(parse_expression("q - q^2 - q^3")), "((q - q^2) - q^3)");
}

TEST(Parser, LabelsAndDirectives) {
    const auto file = parse_file("#order 30\n#scale 4\n# id: first\nq == q;\nq^2 == q^2;\n");
    EXPECT_EQ(file.order, Rational(30));
    EXPECT_EQ(file.scale, 4);
    ASSERT_EQ(file.statements.size(), 2u);
    EXPECT_EQ(file.statements[0].id, "first");
    EXPECT_EQ(file.statements[1].id, "stmt2");
}

TEST(Parser, RoundTripOnGeneratedAsts) {
    AstGen gen(314159);
    for (int k = 0; k < 1000; ++k) {
        const NodePtr ast = gen.expr(4);
        const std::string text = render(ast);
        NodePtr back;
        ASSERT_NO_THROW(back = parse_expression(text)) << text;
        EXPECT_TRUE(same(*ast, *back)) << text << "\n  reparsed as " << render(back);
    }
}

TEST(Evaluate, Basics) {
    EXPECT_EQ(evaluate(parse_expression("psi(q)"), 4).to_string(), "1 + q + q^3");
    const auto inv = evaluate(parse_expression("q^-1"), 5);
    EXPECT_EQ(inv.terms().size(), 1u);
    EXPECT_EQ(inv.coefficient(-1), 1);
    EXPECT_EQ(evaluate(parse_expression("chi(q)*chi(-q)"), 40), mul(chi(1, 40), chi(SignedMonomial::q(1, -1), 40)));
    const auto s1 = evaluate_to(parse_expression("S1"), 5);
    EXPECT_EQ(s1.valuation(), Rational(1, 4));
    EXPECT_EQ(evaluate_to(parse_expression("S1(q^2)"), 20), substitute_power(named_cf(CFName::S1, CFForm::product, 10), 2));
    EXPECT_EQ(evaluate_to(parse_expression("fneg(7/2)"), 30), f_neg(Rational(7, 2), 30));
}

TEST(Evaluate, ErrorsCarryPosition) {
    try {
        evaluate(parse_expression("1 + 1/(q - q)"), 10);
        FAIL();
    } catch (const DslError& e) {
        EXPECT_EQ(e.position().column, 6);
    }
}

TEST(CheckFile, EmptyFile) { EXPECT_TRUE(check_text("").empty()); }

TEST(CheckFile, PerturbedStatementFails) {
    const auto rs = check_file(fixture("perturbed.qid"));
    ASSERT_EQ(rs.size(), 3u);
    EXPECT_TRUE(rs[0].pass);
    EXPECT_FALSE(rs[1].pass);
    EXPECT_EQ(rs[1].id, "ok.seeded");
    EXPECT_EQ(rs[1].first_mismatch->exponent, Rational(10));
    EXPECT_TRUE(rs[2].pass);
}

TEST(CheckFile, CorpusMatchesSuites) {
    const std::string dir = QSERIES_CORPUS_DIR;
    const std::vector<std::pair<std::string, std::vector<CheckResult>>> cases{
        {"thm21.qid", suite_thm21(60)},
        {"thm22.qid", suite_thm22(60)},
        {"thm23.qid", suite_thm23(4, 60)},
        {"aux.qid", suite_auxiliary(60)},
    };
    for (const auto& [file, want] : cases) {
        const auto got = check_file(dir + "/" + file, Rational(60));
        ASSERT_EQ(got.size(), want.size()) << file;
        for (std::size_t k = 0; k < got.size(); ++k) {
            EXPECT_EQ(got[k].id, want[k].id) << file;
            EXPECT_EQ(got[k].pass, want[k].pass) << got[k].id;
            EXPECT_EQ(got[k].first_mismatch.has_value(), want[k].first_mismatch.has_value()) << got[k].id;
            if (got[k].first_mismatch && want[k].first_mismatch) {
                EXPECT_EQ(got[k].first_mismatch->exponent, want[k].first_mismatch->exponent) << got[k].id;
            }
        }
    }
}

TEST(CheckFile, MalformedFixturesGivePositionedErrors) {
    std::size_t seen = 0;
    for (const auto& entry : std::filesystem::directory_iterator(fixture("malformed"))) {
        ++seen;
        const std::string path = entry.path().string();
        try {
            (void)check_file(path);
            ADD_FAILURE() << path << ": no error";
        } catch (const DslError& e) {
            EXPECT_GE(e.position().line, 1) << path;
            EXPECT_GE(e.position().column, 1) << path;
        } catch (const std::exception& e) {
            ADD_FAILURE() << path << ": unpositioned " << e.what();
        }
    }
    EXPECT_GE(seen, 15u);
}
