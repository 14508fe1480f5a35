#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qseries::dsl {

struct Position {
    int line = 1;
    int column = 1;

    friend bool operator==(const Position&, const Position&) = default;
};

/// Any lexical, syntax or evaluation error; what() is "line:col: message".
class DslError : public std::runtime_error {
public:
    DslError(Position pos, const std::string& message)
        : std::runtime_error(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + message),
          pos_(pos),
          message_(message) {}
    [[nodiscard]] Position position() const { return pos_; }
    [[nodiscard]] const std::string& message() const { return message_; }

private:
    Position pos_;
    std::string message_;
};

enum class TokenKind {
    IDENT,
    INT,
    CARET,
    SLASH,
    STAR,
    PLUS,
    MINUS,
    LPAREN,
    RPAREN,
    COMMA,
    SEMI,
    EQEQ,
    Q,
    DIRECTIVE,  // #order, #scale
    LABEL,      // "# id: NAME" comment; lexeme is NAME
    END,
};

inline std::string_view kind_name(TokenKind k) {
    switch (k) {
        case TokenKind::IDENT: return "identifier";
        case TokenKind::INT: return "integer";
        case TokenKind::CARET: return "'^'";
        case TokenKind::SLASH: return "'/'";
        case TokenKind::STAR: return "'*'";
        case TokenKind::PLUS: return "'+'";
        case TokenKind::MINUS: return "'-'";
        case TokenKind::LPAREN: return "'('";
        case TokenKind::RPAREN: return "')'";
        case TokenKind::COMMA: return "','";
        case TokenKind::SEMI: return "';'";
        case TokenKind::EQEQ: return "'=='";
        case TokenKind::Q: return "'q'";
        case TokenKind::DIRECTIVE: return "directive";
        case TokenKind::LABEL: return "label";
        case TokenKind::END: return "end of input";
    }
    return "?";
}

struct Token {
    TokenKind kind;
    std::string lexeme;
    Position pos;
    std::int64_t value = 0;  // INT only
};

namespace detail {

inline bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

inline std::string trim(std::string_view s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && is_space(s[a])) ++a;
    while (b > a && is_space(s[b - 1])) --b;
    return std::string(s.substr(a, b - a));
}

}  // namespace detail

/// Splits source text into tokens, ending with END. Whitespace and '#'
/// comments are skipped, except "#order"/"#scale" directives and
/// "# id: NAME" labels.
inline std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0;
    Position pos;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++pos.line;
                pos.column = 1;
            } else {
                ++pos.column;
            }
        }
    };
    auto single = [](char c, TokenKind& kind) {
        switch (c) {
            case '^': kind = TokenKind::CARET; return true;
            case '/': kind = TokenKind::SLASH; return true;
            case '*': kind = TokenKind::STAR; return true;
            case '+': kind = TokenKind::PLUS; return true;
            case '-': kind = TokenKind::MINUS; return true;
            case '(': kind = TokenKind::LPAREN; return true;
            case ')': kind = TokenKind::RPAREN; return true;
            case ',': kind = TokenKind::COMMA; return true;
            case ';': kind = TokenKind::SEMI; return true;
            default: return false;
        }
    };
    while (i < src.size()) {
        const char c = src[i];
        if (detail::is_space(c)) {
            advance(1);
            continue;
        }
        const Position start = pos;
        if (c == '#') {
            std::size_t end = src.find('\n', i);
            if (end == std::string_view::npos) end = src.size();
            const std::string_view line = src.substr(i, end - i);
            std::size_t word_end = 1;
            while (word_end < line.size() && detail::is_ident_start(line[word_end])) ++word_end;
            const std::string_view word = line.substr(1, word_end - 1);
            if (word == "order" || word == "scale") {
                out.push_back({TokenKind::DIRECTIVE, "#" + std::string(word), start});
                advance(word_end);
                continue;
            }
            const std::string body = detail::trim(line.substr(1));
            if (body.rfind("id:", 0) == 0) {
                const std::string name = detail::trim(std::string_view(body).substr(3));
                if (!name.empty()) out.push_back({TokenKind::LABEL, name, start});
            }
            advance(end - i);
            continue;
        }
        if (detail::is_digit(c)) {
            std::size_t j = i;
            std::int64_t v = 0;
            while (j < src.size() && detail::is_digit(src[j])) {
                if (v > (INT64_MAX - (src[j] - '0')) / 10) throw DslError(start, "integer literal too large");
                v = v * 10 + (src[j] - '0');
                ++j;
            }
            out.push_back({TokenKind::INT, std::string(src.substr(i, j - i)), start, v});
            advance(j - i);
            continue;
        }
        if (detail::is_ident_start(c)) {
            std::size_t j = i;
            while (j < src.size() && (detail::is_ident_start(src[j]) || detail::is_digit(src[j]))) ++j;
            std::string word(src.substr(i, j - i));
            out.push_back({word == "q" ? TokenKind::Q : TokenKind::IDENT, std::move(word), start});
            advance(j - i);
            continue;
        }
        if (c == '=') {
            if (i + 1 < src.size() && src[i + 1] == '=') {
                out.push_back({TokenKind::EQEQ, "==", start});
                advance(2);
                continue;
            }
            throw DslError(start, "unexpected '=' (did you mean '=='?)");
        }
        TokenKind kind;
        if (single(c, kind)) {
            out.push_back({kind, std::string(1, c), start});
            advance(1);
            continue;
        }
        const auto byte = static_cast<unsigned char>(c);
        std::string shown = byte >= 0x20 && byte < 0x7f ? std::string("'") + c + "'" : "byte " + std::to_string(byte);
        throw DslError(start, "unexpected character " + shown);
    }
    out.push_back({TokenKind::END, "", pos});
    return out;
}

}  // namespace qseries::dsl
