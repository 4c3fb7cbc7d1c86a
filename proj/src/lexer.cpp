#include "dami/token.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace dami {

namespace {

constexpr std::array kKeywords = {
    "create", "product", "connection", "schema", "from", "to", "map", "all",
    "properties", "except", "attribute", "insert", "into", "identify",
    "update", "foreign", "key", "table", "primary", "identified", "with",
    "save", "relation", "as", "equals", "where", "get", "when", "drop",
    "generate", "script", "sql", "dbname", "host", "port", "user", "pwd",
};

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool ci_equal(std::string_view a, std::string_view b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](char x, char y) {
        return std::tolower(static_cast<unsigned char>(x)) ==
               std::tolower(static_cast<unsigned char>(y));
    });
}

class Lexer {
public:
    explicit Lexer(std::string_view source) : src_(source) {}

    Result<std::vector<Token>> run() {
        while (!at_end()) {
            skip_trivia();
            if (at_end()) break;
            lex_token();
        }
        Result<std::vector<Token>> result;
        result.diagnostics = std::move(diagnostics_);
        if (!has_errors(result.diagnostics)) result.value = std::move(tokens_);
        return result;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
    std::vector<Token> tokens_;
    std::vector<Diagnostic> diagnostics_;

    bool at_end() const { return pos_ >= src_.size(); }
    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    SourceSpan span_here(int length) const { return {line_, column_, std::max(length, 1)}; }

    void error(std::string code, std::string message, SourceSpan span) {
        diagnostics_.push_back({Severity::Error, std::move(code), std::move(message), span});
    }

    void skip_trivia() {
        while (!at_end()) {
            char c = peek();
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '-' && peek(1) == '-') {
                while (!at_end() && peek() != '\n') advance();
            } else {
                break;
            }
        }
    }

    void push(TokenKind kind, std::size_t start, SourceSpan span) {
        tokens_.push_back({kind, std::string(src_.substr(start, pos_ - start)), span, start});
    }

    void lex_token() {
        char c = peek();
        if (is_ident_start(c)) {
            lex_word();
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            lex_number();
        } else if (c == '\'') {
            lex_string();
        } else if (std::string_view("(),;=.<>*+-/|!%:^~@#&?$").find(c) !=
                   std::string_view::npos) {
            SourceSpan span = span_here(1);
            std::size_t start = pos_;
            advance();
            push(TokenKind::Punct, start, span);
        } else {
            error("E-ILLEGAL-CHAR",
                  std::string("illegal character '") + c + "' in script", span_here(1));
            advance();
        }
    }

    void lex_word() {
        std::size_t start = pos_;
        SourceSpan span = span_here(1);
        while (!at_end() && is_ident_char(peek())) advance();
        std::string_view word = src_.substr(start, pos_ - start);

        // SQL immediately followed by ':' introduces an opaque fragment.
        if (ci_equal(word, "sql") && peek() == ':') {
            advance();
            span.length = static_cast<int>(pos_ - start);
            push(TokenKind::Keyword, start, span);
            lex_sql_fragment();
            return;
        }

        // Two identifiers joined by a dot form one qualified name.
        if (!is_keyword(word) && peek() == '.' && is_ident_start(peek(1))) {
            advance();  // '.'
            while (!at_end() && is_ident_char(peek())) advance();
            span.length = static_cast<int>(pos_ - start);
            push(TokenKind::QualifiedName, start, span);
            return;
        }

        span.length = static_cast<int>(pos_ - start);
        push(is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier, start, span);
    }

    void lex_number() {
        std::size_t start = pos_;
        SourceSpan span = span_here(1);
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) advance();
        span.length = static_cast<int>(pos_ - start);
        push(TokenKind::IntegerLiteral, start, span);
    }

    // Scans a single-quoted string with '' as the escape for a quote.
    // Returns false when the literal is unterminated.
    bool scan_quoted() {
        SourceSpan span = span_here(1);
        advance();  // opening quote
        while (!at_end()) {
            if (peek() == '\'') {
                if (peek(1) == '\'') {
                    advance();
                    advance();
                    continue;
                }
                advance();  // closing quote
                return true;
            }
            advance();
        }
        error("E-UNTERMINATED-STRING", "unterminated string literal", span);
        return false;
    }

    void lex_string() {
        std::size_t start = pos_;
        SourceSpan span = span_here(1);
        if (!scan_quoted()) return;
        span.length = static_cast<int>(pos_ - start);
        push(TokenKind::StringLiteral, start, span);
    }

    // Captures everything after `SQL:` up to the first standalone TO or WHERE
    // keyword, a comma or semicolon, or an unmatched ')', all at paren depth
    // zero and outside quotes. The fragment is validated for balanced parens
    // only; its content is passed through untouched.
    void lex_sql_fragment() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();

        std::size_t start = pos_;
        SourceSpan span = span_here(1);
        int depth = 0;
        std::size_t end = pos_;

        while (!at_end()) {
            char c = peek();
            if (c == '\'') {
                if (!scan_quoted()) return;
                end = pos_;
                continue;
            }
            if (c == '(') {
                ++depth;
            } else if (c == ')') {
                if (depth == 0) break;
                --depth;
            } else if ((c == ',' || c == ';') && depth == 0) {
                break;
            } else if (is_ident_start(c) && depth == 0) {
                std::size_t word_start = pos_;
                while (!at_end() && is_ident_char(peek())) advance();
                std::string_view word = src_.substr(word_start, pos_ - word_start);
                if (ci_equal(word, "to") || ci_equal(word, "where")) {
                    pos_ = word_start;  // rewind; the keyword is not part of the fragment
                    column_ -= static_cast<int>(word.size());
                    break;
                }
                end = pos_;
                continue;
            }
            advance();
            if (!std::isspace(static_cast<unsigned char>(c))) end = pos_;
        }

        if (depth > 0) {
            error("E-UNBALANCED-PARENS", "unbalanced parentheses in SQL fragment", span);
            return;
        }
        if (end <= start) {
            error("E-EMPTY-SQL-FRAGMENT", "empty SQL fragment after SQL:", span);
            return;
        }
        span.length = static_cast<int>(end - start);
        tokens_.push_back({TokenKind::SqlFragment, std::string(src_.substr(start, end - start)),
                           span, start});
    }
};

} // namespace

bool is_keyword(std::string_view text) {
    return std::any_of(kKeywords.begin(), kKeywords.end(),
                       [&](const char* kw) { return ci_equal(text, kw); });
}

Result<std::vector<Token>> tokenize(std::string_view source) {
    return Lexer(source).run();
}

} // namespace dami
