#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "dami/diagnostics.hpp"

namespace dami {

enum class TokenKind {
    Keyword,
    Identifier,
    QualifiedName,  // table.column written without spaces
    StringLiteral,  // text includes the surrounding quotes
    IntegerLiteral,
    SqlFragment,    // opaque region following SQL:
    Punct,
};

/// One lexeme. `text` is always a verbatim slice of the input at `offset`;
/// keywords keep their original casing.
struct Token {
    TokenKind kind = TokenKind::Identifier;
    std::string text;
    SourceSpan span;
    std::size_t offset = 0;  // byte offset into the source, for raw slicing
};

/// True when `text` names a reserved word, compared case-insensitively.
bool is_keyword(std::string_view text);

/// Splits source text into tokens. Keywords are matched case-insensitively,
/// `--` comments are skipped, and the region after an `SQL:` keyword is
/// captured as a single opaque SqlFragment token. On any lexical error the
/// result carries diagnostics and no token list.
Result<std::vector<Token>> tokenize(std::string_view source);

} // namespace dami
