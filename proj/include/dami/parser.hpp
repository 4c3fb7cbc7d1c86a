#pragma once

#include <string_view>

#include "dami/ast.hpp"
#include "dami/diagnostics.hpp"

namespace dami {

/// Parses DSL source text into a script. Statements appear in source order
/// and each carries the span of its first token. On a syntax error the
/// parser skips to the next `;` and continues, so one call reports every
/// malformed statement.
Result<MigrationScript> parse_script(std::string_view source);

/// Renders a script back to canonical DSL text: one statement per block, MAP
/// items one per line. Re-parsing the output yields a structurally equal AST.
std::string render_script(const MigrationScript& script);

} // namespace dami
