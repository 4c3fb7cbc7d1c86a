#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dami {

/// 1-based location of a source region. `length` counts characters and is
/// at least 1, so a span always points at something visible.
struct SourceSpan {
    int line = 1;
    int column = 1;
    int length = 1;

    friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

enum class Severity { Error, Warning };

/// A problem found while lexing, parsing, or validating. `code` is a stable
/// identifier from the registry in docs/diagnostics.md; codes are never
/// reused for a different meaning.
struct Diagnostic {
    Severity severity = Severity::Error;
    std::string code;
    std::string message;
    SourceSpan span;
};

/// Renders `file:line:col: severity CODE: message`.
std::string render_diagnostic(const Diagnostic& diagnostic, std::string_view file);

bool has_errors(const std::vector<Diagnostic>& diagnostics);

/// Outcome of a pipeline stage. `value` is present exactly when no
/// error-severity diagnostic was produced; warnings may accompany a value.
template <typename T>
struct Result {
    std::optional<T> value;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return value.has_value() && !has_errors(diagnostics); }
};

} // namespace dami
