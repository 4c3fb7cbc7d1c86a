#include "dami/diagnostics.hpp"

#include <algorithm>
#include <sstream>

namespace dami {

std::string render_diagnostic(const Diagnostic& diagnostic, std::string_view file) {
    std::ostringstream out;
    out << file << ":" << diagnostic.span.line << ":" << diagnostic.span.column << ": "
        << (diagnostic.severity == Severity::Error ? "error" : "warning") << " "
        << diagnostic.code << ": " << diagnostic.message;
    return out.str();
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
    return std::any_of(diagnostics.begin(), diagnostics.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

} // namespace dami
