#pragma once

#include <string>
#include <string_view>

namespace dami {

/// Size comparison between a DSL script and the SQL it replaces. Lines are
/// counted non-blank; characters exclude line terminators. Improvement is
/// (sql − dsl) / sql × 100, rounded half-up to one decimal, and may be
/// negative.
struct SizeReport {
    long loc_dsl = 0;
    long loc_sql = 0;
    long chars_dsl = 0;
    long chars_sql = 0;
    double loc_improvement_pct = 0.0;
    double chars_improvement_pct = 0.0;
};

SizeReport compute_size_report(std::string_view dsl_text, std::string_view sql_text);

/// One decimal, sign preserved, e.g. "18.3" or "-4.0".
std::string format_pct(double value);

} // namespace dami
