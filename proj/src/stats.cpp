#include "dami/stats.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace dami {

namespace {

struct Counts {
    long lines = 0;  // non-blank
    long chars = 0;  // excluding line terminators
};

Counts count_text(std::string_view text) {
    Counts counts;
    bool line_blank = true;
    bool line_open = false;
    for (char c : text) {
        if (c == '\n') {
            if (!line_blank) ++counts.lines;
            line_blank = true;
            line_open = false;
            continue;
        }
        if (c == '\r') continue;
        ++counts.chars;
        line_open = true;
        if (!std::isspace(static_cast<unsigned char>(c))) line_blank = false;
    }
    if (line_open && !line_blank) ++counts.lines;
    return counts;
}

// (sql − dsl) / sql × 100, rounded half away from zero to one decimal.
double improvement(long dsl, long sql) {
    if (sql == 0) return 0.0;
    double pct = (static_cast<double>(sql) - static_cast<double>(dsl)) /
                 static_cast<double>(sql) * 100.0;
    double scaled = pct * 10.0;
    double rounded = scaled >= 0 ? std::floor(scaled + 0.5) : -std::floor(-scaled + 0.5);
    return rounded / 10.0;
}

} // namespace

SizeReport compute_size_report(std::string_view dsl_text, std::string_view sql_text) {
    Counts dsl = count_text(dsl_text);
    Counts sql = count_text(sql_text);
    SizeReport report;
    report.loc_dsl = dsl.lines;
    report.loc_sql = sql.lines;
    report.chars_dsl = dsl.chars;
    report.chars_sql = sql.chars;
    report.loc_improvement_pct = improvement(dsl.lines, sql.lines);
    report.chars_improvement_pct = improvement(dsl.chars, sql.chars);
    return report;
}

std::string format_pct(double value) {
    std::ostringstream out;
    long tenths = std::lround(value * 10.0);
    if (tenths < 0) {
        out << "-";
        tenths = -tenths;
    }
    out << tenths / 10 << "." << tenths % 10;
    return out.str();
}

} // namespace dami
