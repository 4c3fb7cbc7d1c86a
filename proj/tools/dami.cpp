#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "dami/codegen.hpp"
#include "dami/parser.hpp"
#include "dami/stats.hpp"
#include "dami/validator.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDiagnostics = 1;
constexpr int kExitUsage = 2;

struct IoError {
    std::string message;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError{"cannot read " + path};
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
    std::filesystem::path target(path);
    std::filesystem::path temp = target;
    temp += ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError{"cannot write " + temp.string()};
        out << content;
        if (!out.flush()) throw IoError{"cannot write " + temp.string()};
    }
    std::error_code ec;
    std::filesystem::rename(temp, target, ec);
    if (ec) {
        std::filesystem::remove(temp);
        throw IoError{"cannot rename " + temp.string() + " to " + path};
    }
}

void print_diagnostics(const std::vector<dami::Diagnostic>& diagnostics,
                       const std::string& file, const std::string& format) {
    for (const dami::Diagnostic& d : diagnostics) {
        if (format == "records") {
            nlohmann::json record{
                {"file", file},
                {"line", d.span.line},
                {"column", d.span.column},
                {"length", d.span.length},
                {"severity", d.severity == dami::Severity::Error ? "error" : "warning"},
                {"code", d.code},
                {"message", d.message},
            };
            std::cout << record.dump() << "\n";
        } else {
            std::cerr << dami::render_diagnostic(d, file) << "\n";
        }
    }
}

struct CompileInputs {
    std::string script_path;
    std::string source_path;
    std::string target_path;
    std::string format = "text";
    bool strict = false;
};

// Parses and validates everything; returns the resolved script or nullopt
// with `exit_code` set.
std::optional<dami::ResolvedScript> run_front_end(const CompileInputs& inputs, int& exit_code) {
    bool had_errors = false;
    bool had_warnings = false;

    auto ddl = [&](const std::string& path) -> std::optional<dami::SchemaCatalog> {
        dami::Result<dami::SchemaCatalog> result = dami::parse_ddl(read_file(path));
        print_diagnostics(result.diagnostics, path, inputs.format);
        had_errors |= dami::has_errors(result.diagnostics);
        had_warnings |= !result.diagnostics.empty();
        if (!result.value) return std::nullopt;
        return std::move(*result.value);
    };

    std::optional<dami::SchemaCatalog> source = ddl(inputs.source_path);
    std::optional<dami::SchemaCatalog> target = ddl(inputs.target_path);

    dami::Result<dami::MigrationScript> script =
        dami::parse_script(read_file(inputs.script_path));
    print_diagnostics(script.diagnostics, inputs.script_path, inputs.format);
    had_errors |= dami::has_errors(script.diagnostics);
    had_warnings |= !script.diagnostics.empty();

    std::optional<dami::ResolvedScript> resolved;
    if (source && target && script.value) {
        dami::Result<dami::ResolvedScript> result =
            dami::validate(*script.value, *source, *target);
        print_diagnostics(result.diagnostics, inputs.script_path, inputs.format);
        had_errors |= dami::has_errors(result.diagnostics);
        had_warnings |= !result.diagnostics.empty();
        if (result.value) resolved = std::move(*result.value);
    }

    if (had_errors || (inputs.strict && had_warnings)) {
        exit_code = kExitDiagnostics;
        return std::nullopt;
    }
    exit_code = kExitOk;
    return resolved;
}

int cmd_check(const CompileInputs& inputs) {
    int exit_code = kExitOk;
    run_front_end(inputs, exit_code);
    return exit_code;
}

int cmd_generate(const CompileInputs& inputs, const std::string& out_path,
                 bool redact_credentials, bool provenance) {
    int exit_code = kExitOk;
    std::optional<dami::ResolvedScript> resolved = run_front_end(inputs, exit_code);
    if (!resolved) return exit_code == kExitOk ? kExitDiagnostics : exit_code;

    dami::EmitOptions options;
    options.redact_credentials = redact_credentials;
    dami::GeneratedScript generated = dami::compile(*resolved, options);

    if (out_path.empty()) {
        std::cout << generated.text();
    } else {
        write_file_atomic(out_path, generated.text());
    }

    if (provenance) {
        std::ostringstream sidecar;
        for (std::size_t i = 0; i < generated.fragments.size(); ++i) {
            const dami::SourceSpan& origin = generated.fragments[i].origin;
            sidecar << i << " " << inputs.script_path << ":" << origin.line << ":"
                    << origin.column << "\n";
        }
        if (out_path.empty()) {
            std::cerr << sidecar.str();
        } else {
            write_file_atomic(out_path + ".provenance", sidecar.str());
        }
    }
    return kExitOk;
}

int cmd_stats(const std::string& dsl_path, const std::string& sql_path,
              const std::string& format) {
    dami::SizeReport report =
        dami::compute_size_report(read_file(dsl_path), read_file(sql_path));
    if (format == "records") {
        nlohmann::json record{
            {"loc_dsl", report.loc_dsl},
            {"loc_sql", report.loc_sql},
            {"chars_dsl", report.chars_dsl},
            {"chars_sql", report.chars_sql},
            {"loc_improvement_pct", dami::format_pct(report.loc_improvement_pct)},
            {"chars_improvement_pct", dami::format_pct(report.chars_improvement_pct)},
        };
        std::cout << record.dump() << "\n";
        return kExitOk;
    }
    std::printf("%-12s %10s %14s\n", "", "LOC", "characters");
    std::printf("%-12s %10ld %14ld\n", "SQL", report.loc_sql, report.chars_sql);
    std::printf("%-12s %10ld %14ld\n", "DSL", report.loc_dsl, report.chars_dsl);
    std::printf("%-12s %9s%% %13s%%\n", "improvement",
                dami::format_pct(report.loc_improvement_pct).c_str(),
                dami::format_pct(report.chars_improvement_pct).c_str());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dami - data-migration DSL compiler"};
    app.require_subcommand(1);

    CompileInputs inputs;
    std::string out_path;
    bool redact_credentials = false;
    bool provenance = false;
    std::string stats_dsl, stats_sql, stats_format = "text";

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("script", inputs.script_path, "migration script (.dami)")->required();
        cmd->add_option("--source", inputs.source_path, "source schema DDL file")->required();
        cmd->add_option("--target", inputs.target_path, "target schema DDL file")->required();
        cmd->add_option("--format", inputs.format, "diagnostic format")
            ->check(CLI::IsMember({"text", "records"}));
        cmd->add_flag("--strict", inputs.strict, "treat warnings as errors");
    };

    CLI::App* check = app.add_subcommand("check", "parse and validate a migration script");
    add_common(check);

    CLI::App* generate =
        app.add_subcommand("generate", "compile a migration script to SQL");
    add_common(generate);
    generate->add_option("--out", out_path, "output SQL file (stdout when omitted)");
    generate->add_flag("--redact-credentials", redact_credentials,
                       "emit ${DAMI_SOURCE_PASSWORD} instead of the script password");
    generate->add_flag("--provenance", provenance,
                       "write a sidecar mapping SQL statements to script positions");

    CLI::App* stats =
        app.add_subcommand("stats", "compare DSL and SQL script sizes");
    stats->add_option("dsl", stats_dsl, "DSL script")->required();
    stats->add_option("sql", stats_sql, "SQL script")->required();
    stats->add_option("--format", stats_format, "output format")
        ->check(CLI::IsMember({"text", "records"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (check->parsed()) return cmd_check(inputs);
        if (generate->parsed()) {
            return cmd_generate(inputs, out_path, redact_credentials, provenance);
        }
        return cmd_stats(stats_dsl, stats_sql, stats_format);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.message << "\n";
        return kExitUsage;
    }
}
