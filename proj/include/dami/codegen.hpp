#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "dami/validator.hpp"

namespace dami {

/// Dialect-specific emission fragments. Only PostgreSQL ships; everything
/// the generator knows about the target dialect funnels through here.
struct SqlDialect {
    std::string extension_statement = "CREATE EXTENSION IF NOT EXISTS postgres_fdw;";
    std::string foreign_data_wrapper = "postgres_fdw";
    /// Statement raising an error when `column` of `qualified_table` is NULL
    /// in any row.
    std::string (*null_guard)(const std::string& qualified_table,
                              const std::string& column) = nullptr;
};

const SqlDialect& postgres_dialect();

struct EmitOptions {
    std::string aux_schema = "aux";
    /// Replace the connection password in the emitted USER MAPPING with the
    /// placeholder ${DAMI_SOURCE_PASSWORD} (expand with envsubst before
    /// executing the script).
    bool redact_credentials = false;
};

enum class Phase { Prologue, Body, Epilogue };

struct SqlFragment {
    std::string sql;     // one complete SQL statement, ends with ';'
    SourceSpan origin;   // span of the DSL statement that produced it
    Phase phase = Phase::Body;
};

struct GeneratedScript {
    std::vector<SqlFragment> fragments;

    /// The fragments joined in order, one blank line between statements.
    std::string text() const;
};

/// Mutable emission state threaded through the per-statement emitters.
struct EmitContext {
    ConnectionSpec source_conn;
    ConnectionSpec target_conn;
    std::string aux_schema;
    std::string import_schema;  // the FROM connection's schema parameter
    bool redact_credentials = false;
    const SqlDialect* dialect = &postgres_dialect();

    std::map<std::string, AuxTableInfo> registered_aux;  // lowercased name → info

    // Explicit DROP CONNECTION / DROP SCHEMA statements suppress the matching
    // epilogue drop.
    bool connection_dropped = false;
    std::set<std::string> dropped_schemas;  // lowercased

    std::string server_name() const { return source_conn.dbname + "_database_server"; }
};

std::vector<SqlFragment> emit_prologue(EmitContext& ctx, SourceSpan origin);
std::vector<SqlFragment> emit_map(const MapStatement& stmt,
                                  const StatementResolution& resolution,
                                  EmitContext& ctx);
std::vector<SqlFragment> emit_insert(const InsertStatement& stmt, EmitContext& ctx);
std::vector<SqlFragment> emit_attribute(const AttributeStatement& stmt, EmitContext& ctx);
std::vector<SqlFragment> emit_map_all(const MapAllProperties& stmt,
                                      const StatementResolution& resolution,
                                      EmitContext& ctx);
std::vector<SqlFragment> emit_identify(const IdentifyStatement& stmt,
                                       const StatementResolution& resolution,
                                       EmitContext& ctx);
std::vector<SqlFragment> emit_update_fk(const UpdateForeignKey& stmt,
                                        const StatementResolution& resolution,
                                        EmitContext& ctx);
std::vector<SqlFragment> emit_update_ftable(const UpdateForeignTable& stmt,
                                            const StatementResolution& resolution,
                                            EmitContext& ctx);
std::vector<SqlFragment> emit_epilogue(EmitContext& ctx, SourceSpan origin);

/// Full translation: prologue, per-statement bodies in script order, cleanup
/// epilogue. Pure; identical inputs produce byte-identical output.
GeneratedScript compile(const ResolvedScript& script, const EmitOptions& options = {});

} // namespace dami
