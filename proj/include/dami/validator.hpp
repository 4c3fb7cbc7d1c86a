#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dami/ast.hpp"
#include "dami/catalog.hpp"
#include "dami/diagnostics.hpp"

namespace dami {

/// Shape of one auxiliary PK-equivalence table, recorded when a SAVE RELATION
/// is validated and consumed by GET lookups and foreign-key clauses.
struct AuxTableInfo {
    std::string table;         // equals the mapped target table's name
    std::string value_column;  // "<table>_<pk_column>"
    std::string pk_column;     // target PK column as written in SAVE RELATION
    std::string pk_type;
    std::string alias_column;  // the saved legacy-key alias
    std::string alias_type;
};

/// Source→target column pair produced by expanding MAP ALL PROPERTIES.
struct ResolvedColumnPair {
    std::string source_column;
    std::string target_column;
};

/// Catalog-derived annotations for one statement, parallel to the script's
/// statement list. Only the fields relevant to the statement kind are filled.
struct StatementResolution {
    std::optional<AuxTableInfo> save_aux;          // MAP carrying a SAVE RELATION
    std::vector<AuxTableInfo> get_aux;             // parallel to GET clauses / lookups
    std::vector<AuxTableInfo> fk_aux;              // parallel to FOREIGN KEY clauses
    std::vector<std::string> fk_target_columns;    // parallel to FOREIGN KEY clauses
    std::vector<ResolvedColumnPair> map_all_columns;
    /// Lowercased column name → number of in-scope source tables carrying it;
    /// lets the emitter drop qualifiers that SQL does not need.
    std::map<std::string, int> scope_column_counts;
    /// Lowercased unqualified reference → the table it resolved to, so the
    /// emitter can qualify it if an auxiliary join shadows the bare name.
    std::map<std::string, std::string> bare_source_tables;
};

/// A script that passed semantic analysis, with every name bound and every
/// MAP ALL expansion computed. Only constructible through validate().
struct ResolvedScript {
    MigrationScript script;
    ConnectionSpec from_conn;
    ConnectionSpec to_conn;
    std::optional<std::string> product;
    std::vector<StatementResolution> resolutions;  // parallel to script.statements
};

/// Semantic analysis against the two catalogs. Checks connection declarations,
/// table/column existence, mapping arity and duplication, NOT NULL coverage
/// (warning), type-family compatibility (warning), auxiliary-table ordering,
/// update-target population order, and GENERATE SCRIPT placement. Diagnostics
/// come out in statement order and are deterministic.
Result<ResolvedScript> validate(const MigrationScript& script,
                                const SchemaCatalog& source,
                                const SchemaCatalog& target);

struct ColumnBinding {
    const TableDef* table = nullptr;
    const ColumnDef* column = nullptr;
};

/// Binds a possibly-qualified column reference against the tables in scope.
/// Qualified references bind directly; unqualified ones bind iff the name
/// occurs in exactly one in-scope table.
Result<ColumnBinding> resolve_column(const ColumnRef& ref,
                                     const std::vector<const TableDef*>& scope);

} // namespace dami
