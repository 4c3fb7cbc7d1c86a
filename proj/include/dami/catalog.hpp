#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dami/diagnostics.hpp"

namespace dami {

/// Coarse type buckets used for mapping-compatibility checks. Moving a value
/// across families is reported as a warning, never an error, since a cast may
/// be intended.
enum class TypeFamily { Integer, Numeric, Text, DateTime, Boolean, Other };

TypeFamily classify_type(std::string_view sql_type);

struct ColumnDef {
    std::string name;
    std::string sql_type;  // verbatim type text, e.g. "varchar(255)"
    bool nullable = true;
    bool has_default = false;

    friend bool operator==(const ColumnDef&, const ColumnDef&) = default;
};

struct ForeignKeyDef {
    std::vector<std::string> columns;
    std::string referenced_table;
    std::vector<std::string> referenced_columns;

    friend bool operator==(const ForeignKeyDef&, const ForeignKeyDef&) = default;
};

struct TableDef {
    std::string name;
    std::vector<ColumnDef> columns;
    std::vector<std::string> primary_key;
    std::vector<ForeignKeyDef> foreign_keys;
    bool pk_autogenerated = false;  // serial column or generated-as-identity

    const ColumnDef* find_column(std::string_view name) const;
    bool is_pk_column(std::string_view name) const;

    friend bool operator==(const TableDef&, const TableDef&) = default;
};

/// Tables of one database schema, insertion-ordered. Names resolve
/// case-insensitively.
struct SchemaCatalog {
    std::string schema_name;
    std::vector<TableDef> tables;

    const TableDef* find_table(std::string_view name) const;

    friend bool operator==(const SchemaCatalog&, const SchemaCatalog&) = default;
};

bool names_equal(std::string_view a, std::string_view b);
std::string to_lower(std::string_view text);

/// Parses a restricted SQL-DDL subset: CREATE TABLE with column/type,
/// NOT NULL, DEFAULT, PRIMARY KEY, serial or GENERATED … AS IDENTITY markers,
/// and FOREIGN KEY … REFERENCES clauses. An optional leading CREATE SCHEMA
/// names the catalog. Anything else is rejected with a diagnostic.
Result<SchemaCatalog> parse_ddl(std::string_view ddl_text);

/// Debug pretty-printer; parse_ddl(render_catalog(c)) reproduces `c`.
std::string render_catalog(const SchemaCatalog& catalog);

} // namespace dami
