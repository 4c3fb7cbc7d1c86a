#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dami/diagnostics.hpp"

namespace dami {

/// A possibly-qualified column reference. `table` is empty for unqualified
/// references; qualification is resolved against the statement's scope by the
/// validator.
struct ColumnRef {
    std::string table;
    std::string column;
    SourceSpan span;
};

/// A string or integer literal. For strings, `text` holds the decoded value
/// (quote escapes resolved); for integers it holds the digits as written.
struct LiteralValue {
    bool is_string = false;
    std::string text;
};

enum class Direction { From, To };

struct ConnectionSpec {
    Direction direction = Direction::From;
    std::string dbname;
    std::string host;
    int port = 0;
    std::string user;
    std::string pwd;
    std::string schema;
};

// --- MAP building blocks ----------------------------------------------------

struct ColumnMapping {
    ColumnRef source;
    std::string target_column;
    SourceSpan span;
};

struct LiteralMapping {
    LiteralValue value;
    std::string target_column;
    SourceSpan span;
};

struct SqlExprMapping {
    std::string sql;  // opaque expression text, emitted verbatim
    std::string target_column;
    SourceSpan span;
};

/// Records the correspondence between a legacy key and the target table's
/// newly generated primary key. `alias` names the temporary column carried
/// through the insert and preserved in the auxiliary schema.
struct SaveRelation {
    ColumnRef source;          // legacy expression, e.g. publication.pub_id
    std::string alias;         // e.g. id_publication
    std::string alias_type;    // SQL type text as written
    ColumnRef target_pk;       // e.g. publication.code (qualifier optional)
    std::string target_pk_type;
    SourceSpan span;
};

using MapItem = std::variant<ColumnMapping, LiteralMapping, SqlExprMapping, SaveRelation>;

/// Resolves a target foreign-key column by looking a saved legacy key up in
/// an auxiliary equivalence table.
///   GET <target_fk_column> FROM <aux_table>.<aux_value_column>
///   WHEN <when_alias_column>=<when_legacy_expr>
struct GetClause {
    std::string target_fk_column;
    std::string aux_table;         // named after the previously mapped target table
    std::string aux_value_column;  // the target table's new PK column, as written
    std::string when_alias_column; // the alias saved by SAVE RELATION
    ColumnRef when_legacy_expr;
    SourceSpan span;
};

/// PRIMARY KEY IDENTIFIED WITH <legacy_pk_column> TO <target_pk_column>
struct PrimaryKeyClause {
    std::string legacy_pk_column;
    std::string target_pk_column;
    SourceSpan span;
};

/// FOREIGN KEY TO <target_table> IDENTIFIED WITH <table>.<column>
struct ForeignKeyClause {
    std::string target_table;
    ColumnRef legacy_fk;
    SourceSpan span;
};

/// Nested condition attached to a MAP:
///   UPDATE <target_column> TO <value> WHERE (<predicate>)
struct UpdateClause {
    std::string target_column;
    std::variant<LiteralValue, std::string> value;  // literal or opaque SQL text
    std::string predicate;                          // raw text between the parens
    SourceSpan span;
};

struct WherePredicate {
    std::string text;  // raw text between the outer parens, trimmed
    SourceSpan span;
};

// --- Statements ---------------------------------------------------------------

struct CreateProduct {
    SourceSpan span;
    std::string name;
};

struct CreateConnection {
    SourceSpan span;
    ConnectionSpec spec;
};

struct CreateSchema {
    SourceSpan span;
    std::string name;
};

struct MapStatement {
    SourceSpan span;
    std::vector<std::string> source_tables;
    std::string target_table;
    std::vector<MapItem> items;
    std::optional<WherePredicate> where;
    std::optional<PrimaryKeyClause> pk_clause;
    std::vector<ForeignKeyClause> fk_clauses;
    std::vector<GetClause> gets;
    std::vector<UpdateClause> updates;
};

struct MapAllProperties {
    SourceSpan span;
    std::string source_table;
    std::string target_table;
    std::vector<std::string> exclusions;
};

/// ATTRIBUTE <src>(<column> [SQL: <expr>]) TO <tgt>(<column>)
struct AttributeStatement {
    SourceSpan span;
    std::string source_table;
    std::string source_column;
    std::optional<std::string> transform_sql;
    std::string target_table;
    std::string target_column;
};

/// One value of an INSERT INTO statement: a literal, or a column drawn from a
/// single legacy table (query form).
struct InsertValue {
    std::variant<LiteralValue, ColumnRef> value;
    std::string target_column;
    SourceSpan span;
};

struct InsertStatement {
    SourceSpan span;
    std::string target_table;
    std::vector<InsertValue> values;
};

using IdentifyClause = std::variant<PrimaryKeyClause, ForeignKeyClause>;

/// IDENTIFY <join_table> TO <target_table> ( clauses )  — breaks a legacy
/// join table down into target rows with remapped keys.
struct IdentifyStatement {
    SourceSpan span;
    std::string source_table;
    std::string target_table;
    std::vector<IdentifyClause> clauses;
};

/// UPDATE FOREIGN KEY <table>.<column> FROM <aux>.<pk> WHEN <alias>=<expr>
/// The lookup's target_fk_column repeats the statement's column.
struct UpdateForeignKey {
    SourceSpan span;
    std::string target_table;
    GetClause lookup;
};

/// UPDATE FOREIGN TABLE <table> GET … GET …  — one lookup per foreign-key
/// column of a many-to-many join table.
struct UpdateForeignTable {
    SourceSpan span;
    std::string target_table;
    std::vector<GetClause> lookups;
};

struct DropConnection {
    SourceSpan span;
};

struct DropSchema {
    SourceSpan span;
    std::string name;
};

struct GenerateScript {
    SourceSpan span;
};

using Statement = std::variant<CreateProduct,
                               CreateConnection,
                               CreateSchema,
                               MapStatement,
                               MapAllProperties,
                               AttributeStatement,
                               InsertStatement,
                               IdentifyStatement,
                               UpdateForeignKey,
                               UpdateForeignTable,
                               DropConnection,
                               DropSchema,
                               GenerateScript>;

struct MigrationScript {
    std::vector<Statement> statements;
};

SourceSpan statement_span(const Statement& statement);

/// Span-free structural dump, one node per line. Two ASTs are structurally
/// equal iff their dumps are byte-equal; tests rely on this for round-trip
/// comparisons and readable failure output.
std::string debug_dump(const MigrationScript& script);

} // namespace dami
