#include "doctest.h"

#include <algorithm>

#include "dami/catalog.hpp"
#include "testutil.hpp"

using namespace dami;

namespace {

SchemaCatalog parse_ok(std::string_view ddl) {
    Result<SchemaCatalog> result = parse_ddl(ddl);
    for (const Diagnostic& d : result.diagnostics) {
        CAPTURE(d.code);
        CAPTURE(d.message);
    }
    REQUIRE(result.ok());
    return *result.value;
}

} // namespace

TEST_CASE("single table with inline primary key") {
    SchemaCatalog catalog = parse_ok(
        "CREATE TABLE country (cntry_id int PRIMARY KEY, cntry_name_es varchar(120));");
    REQUIRE(catalog.tables.size() == 1);
    const TableDef& table = catalog.tables[0];
    CHECK(table.name == "country");
    CHECK(table.primary_key == std::vector<std::string>{"cntry_id"});
    CHECK_FALSE(table.pk_autogenerated);
    REQUIRE(table.columns.size() == 2);
    CHECK(table.columns[0].sql_type == "int");
    CHECK_FALSE(table.columns[0].nullable);
    CHECK(table.columns[1].sql_type == "varchar(120)");
    CHECK(table.columns[1].nullable);
}

TEST_CASE("empty input yields an empty catalog") {
    SchemaCatalog catalog = parse_ok("");
    CHECK(catalog.tables.empty());
    CHECK(catalog.schema_name.empty());
}

TEST_CASE("serial primary key marks the table autogenerated") {
    SchemaCatalog catalog = parse_ok(
        "CREATE TABLE publication (code serial PRIMARY KEY, title varchar(500) NOT NULL);");
    const TableDef& table = catalog.tables[0];
    CHECK(table.pk_autogenerated);
    CHECK(table.columns[0].has_default);
    CHECK_FALSE(table.columns[1].nullable);
}

TEST_CASE("generated-as-identity marks the table autogenerated") {
    SchemaCatalog catalog = parse_ok(
        "CREATE TABLE t (id int GENERATED ALWAYS AS IDENTITY PRIMARY KEY, v int);");
    CHECK(catalog.tables[0].pk_autogenerated);
}

TEST_CASE("table-level keys and references") {
    SchemaCatalog catalog = parse_ok(testutil::read_file(testutil::fixture_path("legacy.ddl")));
    CHECK(catalog.schema_name == "legacy");
    REQUIRE(catalog.tables.size() == 8);

    const TableDef* join = catalog.find_table("pub_rsrch");
    REQUIRE(join != nullptr);
    CHECK(join->primary_key == std::vector<std::string>{"pr_pub_id", "pr_rsrch_id"});
    REQUIRE(join->foreign_keys.size() == 2);
    CHECK(join->foreign_keys[0].referenced_table == "publication");
    CHECK(join->foreign_keys[0].referenced_columns == std::vector<std::string>{"pub_id"});

    const TableDef* conference = catalog.find_table("conference");
    REQUIRE(conference != nullptr);
    REQUIRE(conference->foreign_keys.size() == 1);
    CHECK(conference->foreign_keys[0].columns == std::vector<std::string>{"conf_id"});
}

TEST_CASE("lookups are case-insensitive") {
    SchemaCatalog catalog = parse_ok(testutil::read_file(testutil::fixture_path("legacy.ddl")));
    const TableDef* table = catalog.find_table("BOOK_CHAPTER");
    REQUIRE(table != nullptr);
    CHECK(table->name == "book_chapter");
    CHECK(table->find_column("CHAPT_START_PAGE") != nullptr);
    CHECK(catalog.find_table("no_such_table") == nullptr);
    CHECK(table->find_column("") == nullptr);
}

TEST_CASE("target fixture columns used by the scripts exist") {
    SchemaCatalog catalog = parse_ok(testutil::read_file(testutil::fixture_path("target.ddl")));
    const TableDef* paper = catalog.find_table("paper");
    REQUIRE(paper != nullptr);
    CHECK(paper->find_column("startpage") != nullptr);
    CHECK(paper->pk_autogenerated);
    const TableDef* publication = catalog.find_table("publication");
    REQUIRE(publication != nullptr);
    CHECK(publication->find_column("pub_year") == nullptr);
    CHECK(publication->find_column("year") != nullptr);
}

TEST_CASE("duplicate table is a diagnostic") {
    Result<SchemaCatalog> result = parse_ddl("CREATE TABLE t (a int);CREATE TABLE t (b int);");
    REQUIRE(!result.value.has_value());
    CHECK(result.diagnostics[0].code == "E-DDL-DUP-TABLE");
}

TEST_CASE("unsupported constructs are rejected") {
    Result<SchemaCatalog> result = parse_ddl("CREATE INDEX i ON t (a);");
    REQUIRE(!result.value.has_value());
    CHECK(result.diagnostics[0].code == "E-DDL-UNSUPPORTED");

    result = parse_ddl("CREATE TABLE t (a int UNIQUE);");
    REQUIRE(!result.value.has_value());
    CHECK(result.diagnostics[0].code == "E-DDL-UNSUPPORTED");
}

TEST_CASE("foreign key arity mismatch is a diagnostic") {
    Result<SchemaCatalog> result = parse_ddl(
        "CREATE TABLE a (x int PRIMARY KEY, y int);"
        "CREATE TABLE b (m int, n int, FOREIGN KEY (m, n) REFERENCES a (x));");
    REQUIRE(!result.value.has_value());
    CHECK(std::any_of(result.diagnostics.begin(), result.diagnostics.end(),
                      [](const Diagnostic& d) { return d.code == "E-DDL-FK-ARITY"; }));
}

TEST_CASE("unknown referenced table is a diagnostic") {
    Result<SchemaCatalog> result =
        parse_ddl("CREATE TABLE b (m int REFERENCES nowhere (x));");
    REQUIRE(!result.value.has_value());
    CHECK(result.diagnostics[0].code == "E-DDL-UNKNOWN-TABLE");
}

TEST_CASE("parse is total: catalog or diagnostics, never neither") {
    for (const char* text : {"", "CREATE TABLE t (a int);", "garbage", "CREATE TABLE t (;"}) {
        CAPTURE(text);
        Result<SchemaCatalog> result = parse_ddl(text);
        CHECK(result.value.has_value() != !result.diagnostics.empty());
    }
}

TEST_CASE("catalog render round-trips through the parser") {
    for (const char* name : {"legacy.ddl", "target.ddl"}) {
        CAPTURE(name);
        SchemaCatalog first = parse_ok(testutil::read_file(testutil::fixture_path(name)));
        std::string rendered = render_catalog(first);
        CAPTURE(rendered);
        SchemaCatalog second = parse_ok(rendered);
        CHECK(first == second);
    }
}

TEST_CASE("type families") {
    CHECK(classify_type("int") == TypeFamily::Integer);
    CHECK(classify_type("BIGINT") == TypeFamily::Integer);
    CHECK(classify_type("serial") == TypeFamily::Integer);
    CHECK(classify_type("varchar(255)") == TypeFamily::Text);
    CHECK(classify_type("character varying(10)") == TypeFamily::Text);
    CHECK(classify_type("timestamp") == TypeFamily::DateTime);
    CHECK(classify_type("numeric(10,2)") == TypeFamily::Numeric);
    CHECK(classify_type("double precision") == TypeFamily::Numeric);
    CHECK(classify_type("bool") == TypeFamily::Boolean);
    CHECK(classify_type("uuid") == TypeFamily::Other);
}

TEST_CASE("column lookup returns the typed definition") {
    SchemaCatalog catalog = parse_ok(testutil::read_file(testutil::fixture_path("legacy.ddl")));
    const TableDef* publication = catalog.find_table("publication");
    REQUIRE(publication != nullptr);
    const ColumnDef* year = publication->find_column("pub_year");
    REQUIRE(year != nullptr);
    CHECK(year->sql_type == "int");
    CHECK(classify_type(year->sql_type) == TypeFamily::Integer);
}
