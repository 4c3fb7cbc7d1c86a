#include "doctest.h"

#include <algorithm>

#include "dami/parser.hpp"
#include "dami/validator.hpp"
#include "testutil.hpp"

using namespace dami;

namespace {

SchemaCatalog load_catalog(const char* name) {
    Result<SchemaCatalog> result = parse_ddl(testutil::read_file(testutil::fixture_path(name)));
    REQUIRE(result.ok());
    return *result.value;
}

const SchemaCatalog& legacy_catalog() {
    static SchemaCatalog catalog = load_catalog("legacy.ddl");
    return catalog;
}

const SchemaCatalog& target_catalog() {
    static SchemaCatalog catalog = load_catalog("target.ddl");
    return catalog;
}

MigrationScript parse_ok(std::string_view text) {
    Result<MigrationScript> result = parse_script(text);
    REQUIRE(result.ok());
    return *result.value;
}

Result<ResolvedScript> validate_text(std::string_view text) {
    return validate(parse_ok(text), legacy_catalog(), target_catalog());
}

int count_code(const std::vector<Diagnostic>& diagnostics, std::string_view code) {
    return static_cast<int>(std::count_if(
        diagnostics.begin(), diagnostics.end(),
        [&](const Diagnostic& d) { return d.code == code; }));
}

const std::string kPreamble =
    "CREATE CONNECTION FROM (dbname dami_db, host chronos, port 5432, user dami, pwd dami, "
    "schema legacy);\n"
    "CREATE CONNECTION TO (dbname dami_db, host chronos, port 5432, user dami, pwd dami, "
    "schema target);\n";

} // namespace

TEST_CASE("connection preamble plus three-table map validates cleanly") {
    Result<ResolvedScript> result =
        validate_text(testutil::read_file(testutil::fixture_path("publication_map.dami")));
    CHECK(result.ok());
    CHECK(result.diagnostics.empty());
    REQUIRE(result.value.has_value());
    const ResolvedScript& resolved = *result.value;
    CHECK(resolved.from_conn.schema == "legacy");
    CHECK(resolved.to_conn.schema == "target");
    REQUIRE(resolved.resolutions.size() == 4);
    REQUIRE(resolved.resolutions[2].save_aux.has_value());
    const AuxTableInfo& aux = *resolved.resolutions[2].save_aux;
    CHECK(aux.table == "publication");
    CHECK(aux.value_column == "publication_code");
    CHECK(aux.alias_column == "id_publication");
}

TEST_CASE("participant task validates with zero errors") {
    Result<ResolvedScript> result =
        validate_text(testutil::read_file(testutil::fixture_path("paper_task.dami")));
    CHECK(result.value.has_value());
    CHECK(!has_errors(result.diagnostics));
    // pub_id (int) feeding doi (varchar) is the known cross-family case.
    CHECK(count_code(result.diagnostics, "W-TYPE-MISMATCH") == 4);
}

TEST_CASE("full scenario validates with zero errors and zero warnings") {
    Result<ResolvedScript> result =
        validate_text(testutil::read_file(testutil::fixture_path("full_scenario.dami")));
    for (const Diagnostic& d : result.diagnostics) {
        CAPTURE(d.code);
        CAPTURE(d.message);
    }
    CHECK(result.ok());
    CHECK(result.diagnostics.empty());
}

TEST_CASE("unknown map table") {
    Result<ResolvedScript> result =
        validate_text(kPreamble + "MAP nonexistent TO paper (a TO title);\nGENERATE SCRIPT;\n");
    REQUIRE(!result.value.has_value());
    CHECK(count_code(result.diagnostics, "E-UNKNOWN-TABLE") == 1);
}

TEST_CASE("GET without a prior SAVE RELATION errors once per clause") {
    // The participant maps minus the publication map that establishes the
    // auxiliary table: all four lookups must fail.
    std::string text = testutil::read_file(testutil::fixture_path("paper_task.dami"));
    std::size_t start = text.find("MAP publication,conference,country");
    std::size_t end = text.find("MAP publication, book");
    REQUIRE(start != std::string::npos);
    REQUIRE(end != std::string::npos);
    text.erase(start, end - start);

    Result<ResolvedScript> result = validate_text(text);
    REQUIRE(!result.value.has_value());
    CHECK(count_code(result.diagnostics, "E-AUX-UNDEFINED") == 4);
}

TEST_CASE("statement order sensitivity: GET before its SAVE RELATION errors") {
    std::string consumer =
        "MAP publication, book TO paper (\n"
        "  pub_title TO title\n"
        ") WHERE (pub_id=book_id)\n"
        "GET publication_code FROM publication.code WHEN id_publication=pub_id;\n";
    std::string producer =
        "MAP publication,conference,country TO publication (\n"
        "  conf_name TO title,\n"
        "  SAVE RELATION publication.pub_id AS id_publication int EQUALS publication.code int\n"
        ") WHERE (pub_id=conf_id);\n";

    Result<ResolvedScript> good =
        validate_text(kPreamble + producer + consumer + "GENERATE SCRIPT;\n");
    CHECK(good.value.has_value());

    Result<ResolvedScript> bad =
        validate_text(kPreamble + consumer + producer + "GENERATE SCRIPT;\n");
    REQUIRE(!bad.value.has_value());
    CHECK(count_code(bad.diagnostics, "E-AUX-UNDEFINED") == 1);
}

TEST_CASE("missing connections and GENERATE SCRIPT") {
    Result<ResolvedScript> result = validate_text("");
    REQUIRE(!result.value.has_value());
    CHECK(count_code(result.diagnostics, "E-NO-FROM-CONNECTION") == 1);
    CHECK(count_code(result.diagnostics, "E-NO-TO-CONNECTION") == 1);
    CHECK(count_code(result.diagnostics, "E-NO-GENERATE-SCRIPT") == 1);
}

TEST_CASE("duplicate and late connections") {
    std::string dup = kPreamble +
                      "CREATE CONNECTION FROM (dbname x, host h, port 1, user u, pwd p, schema "
                      "other);\nGENERATE SCRIPT;\n";
    CHECK(count_code(validate_text(dup).diagnostics, "E-DUP-CONNECTION") == 1);

    std::string late = kPreamble.substr(0, kPreamble.find('\n') + 1) +
                       "CREATE SCHEMA extra;\n" + kPreamble.substr(kPreamble.find('\n') + 1) +
                       "GENERATE SCRIPT;\n";
    CHECK(count_code(validate_text(late).diagnostics, "E-LATE-CONNECTION") == 1);
}

TEST_CASE("connection schema colliding with the auxiliary schema") {
    std::string text =
        "CREATE CONNECTION FROM (dbname d, host h, port 1, user u, pwd p, schema aux);\n"
        "CREATE CONNECTION TO (dbname d, host h, port 1, user u, pwd p, schema target);\n"
        "GENERATE SCRIPT;\n";
    CHECK(count_code(validate_text(text).diagnostics, "E-SCHEMA-COLLISION") == 1);
}

TEST_CASE("ambiguous and unknown source columns") {
    // The fixture tables prefix every column, so ambiguity needs a synthetic
    // catalog where two in-scope tables share a column name.
    SchemaCatalog source;
    TableDef t1{"t1", {{"id", "int", true, false}, {"v", "int", true, false}}, {}, {}, false};
    TableDef t2{"t2", {{"id", "int", true, false}}, {}, {}, false};
    source.tables = {t1, t2};
    SchemaCatalog target;
    target.tables = {TableDef{"out", {{"c", "int", true, false}}, {}, {}, false}};

    MigrationScript script = parse_ok(
        "CREATE CONNECTION FROM (dbname d, host h, port 1, user u, pwd p, schema legacy);\n"
        "CREATE CONNECTION TO (dbname d, host h, port 1, user u, pwd p, schema tgt);\n"
        "MAP t1, t2 TO out (id TO c);\nGENERATE SCRIPT;\n");
    Result<ResolvedScript> ambiguous = validate(script, source, target);
    CHECK(count_code(ambiguous.diagnostics, "E-AMBIGUOUS-COLUMN") == 1);

    MigrationScript unknown = parse_ok(
        "CREATE CONNECTION FROM (dbname d, host h, port 1, user u, pwd p, schema legacy);\n"
        "CREATE CONNECTION TO (dbname d, host h, port 1, user u, pwd p, schema tgt);\n"
        "MAP t1, t2 TO out (missing TO c);\nGENERATE SCRIPT;\n");
    Result<ResolvedScript> missing = validate(unknown, source, target);
    CHECK(count_code(missing.diagnostics, "E-UNKNOWN-COLUMN") == 1);
}

TEST_CASE("resolve_column binds qualified and unique unqualified names") {
    const TableDef* publication = legacy_catalog().find_table("publication");
    const TableDef* conference = legacy_catalog().find_table("conference");
    const TableDef* country = legacy_catalog().find_table("country");
    std::vector<const TableDef*> scope{publication, conference, country};

    Result<ColumnBinding> unqualified = resolve_column({"", "pub_year", {1, 1, 1}}, scope);
    REQUIRE(unqualified.ok());
    CHECK(unqualified.value->table == publication);

    Result<ColumnBinding> qualified =
        resolve_column({"publication", "pub_id", {1, 1, 1}}, {publication});
    REQUIRE(qualified.ok());
    CHECK(qualified.value->column->name == "pub_id");

    Result<ColumnBinding> empty = resolve_column({"", "", {1, 1, 1}}, scope);
    CHECK(!empty.value.has_value());
    CHECK(empty.diagnostics[0].code == "E-UNKNOWN-COLUMN");
}

TEST_CASE("duplicate target column") {
    std::string text = kPreamble +
                       "MAP publication TO paper (pub_title TO title, pub_loc TO title);\n"
                       "GENERATE SCRIPT;\n";
    CHECK(count_code(validate_text(text).diagnostics, "E-DUP-TARGET-COLUMN") == 1);
}

TEST_CASE("NOT NULL target column without mapping warns") {
    std::string text = kPreamble +
                       "MAP publication TO paper (pub_doi TO doi);\nGENERATE SCRIPT;\n";
    Result<ResolvedScript> result = validate_text(text);
    CHECK(result.value.has_value());  // warning only
    CHECK(count_code(result.diagnostics, "W-NOT-NULL-UNMAPPED") == 1);  // paper.title
}

TEST_CASE("cross-family mapping warns but validates") {
    std::string text = kPreamble +
                       "MAP publication TO paper (pub_year TO doi, pub_title TO title);\n"
                       "GENERATE SCRIPT;\n";
    Result<ResolvedScript> result = validate_text(text);
    CHECK(result.value.has_value());
    CHECK(count_code(result.diagnostics, "W-TYPE-MISMATCH") == 1);
}

TEST_CASE("update statements require a populated target") {
    std::string text = kPreamble +
                       "UPDATE FOREIGN KEY paper.publication_code FROM publication.code WHEN "
                       "id_publication=doi;\nGENERATE SCRIPT;\n";
    Result<ResolvedScript> result = validate_text(text);
    CHECK(count_code(result.diagnostics, "E-TARGET-UNPOPULATED") == 1);
}

TEST_CASE("update foreign key validates after its target was mapped") {
    std::string text =
        kPreamble +
        "MAP publication,conference,country TO publication (\n"
        "  conf_name TO title,\n"
        "  SAVE RELATION publication.pub_id AS id_publication int EQUALS publication.code int\n"
        ") WHERE (pub_id=conf_id);\n"
        "MAP publication, conference TO paper (pub_title TO title, pub_id TO doi)\n"
        "  WHERE (pub_id=conf_id);\n"
        "UPDATE FOREIGN KEY paper.publication_code FROM publication.code WHEN "
        "id_publication=doi;\nGENERATE SCRIPT;\n";
    Result<ResolvedScript> result = validate_text(text);
    for (const Diagnostic& d : result.diagnostics) {
        CAPTURE(d.code);
        CAPTURE(d.message);
    }
    CHECK(result.value.has_value());
}

TEST_CASE("conflicting SAVE RELATION signatures for one auxiliary table") {
    std::string text =
        kPreamble +
        "MAP publication, conference TO publication (\n"
        "  conf_name TO title,\n"
        "  SAVE RELATION publication.pub_id AS id_publication int EQUALS publication.code int\n"
        ") WHERE (pub_id=conf_id);\n"
        "MAP publication, journal TO publication (\n"
        "  jrnl_name TO title,\n"
        "  SAVE RELATION publication.pub_id AS other_alias int EQUALS publication.code int\n"
        ") WHERE (pub_id=jrnl_id);\n"
        "GENERATE SCRIPT;\n";
    CHECK(count_code(validate_text(text).diagnostics, "E-AUX-REDEFINED") == 1);
}

TEST_CASE("SAVE RELATION alias must not collide with a target column") {
    std::string text =
        kPreamble +
        "MAP publication, conference TO publication (\n"
        "  conf_name TO title,\n"
        "  SAVE RELATION publication.pub_id AS year int EQUALS publication.code int\n"
        ") WHERE (pub_id=conf_id);\nGENERATE SCRIPT;\n";
    CHECK(count_code(validate_text(text).diagnostics, "E-ALIAS-COLLISION") == 1);
}

TEST_CASE("MAP ALL PROPERTIES expansion and exclusions") {
    SchemaCatalog source;
    source.tables = {TableDef{
        "src",
        {{"a", "int", true, false}, {"b", "text", true, false}, {"c", "int", true, false}},
        {},
        {},
        false}};
    SchemaCatalog target;
    target.tables = {TableDef{
        "dst",
        {{"a", "int", true, false}, {"b", "text", true, false}, {"x", "int", true, false}},
        {},
        {},
        false}};

    std::string preamble =
        "CREATE CONNECTION FROM (dbname d, host h, port 1, user u, pwd p, schema legacy);\n"
        "CREATE CONNECTION TO (dbname d, host h, port 1, user u, pwd p, schema tgt);\n";

    MigrationScript both =
        parse_ok(preamble + "MAP ALL PROPERTIES src TO dst;\nGENERATE SCRIPT;\n");
    Result<ResolvedScript> expanded = validate(both, source, target);
    REQUIRE(expanded.ok());
    REQUIRE(expanded.value->resolutions[2].map_all_columns.size() == 2);
    CHECK(expanded.value->resolutions[2].map_all_columns[0].source_column == "a");
    CHECK(expanded.value->resolutions[2].map_all_columns[1].source_column == "b");

    MigrationScript excluded =
        parse_ok(preamble + "MAP ALL PROPERTIES src TO dst EXCEPT (b);\nGENERATE SCRIPT;\n");
    Result<ResolvedScript> one = validate(excluded, source, target);
    REQUIRE(one.ok());
    CHECK(one.value->resolutions[2].map_all_columns.size() == 1);

    MigrationScript none = parse_ok(
        preamble + "MAP ALL PROPERTIES src TO dst EXCEPT (a, b);\nGENERATE SCRIPT;\n");
    Result<ResolvedScript> zero = validate(none, source, target);
    CHECK(count_code(zero.diagnostics, "E-NO-MATCHING-COLUMNS") == 1);
}

TEST_CASE("validation does not mutate its inputs") {
    MigrationScript script =
        parse_ok(testutil::read_file(testutil::fixture_path("publication_map.dami")));
    std::string before = debug_dump(script);
    SchemaCatalog source = legacy_catalog();
    SchemaCatalog target = target_catalog();
    (void)validate(script, source, target);
    CHECK(debug_dump(script) == before);
    CHECK(source == legacy_catalog());
    CHECK(target == target_catalog());
}

TEST_CASE("diagnostics are deterministic and ordered") {
    std::string text = testutil::read_file(testutil::fixture_path("paper_task.dami"));
    Result<ResolvedScript> first = validate_text(text);
    Result<ResolvedScript> second = validate_text(text);
    REQUIRE(first.diagnostics.size() == second.diagnostics.size());
    for (std::size_t i = 0; i < first.diagnostics.size(); ++i) {
        CHECK(first.diagnostics[i].code == second.diagnostics[i].code);
        CHECK(first.diagnostics[i].message == second.diagnostics[i].message);
    }
}
