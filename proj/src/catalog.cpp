#include "dami/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace dami {

namespace {

const char* kIntegerTypes[] = {"int",    "integer",  "int2",       "int4",
                               "int8",   "smallint", "bigint",     "serial",
                               "serial4", "serial8", "smallserial", "bigserial"};
const char* kNumericTypes[] = {"numeric", "decimal", "real", "float", "float4", "float8",
                               "double"};
const char* kTextTypes[] = {"char", "varchar", "character", "text"};
const char* kDateTimeTypes[] = {"date", "time", "timestamp", "timestamptz", "timetz",
                                "interval"};

bool is_serial_type(std::string_view base) {
    return base == "serial" || base == "bigserial" || base == "smallserial" ||
           base == "serial4" || base == "serial8";
}

} // namespace

std::string to_lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool names_equal(std::string_view a, std::string_view b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](char x, char y) {
        return std::tolower(static_cast<unsigned char>(x)) ==
               std::tolower(static_cast<unsigned char>(y));
    });
}

TypeFamily classify_type(std::string_view sql_type) {
    std::string base = to_lower(sql_type);
    if (std::size_t paren = base.find('('); paren != std::string::npos) base.resize(paren);
    if (std::size_t space = base.find(' '); space != std::string::npos) base.resize(space);

    auto in = [&](const auto& list) {
        return std::any_of(std::begin(list), std::end(list),
                           [&](const char* t) { return base == t; });
    };
    if (in(kIntegerTypes)) return TypeFamily::Integer;
    if (in(kNumericTypes)) return TypeFamily::Numeric;
    if (in(kTextTypes)) return TypeFamily::Text;
    if (in(kDateTimeTypes)) return TypeFamily::DateTime;
    if (base == "boolean" || base == "bool") return TypeFamily::Boolean;
    return TypeFamily::Other;
}

const ColumnDef* TableDef::find_column(std::string_view name) const {
    for (const ColumnDef& column : columns) {
        if (names_equal(column.name, name)) return &column;
    }
    return nullptr;
}

bool TableDef::is_pk_column(std::string_view name) const {
    return std::any_of(primary_key.begin(), primary_key.end(),
                       [&](const std::string& pk) { return names_equal(pk, name); });
}

const TableDef* SchemaCatalog::find_table(std::string_view name) const {
    for (const TableDef& table : tables) {
        if (names_equal(table.name, name)) return &table;
    }
    return nullptr;
}

// --- DDL parsing ---------------------------------------------------------------

namespace {

struct DdlToken {
    enum Kind { Word, Integer, String, Punct, End } kind = End;
    std::string text;
    SourceSpan span;
};

class DdlScanner {
public:
    explicit DdlScanner(std::string_view src) : src_(src) {}

    DdlToken next() {
        skip_trivia();
        DdlToken token;
        token.span = {line_, column_, 1};
        if (pos_ >= src_.size()) return token;

        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                          src_[pos_] == '_')) {
                advance();
            }
            token.kind = DdlToken::Word;
            token.text = std::string(src_.substr(start, pos_ - start));
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                advance();
            }
            token.kind = DdlToken::Integer;
            token.text = std::string(src_.substr(start, pos_ - start));
        } else if (c == '\'') {
            std::size_t start = pos_;
            advance();
            while (pos_ < src_.size()) {
                if (src_[pos_] == '\'') {
                    if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '\'') {
                        advance();
                        advance();
                        continue;
                    }
                    advance();
                    break;
                }
                advance();
            }
            token.kind = DdlToken::String;
            token.text = std::string(src_.substr(start, pos_ - start));
        } else {
            token.kind = DdlToken::Punct;
            token.text = std::string(1, c);
            advance();
        }
        token.span.length = std::max<int>(1, static_cast<int>(token.text.size()));
        return token;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void skip_trivia() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else {
                break;
            }
        }
    }
};

struct DdlError {};

class DdlParser {
public:
    explicit DdlParser(std::string_view src) : scanner_(src) { bump(); }

    Result<SchemaCatalog> run() {
        while (cur_.kind != DdlToken::End) {
            try {
                parse_statement();
            } catch (const DdlError&) {
                synchronize();
            }
        }
        check_references();

        Result<SchemaCatalog> result;
        result.diagnostics = std::move(diagnostics_);
        if (!has_errors(result.diagnostics)) result.value = std::move(catalog_);
        return result;
    }

private:
    DdlScanner scanner_;
    DdlToken cur_;
    SchemaCatalog catalog_;
    std::vector<Diagnostic> diagnostics_;

    void bump() { cur_ = scanner_.next(); }

    bool is_word(std::string_view word) const {
        return cur_.kind == DdlToken::Word && names_equal(cur_.text, word);
    }

    bool is_punct(char c) const { return cur_.kind == DdlToken::Punct && cur_.text[0] == c; }

    [[noreturn]] void fail(std::string code, std::string message, SourceSpan span) {
        diagnostics_.push_back({Severity::Error, std::move(code), std::move(message), span});
        throw DdlError{};
    }

    void expect_word(std::string_view word) {
        if (!is_word(word)) {
            fail("E-DDL-SYNTAX",
                 "expected '" + std::string(word) + "', found '" + cur_.text + "'", cur_.span);
        }
        bump();
    }

    void expect_punct(char c) {
        if (!is_punct(c)) {
            fail("E-DDL-SYNTAX",
                 std::string("expected '") + c + "', found '" + cur_.text + "'", cur_.span);
        }
        bump();
    }

    std::string expect_name() {
        if (cur_.kind != DdlToken::Word) {
            fail("E-DDL-SYNTAX", "expected a name, found '" + cur_.text + "'", cur_.span);
        }
        std::string name = cur_.text;
        bump();
        return name;
    }

    void synchronize() {
        while (cur_.kind != DdlToken::End && !is_punct(';')) bump();
        if (is_punct(';')) bump();
    }

    void parse_statement() {
        SourceSpan span = cur_.span;
        expect_word("create");
        if (is_word("schema")) {
            bump();
            catalog_.schema_name = expect_name();
            expect_punct(';');
            return;
        }
        if (!is_word("table")) {
            fail("E-DDL-UNSUPPORTED", "unsupported DDL construct '" + cur_.text + "'", cur_.span);
        }
        bump();
        parse_create_table(span);
    }

    void parse_create_table(SourceSpan span) {
        TableDef table;
        table.name = expect_name();
        if (catalog_.find_table(table.name)) {
            fail("E-DDL-DUP-TABLE", "duplicate table '" + table.name + "'", span);
        }
        expect_punct('(');
        parse_table_element(table);
        while (is_punct(',')) {
            bump();
            parse_table_element(table);
        }
        expect_punct(')');
        expect_punct(';');

        for (const std::string& pk : table.primary_key) {
            if (!table.find_column(pk)) {
                fail("E-DDL-UNKNOWN-COLUMN",
                     "primary key names unknown column '" + pk + "' in table " + table.name,
                     span);
            }
        }
        // pk-autogenerated reflects a single serial/identity primary key.
        if (table.primary_key.size() == 1) {
            const ColumnDef* pk_col = table.find_column(table.primary_key.front());
            if (pk_col && pk_col->has_default &&
                (is_serial_type(to_lower(pk_col->sql_type)) ||
                 generated_columns_.count(to_lower(pk_col->name)) != 0)) {
                table.pk_autogenerated = true;
            }
        }
        generated_columns_.clear();
        catalog_.tables.push_back(std::move(table));
    }

    void parse_table_element(TableDef& table) {
        SourceSpan span = cur_.span;
        if (is_word("primary")) {
            bump();
            expect_word("key");
            expect_punct('(');
            table.primary_key.push_back(expect_name());
            while (is_punct(',')) {
                bump();
                table.primary_key.push_back(expect_name());
            }
            expect_punct(')');
            return;
        }
        if (is_word("foreign")) {
            bump();
            expect_word("key");
            ForeignKeyDef fk;
            expect_punct('(');
            fk.columns.push_back(expect_name());
            while (is_punct(',')) {
                bump();
                fk.columns.push_back(expect_name());
            }
            expect_punct(')');
            expect_word("references");
            fk.referenced_table = expect_name();
            if (is_punct('(')) {
                bump();
                fk.referenced_columns.push_back(expect_name());
                while (is_punct(',')) {
                    bump();
                    fk.referenced_columns.push_back(expect_name());
                }
                expect_punct(')');
            }
            if (!fk.referenced_columns.empty() &&
                fk.referenced_columns.size() != fk.columns.size()) {
                fail("E-DDL-FK-ARITY",
                     "foreign key column count does not match referenced column count", span);
            }
            table.foreign_keys.push_back(std::move(fk));
            return;
        }
        parse_column(table, span);
    }

    void parse_column(TableDef& table, SourceSpan span) {
        ColumnDef column;
        column.name = expect_name();
        if (table.find_column(column.name)) {
            fail("E-DDL-DUP-COLUMN",
                 "duplicate column '" + column.name + "' in table " + table.name, span);
        }
        column.sql_type = parse_type();
        if (is_serial_type(to_lower(column.sql_type))) {
            column.has_default = true;
            column.nullable = false;
        }

        while (cur_.kind == DdlToken::Word && !is_punct(',') && !is_punct(')')) {
            if (is_word("not")) {
                bump();
                expect_word("null");
                column.nullable = false;
            } else if (is_word("null")) {
                bump();
                column.nullable = true;
            } else if (is_word("primary")) {
                bump();
                expect_word("key");
                table.primary_key.push_back(column.name);
                column.nullable = false;
            } else if (is_word("default")) {
                bump();
                skip_default_value();
                column.has_default = true;
            } else if (is_word("generated")) {
                bump();
                if (is_word("by")) {
                    bump();
                    expect_word("default");
                } else {
                    expect_word("always");
                }
                expect_word("as");
                expect_word("identity");
                column.has_default = true;
                column.nullable = false;
                generated_columns_.insert(to_lower(column.name));
            } else if (is_word("references")) {
                bump();
                ForeignKeyDef fk;
                fk.columns.push_back(column.name);
                fk.referenced_table = expect_name();
                if (is_punct('(')) {
                    bump();
                    fk.referenced_columns.push_back(expect_name());
                    expect_punct(')');
                }
                table.foreign_keys.push_back(std::move(fk));
            } else {
                fail("E-DDL-UNSUPPORTED",
                     "unsupported column constraint '" + cur_.text + "'", cur_.span);
            }
        }
        table.columns.push_back(std::move(column));
    }

    // A type name, optionally two words ("double precision", "character
    // varying") and optionally parenthesized arguments.
    std::string parse_type() {
        if (cur_.kind != DdlToken::Word) {
            fail("E-DDL-SYNTAX", "expected a type, found '" + cur_.text + "'", cur_.span);
        }
        std::string text = cur_.text;
        bump();
        std::string lower = to_lower(text);
        if ((lower == "double" && is_word("precision")) ||
            (lower == "character" && is_word("varying"))) {
            text += " " + cur_.text;
            bump();
        }
        if (is_punct('(')) {
            bump();
            text += '(';
            if (cur_.kind != DdlToken::Integer) {
                fail("E-DDL-SYNTAX", "expected a type argument", cur_.span);
            }
            text += cur_.text;
            bump();
            if (is_punct(',')) {
                bump();
                text += ',';
                if (cur_.kind != DdlToken::Integer) {
                    fail("E-DDL-SYNTAX", "expected a type argument", cur_.span);
                }
                text += cur_.text;
                bump();
            }
            expect_punct(')');
            text += ')';
        }
        return text;
    }

    // DEFAULT takes one literal, word, or call; nested parens are skipped as
    // a unit.
    void skip_default_value() {
        if (cur_.kind == DdlToken::End) {
            fail("E-DDL-SYNTAX", "expected a default value", cur_.span);
        }
        bool was_word = cur_.kind == DdlToken::Word;
        bump();
        if (was_word && is_punct('(')) skip_balanced();
    }

    void skip_balanced() {
        int depth = 0;
        do {
            if (is_punct('(')) ++depth;
            if (is_punct(')')) --depth;
            if (cur_.kind == DdlToken::End) {
                fail("E-DDL-SYNTAX", "unbalanced parentheses", cur_.span);
            }
            bump();
        } while (depth > 0);
    }

    // Foreign keys may reference tables defined later in the file; resolve
    // them once everything is parsed.
    void check_references() {
        for (TableDef& table : catalog_.tables) {
            for (ForeignKeyDef& fk : table.foreign_keys) {
                const TableDef* referenced = catalog_.find_table(fk.referenced_table);
                if (!referenced) {
                    diagnostics_.push_back(
                        {Severity::Error, "E-DDL-UNKNOWN-TABLE",
                         "foreign key in table " + table.name + " references unknown table '" +
                             fk.referenced_table + "'",
                         {1, 1, 1}});
                    continue;
                }
                if (fk.referenced_columns.empty()) {
                    fk.referenced_columns = referenced->primary_key;
                }
                if (fk.referenced_columns.size() != fk.columns.size()) {
                    diagnostics_.push_back({Severity::Error, "E-DDL-FK-ARITY",
                                            "foreign key column count does not match referenced "
                                            "column count in table " +
                                                table.name,
                                            {1, 1, 1}});
                    continue;
                }
                for (const std::string& col : fk.referenced_columns) {
                    if (!referenced->find_column(col)) {
                        diagnostics_.push_back(
                            {Severity::Error, "E-DDL-UNKNOWN-COLUMN",
                             "foreign key references unknown column '" + col + "' of table " +
                                 fk.referenced_table,
                             {1, 1, 1}});
                    }
                }
            }
        }
    }

    std::set<std::string> generated_columns_;
};

} // namespace

Result<SchemaCatalog> parse_ddl(std::string_view ddl_text) {
    return DdlParser(ddl_text).run();
}

std::string render_catalog(const SchemaCatalog& catalog) {
    std::ostringstream out;
    if (!catalog.schema_name.empty()) out << "CREATE SCHEMA " << catalog.schema_name << ";\n";
    for (const TableDef& table : catalog.tables) {
        out << "CREATE TABLE " << table.name << " (";
        bool first = true;
        auto sep = [&] {
            out << (first ? "\n  " : ",\n  ");
            first = false;
        };
        bool inline_pk = table.primary_key.size() == 1;
        for (const ColumnDef& column : table.columns) {
            sep();
            out << column.name << " " << column.sql_type;
            bool serial = is_serial_type(to_lower(
                column.sql_type.substr(0, column.sql_type.find('('))));
            bool pk_here = inline_pk && names_equal(column.name, table.primary_key.front());
            if (pk_here) out << " PRIMARY KEY";
            if (table.pk_autogenerated && pk_here && !serial) {
                out << " GENERATED ALWAYS AS IDENTITY";
            } else if (column.has_default && !serial &&
                       !(table.pk_autogenerated && pk_here)) {
                out << " DEFAULT 0";
            }
            if (!column.nullable && !pk_here && !serial &&
                !(table.pk_autogenerated && pk_here)) {
                out << " NOT NULL";
            }
        }
        if (!inline_pk && !table.primary_key.empty()) {
            sep();
            out << "PRIMARY KEY (";
            for (std::size_t i = 0; i < table.primary_key.size(); ++i) {
                if (i) out << ", ";
                out << table.primary_key[i];
            }
            out << ")";
        }
        for (const ForeignKeyDef& fk : table.foreign_keys) {
            sep();
            out << "FOREIGN KEY (";
            for (std::size_t i = 0; i < fk.columns.size(); ++i) {
                if (i) out << ", ";
                out << fk.columns[i];
            }
            out << ") REFERENCES " << fk.referenced_table << " (";
            for (std::size_t i = 0; i < fk.referenced_columns.size(); ++i) {
                if (i) out << ", ";
                out << fk.referenced_columns[i];
            }
            out << ")";
        }
        out << "\n);\n";
    }
    return out.str();
}

} // namespace dami
