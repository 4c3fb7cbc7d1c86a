#include "dami/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <utility>

#include "dami/token.hpp"

namespace dami {

namespace {

bool ci_equal(std::string_view a, std::string_view b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](char x, char y) {
        return std::tolower(static_cast<unsigned char>(x)) ==
               std::tolower(static_cast<unsigned char>(y));
    });
}

std::string trim(std::string_view text) {
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    std::size_t last = text.find_last_not_of(" \t\r\n");
    return std::string(text.substr(first, last - first + 1));
}

std::string decode_string_literal(std::string_view quoted) {
    std::string out;
    for (std::size_t i = 1; i + 1 < quoted.size(); ++i) {
        out += quoted[i];
        if (quoted[i] == '\'' && i + 1 < quoted.size() && quoted[i + 1] == '\'') ++i;
    }
    return out;
}

// Raised on an unrecoverable statement-level error; the driver records the
// diagnostic and resynchronizes at the next semicolon.
struct ParseError {};

class Parser {
public:
    Parser(std::string_view source, std::vector<Token> tokens)
        : source_(source), tokens_(std::move(tokens)) {}

    Result<MigrationScript> run() {
        MigrationScript script;
        while (!at_end()) {
            try {
                script.statements.push_back(parse_statement());
            } catch (const ParseError&) {
                synchronize();
            }
        }
        check_structure(script);

        Result<MigrationScript> result;
        result.diagnostics = std::move(diagnostics_);
        if (!has_errors(result.diagnostics)) result.value = std::move(script);
        return result;
    }

private:
    std::string_view source_;
    std::vector<Token> tokens_;
    std::size_t idx_ = 0;
    std::vector<Diagnostic> diagnostics_;

    // --- token plumbing ------------------------------------------------------

    bool at_end() const { return idx_ >= tokens_.size(); }

    const Token& peek(std::size_t ahead = 0) const {
        static const Token eof{TokenKind::Punct, "", {1, 1, 1}, 0};
        return idx_ + ahead < tokens_.size() ? tokens_[idx_ + ahead] : eof;
    }

    const Token& advance() { return tokens_[idx_++]; }

    SourceSpan here() const {
        if (!at_end()) return peek().span;
        if (!tokens_.empty()) return tokens_.back().span;
        return {1, 1, 1};
    }

    [[noreturn]] void fail(std::string message, SourceSpan span) {
        diagnostics_.push_back({Severity::Error, "E-SYNTAX", std::move(message), span});
        throw ParseError{};
    }

    [[noreturn]] void fail_expected(std::string_view what) {
        std::string found = at_end() ? "end of input" : "'" + peek().text + "'";
        fail("expected " + std::string(what) + ", found " + found, here());
    }

    bool peek_kw(std::string_view kw, std::size_t ahead = 0) const {
        const Token& t = peek(ahead);
        return t.kind == TokenKind::Keyword && ci_equal(t.text, kw);
    }

    bool peek_punct(char c) const {
        return !at_end() && peek().kind == TokenKind::Punct && peek().text.size() == 1 &&
               peek().text[0] == c;
    }

    bool match_kw(std::string_view kw) {
        if (!peek_kw(kw)) return false;
        advance();
        return true;
    }

    Token expect_kw(std::string_view kw) {
        if (!peek_kw(kw)) fail_expected("'" + std::string(kw) + "'");
        return advance();
    }

    Token expect_punct(char c) {
        if (!peek_punct(c)) fail_expected(std::string("'") + c + "'");
        return advance();
    }

    Token expect_ident(std::string_view what) {
        if (at_end() || peek().kind != TokenKind::Identifier) fail_expected(what);
        return advance();
    }

    ColumnRef expect_colref(std::string_view what) {
        if (!at_end() && peek().kind == TokenKind::Identifier) {
            Token t = advance();
            return {"", t.text, t.span};
        }
        if (!at_end() && peek().kind == TokenKind::QualifiedName) {
            Token t = advance();
            std::size_t dot = t.text.find('.');
            return {t.text.substr(0, dot), t.text.substr(dot + 1), t.span};
        }
        fail_expected(what);
    }

    ColumnRef expect_qualified(std::string_view what) {
        if (at_end() || peek().kind != TokenKind::QualifiedName) fail_expected(what);
        Token t = advance();
        std::size_t dot = t.text.find('.');
        return {t.text.substr(0, dot), t.text.substr(dot + 1), t.span};
    }

    long expect_integer(std::string_view what) {
        if (at_end() || peek().kind != TokenKind::IntegerLiteral) fail_expected(what);
        Token t = advance();
        long value = 0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
        if (ec != std::errc()) fail("integer literal out of range", t.span);
        return value;
    }

    // An SQL type: identifier with an optional parenthesized argument list,
    // e.g. "int" or "varchar(255)" or "numeric(10,2)".
    std::string expect_type() {
        Token name = expect_ident("a type name");
        std::string text = name.text;
        if (peek_punct('(')) {
            advance();
            text += '(';
            text += std::to_string(expect_integer("a type argument"));
            if (peek_punct(',')) {
                advance();
                text += ',';
                text += std::to_string(expect_integer("a type argument"));
            }
            expect_punct(')');
            text += ')';
        }
        return text;
    }

    void expect_semicolon() {
        if (!peek_punct(';')) fail_expected("';' at end of statement");
        advance();
    }

    void synchronize() {
        while (!at_end()) {
            if (peek_punct(';')) {
                advance();
                return;
            }
            advance();
        }
    }

    // Captures the raw source text of a parenthesized region, starting at the
    // current '(' token. Content is opaque; only paren balance is checked.
    std::string capture_paren_raw() {
        Token open = expect_punct('(');
        int depth = 1;
        std::size_t start = open.offset + 1;
        while (!at_end()) {
            const Token& t = peek();
            if (t.kind == TokenKind::Punct && t.text == "(") ++depth;
            if (t.kind == TokenKind::Punct && t.text == ")") {
                if (--depth == 0) {
                    std::size_t end = t.offset;
                    advance();
                    return trim(source_.substr(start, end - start));
                }
            }
            advance();
        }
        fail("unbalanced parentheses in predicate", open.span);
    }

    // --- statements -----------------------------------------------------------

    Statement parse_statement() {
        const Token& first = peek();
        if (peek_kw("create")) return parse_create();
        if (peek_kw("map")) return parse_map();
        if (peek_kw("attribute")) return parse_attribute();
        if (peek_kw("insert")) return parse_insert();
        if (peek_kw("identify")) return parse_identify();
        if (peek_kw("update")) return parse_update();
        if (peek_kw("drop")) return parse_drop();
        if (peek_kw("generate")) return parse_generate();
        fail("expected a statement keyword, found '" + first.text + "'", first.span);
    }

    Statement parse_create() {
        SourceSpan span = peek().span;
        expect_kw("create");
        if (match_kw("product")) {
            CreateProduct stmt{span, expect_ident("a product name").text};
            expect_semicolon();
            return stmt;
        }
        if (match_kw("connection")) {
            CreateConnection stmt{span, parse_connection_spec()};
            expect_semicolon();
            return stmt;
        }
        if (match_kw("schema")) {
            CreateSchema stmt{span, expect_ident("a schema name").text};
            expect_semicolon();
            return stmt;
        }
        fail_expected("PRODUCT, CONNECTION, or SCHEMA after CREATE");
    }

    ConnectionSpec parse_connection_spec() {
        ConnectionSpec spec;
        if (match_kw("from")) {
            spec.direction = Direction::From;
        } else if (match_kw("to")) {
            spec.direction = Direction::To;
        } else {
            fail_expected("FROM or TO");
        }
        expect_punct('(');
        expect_kw("dbname");
        spec.dbname = expect_ident("a database name").text;
        expect_punct(',');
        expect_kw("host");
        spec.host = expect_name_or_string("a host");
        expect_punct(',');
        expect_kw("port");
        Token port_at = peek();
        long port = expect_integer("a port number");
        if (port < 1 || port > 65535) {
            diagnostics_.push_back({Severity::Error, "E-PORT-RANGE",
                                    "port must be between 1 and 65535", port_at.span});
        }
        spec.port = static_cast<int>(port);
        expect_punct(',');
        expect_kw("user");
        spec.user = expect_ident("a user name").text;
        expect_punct(',');
        expect_kw("pwd");
        spec.pwd = expect_name_or_string("a password");
        expect_punct(',');
        expect_kw("schema");
        spec.schema = expect_ident("a schema name").text;
        expect_punct(')');
        return spec;
    }

    std::string expect_name_or_string(std::string_view what) {
        if (!at_end() && peek().kind == TokenKind::StringLiteral) {
            return decode_string_literal(advance().text);
        }
        return expect_ident(what).text;
    }

    Statement parse_map() {
        SourceSpan span = peek().span;
        expect_kw("map");
        if (match_kw("all")) {
            expect_kw("properties");
            MapAllProperties stmt;
            stmt.span = span;
            stmt.source_table = expect_ident("a source table name").text;
            expect_kw("to");
            stmt.target_table = expect_ident("a target table name").text;
            if (match_kw("except")) {
                expect_punct('(');
                stmt.exclusions.push_back(expect_ident("a column name").text);
                while (peek_punct(',')) {
                    advance();
                    stmt.exclusions.push_back(expect_ident("a column name").text);
                }
                expect_punct(')');
            }
            expect_semicolon();
            return stmt;
        }

        MapStatement stmt;
        stmt.span = span;
        stmt.source_tables.push_back(expect_ident("a source table name").text);
        while (peek_punct(',')) {
            advance();
            stmt.source_tables.push_back(expect_ident("a source table name").text);
        }
        expect_kw("to");
        stmt.target_table = expect_ident("a target table name").text;

        expect_punct('(');
        parse_map_item(stmt);
        while (peek_punct(',')) {
            advance();
            parse_map_item(stmt);
        }
        expect_punct(')');

        if (peek_kw("where")) {
            Token kw = advance();
            stmt.where = WherePredicate{capture_paren_raw(), kw.span};
        }
        while (peek_kw("get") || peek_kw("update")) {
            if (peek_kw("get")) {
                stmt.gets.push_back(parse_get_clause());
            } else {
                stmt.updates.push_back(parse_update_clause());
            }
        }
        expect_semicolon();
        return stmt;
    }

    void parse_map_item(MapStatement& stmt) {
        if (peek_kw("save")) {
            Token kw = advance();
            expect_kw("relation");
            SaveRelation save;
            save.span = kw.span;
            save.source = expect_qualified("a qualified legacy column (table.column)");
            expect_kw("as");
            save.alias = expect_ident("an alias name").text;
            save.alias_type = expect_type();
            expect_kw("equals");
            save.target_pk = expect_colref("the target primary-key column");
            save.target_pk_type = expect_type();
            bool already = std::any_of(stmt.items.begin(), stmt.items.end(), [](const MapItem& i) {
                return std::holds_alternative<SaveRelation>(i);
            });
            if (already) {
                diagnostics_.push_back({Severity::Error, "E-MULTIPLE-SAVE-RELATION",
                                        "a MAP may carry at most one SAVE RELATION", kw.span});
                throw ParseError{};
            }
            stmt.items.push_back(std::move(save));
            return;
        }
        if (peek_kw("primary")) {
            Token kw = advance();
            expect_kw("key");
            expect_kw("identified");
            expect_kw("with");
            PrimaryKeyClause pk;
            pk.span = kw.span;
            pk.legacy_pk_column = expect_ident("the legacy primary-key column").text;
            expect_kw("to");
            pk.target_pk_column = expect_ident("the target primary-key column").text;
            if (stmt.pk_clause) fail("duplicate PRIMARY KEY clause in MAP", kw.span);
            stmt.pk_clause = pk;
            return;
        }
        if (peek_kw("foreign")) {
            stmt.fk_clauses.push_back(parse_foreign_key_clause());
            return;
        }
        if (peek_kw("sql:")) {
            Token kw = advance();
            if (at_end() || peek().kind != TokenKind::SqlFragment) {
                fail_expected("an SQL expression after SQL:");
            }
            SqlExprMapping item;
            item.span = kw.span;
            item.sql = advance().text;
            expect_kw("to");
            item.target_column = expect_ident("a target column name").text;
            stmt.items.push_back(std::move(item));
            return;
        }
        if (!at_end() && (peek().kind == TokenKind::StringLiteral ||
                          peek().kind == TokenKind::IntegerLiteral)) {
            Token lit = advance();
            LiteralMapping item;
            item.span = lit.span;
            item.value.is_string = lit.kind == TokenKind::StringLiteral;
            item.value.text = item.value.is_string ? decode_string_literal(lit.text) : lit.text;
            expect_kw("to");
            item.target_column = expect_ident("a target column name").text;
            stmt.items.push_back(std::move(item));
            return;
        }
        ColumnMapping item;
        item.span = here();
        item.source = expect_colref("a mapping item");
        expect_kw("to");
        item.target_column = expect_ident("a target column name").text;
        stmt.items.push_back(std::move(item));
    }

    ForeignKeyClause parse_foreign_key_clause() {
        Token kw = expect_kw("foreign");
        expect_kw("key");
        expect_kw("to");
        ForeignKeyClause fk;
        fk.span = kw.span;
        fk.target_table = expect_ident("a target table name").text;
        expect_kw("identified");
        expect_kw("with");
        fk.legacy_fk = expect_qualified("a qualified legacy column (table.column)");
        return fk;
    }

    GetClause parse_get_clause() {
        Token kw = expect_kw("get");
        GetClause get;
        get.span = kw.span;
        get.target_fk_column = expect_ident("a target column name").text;
        expect_kw("from");
        ColumnRef aux = expect_qualified("the auxiliary reference (table.pk_column)");
        get.aux_table = aux.table;
        get.aux_value_column = aux.column;
        expect_kw("when");
        get.when_alias_column = expect_ident("the saved alias column").text;
        expect_punct('=');
        get.when_legacy_expr = expect_colref("a legacy column reference");
        return get;
    }

    UpdateClause parse_update_clause() {
        Token kw = expect_kw("update");
        UpdateClause upd;
        upd.span = kw.span;
        upd.target_column = expect_ident("a target column name").text;
        expect_kw("to");
        if (peek_kw("sql:")) {
            advance();
            if (at_end() || peek().kind != TokenKind::SqlFragment) {
                fail_expected("an SQL expression after SQL:");
            }
            upd.value = advance().text;
        } else if (!at_end() && (peek().kind == TokenKind::StringLiteral ||
                                 peek().kind == TokenKind::IntegerLiteral)) {
            Token lit = advance();
            LiteralValue v;
            v.is_string = lit.kind == TokenKind::StringLiteral;
            v.text = v.is_string ? decode_string_literal(lit.text) : lit.text;
            upd.value = v;
        } else {
            fail_expected("a literal or SQL: expression");
        }
        expect_kw("where");
        upd.predicate = capture_paren_raw();
        return upd;
    }

    Statement parse_attribute() {
        SourceSpan span = peek().span;
        expect_kw("attribute");
        AttributeStatement stmt;
        stmt.span = span;
        stmt.source_table = expect_ident("a source table name").text;
        expect_punct('(');
        stmt.source_column = expect_ident("a source column name").text;
        if (peek_kw("sql:")) {
            advance();
            if (at_end() || peek().kind != TokenKind::SqlFragment) {
                fail_expected("an SQL expression after SQL:");
            }
            stmt.transform_sql = advance().text;
        }
        expect_punct(')');
        expect_kw("to");
        stmt.target_table = expect_ident("a target table name").text;
        expect_punct('(');
        stmt.target_column = expect_ident("a target column name").text;
        expect_punct(')');
        expect_semicolon();
        return stmt;
    }

    Statement parse_insert() {
        SourceSpan span = peek().span;
        expect_kw("insert");
        expect_kw("into");
        InsertStatement stmt;
        stmt.span = span;
        stmt.target_table = expect_ident("a target table name").text;
        expect_punct('(');
        stmt.values.push_back(parse_insert_value());
        while (peek_punct(',')) {
            advance();
            stmt.values.push_back(parse_insert_value());
        }
        expect_punct(')');
        expect_semicolon();
        return stmt;
    }

    InsertValue parse_insert_value() {
        InsertValue value;
        value.span = here();
        if (!at_end() && (peek().kind == TokenKind::StringLiteral ||
                          peek().kind == TokenKind::IntegerLiteral)) {
            Token lit = advance();
            LiteralValue v;
            v.is_string = lit.kind == TokenKind::StringLiteral;
            v.text = v.is_string ? decode_string_literal(lit.text) : lit.text;
            value.value = v;
        } else {
            value.value =
                expect_qualified("a literal or qualified legacy column (table.column)");
        }
        expect_kw("to");
        value.target_column = expect_ident("a target column name").text;
        return value;
    }

    Statement parse_identify() {
        SourceSpan span = peek().span;
        expect_kw("identify");
        IdentifyStatement stmt;
        stmt.span = span;
        stmt.source_table = expect_ident("a legacy join-table name").text;
        expect_kw("to");
        stmt.target_table = expect_ident("a target table name").text;
        expect_punct('(');
        stmt.clauses.push_back(parse_identify_clause());
        while (peek_punct(',')) {
            advance();
            stmt.clauses.push_back(parse_identify_clause());
        }
        expect_punct(')');
        expect_semicolon();
        return stmt;
    }

    IdentifyClause parse_identify_clause() {
        if (peek_kw("primary")) {
            Token kw = advance();
            expect_kw("key");
            expect_kw("identified");
            expect_kw("with");
            PrimaryKeyClause pk;
            pk.span = kw.span;
            pk.legacy_pk_column = expect_ident("the legacy primary-key column").text;
            expect_kw("to");
            pk.target_pk_column = expect_ident("the target primary-key column").text;
            return pk;
        }
        if (peek_kw("foreign")) return parse_foreign_key_clause();
        fail_expected("PRIMARY KEY or FOREIGN KEY clause");
    }

    Statement parse_update() {
        SourceSpan span = peek().span;
        expect_kw("update");
        expect_kw("foreign");
        if (match_kw("key")) {
            UpdateForeignKey stmt;
            stmt.span = span;
            ColumnRef target = expect_qualified("the target column (table.column)");
            stmt.target_table = target.table;
            GetClause& lookup = stmt.lookup;
            lookup.span = span;
            lookup.target_fk_column = target.column;
            expect_kw("from");
            ColumnRef aux = expect_qualified("the auxiliary reference (table.pk_column)");
            lookup.aux_table = aux.table;
            lookup.aux_value_column = aux.column;
            expect_kw("when");
            lookup.when_alias_column = expect_ident("the saved alias column").text;
            expect_punct('=');
            lookup.when_legacy_expr = expect_colref("a column of the updated table");
            expect_semicolon();
            return stmt;
        }
        if (match_kw("table")) {
            UpdateForeignTable stmt;
            stmt.span = span;
            stmt.target_table = expect_ident("a target table name").text;
            if (!peek_kw("get")) fail_expected("at least one GET lookup");
            while (peek_kw("get")) stmt.lookups.push_back(parse_get_clause());
            expect_semicolon();
            return stmt;
        }
        fail_expected("KEY or TABLE after UPDATE FOREIGN");
    }

    Statement parse_drop() {
        SourceSpan span = peek().span;
        expect_kw("drop");
        if (match_kw("connection")) {
            expect_semicolon();
            return DropConnection{span};
        }
        if (match_kw("schema")) {
            DropSchema stmt{span, expect_ident("a schema name").text};
            expect_semicolon();
            return stmt;
        }
        fail_expected("CONNECTION or SCHEMA after DROP");
    }

    Statement parse_generate() {
        SourceSpan span = peek().span;
        expect_kw("generate");
        expect_kw("script");
        expect_semicolon();
        return GenerateScript{span};
    }

    // Whole-script shape rules: at most one CREATE PRODUCT, and GENERATE
    // SCRIPT, when present, must be the final statement.
    void check_structure(const MigrationScript& script) {
        bool product_seen = false;
        for (std::size_t i = 0; i < script.statements.size(); ++i) {
            const Statement& stmt = script.statements[i];
            if (std::holds_alternative<CreateProduct>(stmt)) {
                if (product_seen) {
                    diagnostics_.push_back({Severity::Error, "E-DUP-PRODUCT",
                                            "a script may declare at most one CREATE PRODUCT",
                                            statement_span(stmt)});
                }
                product_seen = true;
            }
            if (std::holds_alternative<GenerateScript>(stmt) &&
                i + 1 != script.statements.size()) {
                diagnostics_.push_back({Severity::Error, "E-GENERATE-NOT-LAST",
                                        "GENERATE SCRIPT must be the final statement",
                                        statement_span(stmt)});
            }
        }
    }
};

} // namespace

Result<MigrationScript> parse_script(std::string_view source) {
    Result<std::vector<Token>> tokens = tokenize(source);
    if (!tokens.value) {
        Result<MigrationScript> result;
        result.diagnostics = std::move(tokens.diagnostics);
        return result;
    }
    return Parser(source, std::move(*tokens.value)).run();
}

} // namespace dami
