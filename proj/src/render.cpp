#include "dami/parser.hpp"

#include <cctype>
#include <sstream>
#include <variant>

#include "dami/token.hpp"

namespace dami {

namespace {

std::string sql_string(std::string_view text) {
    std::string out = "'";
    for (char c : text) {
        out += c;
        if (c == '\'') out += '\'';
    }
    out += '\'';
    return out;
}

std::string ref(const ColumnRef& r) {
    return r.table.empty() ? r.column : r.table + "." + r.column;
}

std::string literal(const LiteralValue& v) {
    return v.is_string ? sql_string(v.text) : v.text;
}

std::string get_clause(const GetClause& g) {
    return "GET " + g.target_fk_column + " FROM " + g.aux_table + "." + g.aux_value_column +
           " WHEN " + g.when_alias_column + "=" + ref(g.when_legacy_expr);
}

bool is_plain_identifier(std::string_view text) {
    if (text.empty() || is_keyword(text)) return false;
    if (!std::isalpha(static_cast<unsigned char>(text[0])) && text[0] != '_') return false;
    for (char c : text) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    }
    return true;
}

// Connection parameters that came in as string literals (or would not re-lex
// as identifiers) go back out quoted.
std::string name_or_string(std::string_view text) {
    return is_plain_identifier(text) ? std::string(text) : sql_string(text);
}

struct RenderVisitor {
    std::ostringstream& out;

    void operator()(const CreateProduct& s) const { out << "CREATE PRODUCT " << s.name << ";"; }

    void operator()(const CreateConnection& s) const {
        const ConnectionSpec& c = s.spec;
        out << "CREATE CONNECTION " << (c.direction == Direction::From ? "FROM" : "TO")
            << " (dbname " << c.dbname << ", host " << name_or_string(c.host) << ", port "
            << c.port << ", user " << c.user << ", pwd " << name_or_string(c.pwd) << ", schema "
            << c.schema << ");";
    }

    void operator()(const CreateSchema& s) const { out << "CREATE SCHEMA " << s.name << ";"; }

    void operator()(const MapStatement& s) const {
        out << "MAP ";
        for (std::size_t i = 0; i < s.source_tables.size(); ++i) {
            if (i) out << ", ";
            out << s.source_tables[i];
        }
        out << " TO " << s.target_table << " (";

        bool first = true;
        auto item_sep = [&] {
            out << (first ? "\n  " : ",\n  ");
            first = false;
        };
        for (const MapItem& item : s.items) {
            item_sep();
            std::visit(
                [&](const auto& i) {
                    using T = std::decay_t<decltype(i)>;
                    if constexpr (std::is_same_v<T, ColumnMapping>) {
                        out << ref(i.source) << " TO " << i.target_column;
                    } else if constexpr (std::is_same_v<T, LiteralMapping>) {
                        out << literal(i.value) << " TO " << i.target_column;
                    } else if constexpr (std::is_same_v<T, SqlExprMapping>) {
                        out << "SQL: " << i.sql << " TO " << i.target_column;
                    } else {
                        out << "SAVE RELATION " << ref(i.source) << " AS " << i.alias << " "
                            << i.alias_type << " EQUALS " << ref(i.target_pk) << " "
                            << i.target_pk_type;
                    }
                },
                item);
        }
        if (s.pk_clause) {
            item_sep();
            out << "PRIMARY KEY IDENTIFIED WITH " << s.pk_clause->legacy_pk_column << " TO "
                << s.pk_clause->target_pk_column;
        }
        for (const ForeignKeyClause& fk : s.fk_clauses) {
            item_sep();
            out << "FOREIGN KEY TO " << fk.target_table << " IDENTIFIED WITH "
                << ref(fk.legacy_fk);
        }
        out << "\n)";
        if (s.where) out << " WHERE (" << s.where->text << ")";
        for (const GetClause& g : s.gets) out << "\n" << get_clause(g);
        for (const UpdateClause& u : s.updates) {
            out << "\nUPDATE " << u.target_column << " TO ";
            if (const auto* lit = std::get_if<LiteralValue>(&u.value)) {
                out << literal(*lit);
            } else {
                out << "SQL: " << std::get<std::string>(u.value);
            }
            out << " WHERE (" << u.predicate << ")";
        }
        out << ";";
    }

    void operator()(const MapAllProperties& s) const {
        out << "MAP ALL PROPERTIES " << s.source_table << " TO " << s.target_table;
        if (!s.exclusions.empty()) {
            out << " EXCEPT (";
            for (std::size_t i = 0; i < s.exclusions.size(); ++i) {
                if (i) out << ", ";
                out << s.exclusions[i];
            }
            out << ")";
        }
        out << ";";
    }

    void operator()(const AttributeStatement& s) const {
        out << "ATTRIBUTE " << s.source_table << "(" << s.source_column;
        if (s.transform_sql) out << " SQL: " << *s.transform_sql;
        out << ") TO " << s.target_table << "(" << s.target_column << ");";
    }

    void operator()(const InsertStatement& s) const {
        out << "INSERT INTO " << s.target_table << " (";
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            if (i) out << ", ";
            const InsertValue& v = s.values[i];
            if (const auto* lit = std::get_if<LiteralValue>(&v.value)) {
                out << literal(*lit);
            } else {
                out << ref(std::get<ColumnRef>(v.value));
            }
            out << " TO " << v.target_column;
        }
        out << ");";
    }

    void operator()(const IdentifyStatement& s) const {
        out << "IDENTIFY " << s.source_table << " TO " << s.target_table << " (";
        for (std::size_t i = 0; i < s.clauses.size(); ++i) {
            out << (i ? ",\n  " : "\n  ");
            if (const auto* pk = std::get_if<PrimaryKeyClause>(&s.clauses[i])) {
                out << "PRIMARY KEY IDENTIFIED WITH " << pk->legacy_pk_column << " TO "
                    << pk->target_pk_column;
            } else {
                const auto& fk = std::get<ForeignKeyClause>(s.clauses[i]);
                out << "FOREIGN KEY TO " << fk.target_table << " IDENTIFIED WITH "
                    << ref(fk.legacy_fk);
            }
        }
        out << "\n);";
    }

    void operator()(const UpdateForeignKey& s) const {
        const GetClause& g = s.lookup;
        out << "UPDATE FOREIGN KEY " << s.target_table << "." << g.target_fk_column << " FROM "
            << g.aux_table << "." << g.aux_value_column << " WHEN " << g.when_alias_column << "="
            << ref(g.when_legacy_expr) << ";";
    }

    void operator()(const UpdateForeignTable& s) const {
        out << "UPDATE FOREIGN TABLE " << s.target_table;
        for (const GetClause& g : s.lookups) out << "\n" << get_clause(g);
        out << ";";
    }

    void operator()(const DropConnection&) const { out << "DROP CONNECTION;"; }
    void operator()(const DropSchema& s) const { out << "DROP SCHEMA " << s.name << ";"; }
    void operator()(const GenerateScript&) const { out << "GENERATE SCRIPT;"; }
};

} // namespace

std::string render_script(const MigrationScript& script) {
    std::ostringstream out;
    for (const Statement& stmt : script.statements) {
        std::visit(RenderVisitor{out}, stmt);
        out << "\n";
    }
    return out.str();
}

} // namespace dami
