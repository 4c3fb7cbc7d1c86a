#include "dami/ast.hpp"

#include <sstream>
#include <variant>

namespace dami {

namespace {

struct SpanVisitor {
    template <typename T>
    SourceSpan operator()(const T& stmt) const {
        return stmt.span;
    }
};

std::string quoted(std::string_view text) {
    std::string out = "\"";
    out.append(text);
    out += '"';
    return out;
}

std::string ref(const ColumnRef& r) {
    return r.table.empty() ? r.column : r.table + "." + r.column;
}

std::string literal(const LiteralValue& v) {
    return v.is_string ? quoted(v.text) : v.text;
}

std::string get_clause(const GetClause& g) {
    return "(get " + g.target_fk_column + " from " + g.aux_table + "." + g.aux_value_column +
           " when " + g.when_alias_column + "=" + ref(g.when_legacy_expr) + ")";
}

std::string pk_clause(const PrimaryKeyClause& pk) {
    return "(pk " + pk.legacy_pk_column + " -> " + pk.target_pk_column + ")";
}

std::string fk_clause(const ForeignKeyClause& fk) {
    return "(fk to " + fk.target_table + " with " + ref(fk.legacy_fk) + ")";
}

struct DumpVisitor {
    std::ostringstream& out;

    void operator()(const CreateProduct& s) const { out << "(product " << s.name << ")"; }

    void operator()(const CreateConnection& s) const {
        out << "(connection " << (s.spec.direction == Direction::From ? "from" : "to") << " "
            << s.spec.dbname << " " << s.spec.host << " " << s.spec.port << " " << s.spec.user
            << " " << quoted(s.spec.pwd) << " " << s.spec.schema << ")";
    }

    void operator()(const CreateSchema& s) const { out << "(create-schema " << s.name << ")"; }

    void operator()(const MapStatement& s) const {
        out << "(map (sources";
        for (const auto& t : s.source_tables) out << " " << t;
        out << ") (target " << s.target_table << ") (items";
        for (const MapItem& item : s.items) {
            out << " ";
            std::visit(
                [&](const auto& i) {
                    using T = std::decay_t<decltype(i)>;
                    if constexpr (std::is_same_v<T, ColumnMapping>) {
                        out << "(col " << ref(i.source) << " -> " << i.target_column << ")";
                    } else if constexpr (std::is_same_v<T, LiteralMapping>) {
                        out << "(lit " << literal(i.value) << " -> " << i.target_column << ")";
                    } else if constexpr (std::is_same_v<T, SqlExprMapping>) {
                        out << "(sql " << quoted(i.sql) << " -> " << i.target_column << ")";
                    } else {
                        out << "(save " << ref(i.source) << " as " << i.alias << ":"
                            << i.alias_type << " equals " << ref(i.target_pk) << ":"
                            << i.target_pk_type << ")";
                    }
                },
                item);
        }
        out << ")";
        if (s.where) out << " (where " << quoted(s.where->text) << ")";
        if (s.pk_clause) out << " " << pk_clause(*s.pk_clause);
        for (const auto& fk : s.fk_clauses) out << " " << fk_clause(fk);
        for (const auto& g : s.gets) out << " " << get_clause(g);
        for (const auto& u : s.updates) {
            out << " (update " << u.target_column << " to ";
            if (const auto* lit = std::get_if<LiteralValue>(&u.value)) {
                out << literal(*lit);
            } else {
                out << "sql " << quoted(std::get<std::string>(u.value));
            }
            out << " where " << quoted(u.predicate) << ")";
        }
        out << ")";
    }

    void operator()(const MapAllProperties& s) const {
        out << "(map-all " << s.source_table << " -> " << s.target_table << " (except";
        for (const auto& e : s.exclusions) out << " " << e;
        out << "))";
    }

    void operator()(const AttributeStatement& s) const {
        out << "(attribute " << s.source_table << "." << s.source_column;
        if (s.transform_sql) out << " via " << quoted(*s.transform_sql);
        out << " -> " << s.target_table << "." << s.target_column << ")";
    }

    void operator()(const InsertStatement& s) const {
        out << "(insert " << s.target_table << " (values";
        for (const InsertValue& v : s.values) {
            out << " (";
            if (const auto* lit = std::get_if<LiteralValue>(&v.value)) {
                out << literal(*lit);
            } else {
                out << ref(std::get<ColumnRef>(v.value));
            }
            out << " -> " << v.target_column << ")";
        }
        out << "))";
    }

    void operator()(const IdentifyStatement& s) const {
        out << "(identify " << s.source_table << " -> " << s.target_table << " (clauses";
        for (const IdentifyClause& c : s.clauses) {
            out << " ";
            if (const auto* pk = std::get_if<PrimaryKeyClause>(&c)) {
                out << pk_clause(*pk);
            } else {
                out << fk_clause(std::get<ForeignKeyClause>(c));
            }
        }
        out << "))";
    }

    void operator()(const UpdateForeignKey& s) const {
        out << "(update-fk " << s.target_table << " " << get_clause(s.lookup) << ")";
    }

    void operator()(const UpdateForeignTable& s) const {
        out << "(update-ftable " << s.target_table;
        for (const auto& g : s.lookups) out << " " << get_clause(g);
        out << ")";
    }

    void operator()(const DropConnection&) const { out << "(drop-connection)"; }
    void operator()(const DropSchema& s) const { out << "(drop-schema " << s.name << ")"; }
    void operator()(const GenerateScript&) const { out << "(generate-script)"; }
};

} // namespace

SourceSpan statement_span(const Statement& statement) {
    return std::visit(SpanVisitor{}, statement);
}

std::string debug_dump(const MigrationScript& script) {
    std::ostringstream out;
    for (const Statement& stmt : script.statements) {
        std::visit(DumpVisitor{out}, stmt);
        out << "\n";
    }
    return out.str();
}

} // namespace dami
