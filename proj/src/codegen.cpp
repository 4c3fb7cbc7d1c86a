#include "dami/codegen.hpp"

#include <cassert>
#include <cctype>
#include <sstream>
#include <variant>

#include "dami/catalog.hpp"

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

std::string literal_sql(const LiteralValue& value) {
    return value.is_string ? sql_string(value.text) : value.text;
}

// True when the predicate contains a top-level OR, in which case appending
// further AND conditions requires wrapping it.
bool needs_paren_wrap(std::string_view predicate) {
    int depth = 0;
    for (std::size_t i = 0; i < predicate.size(); ++i) {
        char c = predicate[i];
        if (c == '\'') {
            ++i;
            while (i < predicate.size() && predicate[i] != '\'') ++i;
            continue;
        }
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (depth == 0 && (c == 'o' || c == 'O') && i + 1 < predicate.size() &&
            (predicate[i + 1] == 'r' || predicate[i + 1] == 'R')) {
            bool left_ok = i == 0 || !std::isalnum(static_cast<unsigned char>(predicate[i - 1]));
            bool right_ok = i + 2 >= predicate.size() ||
                            !std::isalnum(static_cast<unsigned char>(predicate[i + 2]));
            if (left_ok && right_ok) return true;
        }
    }
    return false;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

SqlFragment frag(std::string sql, SourceSpan origin, Phase phase = Phase::Body) {
    return {std::move(sql), origin, phase};
}

/// Assembles one INSERT…SELECT over the import schema plus any auxiliary
/// joins, emitting column references with the least qualification SQL needs.
class SelectBuilder {
public:
    SelectBuilder(EmitContext& ctx, std::vector<std::string> source_tables,
                  const StatementResolution& resolution)
        : ctx_(ctx),
          column_counts_(resolution.scope_column_counts),
          bare_bindings_(resolution.bare_source_tables) {
        for (std::string& table : source_tables) {
            used_names_.insert(to_lower(table));
            from_.push_back(ctx_.import_schema + "." + table);
        }
    }

    // Joins one auxiliary table, aliasing it when its name would collide with
    // another FROM entry. Returns the name the join is addressable by.
    std::string add_aux(const AuxTableInfo& info) {
        std::string effective = info.table;
        std::string entry = ctx_.aux_schema + "." + info.table;
        if (used_names_.count(to_lower(effective))) {
            int n = 1;
            do {
                effective = info.table + "_aux" + (n == 1 ? "" : std::to_string(n));
                ++n;
            } while (used_names_.count(to_lower(effective)));
            entry += " " + effective;
        }
        used_names_.insert(to_lower(effective));
        ++column_counts_[to_lower(info.value_column)];
        ++column_counts_[to_lower(info.alias_column)];
        from_.push_back(std::move(entry));
        return effective;
    }

    // A legacy reference carries a qualifier only when the bare name is
    // ambiguous in this FROM list; references written bare get the table the
    // validator bound them to when an auxiliary join shadows the name.
    std::string ref(const ColumnRef& r) const {
        auto it = column_counts_.find(to_lower(r.column));
        bool ambiguous = it != column_counts_.end() && it->second > 1;
        if (!ambiguous) return r.column;
        if (!r.table.empty()) return r.table + "." + r.column;
        auto bound = bare_bindings_.find(to_lower(r.column));
        if (bound != bare_bindings_.end()) return bound->second + "." + r.column;
        return r.column;
    }

    std::string aux_column(const std::string& effective, const std::string& column) const {
        auto it = column_counts_.find(to_lower(column));
        if (it != column_counts_.end() && it->second > 1) return effective + "." + column;
        return column;
    }

    void add_column(std::string target_column, std::string expr) {
        columns_.push_back(std::move(target_column));
        exprs_.push_back(std::move(expr));
    }

    void set_raw_predicate(std::string text) { raw_predicate_ = std::move(text); }
    void add_condition(std::string condition) { conditions_.push_back(std::move(condition)); }

    std::string build(const std::string& target_table, bool distinct) const {
        std::ostringstream out;
        out << "INSERT INTO " << ctx_.target_conn.schema << "." << target_table << "("
            << join(columns_, ", ") << ")\n  SELECT " << (distinct ? "DISTINCT " : "")
            << join(exprs_, ", ") << "\n  FROM " << join(from_, ", ");

        std::vector<std::string> where = conditions_;
        if (!raw_predicate_.empty()) {
            std::string raw = raw_predicate_;
            if (!where.empty() && needs_paren_wrap(raw)) raw = "(" + raw + ")";
            where.insert(where.begin(), std::move(raw));
        }
        if (!where.empty()) out << "\n  WHERE " << join(where, " AND ");
        out << ";";
        return out.str();
    }

private:
    EmitContext& ctx_;
    std::map<std::string, int> column_counts_;
    std::map<std::string, std::string> bare_bindings_;
    std::set<std::string> used_names_;
    std::vector<std::string> from_;
    std::vector<std::string> columns_;
    std::vector<std::string> exprs_;
    std::vector<std::string> conditions_;
    std::string raw_predicate_;
};

std::string postgres_null_guard(const std::string& qualified_table,
                                const std::string& column) {
    std::ostringstream out;
    out << "DO $$\nBEGIN\n  IF EXISTS (SELECT 1 FROM " << qualified_table << " WHERE "
        << column << " IS NULL) THEN\n    RAISE EXCEPTION 'foreign key update left NULL "
        << "values in " << qualified_table << "." << column << "';\n  END IF;\nEND $$;";
    return out.str();
}

std::vector<SqlFragment> emit_lookup_update(const GetClause& lookup, const AuxTableInfo& aux,
                                            const std::string& table, SourceSpan origin,
                                            EmitContext& ctx) {
    std::string qualified = ctx.target_conn.schema + "." + table;
    // The WHEN column is correlated against the row being updated; qualifying
    // it keeps it from being captured by the auxiliary table's columns.
    std::ostringstream out;
    out << "UPDATE " << qualified << "\n  SET " << lookup.target_fk_column << " = (SELECT "
        << aux.value_column << " FROM " << ctx.aux_schema << "." << aux.table << " WHERE "
        << aux.alias_column << "=" << table << "." << lookup.when_legacy_expr.column << ");";

    std::vector<SqlFragment> fragments;
    fragments.push_back(frag(out.str(), origin));
    fragments.push_back(
        frag(ctx.dialect->null_guard(qualified, lookup.target_fk_column), origin));
    return fragments;
}

} // namespace

const SqlDialect& postgres_dialect() {
    static const SqlDialect dialect{
        "CREATE EXTENSION IF NOT EXISTS postgres_fdw;",
        "postgres_fdw",
        &postgres_null_guard,
    };
    return dialect;
}

std::string GeneratedScript::text() const {
    std::string out;
    for (const SqlFragment& fragment : fragments) {
        out += fragment.sql;
        out += "\n";
    }
    return out;
}

std::vector<SqlFragment> emit_prologue(EmitContext& ctx, SourceSpan origin) {
    const ConnectionSpec& src = ctx.source_conn;
    const ConnectionSpec& dst = ctx.target_conn;
    std::string server = ctx.server_name();
    std::string password =
        ctx.redact_credentials ? "${DAMI_SOURCE_PASSWORD}" : src.pwd;

    std::vector<SqlFragment> out;
    auto add = [&](std::string sql) {
        out.push_back(frag(std::move(sql), origin, Phase::Prologue));
    };
    add(ctx.dialect->extension_statement);
    add("CREATE SERVER " + server + " FOREIGN DATA WRAPPER " +
        ctx.dialect->foreign_data_wrapper + " OPTIONS (host " +
        sql_string(src.host) + ", dbname " + sql_string(src.dbname) + ", port " +
        sql_string(std::to_string(src.port)) + ");");
    add("CREATE USER MAPPING FOR CURRENT_USER SERVER " + server + " OPTIONS (user " +
        sql_string(src.user) + ", password " + sql_string(password) + ");");
    add("CREATE SCHEMA " + ctx.import_schema + ";");
    add("IMPORT FOREIGN SCHEMA " + src.schema + " FROM SERVER " + server + " INTO " +
        ctx.import_schema + ";");
    add("CREATE SCHEMA IF NOT EXISTS " + dst.schema + " AUTHORIZATION " + dst.user + ";");
    add("CREATE SCHEMA IF NOT EXISTS " + ctx.aux_schema + " AUTHORIZATION " + dst.user + ";");
    return out;
}

std::vector<SqlFragment> emit_map(const MapStatement& stmt, const StatementResolution& resolution,
                                  EmitContext& ctx) {
    assert(resolution.fk_aux.size() == stmt.fk_clauses.size());
    assert(resolution.get_aux.size() == stmt.gets.size());

    const std::string target_schema = ctx.target_conn.schema;
    const std::string qualified_target = target_schema + "." + stmt.target_table;

    const SaveRelation* save = nullptr;
    for (const MapItem& item : stmt.items) {
        if (const auto* s = std::get_if<SaveRelation>(&item)) save = s;
    }

    std::vector<SqlFragment> out;
    if (save) {
        assert(resolution.save_aux.has_value());
        const AuxTableInfo& aux = *resolution.save_aux;
        out.push_back(frag("ALTER TABLE " + qualified_target + " ADD " + save->alias + " " +
                               save->alias_type + ";",
                           stmt.span));
        out.push_back(frag("CREATE TABLE IF NOT EXISTS " + ctx.aux_schema + "." +
                               stmt.target_table + "(\n  " + aux.value_column + " " +
                               aux.pk_type + ",\n  " + aux.alias_column + " " + aux.alias_type +
                               ");",
                           stmt.span));
        ctx.registered_aux[to_lower(aux.table)] = aux;
    }

    SelectBuilder select(ctx, stmt.source_tables, resolution);
    std::vector<std::string> fk_joins;
    for (const AuxTableInfo& aux : resolution.fk_aux) {
        assert(ctx.registered_aux.count(to_lower(aux.table)));
        fk_joins.push_back(select.add_aux(aux));
    }
    std::vector<std::string> get_joins;
    for (const AuxTableInfo& aux : resolution.get_aux) {
        assert(ctx.registered_aux.count(to_lower(aux.table)));
        get_joins.push_back(select.add_aux(aux));
    }

    for (const MapItem& item : stmt.items) {
        std::visit(
            [&](const auto& i) {
                using T = std::decay_t<decltype(i)>;
                if constexpr (std::is_same_v<T, ColumnMapping>) {
                    select.add_column(i.target_column, select.ref(i.source));
                } else if constexpr (std::is_same_v<T, LiteralMapping>) {
                    select.add_column(i.target_column, literal_sql(i.value));
                } else if constexpr (std::is_same_v<T, SqlExprMapping>) {
                    select.add_column(i.target_column, i.sql);
                } else {
                    select.add_column(i.alias, select.ref(i.source));
                }
            },
            item);
    }
    if (stmt.pk_clause) {
        select.add_column(stmt.pk_clause->target_pk_column,
                          select.ref({"", stmt.pk_clause->legacy_pk_column, stmt.span}));
    }
    for (std::size_t i = 0; i < stmt.fk_clauses.size(); ++i) {
        const AuxTableInfo& aux = resolution.fk_aux[i];
        select.add_column(resolution.fk_target_columns[i],
                          select.aux_column(fk_joins[i], aux.value_column));
        select.add_condition(select.aux_column(fk_joins[i], aux.alias_column) + "=" +
                             select.ref(stmt.fk_clauses[i].legacy_fk));
    }
    for (std::size_t i = 0; i < stmt.gets.size(); ++i) {
        const AuxTableInfo& aux = resolution.get_aux[i];
        select.add_column(stmt.gets[i].target_fk_column,
                          select.aux_column(get_joins[i], aux.value_column));
        select.add_condition(select.aux_column(get_joins[i], aux.alias_column) + "=" +
                             select.ref(stmt.gets[i].when_legacy_expr));
    }
    if (stmt.where) select.set_raw_predicate(stmt.where->text);

    out.push_back(frag(select.build(stmt.target_table, /*distinct=*/false), stmt.span));

    if (save) {
        const AuxTableInfo& aux = *resolution.save_aux;
        out.push_back(frag("INSERT INTO " + ctx.aux_schema + "." + stmt.target_table + "(" +
                               aux.value_column + ", " + aux.alias_column + ")\n  SELECT " +
                               aux.pk_column + ", " + aux.alias_column + "\n  FROM " +
                               qualified_target + ";",
                           stmt.span));
        out.push_back(frag("ALTER TABLE " + qualified_target + " DROP " + save->alias + ";",
                           stmt.span));
    }

    for (const UpdateClause& upd : stmt.updates) {
        std::string value = std::holds_alternative<LiteralValue>(upd.value)
                                ? literal_sql(std::get<LiteralValue>(upd.value))
                                : std::get<std::string>(upd.value);
        out.push_back(frag("UPDATE " + qualified_target + "\n  SET " + upd.target_column +
                               " = " + value + "\n  WHERE " + upd.predicate + ";",
                           upd.span));
    }
    return out;
}

std::vector<SqlFragment> emit_insert(const InsertStatement& stmt, EmitContext& ctx) {
    std::vector<std::string> columns;
    std::vector<std::string> exprs;
    std::string source_table;
    for (const InsertValue& value : stmt.values) {
        columns.push_back(value.target_column);
        if (const auto* lit = std::get_if<LiteralValue>(&value.value)) {
            exprs.push_back(literal_sql(*lit));
        } else {
            const ColumnRef& ref = std::get<ColumnRef>(value.value);
            exprs.push_back(ref.column);
            source_table = ref.table;
        }
    }

    std::string sql = "INSERT INTO " + ctx.target_conn.schema + "." + stmt.target_table + "(" +
                      join(columns, ", ") + ")";
    if (source_table.empty()) {
        sql += "\n  VALUES (" + join(exprs, ", ") + ");";
    } else {
        sql += "\n  SELECT DISTINCT " + join(exprs, ", ") + "\n  FROM " + ctx.import_schema +
               "." + source_table + ";";
    }
    return {frag(std::move(sql), stmt.span)};
}

std::vector<SqlFragment> emit_attribute(const AttributeStatement& stmt, EmitContext& ctx) {
    std::string expr = stmt.transform_sql ? *stmt.transform_sql : stmt.source_column;
    std::string sql = "INSERT INTO " + ctx.target_conn.schema + "." + stmt.target_table + "(" +
                      stmt.target_column + ")\n  SELECT DISTINCT " + expr + "\n  FROM " +
                      ctx.import_schema + "." + stmt.source_table + ";";
    return {frag(std::move(sql), stmt.span)};
}

std::vector<SqlFragment> emit_map_all(const MapAllProperties& stmt,
                                      const StatementResolution& resolution, EmitContext& ctx) {
    MapStatement expanded;
    expanded.span = stmt.span;
    expanded.source_tables = {stmt.source_table};
    expanded.target_table = stmt.target_table;
    for (const ResolvedColumnPair& pair : resolution.map_all_columns) {
        ColumnMapping mapping;
        mapping.source = {"", pair.source_column, stmt.span};
        mapping.target_column = pair.target_column;
        mapping.span = stmt.span;
        expanded.items.push_back(std::move(mapping));
    }
    return emit_map(expanded, resolution, ctx);
}

std::vector<SqlFragment> emit_identify(const IdentifyStatement& stmt,
                                       const StatementResolution& resolution, EmitContext& ctx) {
    SelectBuilder select(ctx, {stmt.source_table}, resolution);

    std::size_t fk_index = 0;
    for (const IdentifyClause& clause : stmt.clauses) {
        if (const auto* pk = std::get_if<PrimaryKeyClause>(&clause)) {
            select.add_column(pk->target_pk_column, select.ref({"", pk->legacy_pk_column, pk->span}));
            continue;
        }
        const auto& fk = std::get<ForeignKeyClause>(clause);
        assert(fk_index < resolution.fk_aux.size());
        const AuxTableInfo& aux = resolution.fk_aux[fk_index];
        std::string joined = select.add_aux(aux);
        select.add_column(resolution.fk_target_columns[fk_index],
                          select.aux_column(joined, aux.value_column));
        select.add_condition(select.aux_column(joined, aux.alias_column) + "=" +
                             select.ref(fk.legacy_fk));
        ++fk_index;
    }
    return {frag(select.build(stmt.target_table, /*distinct=*/false), stmt.span)};
}

std::vector<SqlFragment> emit_update_fk(const UpdateForeignKey& stmt,
                                        const StatementResolution& resolution, EmitContext& ctx) {
    assert(resolution.get_aux.size() == 1);
    return emit_lookup_update(stmt.lookup, resolution.get_aux.front(), stmt.target_table,
                              stmt.span, ctx);
}

std::vector<SqlFragment> emit_update_ftable(const UpdateForeignTable& stmt,
                                            const StatementResolution& resolution,
                                            EmitContext& ctx) {
    assert(resolution.get_aux.size() == stmt.lookups.size());
    std::vector<SqlFragment> out;
    for (std::size_t i = 0; i < stmt.lookups.size(); ++i) {
        for (SqlFragment& fragment : emit_lookup_update(stmt.lookups[i], resolution.get_aux[i],
                                                        stmt.target_table, stmt.span, ctx)) {
            out.push_back(std::move(fragment));
        }
    }
    return out;
}

std::vector<SqlFragment> emit_epilogue(EmitContext& ctx, SourceSpan origin) {
    std::vector<SqlFragment> out;
    auto add = [&](std::string sql) {
        out.push_back(frag(std::move(sql), origin, Phase::Epilogue));
    };
    // Reverse creation order; drops already issued by explicit DROP
    // statements are not repeated.
    if (!ctx.dropped_schemas.count(to_lower(ctx.aux_schema))) {
        add("DROP SCHEMA " + ctx.aux_schema + " CASCADE;");
    }
    if (!ctx.dropped_schemas.count(to_lower(ctx.import_schema))) {
        add("DROP SCHEMA " + ctx.import_schema + " CASCADE;");
    }
    if (!ctx.connection_dropped) {
        add("DROP USER MAPPING FOR CURRENT_USER SERVER " + ctx.server_name() + ";");
        add("DROP SERVER " + ctx.server_name() + ";");
    }
    return out;
}

GeneratedScript compile(const ResolvedScript& script, const EmitOptions& options) {
    EmitContext ctx;
    ctx.source_conn = script.from_conn;
    ctx.target_conn = script.to_conn;
    ctx.aux_schema = options.aux_schema;
    ctx.import_schema = script.from_conn.schema;
    ctx.redact_credentials = options.redact_credentials;
    assert(!names_equal(ctx.aux_schema, ctx.import_schema) &&
           !names_equal(ctx.aux_schema, ctx.target_conn.schema));

    SourceSpan prologue_origin{1, 1, 1};
    for (const Statement& stmt : script.script.statements) {
        if (std::holds_alternative<CreateConnection>(stmt)) {
            prologue_origin = statement_span(stmt);
            break;
        }
    }
    SourceSpan epilogue_origin = prologue_origin;

    GeneratedScript generated;
    auto append = [&](std::vector<SqlFragment> fragments) {
        for (SqlFragment& fragment : fragments) {
            generated.fragments.push_back(std::move(fragment));
        }
    };

    append(emit_prologue(ctx, prologue_origin));

    for (std::size_t i = 0; i < script.script.statements.size(); ++i) {
        const Statement& stmt = script.script.statements[i];
        const StatementResolution& resolution = script.resolutions[i];
        std::visit(
            [&](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, MapStatement>) {
                    append(emit_map(s, resolution, ctx));
                } else if constexpr (std::is_same_v<T, MapAllProperties>) {
                    append(emit_map_all(s, resolution, ctx));
                } else if constexpr (std::is_same_v<T, AttributeStatement>) {
                    append(emit_attribute(s, ctx));
                } else if constexpr (std::is_same_v<T, InsertStatement>) {
                    append(emit_insert(s, ctx));
                } else if constexpr (std::is_same_v<T, IdentifyStatement>) {
                    append(emit_identify(s, resolution, ctx));
                } else if constexpr (std::is_same_v<T, UpdateForeignKey>) {
                    append(emit_update_fk(s, resolution, ctx));
                } else if constexpr (std::is_same_v<T, UpdateForeignTable>) {
                    append(emit_update_ftable(s, resolution, ctx));
                } else if constexpr (std::is_same_v<T, CreateSchema>) {
                    append({frag("CREATE SCHEMA IF NOT EXISTS " + s.name + " AUTHORIZATION " +
                                     ctx.target_conn.user + ";",
                                 s.span)});
                } else if constexpr (std::is_same_v<T, DropSchema>) {
                    ctx.dropped_schemas.insert(to_lower(s.name));
                    append({frag("DROP SCHEMA " + s.name + " CASCADE;", s.span)});
                } else if constexpr (std::is_same_v<T, DropConnection>) {
                    ctx.connection_dropped = true;
                    append({frag("DROP USER MAPPING FOR CURRENT_USER SERVER " +
                                     ctx.server_name() + ";",
                                 s.span)});
                    append({frag("DROP SERVER " + ctx.server_name() + ";", s.span)});
                } else if constexpr (std::is_same_v<T, GenerateScript>) {
                    epilogue_origin = s.span;
                }
                // CreateProduct and CreateConnection produce no body SQL.
            },
            stmt);
    }

    append(emit_epilogue(ctx, epilogue_origin));
    return generated;
}

} // namespace dami
