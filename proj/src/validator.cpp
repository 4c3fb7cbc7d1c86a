#include "dami/validator.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <string>
#include <utility>

namespace dami {

namespace {

// Splits a raw predicate into `lhs=rhs` conjuncts when it has the simple
// shape `a=b AND c=d AND …` over plain (possibly qualified) column
// references and literals. Anything else makes the predicate opaque and the
// function returns false.
bool split_simple_conjunction(std::string_view text,
                              std::vector<std::pair<std::string, std::string>>& out) {
    auto is_ref_char = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
    };
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    auto scan_term = [&](std::string& term) {
        skip_ws();
        std::size_t start = i;
        if (i < text.size() && text[i] == '\'') {
            ++i;
            while (i < text.size() && text[i] != '\'') ++i;
            if (i >= text.size()) return false;
            ++i;
        } else {
            while (i < text.size() && is_ref_char(text[i])) ++i;
        }
        if (i == start) return false;
        term = std::string(text.substr(start, i - start));
        return true;
    };

    while (true) {
        std::string lhs, rhs;
        if (!scan_term(lhs)) return false;
        skip_ws();
        if (i >= text.size() || text[i] != '=') return false;
        ++i;
        if (!scan_term(rhs)) return false;
        out.emplace_back(std::move(lhs), std::move(rhs));
        skip_ws();
        if (i >= text.size()) return true;
        if (text.size() - i < 3) return false;
        std::string_view word = text.substr(i, 3);
        bool is_and = (word[0] == 'a' || word[0] == 'A') && (word[1] == 'n' || word[1] == 'N') &&
                      (word[2] == 'd' || word[2] == 'D');
        if (!is_and) return false;
        i += 3;
    }
}

bool looks_like_column_ref(std::string_view term) {
    if (term.empty() || term[0] == '\'') return false;
    if (std::isdigit(static_cast<unsigned char>(term[0]))) return false;
    return std::count(term.begin(), term.end(), '.') <= 1;
}

ColumnRef parse_ref_text(std::string_view term, SourceSpan span) {
    std::size_t dot = term.find('.');
    if (dot == std::string_view::npos) return {"", std::string(term), span};
    return {std::string(term.substr(0, dot)), std::string(term.substr(dot + 1)), span};
}

class Validator {
public:
    Validator(const MigrationScript& script, const SchemaCatalog& source,
              const SchemaCatalog& target)
        : script_(script), source_(source), target_(target) {}

    Result<ResolvedScript> run() {
        for (const Statement& stmt : script_.statements) {
            resolutions_.emplace_back();
            std::visit([&](const auto& s) { check(s); }, stmt);
        }
        finish();

        Result<ResolvedScript> result;
        result.diagnostics = std::move(diagnostics_);
        if (!has_errors(result.diagnostics)) {
            ResolvedScript resolved;
            resolved.script = script_;
            resolved.from_conn = *from_;
            resolved.to_conn = *to_;
            resolved.product = product_;
            resolved.resolutions = std::move(resolutions_);
            result.value = std::move(resolved);
        }
        return result;
    }

private:
    const MigrationScript& script_;
    const SchemaCatalog& source_;
    const SchemaCatalog& target_;

    std::vector<Diagnostic> diagnostics_;
    std::vector<StatementResolution> resolutions_;
    std::optional<ConnectionSpec> from_;
    std::optional<ConnectionSpec> to_;
    std::optional<std::string> product_;
    bool data_seen_ = false;
    bool generate_seen_ = false;
    std::map<std::string, AuxTableInfo> aux_;      // key: lowercased target table
    std::set<std::string> populated_;              // lowercased target tables

    StatementResolution& resolution() { return resolutions_.back(); }

    void error(std::string code, std::string message, SourceSpan span) {
        diagnostics_.push_back({Severity::Error, std::move(code), std::move(message), span});
    }

    void warn(std::string code, std::string message, SourceSpan span) {
        diagnostics_.push_back({Severity::Warning, std::move(code), std::move(message), span});
    }

    SourceSpan end_span() const {
        if (script_.statements.empty()) return {1, 1, 1};
        return statement_span(script_.statements.back());
    }

    // --- shared lookups -------------------------------------------------------

    const TableDef* require_table(const SchemaCatalog& catalog, const std::string& name,
                                  SourceSpan span, std::string_view role) {
        const TableDef* table = catalog.find_table(name);
        if (!table) {
            error("E-UNKNOWN-TABLE",
                  "unknown " + std::string(role) + " table '" + name + "'", span);
        }
        return table;
    }

    const ColumnDef* require_target_column(const TableDef& table, const std::string& name,
                                           SourceSpan span) {
        const ColumnDef* column = table.find_column(name);
        if (!column) {
            error("E-UNKNOWN-COLUMN",
                  "table " + table.name + " has no column '" + name + "'", span);
        }
        return column;
    }

    const ColumnDef* resolve_source(const ColumnRef& ref,
                                    const std::vector<const TableDef*>& scope) {
        Result<ColumnBinding> bound = resolve_column(ref, scope);
        if (!bound.value) {
            for (Diagnostic& d : bound.diagnostics) diagnostics_.push_back(std::move(d));
            return nullptr;
        }
        if (ref.table.empty()) {
            resolution().bare_source_tables[to_lower(ref.column)] = bound.value->table->name;
        }
        return bound.value->column;
    }

    void check_families(const ColumnDef* src, const ColumnDef* dst, SourceSpan span) {
        if (!src || !dst) return;
        if (classify_type(src->sql_type) == classify_type(dst->sql_type)) return;
        warn("W-TYPE-MISMATCH",
             "type families differ: " + src->name + " (" + src->sql_type + ") is mapped to " +
                 dst->name + " (" + dst->sql_type + ")",
             span);
    }

    void check_literal_family(const LiteralValue& value, const ColumnDef* dst, SourceSpan span) {
        if (!dst) return;
        TypeFamily lit = value.is_string ? TypeFamily::Text : TypeFamily::Integer;
        TypeFamily col = classify_type(dst->sql_type);
        if (lit == col) return;
        if (!value.is_string && col == TypeFamily::Numeric) return;
        warn("W-TYPE-MISMATCH",
             std::string("literal ") + (value.is_string ? "'" + value.text + "'" : value.text) +
                 " is mapped to " + dst->name + " (" + dst->sql_type + ")",
             span);
    }

    // Marks one target column as written by this statement, diagnosing
    // duplicates.
    void cover(std::map<std::string, SourceSpan>& covered, const std::string& column,
               SourceSpan span) {
        std::string key = to_lower(column);
        if (covered.count(key)) {
            error("E-DUP-TARGET-COLUMN", "target column '" + column + "' is mapped twice", span);
            return;
        }
        covered.emplace(std::move(key), span);
    }

    void warn_uncovered_not_null(const TableDef& table,
                                 const std::map<std::string, SourceSpan>& covered,
                                 SourceSpan span) {
        for (const ColumnDef& column : table.columns) {
            if (column.nullable || column.has_default) continue;
            if (covered.count(to_lower(column.name))) continue;
            warn("W-NOT-NULL-UNMAPPED",
                 "NOT NULL column " + table.name + "." + column.name +
                     " has no default and is not mapped",
                 span);
        }
    }

    void mark_data_statement() { data_seen_ = true; }

    void fill_scope_counts(const std::vector<const TableDef*>& scope) {
        for (const TableDef* table : scope) {
            for (const ColumnDef& column : table->columns) {
                ++resolution().scope_column_counts[to_lower(column.name)];
            }
        }
    }

    bool connections_ready() const { return from_.has_value() && to_.has_value(); }

    // Auxiliary-table lookup shared by GET clauses and lookups; verifies the
    // clause against the SAVE RELATION that created the table.
    const AuxTableInfo* require_aux(const GetClause& get) {
        auto it = aux_.find(to_lower(get.aux_table));
        if (it == aux_.end()) {
            error("E-AUX-UNDEFINED",
                  "no SAVE RELATION established an auxiliary table for '" + get.aux_table +
                      "' before this point",
                  get.span);
            return nullptr;
        }
        const AuxTableInfo& info = it->second;
        if (!names_equal(info.pk_column, get.aux_value_column)) {
            error("E-UNKNOWN-COLUMN",
                  "auxiliary table for '" + get.aux_table + "' records primary-key column '" +
                      info.pk_column + "', not '" + get.aux_value_column + "'",
                  get.span);
            return nullptr;
        }
        if (!names_equal(info.alias_column, get.when_alias_column)) {
            error("E-UNKNOWN-COLUMN",
                  "auxiliary table for '" + get.aux_table + "' saves alias '" +
                      info.alias_column + "', not '" + get.when_alias_column + "'",
                  get.span);
            return nullptr;
        }
        return &info;
    }

    // Finds the single-column foreign key of `from_table` that references
    // `to_table`, as required by FOREIGN KEY clauses.
    std::string require_fk_column(const TableDef& from_table, const std::string& to_table,
                                  SourceSpan span) {
        for (const ForeignKeyDef& fk : from_table.foreign_keys) {
            if (names_equal(fk.referenced_table, to_table) && fk.columns.size() == 1) {
                return fk.columns.front();
            }
        }
        error("E-FK-NO-CONSTRAINT",
              "table " + from_table.name + " has no single-column foreign key referencing '" +
                  to_table + "'",
              span);
        return {};
    }

    void check_opaque_predicate(const std::string& text,
                                const std::vector<const TableDef*>& scope, SourceSpan span) {
        std::vector<std::pair<std::string, std::string>> conjuncts;
        if (!split_simple_conjunction(text, conjuncts)) return;  // opaque: emitted verbatim
        for (const auto& [lhs, rhs] : conjuncts) {
            for (const std::string& term : {lhs, rhs}) {
                if (!looks_like_column_ref(term)) continue;
                ColumnRef ref = parse_ref_text(term, span);
                Result<ColumnBinding> bound = resolve_column(ref, scope);
                // Ambiguity is tolerated here; the text passes through as
                // written and the database resolves it.
                for (Diagnostic& d : bound.diagnostics) {
                    if (d.code == "E-UNKNOWN-COLUMN" || d.code == "E-UNKNOWN-TABLE") {
                        diagnostics_.push_back(std::move(d));
                    }
                }
            }
        }
    }

    // --- per-statement checks ---------------------------------------------------

    void check(const CreateProduct& stmt) { product_ = stmt.name; }

    void check(const CreateConnection& stmt) {
        if (data_seen_) {
            error("E-LATE-CONNECTION",
                  "connections must be declared before any data statement", stmt.span);
        }
        std::optional<ConnectionSpec>& slot =
            stmt.spec.direction == Direction::From ? from_ : to_;
        if (slot) {
            error("E-DUP-CONNECTION",
                  std::string("duplicate CREATE CONNECTION ") +
                      (stmt.spec.direction == Direction::From ? "FROM" : "TO"),
                  stmt.span);
            return;
        }
        slot = stmt.spec;
        if (from_ && to_) {
            if (names_equal(from_->schema, to_->schema)) {
                error("E-SCHEMA-COLLISION",
                      "source and target connections name the same schema '" + from_->schema +
                          "'",
                      stmt.span);
            }
        }
        if (names_equal(stmt.spec.schema, "aux")) {
            error("E-SCHEMA-COLLISION",
                  "connection schema 'aux' collides with the auxiliary schema", stmt.span);
        }
    }

    void check(const CreateSchema&) { mark_data_statement(); }

    void check(const MapStatement& stmt) {
        mark_data_statement();

        std::vector<const TableDef*> scope;
        std::set<std::string> seen_sources;
        bool tables_ok = true;
        for (const std::string& name : stmt.source_tables) {
            if (!seen_sources.insert(to_lower(name)).second) {
                error("E-DUP-SOURCE-TABLE", "source table '" + name + "' listed twice",
                      stmt.span);
                tables_ok = false;
                continue;
            }
            if (const TableDef* table = require_table(source_, name, stmt.span, "source")) {
                scope.push_back(table);
            } else {
                tables_ok = false;
            }
        }
        const TableDef* target = require_table(target_, stmt.target_table, stmt.span, "target");
        if (!target || !tables_ok) return;
        fill_scope_counts(scope);

        std::map<std::string, SourceSpan> covered;
        for (const MapItem& item : stmt.items) {
            std::visit([&](const auto& i) { check_item(i, *target, scope, covered); }, item);
        }
        if (stmt.pk_clause) {
            const PrimaryKeyClause& pk = *stmt.pk_clause;
            const ColumnDef* src =
                resolve_source({"", pk.legacy_pk_column, pk.span}, scope);
            const ColumnDef* dst = require_target_column(*target, pk.target_pk_column, pk.span);
            if (dst) cover(covered, pk.target_pk_column, pk.span);
            check_families(src, dst, pk.span);
        }
        for (std::size_t i = 0; i < stmt.fk_clauses.size(); ++i) {
            check_fk_clause(stmt.fk_clauses[i], *target, scope, covered);
        }
        for (const GetClause& get : stmt.gets) {
            if (const AuxTableInfo* info = require_aux(get)) {
                resolution().get_aux.push_back(*info);
            }
            if (require_target_column(*target, get.target_fk_column, get.span)) {
                cover(covered, get.target_fk_column, get.span);
            }
            resolve_source(get.when_legacy_expr, scope);
        }
        for (const UpdateClause& upd : stmt.updates) {
            require_target_column(*target, upd.target_column, upd.span);
            check_opaque_predicate(upd.predicate, {target}, upd.span);
        }
        if (stmt.where) check_opaque_predicate(stmt.where->text, scope, stmt.where->span);

        warn_uncovered_not_null(*target, covered, stmt.span);
        populated_.insert(to_lower(stmt.target_table));
    }

    void check_item(const ColumnMapping& item, const TableDef& target,
                    const std::vector<const TableDef*>& scope,
                    std::map<std::string, SourceSpan>& covered) {
        const ColumnDef* src = resolve_source(item.source, scope);
        const ColumnDef* dst = require_target_column(target, item.target_column, item.span);
        if (dst) cover(covered, item.target_column, item.span);
        check_families(src, dst, item.span);
    }

    void check_item(const LiteralMapping& item, const TableDef& target,
                    const std::vector<const TableDef*>&,
                    std::map<std::string, SourceSpan>& covered) {
        const ColumnDef* dst = require_target_column(target, item.target_column, item.span);
        if (dst) cover(covered, item.target_column, item.span);
        check_literal_family(item.value, dst, item.span);
    }

    void check_item(const SqlExprMapping& item, const TableDef& target,
                    const std::vector<const TableDef*>&,
                    std::map<std::string, SourceSpan>& covered) {
        if (require_target_column(target, item.target_column, item.span)) {
            cover(covered, item.target_column, item.span);
        }
    }

    void check_item(const SaveRelation& item, const TableDef& target,
                    const std::vector<const TableDef*>& scope,
                    std::map<std::string, SourceSpan>&) {
        resolve_source(item.source, scope);
        if (!item.target_pk.table.empty() && !names_equal(item.target_pk.table, target.name)) {
            error("E-SAVE-TARGET-MISMATCH",
                  "SAVE RELATION EQUALS column must belong to the target table " + target.name,
                  item.span);
            return;
        }
        const ColumnDef* pk_col = require_target_column(target, item.target_pk.column, item.span);
        if (!pk_col) return;
        if (!target.is_pk_column(pk_col->name)) {
            warn("W-SAVE-NOT-PK",
                 "SAVE RELATION records non-primary-key column " + target.name + "." +
                     pk_col->name,
                 item.span);
        }
        if (target.find_column(item.alias)) {
            error("E-ALIAS-COLLISION",
                  "alias '" + item.alias + "' collides with a column of table " + target.name,
                  item.span);
            return;
        }

        AuxTableInfo info;
        info.table = target.name;
        info.value_column = target.name + "_" + item.target_pk.column;
        info.pk_column = item.target_pk.column;
        info.pk_type = item.target_pk_type;
        info.alias_column = item.alias;
        info.alias_type = item.alias_type;

        auto [it, inserted] = aux_.emplace(to_lower(target.name), info);
        if (!inserted) {
            const AuxTableInfo& existing = it->second;
            bool same = names_equal(existing.pk_column, info.pk_column) &&
                        names_equal(existing.alias_column, info.alias_column) &&
                        names_equal(existing.pk_type, info.pk_type) &&
                        names_equal(existing.alias_type, info.alias_type);
            if (!same) {
                error("E-AUX-REDEFINED",
                      "auxiliary table for '" + target.name +
                          "' was established with a different key or alias",
                      item.span);
                return;
            }
        }
        resolution().save_aux = info;
    }

    void check_fk_clause(const ForeignKeyClause& fk, const TableDef& map_target,
                         const std::vector<const TableDef*>& scope,
                         std::map<std::string, SourceSpan>& covered) {
        require_table(target_, fk.target_table, fk.span, "target");
        resolve_source(fk.legacy_fk, scope);
        std::string fk_column = require_fk_column(map_target, fk.target_table, fk.span);
        if (fk_column.empty()) return;
        auto it = aux_.find(to_lower(fk.target_table));
        if (it == aux_.end()) {
            error("E-AUX-UNDEFINED",
                  "no SAVE RELATION established an auxiliary table for '" + fk.target_table +
                      "' before this point",
                  fk.span);
            return;
        }
        cover(covered, fk_column, fk.span);
        resolution().fk_target_columns.push_back(fk_column);
        resolution().fk_aux.push_back(it->second);
    }

    void check(const MapAllProperties& stmt) {
        mark_data_statement();
        const TableDef* src = require_table(source_, stmt.source_table, stmt.span, "source");
        const TableDef* dst = require_table(target_, stmt.target_table, stmt.span, "target");
        if (!src || !dst) return;
        fill_scope_counts({src});

        auto excluded = [&](const std::string& name) {
            return std::any_of(stmt.exclusions.begin(), stmt.exclusions.end(),
                               [&](const std::string& e) { return names_equal(e, name); });
        };
        std::map<std::string, SourceSpan> covered;
        for (const ColumnDef& column : src->columns) {
            if (excluded(column.name)) continue;
            const ColumnDef* match = dst->find_column(column.name);
            if (!match) continue;
            resolution().map_all_columns.push_back({column.name, match->name});
            cover(covered, match->name, stmt.span);
            check_families(&column, match, stmt.span);
        }
        if (resolution().map_all_columns.empty()) {
            error("E-NO-MATCHING-COLUMNS",
                  "no column names match between " + stmt.source_table + " and " +
                      stmt.target_table,
                  stmt.span);
            return;
        }
        warn_uncovered_not_null(*dst, covered, stmt.span);
        populated_.insert(to_lower(stmt.target_table));
    }

    void check(const AttributeStatement& stmt) {
        mark_data_statement();
        const TableDef* src = require_table(source_, stmt.source_table, stmt.span, "source");
        const TableDef* dst = require_table(target_, stmt.target_table, stmt.span, "target");
        const ColumnDef* src_col =
            src ? require_target_column(*src, stmt.source_column, stmt.span) : nullptr;
        const ColumnDef* dst_col =
            dst ? require_target_column(*dst, stmt.target_column, stmt.span) : nullptr;
        if (!stmt.transform_sql) check_families(src_col, dst_col, stmt.span);
        if (dst) {
            std::map<std::string, SourceSpan> covered;
            covered.emplace(to_lower(stmt.target_column), stmt.span);
            warn_uncovered_not_null(*dst, covered, stmt.span);
            populated_.insert(to_lower(stmt.target_table));
        }
    }

    void check(const InsertStatement& stmt) {
        mark_data_statement();
        const TableDef* target = require_table(target_, stmt.target_table, stmt.span, "target");
        if (!target) return;

        std::map<std::string, SourceSpan> covered;
        std::string query_table;
        for (const InsertValue& value : stmt.values) {
            const ColumnDef* dst =
                require_target_column(*target, value.target_column, value.span);
            if (dst) cover(covered, value.target_column, value.span);
            if (const auto* lit = std::get_if<LiteralValue>(&value.value)) {
                check_literal_family(*lit, dst, value.span);
                continue;
            }
            const ColumnRef& ref = std::get<ColumnRef>(value.value);
            const TableDef* src = require_table(source_, ref.table, ref.span, "source");
            if (!src) continue;
            require_target_column(*src, ref.column, ref.span);
            if (query_table.empty()) {
                query_table = src->name;
            } else if (!names_equal(query_table, src->name)) {
                error("E-INSERT-MULTI-TABLE",
                      "INSERT query values must come from a single legacy table", value.span);
            }
        }
        warn_uncovered_not_null(*target, covered, stmt.span);
        populated_.insert(to_lower(stmt.target_table));
    }

    void check(const IdentifyStatement& stmt) {
        mark_data_statement();
        const TableDef* join = require_table(source_, stmt.source_table, stmt.span, "source");
        const TableDef* target = require_table(target_, stmt.target_table, stmt.span, "target");
        if (!join || !target) return;

        std::vector<const TableDef*> scope{join};
        fill_scope_counts(scope);
        std::map<std::string, SourceSpan> covered;
        for (const IdentifyClause& clause : stmt.clauses) {
            if (const auto* pk = std::get_if<PrimaryKeyClause>(&clause)) {
                const ColumnDef* src = resolve_source({"", pk->legacy_pk_column, pk->span}, scope);
                const ColumnDef* dst =
                    require_target_column(*target, pk->target_pk_column, pk->span);
                if (dst) cover(covered, pk->target_pk_column, pk->span);
                check_families(src, dst, pk->span);
                continue;
            }
            const auto& fk = std::get<ForeignKeyClause>(clause);
            if (!names_equal(fk.legacy_fk.table, stmt.source_table)) {
                error("E-FK-TABLE-MISMATCH",
                      "FOREIGN KEY column must belong to the join table " + stmt.source_table,
                      fk.span);
                continue;
            }
            check_fk_clause(fk, *target, scope, covered);
        }
        warn_uncovered_not_null(*target, covered, stmt.span);
        populated_.insert(to_lower(stmt.target_table));
    }

    void check_lookup(const GetClause& lookup, const TableDef& target) {
        if (require_target_column(target, lookup.target_fk_column, lookup.span)) {
            if (const AuxTableInfo* info = require_aux(lookup)) {
                resolution().get_aux.push_back(*info);
            }
        }
        // The WHEN expression is correlated against the table being updated.
        if (!lookup.when_legacy_expr.table.empty() &&
            !names_equal(lookup.when_legacy_expr.table, target.name)) {
            error("E-UNKNOWN-COLUMN",
                  "WHEN expression must reference the updated table " + target.name,
                  lookup.when_legacy_expr.span);
            return;
        }
        require_target_column(target, lookup.when_legacy_expr.column,
                              lookup.when_legacy_expr.span);
    }

    void check(const UpdateForeignKey& stmt) {
        mark_data_statement();
        const TableDef* target = require_table(target_, stmt.target_table, stmt.span, "target");
        if (!target) return;
        if (!populated_.count(to_lower(stmt.target_table))) {
            error("E-TARGET-UNPOPULATED",
                  "UPDATE FOREIGN KEY requires table " + stmt.target_table +
                      " to be populated by an earlier statement",
                  stmt.span);
        }
        check_lookup(stmt.lookup, *target);
    }

    void check(const UpdateForeignTable& stmt) {
        mark_data_statement();
        const TableDef* target = require_table(target_, stmt.target_table, stmt.span, "target");
        if (!target) return;
        if (!populated_.count(to_lower(stmt.target_table))) {
            error("E-TARGET-UNPOPULATED",
                  "UPDATE FOREIGN TABLE requires table " + stmt.target_table +
                      " to be populated by an earlier statement",
                  stmt.span);
        }
        for (const GetClause& lookup : stmt.lookups) check_lookup(lookup, *target);
    }

    void check(const DropConnection&) { mark_data_statement(); }
    void check(const DropSchema&) { mark_data_statement(); }
    void check(const GenerateScript&) { generate_seen_ = true; }

    void finish() {
        if (!from_) {
            error("E-NO-FROM-CONNECTION", "no CREATE CONNECTION FROM declared", end_span());
        }
        if (!to_) {
            error("E-NO-TO-CONNECTION", "no CREATE CONNECTION TO declared", end_span());
        }
        if (!generate_seen_) {
            error("E-NO-GENERATE-SCRIPT",
                  "script must end with GENERATE SCRIPT", end_span());
        }
    }
};

} // namespace

Result<ColumnBinding> resolve_column(const ColumnRef& ref,
                                     const std::vector<const TableDef*>& scope) {
    Result<ColumnBinding> result;
    if (!ref.table.empty()) {
        const TableDef* table = nullptr;
        for (const TableDef* candidate : scope) {
            if (names_equal(candidate->name, ref.table)) {
                table = candidate;
                break;
            }
        }
        if (!table) {
            result.diagnostics.push_back({Severity::Error, "E-UNKNOWN-TABLE",
                                          "table '" + ref.table + "' is not in scope here",
                                          ref.span});
            return result;
        }
        const ColumnDef* column = table->find_column(ref.column);
        if (!column) {
            result.diagnostics.push_back({Severity::Error, "E-UNKNOWN-COLUMN",
                                          "table " + table->name + " has no column '" +
                                              ref.column + "'",
                                          ref.span});
            return result;
        }
        result.value = ColumnBinding{table, column};
        return result;
    }

    const TableDef* found_table = nullptr;
    const ColumnDef* found_column = nullptr;
    int matches = 0;
    for (const TableDef* table : scope) {
        if (const ColumnDef* column = table->find_column(ref.column)) {
            ++matches;
            found_table = table;
            found_column = column;
        }
    }
    if (matches == 0) {
        result.diagnostics.push_back({Severity::Error, "E-UNKNOWN-COLUMN",
                                      "column '" + ref.column + "' not found in any table in scope",
                                      ref.span});
        return result;
    }
    if (matches > 1) {
        result.diagnostics.push_back({Severity::Error, "E-AMBIGUOUS-COLUMN",
                                      "column '" + ref.column +
                                          "' is ambiguous across the tables in scope",
                                      ref.span});
        return result;
    }
    result.value = ColumnBinding{found_table, found_column};
    return result;
}

Result<ResolvedScript> validate(const MigrationScript& script, const SchemaCatalog& source,
                                const SchemaCatalog& target) {
    return Validator(script, source, target).run();
}

} // namespace dami
