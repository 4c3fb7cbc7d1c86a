#pragma once

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dami/catalog.hpp"

// Seeded generator of valid-by-construction migration scripts over a small
// randomized catalog pair. Scripts exercise every statement kind; the same
// seed always yields the same script.
namespace scriptgen {

struct Generated {
    dami::SchemaCatalog source;
    dami::SchemaCatalog target;
    std::string dsl;
    // Statement indices of a SAVE RELATION producer and a GET consumer, when
    // the script contains such a pair (for order-sensitivity tests).
    int save_stmt_index = -1;
    int get_stmt_index = -1;
};

namespace detail {

inline dami::ColumnDef col(std::string name, std::string type, bool nullable = true,
                           bool has_default = false) {
    return {std::move(name), std::move(type), nullable, has_default};
}

inline std::string pick_type(std::mt19937& rng) {
    static const char* types[] = {"int", "bigint", "varchar(50)", "text", "date", "boolean",
                                  "numeric(8,2)"};
    return types[rng() % 7];
}

} // namespace detail

inline Generated generate(unsigned seed) {
    std::mt19937 rng(seed);
    auto chance = [&](int pct) { return static_cast<int>(rng() % 100) < pct; };
    using detail::col;

    Generated g;

    // --- catalogs -------------------------------------------------------------
    dami::TableDef src_a{"src_a",
                         {col("sa_id", "int", false), col("sa_name", "varchar(50)"),
                          col("sa_num", "int")},
                         {"sa_id"},
                         {},
                         false};
    for (int i = 0, n = static_cast<int>(rng() % 3); i < n; ++i) {
        src_a.columns.push_back(col("sa_extra" + std::to_string(i), detail::pick_type(rng)));
    }
    dami::TableDef src_b{"src_b",
                         {col("sb_id", "int", false), col("sb_ref", "int"),
                          col("sb_txt", "text")},
                         {"sb_id"},
                         {},
                         false};
    dami::TableDef src_link{
        "src_link", {col("lk_main", "int"), col("lk_item", "int")}, {}, {}, false};
    dami::TableDef src_mirror{"src_mirror",
                              {col("shared_a", "int"), col("shared_b", "varchar(50)"),
                               col("only_src", "int")},
                              {},
                              {},
                              false};
    g.source.schema_name = "legacy";
    g.source.tables = {src_a, src_b, src_link, src_mirror};

    dami::TableDef tgt_main{"tgt_main",
                            {col("code", "serial", false, true), col("m_name", "varchar(100)"),
                             col("m_num", "int")},
                            {"code"},
                            {},
                            true};
    dami::TableDef tgt_item{"tgt_item",
                            {col("code", "serial", false, true), col("i_txt", "text"),
                             col("i_num", "int"), col("main_code", "int")},
                            {"code"},
                            {{{"main_code"}, "tgt_main", {"code"}}},
                            true};
    dami::TableDef tgt_misc{
        "tgt_misc", {col("mid", "int", false), col("mv", "varchar(10)")}, {"mid"}, {}, false};
    dami::TableDef tgt_link{"tgt_link",
                            {col("lmain_code", "int"), col("litem_code", "int")},
                            {},
                            {{{"lmain_code"}, "tgt_main", {"code"}},
                             {{"litem_code"}, "tgt_item", {"code"}}},
                            false};
    dami::TableDef tgt_mirror{"tgt_mirror",
                              {col("shared_a", "int"), col("shared_b", "varchar(50)"),
                               col("only_tgt", "int")},
                              {},
                              {},
                              false};
    g.target.schema_name = "target";
    g.target.tables = {tgt_main, tgt_item, tgt_misc, tgt_link, tgt_mirror};

    // --- script -----------------------------------------------------------------
    std::ostringstream dsl;
    int stmt = 0;

    if (chance(30)) {
        dsl << "CREATE PRODUCT fuzz_product_" << seed << ";\n";
        ++stmt;
    }
    dsl << "CREATE CONNECTION FROM (dbname srcdb, host hostA, port "
        << 1 + rng() % 65535 << ", user u1, pwd secret, schema legacy);\n";
    ++stmt;
    dsl << "CREATE CONNECTION TO (dbname dstdb, host hostB, port "
        << 1 + rng() % 65535 << ", user u2, pwd 'p w''d', schema target);\n";
    ++stmt;
    if (chance(25)) {
        dsl << "CREATE SCHEMA staging;\n";
        ++stmt;
    }

    bool save_main = chance(85);
    bool qualify = chance(50);
    auto q = [&](const char* table, const char* column) {
        return qualify ? std::string(table) + "." + column : std::string(column);
    };

    // MAP into tgt_main, optionally saving the key equivalence.
    dsl << "MAP src_a TO tgt_main (\n  " << q("src_a", "sa_name") << " TO m_name";
    if (chance(60)) {
        dsl << ",\n  " << q("src_a", "sa_num") << " TO m_num";
    } else if (chance(40)) {
        dsl << ",\n  SQL: upper(sa_name) TO m_num";
    }
    if (save_main) {
        dsl << ",\n  SAVE RELATION src_a.sa_id AS aux_main int EQUALS tgt_main.code int";
    }
    if (chance(50)) {
        dsl << "\n) WHERE (sa_num=sa_id)";
    } else {
        dsl << "\n)";
    }
    if (chance(25)) {
        dsl << "\nUPDATE m_num TO " << rng() % 100 << " WHERE (m_name='unset')";
    }
    dsl << ";\n";
    int map_main_index = stmt++;
    if (save_main) g.save_stmt_index = map_main_index;

    if (chance(40)) {
        dsl << "INSERT INTO tgt_misc (" << 1 + rng() % 999 << " TO mid, 'lit''eral" << rng() % 10
            << "' TO mv);\n";
        ++stmt;
    }
    if (chance(40)) {
        dsl << "INSERT INTO tgt_misc (src_b.sb_id TO mid, src_b.sb_txt TO mv);\n";
        ++stmt;
    }
    if (chance(35)) {
        if (chance(50)) {
            dsl << "ATTRIBUTE src_b(sb_txt) TO tgt_misc(mv);\n";
        } else {
            dsl << "ATTRIBUTE src_b(sb_txt SQL: lower(sb_txt)) TO tgt_misc(mv);\n";
        }
        ++stmt;
    }

    bool save_item = chance(60);
    bool map_item = save_main && chance(80);
    if (map_item) {
        dsl << "MAP src_a, src_b TO tgt_item (\n  sb_txt TO i_txt";
        if (chance(60)) dsl << ",\n  " << q("src_a", "sa_num") << " TO i_num";
        if (save_item) {
            dsl << ",\n  SAVE RELATION src_b.sb_id AS aux_item int EQUALS tgt_item.code int";
        }
        dsl << "\n) WHERE (sa_id=sb_ref)\nGET main_code FROM tgt_main.code WHEN aux_main="
            << q("src_a", "sa_id") << ";\n";
        g.get_stmt_index = stmt++;
    }

    if (map_item && chance(30)) {
        dsl << "UPDATE FOREIGN KEY tgt_item.main_code FROM tgt_main.code WHEN "
               "aux_main=i_num;\n";
        ++stmt;
    }

    if (chance(45)) {
        if (chance(40)) {
            dsl << "MAP ALL PROPERTIES src_mirror TO tgt_mirror EXCEPT (shared_b);\n";
        } else {
            dsl << "MAP ALL PROPERTIES src_mirror TO tgt_mirror;\n";
        }
        ++stmt;
    }

    bool identify = map_item && save_item && chance(60);
    if (identify) {
        dsl << "IDENTIFY src_link TO tgt_link (\n"
               "  FOREIGN KEY TO tgt_main IDENTIFIED WITH src_link.lk_main,\n"
               "  FOREIGN KEY TO tgt_item IDENTIFIED WITH src_link.lk_item\n);\n";
        ++stmt;
        if (chance(40)) {
            dsl << "UPDATE FOREIGN TABLE tgt_link\n"
                   "GET lmain_code FROM tgt_main.code WHEN aux_main=lmain_code\n"
                   "GET litem_code FROM tgt_item.code WHEN aux_item=litem_code;\n";
            ++stmt;
        }
    }

    if (chance(20)) {
        dsl << "DROP SCHEMA aux;\n";
        ++stmt;
    }
    if (chance(20)) {
        dsl << "DROP CONNECTION;\n";
        ++stmt;
    }
    dsl << "GENERATE SCRIPT;\n";
    ++stmt;

    g.dsl = dsl.str();
    return g;
}

} // namespace scriptgen
