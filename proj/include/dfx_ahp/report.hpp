#pragma once

#include "dfx_ahp/catalog.hpp"
#include "dfx_ahp/csv.hpp"
#include "dfx_ahp/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

namespace dfx_ahp::report {

enum class Format { Markdown, Csv, Json };

/// One decimal, as in the published tables. Values that round to zero print
/// as "0.0%" (never "-0.0%").
inline std::string percent(double fraction) {
    double v = fraction * 100.0;
    if (std::abs(v) < 0.05) v = 0.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f%%", v);
    return buf;
}

inline std::string full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string fixed(double v, int digits) {
    if (std::abs(v) < 0.5 * std::pow(10.0, -digits)) v = 0.0;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

inline std::string md_row(const std::vector<std::string>& cells) {
    std::string out = "|";
    for (const auto& c : cells) out += " " + c + " |";
    return out + "\n";
}

inline std::string md_rule(std::size_t label_cols, std::size_t numeric_cols) {
    std::string out = "|";
    for (std::size_t i = 0; i < label_cols; ++i) out += " --- |";
    for (std::size_t i = 0; i < numeric_cols; ++i) out += " ---: |";
    return out + "\n";
}

/// First-layer criteria of the hierarchy together with, for each, the
/// column indices (into leaf_criteria) of the leaves beneath it and the
/// contexts in its subtree.
struct TopColumns {
    std::vector<std::string> names;
    std::vector<std::vector<std::size_t>> leaves;
    std::vector<std::vector<std::string>> contexts;
};

inline TopColumns top_columns(const SolvedModel& m) {
    const auto& h = m.hierarchy;
    const auto& nodes = h.nodes();
    TopColumns cols;
    std::map<std::size_t, std::size_t> column_of_top;
    for (auto idx : h.layer(1)) {
        column_of_top[idx] = cols.names.size();
        cols.names.push_back(nodes[idx].name);
    }
    cols.leaves.resize(cols.names.size());
    cols.contexts.resize(cols.names.size());
    auto top_of = [&](std::size_t idx) {
        while (nodes[idx].layer > 1) idx = nodes[idx].parent;
        return column_of_top.at(idx);
    };
    const auto leaves = h.leaves();
    for (std::size_t l = 0; l < leaves.size(); ++l) cols.leaves[top_of(leaves[l])].push_back(l);
    for (const auto& ctx : h.contexts()) {
        auto idx = h.node_index(ctx.name);
        if (*idx == 0) continue;  // the goal's matrix belongs to no single column
        cols.contexts[top_of(*idx)].push_back(ctx.name);
    }
    return cols;
}

/// Global-weight table in the published layout: one column per first-layer
/// criterion plus Overall; an OVERALL row of criterion weights, one row per
/// alternative (descending), and a CONSISTENCY row holding the largest CR of
/// any matrix under that criterion (Overall: largest CR anywhere).
inline std::string weights_markdown(const SolvedModel& m, std::size_t top_n = 0) {
    const auto cols = top_columns(m);
    const auto& w = m.weights;
    std::string out = "## Global weights: " + m.hierarchy.goal() + "\n\n";

    std::vector<std::string> header{"Alternative"};
    header.insert(header.end(), cols.names.begin(), cols.names.end());
    header.push_back("Overall");
    out += md_row(header) + md_rule(1, cols.names.size() + 1);

    std::vector<std::string> overall{"OVERALL"};
    double total = 0.0;
    for (const auto& c : w.criteria.front()) {
        overall.push_back(percent(c.weight));
        total += c.weight;
    }
    overall.push_back(percent(total));
    out += md_row(overall);

    std::map<std::string, std::size_t> alt_index;
    for (std::size_t a = 0; a < w.alternatives.size(); ++a) alt_index[w.alternatives[a].name] = a;
    const auto ranking = w.ranking();
    const std::size_t shown = top_n == 0 ? ranking.size() : std::min(top_n, ranking.size());
    for (std::size_t r = 0; r < shown; ++r) {
        const auto a = alt_index.at(ranking[r].name);
        std::vector<std::string> row{ranking[r].name};
        for (const auto& leaves : cols.leaves) {
            double s = 0.0;
            for (auto l : leaves) s += w.breakdown[a][l];
            row.push_back(percent(s));
        }
        row.push_back(percent(ranking[r].weight));
        out += md_row(row);
    }

    std::vector<std::string> cons{"CONSISTENCY"};
    double worst = 0.0;
    for (const auto& names : cols.contexts) {
        double col_worst = 0.0;
        for (const auto& n : names) col_worst = std::max(col_worst, m.contexts.at(n).consistency.cr);
        worst = std::max(worst, col_worst);
        cons.push_back(percent(col_worst));
    }
    for (const auto& [_, sol] : m.contexts) worst = std::max(worst, sol.consistency.cr);
    cons.push_back(percent(worst));
    out += md_row(cons);
    if (shown < ranking.size()) {
        out += "\n" + std::to_string(ranking.size() - shown) + " lower-ranked alternatives not shown.\n";
    }
    return out;
}

inline std::string consistency_markdown(const SolvedModel& m) {
    std::string out = "## Consistency by matrix\n\n";
    out += md_row({"Context", "Order", "lambda_max", "CI", "CR", "Status"}) + md_rule(1, 5);
    for (const auto& ctx : m.hierarchy.contexts()) {
        const auto& s = m.contexts.at(ctx.name);
        std::string status = s.consistency.pass ? "PASS" : "FAIL";
        if (s.matrix.imputed()) status += " (imputed)";
        out += md_row({ctx.name, std::to_string(ctx.order()), fixed(s.priorities.lambda_max, 4),
                       fixed(s.consistency.ci, 4), percent(s.consistency.cr), status});
    }
    return out;
}

inline std::string solve_markdown(const SolvedModel& m, std::size_t top_n = 0) {
    return weights_markdown(m, top_n) + "\n" + consistency_markdown(m);
}

/// Breakdown table: one row per alternative (descending), one column per
/// leaf criterion, then overall. Full precision.
inline std::string breakdown_csv(const GlobalWeights& w) {
    csv::Row header{"alternative"};
    header.insert(header.end(), w.leaf_criteria.begin(), w.leaf_criteria.end());
    header.push_back("overall");
    std::string out = csv::join_row(header) + "\n";
    std::map<std::string, std::size_t> alt_index;
    for (std::size_t a = 0; a < w.alternatives.size(); ++a) alt_index[w.alternatives[a].name] = a;
    for (const auto& r : w.ranking()) {
        const auto a = alt_index.at(r.name);
        csv::Row row{r.name};
        for (double c : w.breakdown[a]) row.push_back(full(c));
        row.push_back(full(r.weight));
        out += csv::join_row(row) + "\n";
    }
    return out;
}

inline std::string consistency_csv(const SolvedModel& m) {
    std::string out = "context,order,lambda_max,ci,cr,pass\n";
    for (const auto& ctx : m.hierarchy.contexts()) {
        const auto& s = m.contexts.at(ctx.name);
        out += csv::join_row({ctx.name, std::to_string(ctx.order()), full(s.priorities.lambda_max),
                              full(s.consistency.ci), full(s.consistency.cr), s.consistency.pass ? "true" : "false"}) +
               "\n";
    }
    return out;
}

inline std::string prune_markdown(const PruneOutcome& p) {
    std::string out = "## Prune outcome: " + p.policy + "\n\n";
    out += "Retained criteria (" + std::to_string(p.retained_criteria.size()) + "):\n\n";
    for (const auto& c : p.retained_criteria) out += "- " + c + "\n";
    out += "\nRetained alternatives (" + std::to_string(p.retained_alternatives.size()) + "):\n\n";
    for (const auto& a : p.retained_alternatives) out += "- " + a + "\n";
    auto eliminated = [&](const char* title, const std::vector<NamedWeight>& items) {
        out += std::string("\n") + title + " (" + std::to_string(items.size()) + "):\n\n";
        if (items.empty()) return;
        out += md_row({"Name", "Weight before prune"}) + md_rule(1, 1);
        for (const auto& i : items) out += md_row({i.name, percent(i.weight)});
    };
    eliminated("Eliminated criteria", p.eliminated_criteria);
    eliminated("Eliminated alternatives", p.eliminated_alternatives);
    return out;
}

inline std::string prune_csv(const PruneOutcome& p) {
    std::string out = "kind,name,status,weight_before\n";
    for (const auto& c : p.retained_criteria) out += csv::join_row({"criterion", c, "retained", ""}) + "\n";
    for (const auto& c : p.eliminated_criteria) out += csv::join_row({"criterion", c.name, "eliminated", full(c.weight)}) + "\n";
    for (const auto& a : p.retained_alternatives) out += csv::join_row({"alternative", a, "retained", ""}) + "\n";
    for (const auto& a : p.eliminated_alternatives)
        out += csv::join_row({"alternative", a.name, "eliminated", full(a.weight)}) + "\n";
    return out;
}

inline std::string whatif_markdown(const RankingDelta& d) {
    std::string out = "## What-if: " + d.context + "\n\n";
    out += "Edited matrix: CR " + percent(d.consistency.cr) + " (" + (d.consistency.pass ? "PASS" : "FAIL") + ")\n\n";
    if (d.empty()) return out + "No change in weights or ranking.\n";
    out += d.ranking_changed() ? "Ranking changed.\n\n" : "Ranking unchanged.\n\n";
    out += md_row({"Alternative", "Before", "After", "Delta", "Rank before", "Rank after"}) + md_rule(1, 5);
    for (const auto& c : d.changes) {
        char delta[32];
        std::snprintf(delta, sizeof delta, "%+.2f pp", (c.after - c.before) * 100.0);
        out += md_row({c.name, percent(c.before), percent(c.after), delta, std::to_string(c.rank_before),
                       std::to_string(c.rank_after)});
    }
    return out;
}

inline std::string whatif_csv(const RankingDelta& d) {
    std::string out = "alternative,before,after,rank_before,rank_after\n";
    for (const auto& c : d.changes) {
        out += csv::join_row({c.name, full(c.before), full(c.after), std::to_string(c.rank_before),
                              std::to_string(c.rank_after)}) +
               "\n";
    }
    return out;
}

inline std::string gaps_markdown(const KnowledgeBase& kb, const GapSummary& g) {
    std::string out = "## Customer-satisfaction strategies without a DfX\n\n";
    out += std::to_string(g.gap_count()) + " of " + std::to_string(g.strategy_count) + " strategies have no relevant DfX.\n\n";
    for (const auto& [phase, names] : g.by_phase) {
        out += "### " + std::string(to_string(phase)) + " (" + std::to_string(names.size()) + ")\n\n";
        for (const auto& n : names) out += "- " + n + "\n";
        out += "\n";
    }
    out += "## Strategy map\n\n";
    out += md_row({"Strategy", "Relevant DfX", "Production", "Evaluation", "Experience"}) + md_rule(2, 3);
    for (const auto& s : kb.strategies) {
        std::string dfx;
        for (const auto& d : s.relevant_dfx) dfx += (dfx.empty() ? "" : ", ") + d;
        out += md_row({s.strategy, s.gap() ? "**None available**" : dfx, s.production ? "X" : "",
                       s.evaluation ? "X" : "", s.experience ? "X" : ""});
    }
    return out;
}

inline std::string gaps_csv(const KnowledgeBase& kb) {
    std::string out = "strategy,gap,production,evaluation,experience\n";
    for (const auto& s : kb.strategies) {
        out += csv::join_row({s.strategy, s.gap() ? "true" : "false", s.production ? "X" : "", s.evaluation ? "X" : "",
                              s.experience ? "X" : ""}) +
               "\n";
    }
    return out;
}

inline std::string catalog_markdown(const std::vector<DfxEntry>& entries) {
    std::string out = md_row({"Design for", "Purpose/Goal", "Scope", "Character", "Focus", "References"}) + md_rule(6, 0);
    auto join = [](const std::vector<std::string>& v) {
        std::string s;
        for (const auto& x : v) s += (s.empty() ? "" : "; ") + x;
        return s;
    };
    for (const auto& e : entries) {
        out += md_row({e.name, join(e.goals), std::string(to_string(e.scope)), std::string(to_string(e.character)),
                       std::string(to_string(e.focus)), join(e.references)});
    }
    return out + "\n" + std::to_string(entries.size()) + " entries.\n";
}

inline std::string catalog_csv(const std::vector<DfxEntry>& entries) {
    std::string out = "name,goals,scope,character,focus,references\n";
    auto join = [](const std::vector<std::string>& v) {
        std::string s;
        for (const auto& x : v) s += (s.empty() ? "" : ";") + x;
        return s;
    };
    for (const auto& e : entries) {
        out += csv::join_row({e.name, join(e.goals), std::string(to_string(e.scope)),
                              std::string(to_string(e.character)), std::string(to_string(e.focus)), join(e.references)}) +
               "\n";
    }
    return out;
}

inline std::string validation_markdown(const PublishedWeightTable& table, const ValidationReport& r) {
    std::string out = "## Published weight table\n\n";
    std::vector<std::string> header{"Row"};
    header.insert(header.end(), table.criteria.begin(), table.criteria.end());
    header.push_back("Overall");
    out += md_row(header) + md_rule(1, table.criteria.size() + 1);
    auto emit = [&](const PublishedRow& row) {
        std::vector<std::string> cells{row.name};
        for (double v : row.values) cells.push_back(fixed(v, 1) + "%");
        cells.push_back(fixed(row.overall, 1) + "%");
        out += md_row(cells);
    };
    emit(table.overall);
    for (const auto& row : table.rows) emit(row);
    emit(table.consistency);

    out += "\n## Checks\n\n" + md_row({"Check", "Expected", "Actual", "Tolerance", "Result"}) + md_rule(1, 4);
    for (const auto& c : r.checks) {
        const bool is_threshold = c.name.starts_with("consistency");
        out += md_row({c.name, (is_threshold ? "< " : "") + fixed(c.expected, 1), fixed(c.actual, 2),
                       is_threshold ? "-" : fixed(c.tolerance, 2), c.pass ? "PASS" : "FAIL"});
    }
    out += "\n" + std::string(r.ok() ? "All checks pass." : std::to_string(r.violations().size()) + " check(s) failed.") + "\n";
    return out;
}

inline std::string validation_csv(const ValidationReport& r) {
    std::string out = "check,expected,actual,tolerance,pass\n";
    for (const auto& c : r.checks) {
        out += csv::join_row({c.name, full(c.expected), full(c.actual), full(c.tolerance), c.pass ? "true" : "false"}) + "\n";
    }
    return out;
}

}  // namespace dfx_ahp::report
