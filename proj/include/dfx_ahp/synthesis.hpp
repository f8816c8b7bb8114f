#pragma once

#include "dfx_ahp/comparison_matrix.hpp"
#include "dfx_ahp/error.hpp"
#include "dfx_ahp/hierarchy.hpp"
#include "dfx_ahp/priority.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace dfx_ahp {

struct NamedWeight {
    std::string name;
    double weight = 0.0;

    friend bool operator==(const NamedWeight&, const NamedWeight&) = default;
};

/// Result of synthesizing local priorities across the hierarchy.
struct GlobalWeights {
    /// Global weight of every criterion, one vector per criterion layer
    /// (product of local weights along the path to the goal).
    std::vector<std::vector<NamedWeight>> criteria;
    /// Global weight of every alternative, in hierarchy order.
    std::vector<NamedWeight> alternatives;
    std::vector<std::string> leaf_criteria;
    std::vector<double> leaf_weights;
    /// breakdown[a][l]: leaf l's global weight times alternative a's local
    /// priority under l. Row sums are the alternative globals, column sums
    /// the leaf weights.
    std::vector<std::vector<double>> breakdown;

    /// Alternatives by descending weight; ties keep hierarchy order.
    std::vector<NamedWeight> ranking() const {
        auto out = alternatives;
        std::stable_sort(out.begin(), out.end(),
                         [](const NamedWeight& a, const NamedWeight& b) { return a.weight > b.weight; });
        return out;
    }

    friend bool operator==(const GlobalWeights&, const GlobalWeights&) = default;
};

using LocalPriorities = std::map<std::string, PriorityResult>;

/// Aggregates local priorities into global weights by path products.
inline GlobalWeights synthesize(const DecisionHierarchy& hierarchy, const LocalPriorities& local) {
    const auto& nodes = hierarchy.nodes();
    auto local_of = [&](const std::string& context, std::size_t expected) -> const std::vector<double>& {
        auto it = local.find(context);
        if (it == local.end()) {
            throw Error(ErrorCode::MissingContext, "no priorities for context '" + context + "'", {{"context", context}});
        }
        if (it->second.priorities.size() != expected) {
            throw Error(ErrorCode::DimensionMismatch,
                        "context '" + context + "' has " + std::to_string(it->second.priorities.size()) +
                            " priorities for " + std::to_string(expected) + " children",
                        {{"context", context}});
        }
        return it->second.priorities;
    };

    std::vector<double> global(nodes.size(), 0.0);
    global[0] = 1.0;
    // Nodes are stored layer by layer, so parents are always visited first.
    for (std::size_t p = 0; p < nodes.size(); ++p) {
        const auto& children = nodes[p].children;
        if (children.empty()) continue;
        if (children.size() == 1) {
            global[children[0]] = global[p];
            continue;
        }
        const auto& w = local_of(nodes[p].name, children.size());
        for (std::size_t c = 0; c < children.size(); ++c) global[children[c]] = global[p] * w[c];
    }

    GlobalWeights out;
    for (std::size_t k = 1; k <= hierarchy.layer_count(); ++k) {
        std::vector<NamedWeight> layer;
        for (auto idx : hierarchy.layer(k)) layer.push_back({nodes[idx].name, global[idx]});
        out.criteria.push_back(std::move(layer));
    }
    const auto& alts = hierarchy.alternatives();
    const auto leaves = hierarchy.leaves();
    out.breakdown.assign(alts.size(), std::vector<double>(leaves.size(), 0.0));
    for (std::size_t l = 0; l < leaves.size(); ++l) {
        out.leaf_criteria.push_back(nodes[leaves[l]].name);
        out.leaf_weights.push_back(global[leaves[l]]);
        const auto& w = local_of(nodes[leaves[l]].name, alts.size());
        for (std::size_t a = 0; a < alts.size(); ++a) out.breakdown[a][l] = global[leaves[l]] * w[a];
    }
    for (std::size_t a = 0; a < alts.size(); ++a) {
        double s = 0.0;
        for (double c : out.breakdown[a]) s += c;
        out.alternatives.push_back({alts[a], s});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Solving a whole hierarchy

struct SolveOptions {
    PowerIterationOptions power;
    RandomIndexOptions random_index;
    CompletionMode completion = CompletionMode::Strict;
};

struct ContextSolution {
    ComparisonMatrix matrix;
    PriorityResult priorities;
    ConsistencyReport consistency;
};

struct SolvedModel {
    DecisionHierarchy hierarchy;
    std::map<std::string, ContextSolution> contexts;
    GlobalWeights weights;
    SolveOptions options;

    bool all_consistent() const {
        return std::all_of(contexts.begin(), contexts.end(),
                           [](const auto& kv) { return kv.second.consistency.pass; });
    }

    LocalPriorities local() const {
        LocalPriorities out;
        for (const auto& [name, sol] : contexts) out.emplace(name, sol.priorities);
        return out;
    }
};

inline std::size_t child_position(const ComparisonContext& ctx, const std::string& name, const char* role) {
    auto it = std::find(ctx.children.begin(), ctx.children.end(), name);
    if (it == ctx.children.end()) {
        throw Error(ErrorCode::UnknownNode,
                    std::string(role) + " '" + name + "' is not compared under '" + ctx.name + "'",
                    {{"context", ctx.name}, {role, name}});
    }
    return static_cast<std::size_t>(it - ctx.children.begin());
}

/// Groups judgment records by context and builds every required matrix.
/// Errors carry a "pointer" to the offending record ("/judgments/<k>").
inline std::map<std::string, ComparisonMatrix> build_matrices(const DecisionHierarchy& hierarchy,
                                                              std::span<const JudgmentRecord> judgments,
                                                              CompletionMode mode = CompletionMode::Strict) {
    std::map<std::string, std::vector<PairJudgment>> grouped;
    std::map<std::string, std::vector<std::size_t>> source;
    for (std::size_t k = 0; k < judgments.size(); ++k) {
        const auto& rec = judgments[k];
        const std::string pointer = "/judgments/" + std::to_string(k);
        const auto* ctx = hierarchy.find_context(rec.context);
        if (!ctx) {
            throw Error(ErrorCode::UnknownContext, "judgment names unknown context '" + rec.context + "'",
                        {{"pointer", pointer}, {"context", rec.context}});
        }
        try {
            grouped[ctx->name].push_back(
                {child_position(*ctx, rec.row, "row"), child_position(*ctx, rec.col, "col"), rec.judgment});
        } catch (Error& e) {
            auto details = e.details();
            details["pointer"] = pointer;
            throw Error(e.code(), e.message(), details);
        }
        source[ctx->name].push_back(k);
    }

    std::map<std::string, ComparisonMatrix> out;
    for (const auto& ctx : hierarchy.contexts()) {
        const auto& list = grouped[ctx.name];
        try {
            out.emplace(ctx.name, matrix_from_judgments(ctx.name, ctx.children, list, mode));
        } catch (const Error& e) {
            auto details = e.details();
            if (e.code() == ErrorCode::ConflictingJudgment || e.code() == ErrorCode::InvalidPair) {
                // Point at the second record of the offending pair.
                const auto& idx = source[ctx.name];
                for (std::size_t a = 0; a < list.size(); ++a) {
                    bool hit = false;
                    for (std::size_t b = 0; b < a && !hit; ++b) {
                        const auto& x = list[a];
                        const auto& y = list[b];
                        hit = (x.row == y.row && x.col == y.col && !(x.judgment == y.judgment)) ||
                              (x.row == y.col && x.col == y.row && !(x.judgment == y.judgment.reciprocal()));
                    }
                    if (hit || list[a].row == list[a].col) {
                        details["pointer"] = "/judgments/" + std::to_string(idx[a]);
                        break;
                    }
                }
            } else {
                details["pointer"] = "/judgments";
            }
            throw Error(e.code(), e.message(), details);
        }
    }
    return out;
}

inline ContextSolution solve_context(ComparisonMatrix matrix, const SolveOptions& options) {
    ContextSolution sol{std::move(matrix), {}, {}};
    sol.priorities = principal_eigenvector(sol.matrix, options.power);
    sol.consistency = consistency(sol.matrix, sol.priorities, options.random_index);
    return sol;
}

inline SolvedModel solve(DecisionHierarchy hierarchy, std::map<std::string, ComparisonMatrix> matrices,
                         const SolveOptions& options = {}) {
    SolvedModel model{std::move(hierarchy), {}, {}, options};
    for (const auto& ctx : model.hierarchy.contexts()) {
        auto it = matrices.find(ctx.name);
        if (it == matrices.end()) {
            throw Error(ErrorCode::MissingContext, "no matrix for context '" + ctx.name + "'", {{"context", ctx.name}});
        }
        if (it->second.labels() != ctx.children) {
            throw Error(ErrorCode::DimensionMismatch, "matrix for '" + ctx.name + "' does not match its children",
                        {{"context", ctx.name}});
        }
        model.contexts.emplace(ctx.name, solve_context(std::move(it->second), options));
    }
    model.weights = synthesize(model.hierarchy, model.local());
    return model;
}

inline SolvedModel solve(const HierarchyDocument& doc, const SolveOptions& options = {}) {
    auto hierarchy = build_hierarchy(doc);
    auto matrices = build_matrices(hierarchy, doc.judgments, options.completion);
    return solve(std::move(hierarchy), std::move(matrices), options);
}

// ---------------------------------------------------------------------------
// Pruning

/// Retain an element iff its global weight >= theta / N, N being the number
/// of elements in its set (first-layer criteria, alternatives).
struct ThresholdPolicy {
    double theta = 0.5;
};

struct ExplicitListPolicy {
    std::string name;
    std::vector<std::string> criteria;
    std::vector<std::string> alternatives;
};

using PrunePolicy = std::variant<ThresholdPolicy, ExplicitListPolicy>;

struct PruneOutcome {
    std::vector<std::string> retained_criteria;
    std::vector<std::string> retained_alternatives;
    std::vector<NamedWeight> eliminated_criteria;
    std::vector<NamedWeight> eliminated_alternatives;
    std::string policy;
};

/// Splits first-layer criteria and alternatives into retained and
/// eliminated sets. Refuses (EmptyRetention) to leave no criterion or fewer
/// than two alternatives.
inline PruneOutcome prune(const GlobalWeights& weights, const PrunePolicy& policy) {
    if (weights.criteria.empty()) throw Error(ErrorCode::InvalidArgument, "weights carry no criterion layer");
    const auto& top = weights.criteria.front();
    PruneOutcome out;

    auto split = [](const std::vector<NamedWeight>& items, auto keep, std::vector<std::string>& retained,
                    std::vector<NamedWeight>& eliminated) {
        for (const auto& item : items) {
            if (keep(item)) retained.push_back(item.name);
            else eliminated.push_back(item);
        }
    };

    if (const auto* t = std::get_if<ThresholdPolicy>(&policy)) {
        if (!(t->theta > 0.0 && t->theta <= 1.0)) {
            throw Error(ErrorCode::InvalidArgument, "theta must lie in (0, 1]", {{"theta", t->theta}});
        }
        auto by_threshold = [&](std::size_t n) {
            const double cut = t->theta / static_cast<double>(n);
            return [cut](const NamedWeight& w) { return w.weight >= cut; };
        };
        split(top, by_threshold(top.size()), out.retained_criteria, out.eliminated_criteria);
        split(weights.alternatives, by_threshold(weights.alternatives.size()), out.retained_alternatives,
              out.eliminated_alternatives);
        char buf[64];
        std::snprintf(buf, sizeof buf, "threshold(theta=%g)", t->theta);
        out.policy = buf;
    } else {
        const auto& list = std::get<ExplicitListPolicy>(policy);
        auto check_known = [](const std::vector<std::string>& names, const std::vector<NamedWeight>& items,
                              const char* what) {
            for (const auto& n : names) {
                if (std::none_of(items.begin(), items.end(), [&](const NamedWeight& w) { return w.name == n; })) {
                    throw Error(ErrorCode::UnknownNode, std::string(what) + " '" + n + "' is not in the hierarchy",
                                {{"name", n}});
                }
            }
        };
        check_known(list.criteria, top, "criterion");
        check_known(list.alternatives, weights.alternatives, "alternative");
        const std::set<std::string> keep_c(list.criteria.begin(), list.criteria.end());
        const std::set<std::string> keep_a(list.alternatives.begin(), list.alternatives.end());
        split(top, [&](const NamedWeight& w) { return keep_c.count(w.name) > 0; }, out.retained_criteria,
              out.eliminated_criteria);
        split(weights.alternatives, [&](const NamedWeight& w) { return keep_a.count(w.name) > 0; },
              out.retained_alternatives, out.eliminated_alternatives);
        out.policy = "explicit-list(" + (list.name.empty() ? std::string("custom") : list.name) + ")";
    }

    if (out.retained_criteria.empty()) {
        throw Error(ErrorCode::EmptyRetention, "policy " + out.policy + " eliminates every criterion");
    }
    if (out.retained_alternatives.size() < 2) {
        throw Error(ErrorCode::EmptyRetention,
                    "policy " + out.policy + " retains " + std::to_string(out.retained_alternatives.size()) +
                        " alternative(s); a re-run needs at least 2");
    }
    return out;
}

/// Re-solves on the retained elements. Each matrix is restricted to its
/// retained rows and columns; the original judgments are kept as they were.
inline SolvedModel rerun_after_prune(const SolvedModel& model, const PruneOutcome& outcome) {
    auto restricted = model.hierarchy.restrict(outcome.retained_criteria, outcome.retained_alternatives);
    std::map<std::string, ComparisonMatrix> matrices;
    for (const auto& ctx : restricted.contexts()) {
        const auto& original = model.contexts.at(ctx.name).matrix;
        std::vector<std::size_t> keep;
        for (const auto& child : ctx.children) {
            const auto& labels = original.labels();
            keep.push_back(static_cast<std::size_t>(std::find(labels.begin(), labels.end(), child) - labels.begin()));
        }
        matrices.emplace(ctx.name, original.submatrix(keep));
    }
    return solve(std::move(restricted), std::move(matrices), model.options);
}

inline SolvedModel rerun_after_prune(const HierarchyDocument& doc, const PruneOutcome& outcome,
                                     const SolveOptions& options = {}) {
    return rerun_after_prune(solve(doc, options), outcome);
}

// ---------------------------------------------------------------------------
// What-if

struct JudgmentEdit {
    std::string context;
    std::string row;
    std::string col;
    Judgment judgment;
};

struct WeightDelta {
    std::string name;
    double before = 0.0;
    double after = 0.0;
    std::size_t rank_before = 0;  // 1-based
    std::size_t rank_after = 0;
};

struct RankingDelta {
    std::string context;
    std::vector<NamedWeight> old_ranking;
    std::vector<NamedWeight> new_ranking;
    std::vector<WeightDelta> changes;  // alternatives whose weight or rank moved
    PriorityResult priorities;         // edited context, after the edit
    ConsistencyReport consistency;     // edited context, after the edit

    bool ranking_changed() const {
        if (old_ranking.size() != new_ranking.size()) return true;
        for (std::size_t i = 0; i < old_ranking.size(); ++i)
            if (old_ranking[i].name != new_ranking[i].name) return true;
        return false;
    }
    bool empty() const { return changes.empty(); }
};

/// Returns a new model with one judgment replaced. Only the edited matrix is
/// re-solved; synthesis is then redone. The input model is untouched.
inline SolvedModel apply_edit(const SolvedModel& model, const JudgmentEdit& edit) {
    auto it = model.contexts.find(edit.context);
    const auto* ctx = model.hierarchy.find_context(edit.context);
    if (it == model.contexts.end() || !ctx) {
        throw Error(ErrorCode::UnknownContext, "no comparison matrix for context '" + edit.context + "'",
                    {{"context", edit.context}});
    }
    const std::size_t i = child_position(*ctx, edit.row, "row");
    const std::size_t j = child_position(*ctx, edit.col, "col");
    const auto& old = it->second.matrix;

    ComparisonMatrix updated;
    if (old.imputed()) {
        // Imputed cells depend on the judged ones, so rebuild from those.
        std::vector<PairJudgment> given;
        for (std::size_t r = 0; r < old.order(); ++r)
            for (std::size_t c = r + 1; c < old.order(); ++c)
                if (auto jv = old.judgment(r, c); jv && !((r == i && c == j) || (r == j && c == i)))
                    given.push_back({r, c, *jv});
        given.push_back({i, j, edit.judgment});
        updated = matrix_from_judgments(ctx->name, ctx->children, given, CompletionMode::Lenient);
    } else {
        updated = old.with_judgment(i, j, edit.judgment);
    }

    SolvedModel next = model;
    next.contexts[edit.context] = solve_context(std::move(updated), model.options);
    next.weights = synthesize(next.hierarchy, next.local());
    return next;
}

inline RankingDelta compare_rankings(const SolvedModel& before, const SolvedModel& after, const std::string& context) {
    RankingDelta delta;
    delta.context = context;
    delta.old_ranking = before.weights.ranking();
    delta.new_ranking = after.weights.ranking();
    if (auto it = after.contexts.find(context); it != after.contexts.end()) {
        delta.priorities = it->second.priorities;
        delta.consistency = it->second.consistency;
    }
    auto rank_of = [](const std::vector<NamedWeight>& ranking, const std::string& name) {
        for (std::size_t r = 0; r < ranking.size(); ++r)
            if (ranking[r].name == name) return r + 1;
        return std::size_t{0};
    };
    const auto& a = before.weights.alternatives;
    const auto& b = after.weights.alternatives;
    for (std::size_t k = 0; k < a.size() && k < b.size(); ++k) {
        WeightDelta d{a[k].name, a[k].weight, b[k].weight, rank_of(delta.old_ranking, a[k].name),
                      rank_of(delta.new_ranking, a[k].name)};
        if (d.before != d.after || d.rank_before != d.rank_after) delta.changes.push_back(d);
    }
    return delta;
}

/// Effect of a single judgment change, without mutating `model`.
inline RankingDelta what_if(const SolvedModel& model, const JudgmentEdit& edit) {
    return compare_rankings(model, apply_edit(model, edit), edit.context);
}

}  // namespace dfx_ahp
