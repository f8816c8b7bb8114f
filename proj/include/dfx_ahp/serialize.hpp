#pragma once

#include "dfx_ahp/catalog.hpp"
#include "dfx_ahp/priority.hpp"
#include "dfx_ahp/synthesis.hpp"

#include <nlohmann/json.hpp>

namespace dfx_ahp {

// JSON views of engine results, shared by the CLI's json format and the
// HTTP service. Numbers are emitted at full precision.

inline nlohmann::json to_json(const PriorityResult& r) {
    return {{"priorities", r.priorities},
            {"lambda_max", r.lambda_max},
            {"iterations", r.iterations},
            {"residual", r.residual}};
}

inline nlohmann::json to_json(const ConsistencyReport& c) {
    return {{"ci", c.ci}, {"cr", c.cr}, {"random_index", c.random_index}, {"threshold", c.threshold}, {"pass", c.pass}};
}

inline nlohmann::json to_json(const NamedWeight& w) { return {{"name", w.name}, {"weight", w.weight}}; }

inline nlohmann::json to_json(const std::vector<NamedWeight>& ws) {
    auto out = nlohmann::json::array();
    for (const auto& w : ws) out.push_back(to_json(w));
    return out;
}

inline nlohmann::json to_json(const GlobalWeights& g) {
    auto layers = nlohmann::json::array();
    for (const auto& layer : g.criteria) layers.push_back(to_json(layer));
    auto ranking = nlohmann::json::array();
    std::size_t rank = 1;
    for (const auto& w : g.ranking()) ranking.push_back({{"rank", rank++}, {"name", w.name}, {"weight", w.weight}});
    return {{"criteria", layers},
            {"alternatives", to_json(g.alternatives)},
            {"ranking", ranking},
            {"leaf_criteria", g.leaf_criteria},
            {"leaf_weights", g.leaf_weights},
            {"breakdown", g.breakdown}};
}

inline nlohmann::json to_json(const ContextSolution& s) {
    return {{"context", s.matrix.context()},
            {"children", s.matrix.labels()},
            {"order", s.matrix.order()},
            {"imputed", s.matrix.imputed()},
            {"priority", to_json(s.priorities)},
            {"consistency", to_json(s.consistency)}};
}

inline nlohmann::json to_json(const SolvedModel& m) {
    auto contexts = nlohmann::json::array();
    for (const auto& ctx : m.hierarchy.contexts()) contexts.push_back(to_json(m.contexts.at(ctx.name)));
    return {{"goal", m.hierarchy.goal()},
            {"weights", to_json(m.weights)},
            {"contexts", contexts},
            {"all_consistent", m.all_consistent()}};
}

inline nlohmann::json to_json(const PruneOutcome& p) {
    return {{"policy", p.policy},
            {"retained_criteria", p.retained_criteria},
            {"retained_alternatives", p.retained_alternatives},
            {"eliminated_criteria", to_json(p.eliminated_criteria)},
            {"eliminated_alternatives", to_json(p.eliminated_alternatives)}};
}

inline nlohmann::json to_json(const RankingDelta& d) {
    auto changes = nlohmann::json::array();
    for (const auto& c : d.changes) {
        changes.push_back({{"name", c.name},
                           {"before", c.before},
                           {"after", c.after},
                           {"delta", c.after - c.before},
                           {"rank_before", c.rank_before},
                           {"rank_after", c.rank_after}});
    }
    return {{"context", d.context},
            {"empty", d.empty()},
            {"ranking_changed", d.ranking_changed()},
            {"old_ranking", to_json(d.old_ranking)},
            {"new_ranking", to_json(d.new_ranking)},
            {"changes", changes},
            {"priority", to_json(d.priorities)},
            {"consistency", to_json(d.consistency)}};
}

inline nlohmann::json to_json(const DfxEntry& e) {
    return {{"name", e.name},
            {"goals", e.goals},
            {"scope", to_string(e.scope)},
            {"character", to_string(e.character)},
            {"focus", to_string(e.focus)},
            {"references", e.references}};
}

inline nlohmann::json to_json(const StrategyMapping& s) {
    return {{"strategy", s.strategy},
            {"relevant_dfx", s.relevant_dfx},
            {"production", s.production},
            {"evaluation", s.evaluation},
            {"experience", s.experience},
            {"gap", s.gap()},
            {"phase_best_effort", s.phase_best_effort}};
}

inline nlohmann::json to_json(const GapSummary& g) {
    nlohmann::json by_phase = nlohmann::json::object();
    for (const auto& [phase, names] : g.by_phase) by_phase[std::string(to_string(phase))] = names;
    return {{"strategy_count", g.strategy_count}, {"gap_count", g.gap_count()}, {"gaps", g.gaps}, {"by_phase", by_phase}};
}

inline nlohmann::json to_json(const ValidationReport& r) {
    auto checks = nlohmann::json::array();
    for (const auto& c : r.checks) {
        checks.push_back({{"name", c.name},
                          {"expected", c.expected},
                          {"actual", c.actual},
                          {"tolerance", c.tolerance},
                          {"pass", c.pass}});
    }
    return {{"ok", r.ok()}, {"checks", checks}};
}

}  // namespace dfx_ahp
