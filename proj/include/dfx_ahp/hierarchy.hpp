#pragma once

#include "dfx_ahp/error.hpp"
#include "dfx_ahp/judgment.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dfx_ahp {

// ---------------------------------------------------------------------------
// Document form: what gets persisted and exchanged with the service.

struct NodeSpec {
    std::string name;
    std::string parent;  // empty in the first layer means "the goal"

    friend bool operator==(const NodeSpec&, const NodeSpec&) = default;
};

struct LayerSpec {
    std::string name;
    std::vector<NodeSpec> nodes;

    friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

/// A single pairwise judgment addressed by context and child names.
struct JudgmentRecord {
    std::string context;
    std::string row;
    std::string col;
    Judgment judgment;

    friend bool operator==(const JudgmentRecord&, const JudgmentRecord&) = default;
};

struct HierarchyDocument {
    std::string goal;
    std::vector<LayerSpec> layers;
    std::vector<std::string> alternatives;
    std::vector<JudgmentRecord> judgments;

    friend bool operator==(const HierarchyDocument&, const HierarchyDocument&) = default;
};

// ---------------------------------------------------------------------------
// Validated tree.

enum class ContextKind { Criteria, Alternatives };

/// One comparison matrix the hierarchy needs: a parent and the ordered
/// children compared under it.
struct ComparisonContext {
    std::string name;
    ContextKind kind = ContextKind::Criteria;
    std::vector<std::string> children;

    std::size_t order() const noexcept { return children.size(); }
};

struct CriterionNode {
    std::string name;
    std::size_t layer = 0;   // 0 is the goal, criterion layers start at 1
    std::size_t parent = 0;  // index into nodes(); the goal points at itself
    std::vector<std::size_t> children;
};

class DecisionHierarchy {
public:
    const std::string& goal() const noexcept { return nodes_.front().name; }
    const std::vector<CriterionNode>& nodes() const noexcept { return nodes_; }
    const std::vector<std::string>& alternatives() const noexcept { return alternatives_; }
    const std::vector<std::string>& layer_names() const noexcept { return layer_names_; }

    /// Number of criterion layers (the goal is not counted).
    std::size_t layer_count() const noexcept { return layer_names_.size(); }

    /// Node indices of criterion layer `k` (1-based, matching CriterionNode::layer).
    std::vector<std::size_t> layer(std::size_t k) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            if (nodes_[i].layer == k) out.push_back(i);
        return out;
    }

    std::vector<std::size_t> leaves() const { return layer(layer_count()); }

    /// Every comparison matrix this hierarchy requires. Parents with a single
    /// child are absent (the child takes local weight 1).
    const std::vector<ComparisonContext>& contexts() const noexcept { return contexts_; }

    const ComparisonContext* find_context(std::string_view name) const {
        auto it = context_index_.find(std::string(name));
        return it == context_index_.end() ? nullptr : &contexts_[it->second];
    }

    std::optional<std::size_t> node_index(std::string_view name) const {
        auto it = node_index_.find(std::string(name));
        if (it == node_index_.end()) return std::nullopt;
        return it->second;
    }

    /// Children of a criterion node, or the alternatives when `name` is a leaf.
    std::vector<std::string> children_of(std::string_view name) const {
        auto idx = node_index(name);
        if (!idx) throw Error(ErrorCode::UnknownNode, "no criterion named '" + std::string(name) + "'");
        const auto& node = nodes_[*idx];
        if (node.layer == layer_count() && node.layer != 0) return alternatives_;
        std::vector<std::string> out;
        for (auto c : node.children) out.push_back(nodes_[c].name);
        return out;
    }

    /// Copy keeping only the listed first-layer criteria (with their subtrees)
    /// and the listed alternatives; original order is preserved.
    DecisionHierarchy restrict(const std::vector<std::string>& top_criteria,
                               const std::vector<std::string>& alternatives) const;

    /// Structure-only document (no judgments).
    HierarchyDocument to_document() const;

private:
    friend DecisionHierarchy build_hierarchy(const HierarchyDocument& doc);

    void index();

    std::vector<CriterionNode> nodes_;
    std::vector<std::string> layer_names_;
    std::vector<std::string> alternatives_;
    std::vector<ComparisonContext> contexts_;
    std::unordered_map<std::string, std::size_t> node_index_;
    std::unordered_map<std::string, std::size_t> context_index_;
};

inline DecisionHierarchy build_hierarchy(const HierarchyDocument& doc) {
    if (doc.goal.empty()) throw Error(ErrorCode::SchemaViolation, "goal must be a non-empty name", {{"pointer", "/goal"}});
    if (doc.layers.empty()) throw Error(ErrorCode::EmptyLayer, "at least one criterion layer is required", {{"pointer", "/layers"}});
    if (doc.alternatives.size() < 2) {
        throw Error(ErrorCode::TooFewAlternatives,
                    "at least 2 alternatives are required, got " + std::to_string(doc.alternatives.size()),
                    {{"pointer", "/alternatives"}});
    }

    DecisionHierarchy h;
    std::set<std::string> seen{doc.goal};
    auto claim = [&](const std::string& name, const std::string& pointer) {
        if (name.empty()) throw Error(ErrorCode::SchemaViolation, "empty node name", {{"pointer", pointer}});
        if (!seen.insert(name).second) {
            throw Error(ErrorCode::DuplicateName, "name '" + name + "' appears more than once",
                        {{"pointer", pointer}, {"name", name}});
        }
    };

    h.nodes_.push_back({doc.goal, 0, 0, {}});
    std::unordered_map<std::string, std::size_t> previous_layer{{doc.goal, 0}};
    for (std::size_t k = 0; k < doc.layers.size(); ++k) {
        const auto& layer = doc.layers[k];
        const std::string layer_ptr = "/layers/" + std::to_string(k);
        if (layer.nodes.empty()) {
            throw Error(ErrorCode::EmptyLayer, "layer '" + layer.name + "' has no nodes", {{"pointer", layer_ptr}});
        }
        h.layer_names_.push_back(layer.name.empty() ? "layer " + std::to_string(k + 1) : layer.name);
        std::unordered_map<std::string, std::size_t> this_layer;
        for (std::size_t i = 0; i < layer.nodes.size(); ++i) {
            const auto& spec = layer.nodes[i];
            const std::string ptr = layer_ptr + "/nodes/" + std::to_string(i);
            claim(spec.name, ptr);
            const std::string& parent_name = (k == 0 && spec.parent.empty()) ? doc.goal : spec.parent;
            auto parent = previous_layer.find(parent_name);
            if (parent == previous_layer.end()) {
                throw Error(ErrorCode::OrphanNode,
                            "node '" + spec.name + "' names parent '" + spec.parent + "', which is not in the layer above",
                            {{"pointer", ptr}, {"name", spec.name}, {"parent", spec.parent}});
            }
            const std::size_t idx = h.nodes_.size();
            h.nodes_.push_back({spec.name, k + 1, parent->second, {}});
            h.nodes_[parent->second].children.push_back(idx);
            this_layer.emplace(spec.name, idx);
        }
        for (auto idx : h.layer(k)) {
            if (k > 0 && h.nodes_[idx].children.empty()) {
                const auto& name = h.nodes_[idx].name;
                throw Error(ErrorCode::ChildlessCriterion,
                            "criterion '" + name + "' has no children in layer '" + h.layer_names_.back() + "'",
                            {{"pointer", layer_ptr}, {"name", name}});
            }
        }
        previous_layer = std::move(this_layer);
    }
    for (std::size_t i = 0; i < doc.alternatives.size(); ++i) {
        claim(doc.alternatives[i], "/alternatives/" + std::to_string(i));
    }
    h.alternatives_ = doc.alternatives;
    h.index();
    return h;
}

inline void DecisionHierarchy::index() {
    node_index_.clear();
    context_index_.clear();
    contexts_.clear();
    for (std::size_t i = 0; i < nodes_.size(); ++i) node_index_.emplace(nodes_[i].name, i);
    // Criteria contexts in layer order, then one alternatives context per leaf.
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const auto& node = nodes_[i];
        if (node.children.size() < 2) continue;
        ComparisonContext ctx{node.name, ContextKind::Criteria, {}};
        for (auto c : node.children) ctx.children.push_back(nodes_[c].name);
        contexts_.push_back(std::move(ctx));
    }
    for (auto leaf : leaves()) contexts_.push_back({nodes_[leaf].name, ContextKind::Alternatives, alternatives_});
    for (std::size_t i = 0; i < contexts_.size(); ++i) context_index_.emplace(contexts_[i].name, i);
}

inline HierarchyDocument DecisionHierarchy::to_document() const {
    HierarchyDocument doc;
    doc.goal = goal();
    for (std::size_t k = 1; k <= layer_count(); ++k) {
        LayerSpec spec{layer_names_[k - 1], {}};
        for (auto idx : layer(k)) spec.nodes.push_back({nodes_[idx].name, nodes_[nodes_[idx].parent].name});
        doc.layers.push_back(std::move(spec));
    }
    doc.alternatives = alternatives_;
    return doc;
}

inline DecisionHierarchy DecisionHierarchy::restrict(const std::vector<std::string>& top_criteria,
                                                     const std::vector<std::string>& alternatives) const {
    const std::set<std::string> keep_top(top_criteria.begin(), top_criteria.end());
    const std::set<std::string> keep_alt(alternatives.begin(), alternatives.end());
    for (const auto& name : keep_top) {
        auto idx = node_index(name);
        if (!idx || nodes_[*idx].layer != 1) {
            throw Error(ErrorCode::UnknownNode, "'" + name + "' is not a first-layer criterion", {{"name", name}});
        }
    }
    for (const auto& name : keep_alt) {
        if (std::find(alternatives_.begin(), alternatives_.end(), name) == alternatives_.end()) {
            throw Error(ErrorCode::UnknownNode, "'" + name + "' is not an alternative", {{"name", name}});
        }
    }
    if (keep_top.empty()) throw Error(ErrorCode::EmptyRetention, "no criteria retained");
    if (keep_alt.size() < 2) throw Error(ErrorCode::EmptyRetention, "fewer than 2 alternatives retained");

    // Walk layer by layer, dropping any node whose ancestor was dropped.
    HierarchyDocument doc = to_document();
    std::set<std::string> alive{goal()};
    for (std::size_t k = 0; k < doc.layers.size(); ++k) {
        auto& nodes = doc.layers[k].nodes;
        std::erase_if(nodes, [&](const NodeSpec& n) {
            return !alive.count(n.parent) || (k == 0 && !keep_top.count(n.name));
        });
        for (const auto& n : nodes) alive.insert(n.name);
    }
    std::erase_if(doc.alternatives, [&](const std::string& a) { return !keep_alt.count(a); });
    return build_hierarchy(doc);
}

}  // namespace dfx_ahp
