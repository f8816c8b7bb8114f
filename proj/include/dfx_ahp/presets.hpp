#pragma once

#include "dfx_ahp/catalog.hpp"
#include "dfx_ahp/document.hpp"
#include "dfx_ahp/error.hpp"
#include "dfx_ahp/hierarchy.hpp"
#include "dfx_ahp/judgment.hpp"
#include "dfx_ahp/synthesis.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace dfx_ahp {

/// Closest scale judgment for a preference ratio a/b: round the ratio (or
/// its inverse) to an integer grade and clamp to 1..9.
inline Judgment judgment_for_ratio(double ratio) {
    if (!(ratio > 0.0) || !std::isfinite(ratio)) throw Error(ErrorCode::InvalidArgument, "ratio must be positive");
    const bool inverted = ratio < 1.0;
    const double r = inverted ? 1.0 / ratio : ratio;
    const int grade = std::clamp(static_cast<int>(std::lround(r)), kMinGrade, kMaxGrade);
    return Judgment(grade, inverted);
}

/// Full upper-triangle judgments for `children` under `context`, derived
/// from positive scores by judgment_for_ratio.
inline void append_judgments_from_scores(std::vector<JudgmentRecord>& out, const std::string& context,
                                         const std::vector<std::string>& children, const std::vector<double>& scores) {
    for (std::size_t i = 0; i < children.size(); ++i)
        for (std::size_t j = i + 1; j < children.size(); ++j)
            out.push_back({context, children[i], children[j], judgment_for_ratio(scores[i] / scores[j])});
}

struct PresetInfo {
    std::string name;
    std::string description;
    bool illustrative = true;
    std::optional<ExplicitListPolicy> retained;
};

/// Named starting points: the full IoT hierarchy, the two scenario
/// profiles, and small demo documents. Loaded from `<data>/presets/*.json`.
///
/// A preset file is either
///   {"name", "description", "illustrative", "document": {...}} or
///   {"name", "description", "illustrative", "profile": {...}}
/// where a profile generates goal -> product criteria -> data sub-criteria
/// (replicated under every product criterion) -> all catalog DfX, with
/// judgments derived from score hints.
class PresetRegistry {
public:
    PresetRegistry() = default;

    PresetRegistry(const std::filesystem::path& preset_dir, std::shared_ptr<const KnowledgeBase> kb) : kb_(std::move(kb)) {
        if (!std::filesystem::is_directory(preset_dir)) return;
        std::vector<std::filesystem::path> files;
        for (const auto& entry : std::filesystem::directory_iterator(preset_dir))
            if (entry.path().extension() == ".json") files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) add(nlohmann::json::parse(read_text_file(f.string())), f.parent_path());
    }

    void add(const nlohmann::json& spec, const std::filesystem::path& base_dir = {}) {
        Entry e;
        e.info.name = spec.at("name").get<std::string>();
        e.info.description = spec.value("description", std::string{});
        e.info.illustrative = spec.value("illustrative", true);
        for (const auto& alias : spec.value("aliases", std::vector<std::string>{})) aliases_[alias] = e.info.name;
        if (auto r = spec.find("retained"); r != spec.end()) {
            e.info.retained = ExplicitListPolicy{e.info.name, r->at("criteria").get<std::vector<std::string>>(),
                                                 r->at("alternatives").get<std::vector<std::string>>()};
        }
        if (auto d = spec.find("document"); d != spec.end()) {
            e.document = parse_document(*d);
        } else if (auto df = spec.find("document_file"); df != spec.end()) {
            e.document = load_document((base_dir / df->get<std::string>()).string());
        } else {
            e.profile = spec.at("profile");
        }
        entries_[e.info.name] = std::move(e);
    }

    std::vector<PresetInfo> list() const {
        std::vector<PresetInfo> out;
        for (const auto& [name, e] : entries_) out.push_back(e.info);
        return out;
    }

    bool contains(const std::string& name) const { return find(name) != nullptr; }

    const PresetInfo& info(const std::string& name) const { return get(name).info; }

    /// Complete hierarchy document (structure + judgments) for a preset.
    HierarchyDocument document(const std::string& name) const {
        const auto& e = get(name);
        if (e.document) return *e.document;
        if (!kb_) throw Error(ErrorCode::InvalidArgument, "profile presets need a loaded knowledge base");
        return generate(e.profile, *kb_);
    }

    /// Generates a document from a profile (see class comment).
    static HierarchyDocument generate(const nlohmann::json& profile, const KnowledgeBase& kb) {
        HierarchyDocument doc;
        doc.goal = profile.value("goal", std::string("Select DfX for IoT"));

        std::vector<std::string> product;
        for (const auto& a : kb.product_criteria()) product.push_back(a.name);
        std::vector<std::string> data;
        for (const auto& a : kb.data_criteria()) data.push_back(a.name);
        for (const auto& a : kb.dfx) doc.alternatives.push_back(a.name);

        LayerSpec product_layer{"product criteria", {}};
        for (const auto& p : product) product_layer.nodes.push_back({p, doc.goal});
        LayerSpec data_layer{"data criteria", {}};
        for (const auto& p : product)
            for (const auto& d : data) data_layer.nodes.push_back({sub_criterion_name(p, d), p});
        doc.layers = {product_layer, data_layer};

        auto scores = [&](const char* key, const char* default_key, const std::vector<std::string>& names) {
            const auto hints = profile.value(key, std::map<std::string, double>{});
            for (const auto& [n, v] : hints) {
                if (std::find(names.begin(), names.end(), n) == names.end()) {
                    throw Error(ErrorCode::UnknownNode, std::string(key) + " names unknown element '" + n + "'", {{"name", n}});
                }
                if (!(v > 0.0)) throw Error(ErrorCode::InvalidArgument, std::string(key) + " must be positive", {{"name", n}});
            }
            const double fallback = profile.value(default_key, 1.0);
            std::vector<double> out;
            for (const auto& n : names) {
                auto it = hints.find(n);
                out.push_back(it == hints.end() ? fallback : it->second);
            }
            return out;
        };
        const auto product_scores = scores("product_weights", "default_product_weight", product);
        const auto data_scores = scores("data_weights", "default_data_weight", data);
        const auto alt_scores = scores("alternative_scores", "default_alternative_score", doc.alternatives);

        append_judgments_from_scores(doc.judgments, doc.goal, product, product_scores);
        std::vector<std::string> sub_names;
        for (const auto& p : product) {
            sub_names.clear();
            for (const auto& d : data) sub_names.push_back(sub_criterion_name(p, d));
            append_judgments_from_scores(doc.judgments, p, sub_names, data_scores);
        }

        // Per-leaf multiplicative jitter, deterministic in the seed.
        const double jitter = profile.value("jitter", 0.0);
        std::mt19937_64 rng(profile.value("seed", std::uint64_t{1}));
        auto uniform = [&] { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; };
        auto gaussian = [&] { return std::sqrt(-2.0 * std::log(uniform())) * std::cos(2.0 * M_PI * uniform()); };
        for (const auto& p : product) {
            for (const auto& d : data) {
                std::vector<double> s = alt_scores;
                if (jitter > 0.0)
                    for (double& x : s) x *= std::exp(jitter * gaussian());
                append_judgments_from_scores(doc.judgments, sub_criterion_name(p, d), doc.alternatives, s);
            }
        }
        return doc;
    }

    static std::string sub_criterion_name(const std::string& product, const std::string& data) {
        return product + " / " + data;
    }

private:
    struct Entry {
        PresetInfo info;
        std::optional<HierarchyDocument> document;
        nlohmann::json profile;
    };

    const Entry* find(const std::string& name) const {
        auto it = entries_.find(name);
        if (it != entries_.end()) return &it->second;
        if (auto a = aliases_.find(name); a != aliases_.end()) return &entries_.at(a->second);
        return nullptr;
    }

    const Entry& get(const std::string& name) const {
        if (const auto* e = find(name)) return *e;
        std::string known;
        for (const auto& [n, _] : entries_) known += (known.empty() ? "" : ", ") + n;
        throw Error(ErrorCode::UnknownPreset, "unknown preset '" + name + "' (known: " + known + ")", {{"preset", name}});
    }

    std::shared_ptr<const KnowledgeBase> kb_;
    std::map<std::string, Entry> entries_;
    std::map<std::string, std::string> aliases_;
};

}  // namespace dfx_ahp
