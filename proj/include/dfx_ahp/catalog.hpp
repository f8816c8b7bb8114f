#pragma once

#include "dfx_ahp/csv.hpp"
#include "dfx_ahp/document.hpp"
#include "dfx_ahp/error.hpp"
#include "dfx_ahp/priority.hpp"

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dfx_ahp {

// ---------------------------------------------------------------------------
// Enumerations of the DfX classification

enum class Scope { Product, System, Ecosystem, SystemAndEcosystem, All };
enum class Character { Virtue, Lifecycle, Both };
enum class Focus { Internal, External, Both };
enum class AttributeGroup { ISO25010Product, OtherSourceProduct, DataCriterion };
enum class Phase { Production, Evaluation, Experience };

inline constexpr std::array<std::pair<Scope, std::string_view>, 5> kScopeNames{{
    {Scope::Product, "Product"},
    {Scope::System, "System"},
    {Scope::Ecosystem, "Ecosystem"},
    {Scope::SystemAndEcosystem, "System and Ecosystem"},
    {Scope::All, "ALL"},
}};
inline constexpr std::array<std::pair<Character, std::string_view>, 3> kCharacterNames{{
    {Character::Virtue, "Virtue"},
    {Character::Lifecycle, "Lifecycle"},
    {Character::Both, "Both"},
}};
inline constexpr std::array<std::pair<Focus, std::string_view>, 3> kFocusNames{{
    {Focus::Internal, "Internal"},
    {Focus::External, "External"},
    {Focus::Both, "Both"},
}};
inline constexpr std::array<std::pair<AttributeGroup, std::string_view>, 3> kGroupNames{{
    {AttributeGroup::ISO25010Product, "ISO25010Product"},
    {AttributeGroup::OtherSourceProduct, "OtherSourceProduct"},
    {AttributeGroup::DataCriterion, "DataCriterion"},
}};
inline constexpr std::array<std::pair<Phase, std::string_view>, 3> kPhaseNames{{
    {Phase::Production, "production"},
    {Phase::Evaluation, "evaluation"},
    {Phase::Experience, "experience"},
}};

template <class E, std::size_t N>
std::string_view enum_name(E value, const std::array<std::pair<E, std::string_view>, N>& table) {
    for (const auto& [v, n] : table)
        if (v == value) return n;
    return "?";
}

namespace detail {

inline std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace detail

/// Parses an enum by its canonical spelling, case-insensitively; also
/// accepts the C++ enumerator spelling ("SystemAndEcosystem", "All").
template <class E, std::size_t N>
std::optional<E> parse_enum(std::string_view text, const std::array<std::pair<E, std::string_view>, N>& table) {
    const auto key = detail::lower(text);
    for (const auto& [v, n] : table) {
        std::string compact;
        for (char c : n)
            if (c != ' ') compact += c;
        if (detail::lower(n) == key || detail::lower(compact) == key) return v;
    }
    return std::nullopt;
}

inline std::string_view to_string(Scope s) { return enum_name(s, kScopeNames); }
inline std::string_view to_string(Character c) { return enum_name(c, kCharacterNames); }
inline std::string_view to_string(Focus f) { return enum_name(f, kFocusNames); }
inline std::string_view to_string(AttributeGroup g) { return enum_name(g, kGroupNames); }
inline std::string_view to_string(Phase p) { return enum_name(p, kPhaseNames); }

// ---------------------------------------------------------------------------
// Records

struct DfxEntry {
    std::string name;
    std::vector<std::string> goals;
    Scope scope = Scope::Product;
    Character character = Character::Virtue;
    Focus focus = Focus::Internal;
    std::vector<std::string> references;

    friend bool operator==(const DfxEntry&, const DfxEntry&) = default;
};

struct QualityAttribute {
    std::string name;
    AttributeGroup group = AttributeGroup::ISO25010Product;
    std::vector<std::string> notes;

    bool is_product() const { return group != AttributeGroup::DataCriterion; }
    friend bool operator==(const QualityAttribute&, const QualityAttribute&) = default;
};

struct StrategyMapping {
    std::string strategy;
    std::vector<std::string> relevant_dfx;
    bool production = false;
    bool evaluation = false;
    bool experience = false;
    bool phase_best_effort = false;

    bool gap() const { return relevant_dfx.empty(); }
    bool in_phase(Phase p) const {
        switch (p) {
            case Phase::Production: return production;
            case Phase::Evaluation: return evaluation;
            case Phase::Experience: return experience;
        }
        return false;
    }
    friend bool operator==(const StrategyMapping&, const StrategyMapping&) = default;
};

struct PublishedRow {
    std::string name;
    std::vector<double> values;  // percent, one per criterion column
    double overall = 0.0;

    friend bool operator==(const PublishedRow&, const PublishedRow&) = default;
};

/// Published global weightings of the top alternatives, in percent.
struct PublishedWeightTable {
    std::vector<std::string> criteria;
    PublishedRow overall;      // criterion weights, overall = stated total
    std::vector<PublishedRow> rows;
    PublishedRow consistency;  // per-criterion CR, overall = overall CR

    friend bool operator==(const PublishedWeightTable&, const PublishedWeightTable&) = default;
};

struct DatasetManifest {
    std::string name;
    std::string version;
    std::string provenance;
    std::map<std::string, std::string> sha256;
    std::vector<std::string> phase_best_effort;

    friend bool operator==(const DatasetManifest&, const DatasetManifest&) = default;
};

inline constexpr std::size_t kCatalogSize = 50;
inline constexpr std::size_t kIsoProductCriteria = 7;
inline constexpr std::size_t kOtherProductCriteria = 8;
inline constexpr std::size_t kDataCriteria = 4;
inline constexpr std::size_t kStrategyCount = 20;

/// Normalized lookup key: case-folded, "design for"/"df" prefix and
/// asterisks removed, whitespace collapsed, "/ " treated as "/".
inline std::string dfx_key(std::string_view name) {
    std::string s = detail::lower(name);
    std::erase(s, '*');
    std::string collapsed;
    for (char c : s) {
        if (c == ' ' && (collapsed.empty() || collapsed.back() == ' ' || collapsed.back() == '/')) continue;
        if (c == '/' && !collapsed.empty() && collapsed.back() == ' ') collapsed.pop_back();
        collapsed += c;
    }
    while (!collapsed.empty() && collapsed.back() == ' ') collapsed.pop_back();
    for (std::string_view prefix : {"design for ", "df "}) {
        if (collapsed.starts_with(prefix)) {
            collapsed.erase(0, prefix.size());
            break;
        }
    }
    return collapsed;
}

struct KnowledgeBase {
    std::vector<DfxEntry> dfx;
    std::vector<QualityAttribute> attributes;
    std::vector<StrategyMapping> strategies;
    PublishedWeightTable published;
    DatasetManifest manifest;

    /// Exact name, then normalized name, then a parenthetical alias such as
    /// "DFSS". Ambiguous aliases never resolve.
    const DfxEntry* resolve_dfx(std::string_view name) const {
        for (const auto& e : dfx)
            if (e.name == name) return &e;
        const auto key = dfx_key(name);
        const DfxEntry* hit = nullptr;
        int hits = 0;
        for (const auto& e : dfx) {
            const auto k = dfx_key(e.name);
            std::set<std::string> aliases{k};
            if (auto open = k.find(" ("); open != std::string::npos && k.back() == ')') {
                aliases.insert(k.substr(0, open));
                aliases.insert(k.substr(open + 2, k.size() - open - 3));
            }
            if (aliases.count(key)) {
                hit = &e;
                ++hits;
            }
        }
        return hits == 1 ? hit : nullptr;
    }

    const QualityAttribute* find_attribute(std::string_view name) const {
        for (const auto& a : attributes)
            if (a.name == name) return &a;
        return nullptr;
    }

    std::vector<QualityAttribute> product_criteria() const {
        std::vector<QualityAttribute> out;
        std::copy_if(attributes.begin(), attributes.end(), std::back_inserter(out),
                     [](const QualityAttribute& a) { return a.is_product(); });
        return out;
    }

    std::vector<QualityAttribute> data_criteria() const {
        std::vector<QualityAttribute> out;
        std::copy_if(attributes.begin(), attributes.end(), std::back_inserter(out),
                     [](const QualityAttribute& a) { return !a.is_product(); });
        return out;
    }

    std::size_t count(AttributeGroup g) const {
        return static_cast<std::size_t>(
            std::count_if(attributes.begin(), attributes.end(), [g](const QualityAttribute& a) { return a.group == g; }));
    }

    friend bool operator==(const KnowledgeBase&, const KnowledgeBase&) = default;
};

// ---------------------------------------------------------------------------
// Loading

struct DatasetPaths {
    std::string catalog;
    std::string attributes;
    std::string strategies;
    std::string published_weights;
    std::optional<std::string> manifest;

    static DatasetPaths in(const std::filesystem::path& dir) {
        DatasetPaths p{(dir / "dfx_catalog.csv").string(), (dir / "quality_attributes.csv").string(),
                       (dir / "strategy_map.csv").string(), (dir / "figure10_weights.csv").string(), std::nullopt};
        if (std::filesystem::exists(dir / "datasets.json")) p.manifest = (dir / "datasets.json").string();
        return p;
    }
};

inline std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorCode::IoError, "SHA-256 computation failed");
    }
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

namespace detail {

inline csv::Table read_table(const std::string& path, const csv::Row& expected_header) {
    auto table = csv::parse(read_text_file(path), path);
    if (table.header != expected_header) {
        std::string want;
        for (const auto& h : expected_header) want += (want.empty() ? "" : ",") + h;
        throw Error(ErrorCode::SchemaViolation, path + ":1: header must be '" + want + "'", {{"path", path}, {"line", 1}});
    }
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        if (table.rows[r].size() != expected_header.size()) {
            throw Error(ErrorCode::SchemaViolation,
                        path + ":" + std::to_string(table.lines[r]) + ": expected " +
                            std::to_string(expected_header.size()) + " fields, got " +
                            std::to_string(table.rows[r].size()),
                        {{"path", path}, {"line", table.lines[r]}});
        }
    }
    return table;
}

inline Error row_error(ErrorCode code, const std::string& path, std::size_t line, const std::string& what) {
    return Error(code, path + ":" + std::to_string(line) + ": " + what, {{"path", path}, {"line", line}});
}

template <class E, std::size_t N>
E require_enum(const std::string& text, const std::array<std::pair<E, std::string_view>, N>& table,
               const std::string& path, std::size_t line, const char* field) {
    if (auto v = parse_enum(text, table)) return *v;
    throw row_error(ErrorCode::SchemaViolation, path, line, std::string("invalid ") + field + " '" + text + "'");
}

inline void expect_count(std::size_t actual, std::size_t expected, const std::string& what) {
    if (actual != expected) {
        throw Error(ErrorCode::CardinalityMismatch,
                    what + ": expected " + std::to_string(expected) + ", found " + std::to_string(actual),
                    {{"expected", expected}, {"actual", actual}, {"what", what}});
    }
}

inline double parse_percent(const std::string& text, const std::string& path, std::size_t line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size() && std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    throw row_error(ErrorCode::SchemaViolation, path, line, "invalid percentage '" + text + "'");
}

}  // namespace detail

inline DatasetManifest load_manifest(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::SchemaViolation, path + ": " + e.what(), {{"path", path}});
    }
    DatasetManifest m;
    try {
        m.name = j.at("name").get<std::string>();
        m.version = j.at("version").get<std::string>();
        m.provenance = j.value("provenance", std::string{});
        for (const auto& [file, info] : j.at("files").items()) m.sha256[file] = info.at("sha256").get<std::string>();
        m.phase_best_effort = j.value("phase_best_effort", std::vector<std::string>{});
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::SchemaViolation, path + ": " + e.what(), {{"path", path}});
    }
    return m;
}

/// Loads and cross-links the four datasets. Cardinalities (50 DfX, 7 + 8
/// product criteria, 4 data criteria, 20 strategies) are enforced, every DfX
/// name used by the strategy map and the published table must resolve, and
/// when a manifest is given each file's SHA-256 must match it.
inline KnowledgeBase load_catalog(const DatasetPaths& paths) {
    KnowledgeBase kb;
    if (paths.manifest) {
        kb.manifest = load_manifest(*paths.manifest);
        for (const auto& file : {paths.catalog, paths.attributes, paths.strategies, paths.published_weights}) {
            const auto base = std::filesystem::path(file).filename().string();
            auto it = kb.manifest.sha256.find(base);
            if (it == kb.manifest.sha256.end()) {
                throw Error(ErrorCode::SchemaViolation, "manifest has no entry for '" + base + "'", {{"path", file}});
            }
            const auto actual = sha256_hex(read_text_file(file));
            if (actual != it->second) {
                throw Error(ErrorCode::ChecksumMismatch, "'" + base + "' does not match its manifest checksum",
                            {{"path", file}, {"expected", it->second}, {"actual", actual}});
            }
        }
    }

    // DfX catalog
    {
        const auto& path = paths.catalog;
        auto t = detail::read_table(path, {"name", "goals", "scope", "character", "focus", "references"});
        std::set<std::string> names;
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            const auto& row = t.rows[r];
            const auto line = t.lines[r];
            if (row[0].empty()) throw detail::row_error(ErrorCode::SchemaViolation, path, line, "empty name");
            if (!names.insert(row[0]).second) {
                throw detail::row_error(ErrorCode::DuplicateName, path, line, "duplicate DfX '" + row[0] + "'");
            }
            kb.dfx.push_back({row[0], csv::split_list(row[1]),
                              detail::require_enum(row[2], kScopeNames, path, line, "scope"),
                              detail::require_enum(row[3], kCharacterNames, path, line, "character"),
                              detail::require_enum(row[4], kFocusNames, path, line, "focus"),
                              csv::split_list(row[5])});
        }
        detail::expect_count(kb.dfx.size(), kCatalogSize, "DfX catalog entries");
    }

    // Quality attributes
    {
        const auto& path = paths.attributes;
        auto t = detail::read_table(path, {"name", "group", "notes"});
        std::set<std::string> names;
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            const auto& row = t.rows[r];
            if (row[0].empty()) throw detail::row_error(ErrorCode::SchemaViolation, path, t.lines[r], "empty name");
            if (!names.insert(row[0]).second) {
                throw detail::row_error(ErrorCode::DuplicateName, path, t.lines[r], "duplicate attribute '" + row[0] + "'");
            }
            kb.attributes.push_back(
                {row[0], detail::require_enum(row[1], kGroupNames, path, t.lines[r], "group"), csv::split_list(row[2])});
        }
        detail::expect_count(kb.count(AttributeGroup::ISO25010Product), kIsoProductCriteria, "ISO 25010 product criteria");
        detail::expect_count(kb.count(AttributeGroup::OtherSourceProduct), kOtherProductCriteria,
                             "other-source product criteria");
        detail::expect_count(kb.count(AttributeGroup::DataCriterion), kDataCriteria, "data criteria");
    }

    // Strategy map
    {
        const auto& path = paths.strategies;
        auto t = detail::read_table(path, {"strategy", "dfx_list", "production", "evaluation", "experience"});
        const std::set<std::string> best_effort(kb.manifest.phase_best_effort.begin(), kb.manifest.phase_best_effort.end());
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            const auto& row = t.rows[r];
            const auto line = t.lines[r];
            auto flag = [&](const std::string& v, const char* col) {
                if (v.empty()) return false;
                if (v == "X" || v == "x") return true;
                throw detail::row_error(ErrorCode::SchemaViolation, path, line,
                                        std::string(col) + " must be 'X' or empty, got '" + v + "'");
            };
            StrategyMapping m{row[0], {}, flag(row[2], "production"), flag(row[3], "evaluation"),
                              flag(row[4], "experience"), best_effort.count(row[0]) > 0};
            if (m.strategy.empty()) throw detail::row_error(ErrorCode::SchemaViolation, path, line, "empty strategy");
            if (!m.production && !m.evaluation && !m.experience) {
                throw detail::row_error(ErrorCode::SchemaViolation, path, line, "no phase flag set for '" + m.strategy + "'");
            }
            for (const auto& name : csv::split_list(row[1])) {
                const auto* e = kb.resolve_dfx(name);
                if (!e) {
                    throw Error(ErrorCode::UnresolvedDfxName,
                                path + ":" + std::to_string(line) + ": '" + name + "' is not in the DfX catalog",
                                {{"path", path}, {"line", line}, {"name", name}});
                }
                if (std::find(m.relevant_dfx.begin(), m.relevant_dfx.end(), e->name) == m.relevant_dfx.end())
                    m.relevant_dfx.push_back(e->name);
            }
            kb.strategies.push_back(std::move(m));
        }
        detail::expect_count(kb.strategies.size(), kStrategyCount, "customer-satisfaction strategies");
    }

    // Published weights, long format: row,criterion,value_pct
    {
        const auto& path = paths.published_weights;
        auto t = detail::read_table(path, {"row", "criterion", "value_pct"});
        auto& table = kb.published;
        std::vector<std::string> row_order;
        std::map<std::string, std::map<std::string, double>> cells;
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            const auto& row = t.rows[r];
            const auto line = t.lines[r];
            if (row[1] != "Overall") {
                if (!kb.find_attribute(row[1])) {
                    throw detail::row_error(ErrorCode::SchemaViolation, path, line,
                                            "criterion '" + row[1] + "' is not a quality attribute");
                }
                if (std::find(table.criteria.begin(), table.criteria.end(), row[1]) == table.criteria.end())
                    table.criteria.push_back(row[1]);
            }
            if (row[0] != "OVERALL" && row[0] != "CONSISTENCY" && !kb.resolve_dfx(row[0])) {
                throw Error(ErrorCode::UnresolvedDfxName,
                            path + ":" + std::to_string(line) + ": '" + row[0] + "' is not in the DfX catalog",
                            {{"path", path}, {"line", line}, {"name", row[0]}});
            }
            if (!cells.count(row[0])) row_order.push_back(row[0]);
            if (!cells[row[0]].emplace(row[1], detail::parse_percent(row[2], path, line)).second) {
                throw detail::row_error(ErrorCode::SchemaViolation, path, line,
                                        "duplicate cell (" + row[0] + ", " + row[1] + ")");
            }
        }
        auto assemble = [&](const std::string& name) {
            PublishedRow out{name, {}, 0.0};
            const auto& c = cells.at(name);
            for (const auto& crit : table.criteria) {
                auto it = c.find(crit);
                if (it == c.end()) {
                    throw Error(ErrorCode::SchemaViolation, path + ": row '" + name + "' lacks criterion '" + crit + "'",
                                {{"path", path}});
                }
                out.values.push_back(it->second);
            }
            auto it = c.find("Overall");
            if (it == c.end()) {
                throw Error(ErrorCode::SchemaViolation, path + ": row '" + name + "' lacks its Overall value", {{"path", path}});
            }
            out.overall = it->second;
            return out;
        };
        if (!cells.count("OVERALL") || !cells.count("CONSISTENCY")) {
            throw Error(ErrorCode::SchemaViolation, path + ": OVERALL and CONSISTENCY rows are required", {{"path", path}});
        }
        table.overall = assemble("OVERALL");
        table.consistency = assemble("CONSISTENCY");
        for (const auto& name : row_order)
            if (name != "OVERALL" && name != "CONSISTENCY") table.rows.push_back(assemble(name));
    }
    return kb;
}

inline KnowledgeBase load_catalog_dir(const std::filesystem::path& dir) { return load_catalog(DatasetPaths::in(dir)); }

// ---------------------------------------------------------------------------
// Query

struct CatalogFilter {
    std::string field;  // name | scope | character | focus | goal
    std::string value;
};

/// Entries matching every filter, in catalog order. `name` resolves like
/// KnowledgeBase::resolve_dfx; `goal` is a case-insensitive substring match.
inline std::vector<DfxEntry> query(const KnowledgeBase& kb, const std::vector<CatalogFilter>& filters) {
    std::vector<std::function<bool(const DfxEntry&)>> preds;
    for (const auto& f : filters) {
        const auto field = detail::lower(f.field);
        auto bad_value = [&] {
            return Error(ErrorCode::InvalidFilterValue, "invalid value '" + f.value + "' for filter '" + f.field + "'",
                         {{"field", f.field}, {"value", f.value}});
        };
        if (field == "name") {
            const auto* e = kb.resolve_dfx(f.value);
            const std::string target = e ? e->name : std::string{};
            preds.emplace_back([target](const DfxEntry& d) { return d.name == target; });
        } else if (field == "scope") {
            auto v = parse_enum(f.value, kScopeNames);
            if (!v) throw bad_value();
            preds.emplace_back([v](const DfxEntry& d) { return d.scope == *v; });
        } else if (field == "character") {
            auto v = parse_enum(f.value, kCharacterNames);
            if (!v) throw bad_value();
            preds.emplace_back([v](const DfxEntry& d) { return d.character == *v; });
        } else if (field == "focus") {
            auto v = parse_enum(f.value, kFocusNames);
            if (!v) throw bad_value();
            preds.emplace_back([v](const DfxEntry& d) { return d.focus == *v; });
        } else if (field == "goal") {
            const auto needle = detail::lower(f.value);
            preds.emplace_back([needle](const DfxEntry& d) {
                return std::any_of(d.goals.begin(), d.goals.end(),
                                   [&](const std::string& g) { return detail::lower(g).find(needle) != std::string::npos; });
            });
        } else {
            throw Error(ErrorCode::UnknownFilterField,
                        "unknown filter field '" + f.field + "' (expected name, scope, character, focus or goal)",
                        {{"field", f.field}});
        }
    }
    std::vector<DfxEntry> out;
    for (const auto& e : kb.dfx)
        if (std::all_of(preds.begin(), preds.end(), [&](const auto& p) { return p(e); })) out.push_back(e);
    return out;
}

// ---------------------------------------------------------------------------
// Gap analysis

struct GapSummary {
    std::vector<std::string> gaps;  // strategies with no relevant DfX, in dataset order
    std::map<Phase, std::vector<std::string>> by_phase;
    std::size_t strategy_count = 0;

    std::size_t gap_count() const { return gaps.size(); }
};

inline GapSummary gap_report(const KnowledgeBase& kb) {
    GapSummary out;
    out.strategy_count = kb.strategies.size();
    for (auto p : {Phase::Production, Phase::Evaluation, Phase::Experience}) out.by_phase[p];
    for (const auto& s : kb.strategies) {
        if (!s.gap()) continue;
        out.gaps.push_back(s.strategy);
        for (auto p : {Phase::Production, Phase::Evaluation, Phase::Experience})
            if (s.in_phase(p)) out.by_phase[p].push_back(s.strategy);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Published weight validation

struct ValidationCheck {
    std::string name;
    double expected = 0.0;
    double actual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;

    bool ok() const {
        return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.pass; });
    }
    std::vector<ValidationCheck> violations() const {
        std::vector<ValidationCheck> out;
        std::copy_if(checks.begin(), checks.end(), std::back_inserter(out), [](const auto& c) { return !c.pass; });
        return out;
    }
};

inline constexpr double kRowSumTolerancePct = 0.15;   // one-decimal rounding over seven columns
inline constexpr double kTotalSumTolerancePct = 0.5;

/// Row sums against stated overalls, criterion weights against 100%, and
/// every consistency value against the 10% threshold. Violations are
/// reported, never thrown.
inline ValidationReport validate_published_weights(const PublishedWeightTable& table) {
    constexpr double eps = 1e-9;
    ValidationReport report;
    auto sum = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    };
    for (const auto& row : table.rows) {
        const double s = sum(row.values);
        report.checks.push_back({"row sum: " + row.name, row.overall, s, kRowSumTolerancePct,
                                 std::abs(s - row.overall) <= kRowSumTolerancePct + eps});
    }
    const double criteria_total = sum(table.overall.values);
    report.checks.push_back({"criteria overall sum", 100.0, criteria_total, kTotalSumTolerancePct,
                             std::abs(criteria_total - 100.0) <= kTotalSumTolerancePct + eps});
    report.checks.push_back({"stated overall total", 100.0, table.overall.overall, kTotalSumTolerancePct,
                             std::abs(table.overall.overall - 100.0) <= kTotalSumTolerancePct + eps});
    const double threshold_pct = kConsistencyThreshold * 100.0;
    for (std::size_t c = 0; c < table.criteria.size(); ++c) {
        const double v = table.consistency.values[c];
        report.checks.push_back({"consistency < 10%: " + table.criteria[c], threshold_pct, v, 0.0, v < threshold_pct});
    }
    report.checks.push_back({"consistency < 10%: overall", threshold_pct, table.consistency.overall, 0.0,
                             table.consistency.overall < threshold_pct});
    return report;
}

}  // namespace dfx_ahp
