#pragma once

#include "dfx_ahp/document.hpp"
#include "dfx_ahp/error.hpp"
#include "dfx_ahp/hierarchy.hpp"
#include "dfx_ahp/presets.hpp"
#include "dfx_ahp/serialize.hpp"
#include "dfx_ahp/synthesis.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dfx_ahp {

/// Judgments entered so far for one context, keyed by (row, col) with
/// row < col, plus the solution once every pair is present.
struct ContextState {
    std::map<std::pair<std::size_t, std::size_t>, Judgment> judged;
    std::shared_ptr<const ContextSolution> solution;
};

/// Immutable snapshot of a session. Mutations produce a new snapshot that
/// shares every untouched ContextState with its predecessor.
struct Session {
    std::string id;
    std::uint64_t revision = 0;
    std::string preset;
    bool illustrative = false;
    std::shared_ptr<const DecisionHierarchy> hierarchy;
    std::map<std::string, std::shared_ptr<const ContextState>> contexts;

    std::vector<std::string> incomplete_contexts() const {
        std::vector<std::string> out;
        for (const auto& ctx : hierarchy->contexts())
            if (!contexts.at(ctx.name)->solution) out.push_back(ctx.name);
        return out;
    }
};

/// A judgment submitted to a session. `expected_revision`, when present,
/// must equal the session's current revision.
struct JudgmentSubmission {
    JudgmentEdit edit;
    std::optional<std::uint64_t> expected_revision;
};

namespace detail {

inline Judgment judgment_from_json(const nlohmann::json& body) {
    if (auto v = body.find("value"); v != body.end()) {
        if (v->is_string()) return Judgment::parse(v->get<std::string>());
        if (v->is_number()) return Judgment::parse(v->dump());
        throw Error(ErrorCode::SchemaViolation, "value must be a string or number", {{"pointer", "/value"}});
    }
    auto g = body.find("grade");
    if (g == body.end() || !g->is_number_integer()) {
        throw Error(ErrorCode::SchemaViolation, "judgment needs an integer 'grade' or a 'value'", {{"pointer", "/grade"}});
    }
    const bool inverted = body.value("inverted", false);
    return Judgment(g->get<int>(), inverted);
}

inline std::string required_string(const nlohmann::json& body, const char* key) {
    auto it = body.find(key);
    if (it == body.end() || !it->is_string()) {
        throw Error(ErrorCode::SchemaViolation, std::string("missing string field '") + key + "'",
                    {{"pointer", std::string("/") + key}});
    }
    return it->get<std::string>();
}

}  // namespace detail

inline JudgmentEdit edit_from_json(const nlohmann::json& body) {
    if (!body.is_object()) throw Error(ErrorCode::SchemaViolation, "judgment must be an object", {{"pointer", ""}});
    return {detail::required_string(body, "context"), detail::required_string(body, "row"),
            detail::required_string(body, "col"), detail::judgment_from_json(body)};
}

inline nlohmann::json to_json(const JudgmentEdit& e) {
    return {{"context", e.context},
            {"row", e.row},
            {"col", e.col},
            {"grade", e.judgment.grade()},
            {"inverted", e.judgment.inverted()}};
}

/// Holds sessions as immutable snapshots. Reads take a snapshot pointer and
/// never block on solves; a mutation builds its successor outside the lock
/// and installs it only if the revision it started from is still current.
/// With a journal path, every accepted mutation is appended as one JSON line
/// and replayed on construction.
class SessionStore {
public:
    SessionStore(std::shared_ptr<const PresetRegistry> presets, SolveOptions options = {},
                 std::string journal_path = {})
        : presets_(std::move(presets)), options_(options), journal_path_(std::move(journal_path)) {
        if (!journal_path_.empty()) replay();
    }

    /// `body` is {"template": name} or {"document": {...}}.
    std::shared_ptr<const Session> create_session(const nlohmann::json& body) {
        auto session = build_session(body);
        std::lock_guard lock(mutex_);
        session->id = "s" + std::to_string(++next_id_);
        std::shared_ptr<const Session> snapshot = std::move(session);
        sessions_[snapshot->id] = snapshot;
        journal({{"op", "create"}, {"id", snapshot->id}, {"body", body}});
        return snapshot;
    }

    std::shared_ptr<const Session> get(const std::string& id) const {
        std::lock_guard lock(mutex_);
        auto it = sessions_.find(id);
        if (it == sessions_.end()) throw Error(ErrorCode::UnknownSession, "unknown session '" + id + "'", {{"session", id}});
        return it->second;
    }

    /// Stores one or more judgments atomically under a single new revision.
    std::shared_ptr<const Session> submit(const std::string& id, const std::vector<JudgmentEdit>& edits,
                                          std::optional<std::uint64_t> expected_revision) {
        for (;;) {
            auto base = get(id);
            if (expected_revision && *expected_revision != base->revision) throw stale(*base, *expected_revision);
            auto next = std::make_shared<Session>(*base);
            ++next->revision;
            std::map<std::string, std::shared_ptr<ContextState>> touched;
            for (const auto& e : edits) {
                const auto* ctx = base->hierarchy->find_context(e.context);
                if (!ctx) {
                    throw Error(ErrorCode::UnknownContext, "no comparison matrix for context '" + e.context + "'",
                                {{"context", e.context}});
                }
                std::size_t i = child_position(*ctx, e.row, "row");
                std::size_t j = child_position(*ctx, e.col, "col");
                if (i == j) {
                    throw Error(ErrorCode::InvalidPair, "cannot judge '" + e.row + "' against itself",
                                {{"context", e.context}, {"row", e.row}, {"col", e.col}});
                }
                Judgment judgment = e.judgment;
                if (i > j) {
                    std::swap(i, j);
                    judgment = judgment.reciprocal();
                }
                auto& state = touched[e.context];
                if (!state) state = std::make_shared<ContextState>(*base->contexts.at(e.context));
                state->judged[{i, j}] = judgment;
            }
            for (auto& [name, state] : touched) {
                const auto& ctx = *base->hierarchy->find_context(name);
                state->solution = solve_if_complete(ctx, *state);
                next->contexts[name] = std::move(state);
            }

            std::lock_guard lock(mutex_);
            auto& slot = sessions_.at(id);
            if (slot->revision != base->revision) {
                if (expected_revision) throw stale(*slot, *expected_revision);
                continue;  // lost a race without a token: rebase and retry
            }
            nlohmann::json list = nlohmann::json::array();
            for (const auto& e : edits) list.push_back(to_json(e));
            journal({{"op", "judgments"}, {"id", id}, {"judgments", list}});
            slot = next;
            return slot;
        }
    }

    /// Solved model for the snapshot; ContextsIncomplete lists what is missing.
    static SolvedModel results(const Session& s) {
        if (auto missing = s.incomplete_contexts(); !missing.empty()) {
            throw Error(ErrorCode::ContextsIncomplete,
                        std::to_string(missing.size()) + " comparison context(s) are not fully judged",
                        {{"contexts", missing}, {"revision", s.revision}});
        }
        SolvedModel model{*s.hierarchy, {}, {}, {}};
        for (const auto& [name, state] : s.contexts) model.contexts.emplace(name, *state->solution);
        model.weights = synthesize(model.hierarchy, model.local());
        return model;
    }

    SolvedModel results(const std::string& id) const {
        auto s = get(id);
        auto model = results(*s);
        model.options = options_;
        return model;
    }

    const PresetRegistry& presets() const { return *presets_; }
    const SolveOptions& options() const { return options_; }

private:
    std::shared_ptr<Session> build_session(const nlohmann::json& body) const {
        if (!body.is_object()) throw Error(ErrorCode::SchemaViolation, "session request must be an object", {{"pointer", ""}});
        HierarchyDocument doc;
        auto session = std::make_shared<Session>();
        if (auto t = body.find("template"); t != body.end()) {
            if (!t->is_string()) throw Error(ErrorCode::SchemaViolation, "template must be a string", {{"pointer", "/template"}});
            const auto& info = presets_->info(t->get<std::string>());
            doc = presets_->document(info.name);
            session->preset = info.name;
            session->illustrative = info.illustrative;
        } else if (auto d = body.find("document"); d != body.end()) {
            try {
                doc = parse_document(*d);
            } catch (const Error& e) {
                auto details = e.details();
                details["pointer"] = "/document" + details.value("pointer", std::string{});
                throw Error(e.code(), e.message(), details);
            }
        } else {
            throw Error(ErrorCode::SchemaViolation, "session request needs 'template' or 'document'", {{"pointer", ""}});
        }

        auto hierarchy = std::make_shared<const DecisionHierarchy>(build_hierarchy(doc));
        std::map<std::string, ContextState> states;
        for (const auto& ctx : hierarchy->contexts()) states[ctx.name];
        for (std::size_t k = 0; k < doc.judgments.size(); ++k) {
            const auto& rec = doc.judgments[k];
            const auto* ctx = hierarchy->find_context(rec.context);
            if (!ctx) {
                throw Error(ErrorCode::UnknownContext, "judgment names unknown context '" + rec.context + "'",
                            {{"pointer", "/document/judgments/" + std::to_string(k)}});
            }
            std::size_t i = child_position(*ctx, rec.row, "row");
            std::size_t j = child_position(*ctx, rec.col, "col");
            Judgment judgment = rec.judgment;
            if (i > j) {
                std::swap(i, j);
                judgment = judgment.reciprocal();
            }
            auto& slot = states[ctx->name].judged;
            if (auto it = slot.find({i, j}); it != slot.end() && !(it->second == judgment)) {
                throw Error(ErrorCode::ConflictingJudgment,
                            "context '" + ctx->name + "': pair (" + rec.row + ", " + rec.col + ") judged twice differently",
                            {{"pointer", "/document/judgments/" + std::to_string(k)}});
            }
            slot[{i, j}] = judgment;
        }
        session->hierarchy = hierarchy;
        for (const auto& ctx : hierarchy->contexts()) {
            auto state = std::make_shared<ContextState>(std::move(states[ctx.name]));
            state->solution = solve_if_complete(ctx, *state);
            session->contexts[ctx.name] = std::move(state);
        }
        return session;
    }

    std::shared_ptr<const ContextSolution> solve_if_complete(const ComparisonContext& ctx, const ContextState& state) const {
        const std::size_t n = ctx.order();
        if (state.judged.size() != n * (n - 1) / 2) return nullptr;
        std::vector<PairJudgment> pairs;
        for (const auto& [ij, j] : state.judged) pairs.push_back({ij.first, ij.second, j});
        return std::make_shared<const ContextSolution>(
            solve_context(matrix_from_judgments(ctx.name, ctx.children, pairs), options_));
    }

    static Error stale(const Session& current, std::uint64_t expected) {
        return Error(ErrorCode::StaleRevision,
                     "session '" + current.id + "' is at revision " + std::to_string(current.revision) + ", not " +
                         std::to_string(expected),
                     {{"session", current.id}, {"revision", current.revision}, {"expected", expected}});
    }

    // Caller holds mutex_.
    void journal(const nlohmann::json& entry) {
        if (journal_path_.empty() || replaying_) return;
        std::ofstream out(journal_path_, std::ios::app);
        if (!out) throw Error(ErrorCode::IoError, "cannot append to journal '" + journal_path_ + "'");
        out << entry.dump() << '\n';
    }

    void replay() {
        std::ifstream in(journal_path_);
        if (!in) return;
        replaying_ = true;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto entry = nlohmann::json::parse(line);
            const auto id = entry.at("id").get<std::string>();
            if (entry.at("op") == "create") {
                auto session = build_session(entry.at("body"));
                session->id = id;
                sessions_[id] = std::move(session);
                if (id.size() > 1) next_id_ = std::max<std::uint64_t>(next_id_, std::stoull(id.substr(1)));
            } else {
                std::vector<JudgmentEdit> edits;
                for (const auto& j : entry.at("judgments")) edits.push_back(edit_from_json(j));
                submit(id, edits, std::nullopt);
            }
        }
        replaying_ = false;
    }

    std::shared_ptr<const PresetRegistry> presets_;
    SolveOptions options_;
    std::string journal_path_;
    bool replaying_ = false;
    mutable std::mutex mutex_;
    std::map<std::string, std::shared_ptr<const Session>> sessions_;
    std::uint64_t next_id_ = 0;
};

}  // namespace dfx_ahp
