#pragma once

#include "dfx_ahp/catalog.hpp"
#include "dfx_ahp/document.hpp"
#include "dfx_ahp/error.hpp"
#include "dfx_ahp/presets.hpp"
#include "dfx_ahp/serialize.hpp"
#include "dfx_ahp/session.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dfx_ahp {

struct ServiceResponse {
    int status = 200;
    nlohmann::json body;
};

inline int http_status(ErrorCode code) {
    switch (code) {
        case ErrorCode::UnknownSession:
        case ErrorCode::UnknownPreset: return 404;
        case ErrorCode::StaleRevision:
        case ErrorCode::ContextsIncomplete: return 409;
        case ErrorCode::IoError: return 500;
        default: return 400;
    }
}

inline nlohmann::json error_body(const Error& e) {
    return {{"code", to_string(e.code())}, {"message", e.message()}, {"details", e.details()}};
}

/// HTTP-independent request handling. `dispatch` maps a method, path, query
/// parameters and JSON body to a status and JSON payload; the httplib server
/// in `serve` is a thin adapter over it.
class ServiceApi {
public:
    ServiceApi(std::shared_ptr<const KnowledgeBase> kb, std::shared_ptr<const PresetRegistry> presets,
               SolveOptions options = {}, std::string journal_path = {})
        : kb_(std::move(kb)), sessions_(std::move(presets), options, std::move(journal_path)) {}

    ServiceResponse dispatch(std::string_view method, std::string_view path,
                             const std::multimap<std::string, std::string>& query = {}, std::string_view body = {}) {
        try {
            return route(method, path, query, body);
        } catch (const Error& e) {
            return {http_status(e.code()), error_body(e)};
        } catch (const nlohmann::json::exception& e) {
            return {400, error_body(Error(ErrorCode::SchemaViolation, e.what()))};
        }
    }

    SessionStore& sessions() { return sessions_; }

private:
    static std::vector<std::string> split_path(std::string_view path) {
        std::vector<std::string> out;
        std::size_t pos = 0;
        while (pos < path.size()) {
            if (path[pos] == '/') {
                ++pos;
                continue;
            }
            const auto next = path.find('/', pos);
            out.emplace_back(path.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
            pos = next == std::string_view::npos ? path.size() : next;
        }
        return out;
    }

    static nlohmann::json parse_body(std::string_view body) {
        if (body.empty()) return nlohmann::json::object();
        try {
            return nlohmann::json::parse(body);
        } catch (const nlohmann::json::parse_error& e) {
            throw Error(ErrorCode::SchemaViolation, std::string("malformed JSON body: ") + e.what(),
                        {{"byte", e.byte}});
        }
    }

    static ServiceResponse not_found(std::string_view method, std::string_view path) {
        return {404,
                {{"code", "NotFound"},
                 {"message", "no route for " + std::string(method) + " " + std::string(path)},
                 {"details", nlohmann::json::object()}}};
    }

    ServiceResponse route(std::string_view method, std::string_view path,
                          const std::multimap<std::string, std::string>& query, std::string_view body) {
        const auto parts = split_path(path);
        if (parts.empty()) return not_found(method, path);

        if (parts[0] == "presets" && parts.size() == 1 && method == "GET") return {200, presets_json()};
        if (parts[0] == "catalog" && method == "GET") {
            if (parts.size() == 1) return {200, catalog_json(query)};
            if (parts.size() == 2 && parts[1] == "gaps") return {200, gaps_json()};
            return not_found(method, path);
        }
        if (parts[0] != "sessions") return not_found(method, path);

        if (parts.size() == 1 && method == "POST") {
            auto s = sessions_.create_session(parse_body(body));
            return {201, session_json(*s)};
        }
        if (parts.size() == 2 && method == "GET") return {200, session_json(*sessions_.get(parts[1]))};
        if (parts.size() == 3) {
            const auto& id = parts[1];
            if (parts[2] == "judgments" && (method == "PUT" || method == "POST")) return {200, submit(id, parse_body(body))};
            if (parts[2] == "results" && method == "GET") {
                auto s = sessions_.get(id);
                auto model = SessionStore::results(*s);
                auto out = to_json(model);
                out["revision"] = s->revision;
                out["session"] = s->id;
                return {200, out};
            }
            if (parts[2] == "whatif" && method == "POST") {
                auto s = sessions_.get(id);
                const auto edit = edit_from_json(parse_body(body));
                auto out = to_json(what_if(SessionStore::results(*s), edit));
                out["revision"] = s->revision;
                out["session"] = s->id;
                return {200, out};
            }
        }
        return not_found(method, path);
    }

    nlohmann::json submit(const std::string& id, const nlohmann::json& body) {
        if (!body.is_object()) throw Error(ErrorCode::SchemaViolation, "judgment request must be an object", {{"pointer", ""}});
        std::vector<JudgmentEdit> edits;
        if (auto list = body.find("judgments"); list != body.end()) {
            if (!list->is_array()) throw Error(ErrorCode::SchemaViolation, "judgments must be an array", {{"pointer", "/judgments"}});
            for (std::size_t k = 0; k < list->size(); ++k) {
                try {
                    edits.push_back(edit_from_json((*list)[k]));
                } catch (const Error& e) {
                    auto details = e.details();
                    details["pointer"] = "/judgments/" + std::to_string(k) + details.value("pointer", std::string{});
                    throw Error(e.code(), e.message(), details);
                }
            }
        } else {
            edits.push_back(edit_from_json(body));
        }
        std::optional<std::uint64_t> expected;
        if (auto r = body.find("expected_revision"); r != body.end() && !r->is_null()) {
            if (!r->is_number_unsigned()) {
                throw Error(ErrorCode::SchemaViolation, "expected_revision must be a non-negative integer",
                            {{"pointer", "/expected_revision"}});
            }
            expected = r->get<std::uint64_t>();
        }
        auto s = sessions_.submit(id, edits, expected);

        nlohmann::json touched = nlohmann::json::array();
        std::vector<std::string> seen;
        for (const auto& e : edits) {
            if (std::find(seen.begin(), seen.end(), e.context) != seen.end()) continue;
            seen.push_back(e.context);
            touched.push_back(context_json(*s->hierarchy->find_context(e.context), *s->contexts.at(e.context)));
        }
        return {{"session", s->id}, {"revision", s->revision}, {"contexts", touched}};
    }

    static nlohmann::json context_json(const ComparisonContext& ctx, const ContextState& state) {
        const std::size_t required = ctx.order() * (ctx.order() - 1) / 2;
        nlohmann::json out = {{"context", ctx.name},
                              {"kind", ctx.kind == ContextKind::Criteria ? "criteria" : "alternatives"},
                              {"children", ctx.children},
                              {"judged", state.judged.size()},
                              {"required", required}};
        if (state.solution) {
            out["status"] = "complete";
            out["priority"] = to_json(state.solution->priorities);
            out["consistency"] = to_json(state.solution->consistency);
        } else {
            out["status"] = "pending";
            out["consistency"] = "pending";
        }
        return out;
    }

    static nlohmann::json session_json(const Session& s) {
        auto doc = s.hierarchy->to_document();
        for (const auto& ctx : s.hierarchy->contexts()) {
            for (const auto& [ij, j] : s.contexts.at(ctx.name)->judged)
                doc.judgments.push_back({ctx.name, ctx.children[ij.first], ctx.children[ij.second], j});
        }
        nlohmann::json contexts = nlohmann::json::array();
        for (const auto& ctx : s.hierarchy->contexts()) contexts.push_back(context_json(ctx, *s.contexts.at(ctx.name)));
        const auto missing = s.incomplete_contexts();
        return {{"session", s.id},
                {"revision", s.revision},
                {"preset", s.preset.empty() ? nlohmann::json(nullptr) : nlohmann::json(s.preset)},
                {"illustrative", s.illustrative},
                {"document", to_json(doc)},
                {"contexts", contexts},
                {"complete", missing.empty()},
                {"incomplete_contexts", missing}};
    }

    nlohmann::json presets_json() const {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& p : sessions_.presets().list()) {
            nlohmann::json item = {{"name", p.name}, {"description", p.description}, {"illustrative", p.illustrative}};
            if (p.retained) item["retained"] = {{"criteria", p.retained->criteria}, {"alternatives", p.retained->alternatives}};
            out.push_back(item);
        }
        return out;
    }

    nlohmann::json catalog_json(const std::multimap<std::string, std::string>& q) const {
        std::vector<CatalogFilter> filters;
        for (const auto& [k, v] : q) filters.push_back({k, v});
        nlohmann::json entries = nlohmann::json::array();
        for (const auto& e : query(*kb_, filters)) entries.push_back(to_json(e));
        return {{"count", entries.size()}, {"entries", entries}};
    }

    nlohmann::json gaps_json() const {
        auto out = to_json(gap_report(*kb_));
        nlohmann::json strategies = nlohmann::json::array();
        for (const auto& s : kb_->strategies) strategies.push_back(to_json(s));
        out["strategies"] = strategies;
        return out;
    }

    std::shared_ptr<const KnowledgeBase> kb_;
    SessionStore sessions_;
};

}  // namespace dfx_ahp
