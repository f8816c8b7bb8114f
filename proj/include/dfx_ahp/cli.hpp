#pragma once

#include "dfx_ahp/catalog.hpp"
#include "dfx_ahp/document.hpp"
#include "dfx_ahp/error.hpp"
#include "dfx_ahp/http_server.hpp"
#include "dfx_ahp/presets.hpp"
#include "dfx_ahp/report.hpp"
#include "dfx_ahp/serialize.hpp"
#include "dfx_ahp/service.hpp"
#include "dfx_ahp/synthesis.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifndef DFX_AHP_DEFAULT_DATA_DIR
#define DFX_AHP_DEFAULT_DATA_DIR "data"
#endif

namespace dfx_ahp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitInconsistent = 2;

struct Config {
    std::string data_dir;
    std::string out;
    std::string format = "markdown";
    std::optional<double> theta;
    std::string preset;
    bool allow_inconsistent = false;
    std::optional<std::uint64_t> seed;
    std::string document;  // input document path; empty means --preset
    std::size_t top = 0;
};

inline std::string resolve_data_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("DFX_AHP_DATA"); env && *env) return env;
    return DFX_AHP_DEFAULT_DATA_DIR;
}

inline report::Format parse_format(const std::string& f) {
    if (f == "markdown" || f == "md") return report::Format::Markdown;
    if (f == "csv") return report::Format::Csv;
    if (f == "json") return report::Format::Json;
    throw Error(ErrorCode::InvalidArgument, "unknown format '" + f + "' (markdown, csv, json)");
}

/// Loaded inputs shared by the commands.
class Context {
public:
    explicit Context(Config cfg) : cfg_(std::move(cfg)) {
        cfg_.data_dir = resolve_data_dir(cfg_.data_dir);
        format_ = parse_format(cfg_.format);
        if (cfg_.seed) options_.random_index.seed = *cfg_.seed;
    }

    const Config& config() const { return cfg_; }
    report::Format format() const { return format_; }
    const SolveOptions& options() const { return options_; }

    std::shared_ptr<const KnowledgeBase> kb() {
        if (!kb_) kb_ = std::make_shared<const KnowledgeBase>(load_catalog_dir(cfg_.data_dir));
        return kb_;
    }

    std::shared_ptr<const PresetRegistry> presets() {
        if (!presets_) {
            presets_ = std::make_shared<const PresetRegistry>(std::filesystem::path(cfg_.data_dir) / "presets", kb());
        }
        return presets_;
    }

    /// The input document: the positional file if given, else the preset
    /// (default "paper-iot-full").
    const HierarchyDocument& document() {
        if (!doc_) {
            if (!cfg_.document.empty()) {
                source_path_ = cfg_.document;
                source_text_ = read_text_file(cfg_.document);
                doc_ = parse_document_text(source_text_);
            } else {
                const auto& name = cfg_.preset.empty() ? std::string("paper-iot-full") : cfg_.preset;
                doc_ = presets()->document(name);
                preset_ = presets()->info(name);
            }
        }
        return *doc_;
    }

    const std::optional<PresetInfo>& preset_info() {
        document();
        return preset_;
    }

    SolvedModel solve() {
        try {
            return dfx_ahp::solve(document(), options_);
        } catch (const Error& e) {
            throw anchored(e);
        }
    }

    /// Adds "line" to an error that points into the input document.
    Error anchored(const Error& e) const {
        auto details = e.details();
        if (!source_text_.empty() && details.contains("pointer") && !details.contains("line")) {
            if (auto line = locate_json_pointer(source_text_, details["pointer"].get<std::string>()))
                details["line"] = *line;
        }
        if (!source_path_.empty()) details["path"] = source_path_;
        return Error(e.code(), e.message(), details);
    }

private:
    Config cfg_;
    report::Format format_ = report::Format::Markdown;
    SolveOptions options_;
    std::shared_ptr<const KnowledgeBase> kb_;
    std::shared_ptr<const PresetRegistry> presets_;
    std::optional<HierarchyDocument> doc_;
    std::optional<PresetInfo> preset_;
    std::string source_path_;
    std::string source_text_;
};

inline std::string inconsistency_message(const SolvedModel& m) {
    std::string out;
    for (const auto& ctx : m.hierarchy.contexts()) {
        const auto& c = m.contexts.at(ctx.name).consistency;
        if (c.pass) continue;
        out += "inconsistent: context '" + ctx.name + "' has CR " + report::fixed(c.cr, 4) + " (threshold " +
               report::fixed(c.threshold, 2) + ")\n";
    }
    return out;
}

inline std::string render_solve(Context& ctx, const SolvedModel& m) {
    switch (ctx.format()) {
        case report::Format::Json: {
            auto j = to_json(m);
            if (const auto& p = ctx.preset_info()) j["preset"] = {{"name", p->name}, {"illustrative", p->illustrative}};
            return j.dump(2) + "\n";
        }
        case report::Format::Csv: return report::breakdown_csv(m.weights);
        case report::Format::Markdown: break;
    }
    std::string out;
    if (const auto& p = ctx.preset_info(); p && p->illustrative) {
        out += "> Preset '" + p->name + "' uses ILLUSTRATIVE judgments.\n\n";
    }
    return out + report::solve_markdown(m, ctx.config().top);
}

inline int cmd_solve(Context& ctx, std::ostream& out, std::ostream& err) {
    const auto model = ctx.solve();
    out << render_solve(ctx, model);
    if (!model.all_consistent() && !ctx.config().allow_inconsistent) {
        err << inconsistency_message(model);
        return kExitInconsistent;
    }
    return kExitOk;
}

inline int cmd_prune(Context& ctx, std::ostream& out, std::ostream& err) {
    const auto model = ctx.solve();
    PrunePolicy policy = ThresholdPolicy{ctx.config().theta.value_or(0.5)};
    if (!ctx.config().theta) {
        if (const auto& p = ctx.preset_info(); p && p->retained) policy = *p->retained;
    }
    const auto outcome = prune(model.weights, policy);
    const auto rerun = rerun_after_prune(model, outcome);
    switch (ctx.format()) {
        case report::Format::Json:
            out << nlohmann::json{{"prune", to_json(outcome)}, {"rerun", to_json(rerun)}}.dump(2) << "\n";
            break;
        case report::Format::Csv: out << report::prune_csv(outcome) << "\n" << report::breakdown_csv(rerun.weights); break;
        case report::Format::Markdown:
            out << report::prune_markdown(outcome) << "\n" << report::solve_markdown(rerun, ctx.config().top);
            break;
    }
    if (!model.all_consistent() && !ctx.config().allow_inconsistent) {
        err << inconsistency_message(model);
        return kExitInconsistent;
    }
    return kExitOk;
}

inline int cmd_whatif(Context& ctx, const JudgmentEdit& edit, std::ostream& out, std::ostream& err) {
    const auto model = ctx.solve();
    const auto after = apply_edit(model, edit);
    const auto delta = compare_rankings(model, after, edit.context);
    switch (ctx.format()) {
        case report::Format::Json: out << to_json(delta).dump(2) << "\n"; break;
        case report::Format::Csv: out << report::whatif_csv(delta); break;
        case report::Format::Markdown: out << report::whatif_markdown(delta); break;
    }
    if (!after.all_consistent() && !ctx.config().allow_inconsistent) {
        err << inconsistency_message(after);
        return kExitInconsistent;
    }
    return kExitOk;
}

inline int cmd_gaps(Context& ctx, std::ostream& out) {
    const auto& kb = *ctx.kb();
    const auto gaps = gap_report(kb);
    switch (ctx.format()) {
        case report::Format::Json: {
            auto j = to_json(gaps);
            nlohmann::json strategies = nlohmann::json::array();
            for (const auto& s : kb.strategies) strategies.push_back(to_json(s));
            j["strategies"] = strategies;
            out << j.dump(2) << "\n";
            break;
        }
        case report::Format::Csv: out << report::gaps_csv(kb); break;
        case report::Format::Markdown: out << report::gaps_markdown(kb, gaps); break;
    }
    return kExitOk;
}

inline int cmd_catalog(Context& ctx, const std::vector<std::string>& filter_args, std::ostream& out) {
    std::vector<CatalogFilter> filters;
    for (const auto& f : filter_args) {
        const auto eq = f.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::InvalidArgument, "filter '" + f + "' must be field=value", {{"filter", f}});
        }
        filters.push_back({f.substr(0, eq), f.substr(eq + 1)});
    }
    const auto entries = query(*ctx.kb(), filters);
    switch (ctx.format()) {
        case report::Format::Json: {
            nlohmann::json j = nlohmann::json::array();
            for (const auto& e : entries) j.push_back(to_json(e));
            out << j.dump(2) << "\n";
            break;
        }
        case report::Format::Csv: out << report::catalog_csv(entries); break;
        case report::Format::Markdown: out << report::catalog_markdown(entries); break;
    }
    return kExitOk;
}

inline int cmd_validate_fig10(Context& ctx, std::ostream& out) {
    const auto& kb = *ctx.kb();
    const auto r = validate_published_weights(kb.published);
    switch (ctx.format()) {
        case report::Format::Json: out << to_json(r).dump(2) << "\n"; break;
        case report::Format::Csv: out << report::validation_csv(r); break;
        case report::Format::Markdown: out << report::validation_markdown(kb.published, r); break;
    }
    return r.ok() ? kExitOk : kExitInvalid;
}

inline int cmd_serve(Context& ctx, const std::string& host, int port, const std::string& journal, std::ostream& err) {
    ServiceApi api(ctx.kb(), ctx.presets(), ctx.options(), journal);
    httplib::Server server;
    bind_routes(server, api);
    err << "listening on http://" << host << ":" << port << "\n";
    if (!server.listen(host, port)) {
        throw Error(ErrorCode::IoError, "cannot listen on " + host + ":" + std::to_string(port));
    }
    return kExitOk;
}

inline std::string format_error(const Error& e) {
    std::string where;
    const auto& d = e.details();
    if (d.contains("path")) where = d["path"].get<std::string>();
    if (d.contains("line")) where += (where.empty() ? "line " : ":") + std::to_string(d["line"].get<std::size_t>());
    std::string out = where.empty() ? "" : where + ": ";
    out += std::string(to_string(e.code())) + ": " + e.message();
    if (d.contains("pointer") && !d["pointer"].get<std::string>().empty())
        out += " (at " + d["pointer"].get<std::string>() + ")";
    return out;
}

/// Runs the command line; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"AHP decision engine for selecting Design-for-X techniques for IoT products", "dfx_ahp"};
    app.require_subcommand(1);
    app.fallthrough();

    Config cfg;
    app.add_option("--data-dir", cfg.data_dir, "Dataset directory (default: $DFX_AHP_DATA or the bundled data)");
    app.add_option("--out", cfg.out, "Write the report to this file instead of stdout");
    app.add_option("--format", cfg.format, "Report format")->check(CLI::IsMember({"markdown", "md", "csv", "json"}));
    app.add_option("--theta", cfg.theta, "Prune threshold: retain weight >= theta / N")->check(CLI::Range(0.0, 1.0));
    app.add_option("--preset", cfg.preset, "Preset used when no document is given");
    app.add_flag("--allow-inconsistent", cfg.allow_inconsistent, "Exit 0 even if some CR >= 0.10");
    app.add_option("--seed", cfg.seed, "Seed for Monte Carlo random indices (orders above 10)");

    auto* solve = app.add_subcommand("solve", "Solve a hierarchy and report global weights and consistency");
    solve->add_option("document", cfg.document, "Hierarchy document (JSON)");
    solve->add_option("--top", cfg.top, "Show only the top N alternatives (markdown)");

    auto* prune_cmd = app.add_subcommand("prune", "Prune low-weight criteria and alternatives, then re-solve");
    prune_cmd->add_option("document", cfg.document, "Hierarchy document (JSON)");
    prune_cmd->add_option("--top", cfg.top, "Show only the top N alternatives (markdown)");

    JudgmentEdit edit;
    std::string value;
    auto* whatif = app.add_subcommand("whatif", "Report the ranking change caused by one judgment edit");
    whatif->add_option("document", cfg.document, "Hierarchy document (JSON)");
    whatif->add_option("--context", edit.context, "Context (parent node) of the edited matrix")->required();
    whatif->add_option("--row", edit.row, "Row element")->required();
    whatif->add_option("--col", edit.col, "Column element")->required();
    whatif->add_option("--value", value, "New judgment, e.g. 5 or 1/5")->required();

    app.add_subcommand("gaps", "List customer-satisfaction strategies with no relevant DfX");

    std::vector<std::string> filters;
    auto* catalog = app.add_subcommand("catalog", "Query the DfX catalog");
    catalog->add_option("--filter", filters, "field=value (name, scope, character, focus, goal); repeatable");

    app.add_subcommand("validate-fig10", "Check the bundled published weight table");

    std::string host = "127.0.0.1";
    int port = 8080;
    std::string journal;
    auto* serve = app.add_subcommand("serve", "Run the HTTP decision service");
    serve->add_option("--host", host, "Bind address");
    serve->add_option("--port", port, "Port");
    serve->add_option("--journal", journal, "Append-only session journal (replayed at start)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitInvalid;
    }

    std::ostringstream buffer;
    std::ostream& sink = cfg.out.empty() ? out : buffer;
    int code = kExitOk;
    try {
        Context ctx(cfg);
        if (*solve) code = cmd_solve(ctx, sink, err);
        else if (*prune_cmd) code = cmd_prune(ctx, sink, err);
        else if (*whatif) {
            edit.judgment = Judgment::parse(value);
            try {
                code = cmd_whatif(ctx, edit, sink, err);
            } catch (const Error& e) {
                throw ctx.anchored(e);
            }
        } else if (app.got_subcommand("gaps")) code = cmd_gaps(ctx, sink);
        else if (*catalog) code = cmd_catalog(ctx, filters, sink);
        else if (app.got_subcommand("validate-fig10")) code = cmd_validate_fig10(ctx, sink);
        else if (*serve) code = cmd_serve(ctx, host, port, journal, err);
    } catch (const Error& e) {
        err << "error: " << format_error(e) << "\n";
        return kExitInvalid;
    }

    if (!cfg.out.empty()) {
        std::ofstream file(cfg.out, std::ios::binary);
        if (!file) {
            err << "error: cannot write '" << cfg.out << "'\n";
            return kExitInvalid;
        }
        file << buffer.str();
    }
    return code;
}

}  // namespace dfx_ahp::cli
