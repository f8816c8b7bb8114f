#include "dfx_ahp/http_server.hpp"
#include "dfx_ahp/service.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <thread>

using namespace dfx_ahp;
using nlohmann::json;

namespace {

const std::string kGoal = "Select DfX for a wearable demo";

std::shared_ptr<const KnowledgeBase> kb() {
    static const auto k = std::make_shared<const KnowledgeBase>(load_catalog_dir(fixtures::data_dir()));
    return k;
}

std::shared_ptr<const PresetRegistry> presets() {
    static const auto r = std::make_shared<const PresetRegistry>(fixtures::data_file("presets"), kb());
    return r;
}

HierarchyDocument demo_doc() { return load_document(fixtures::data_file("demo/demo_hierarchy.json")); }

json demo_without_judgments() {
    auto doc = demo_doc();
    doc.judgments.clear();
    return {{"document", to_json(doc)}};
}

std::string create(ServiceApi& api, const json& body) {
    const auto r = api.dispatch("POST", "/sessions", {}, body.dump());
    EXPECT_EQ(r.status, 201) << r.body.dump();
    return r.body.at("session").get<std::string>();
}

json judgment_body(const JudgmentRecord& rec) {
    return {{"context", rec.context}, {"row", rec.row}, {"col", rec.col}, {"grade", rec.judgment.grade()},
            {"inverted", rec.judgment.inverted()}};
}

std::string temp_path(const std::string& stem) {
    static std::atomic<int> counter{0};
    return (std::filesystem::temp_directory_path() /
            (stem + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + ".jsonl"))
        .string();
}

}  // namespace

TEST(Service, PresetsAndCatalog) {
    ServiceApi api(kb(), presets());
    auto r = api.dispatch("GET", "/presets");
    ASSERT_EQ(r.status, 200);
    EXPECT_EQ(r.body.size(), 4u);
    r = api.dispatch("GET", "/catalog", {{"focus", "External"}});
    ASSERT_EQ(r.status, 200);
    EXPECT_GT(r.body.at("count").get<int>(), 0);
    for (const auto& e : r.body.at("entries")) EXPECT_EQ(e.at("focus"), "External");
    r = api.dispatch("GET", "/catalog", {{"colour", "red"}});
    EXPECT_EQ(r.status, 400);
    EXPECT_EQ(r.body.at("code"), "UnknownFilterField");
    r = api.dispatch("GET", "/catalog/gaps");
    ASSERT_EQ(r.status, 200);
    EXPECT_EQ(r.body.at("gap_count"), 7);
    EXPECT_EQ(r.body.at("strategy_count"), 20);
    EXPECT_EQ(r.body.at("strategies").size(), 20u);
}

TEST(Service, UnknownRoutesAndIds) {
    ServiceApi api(kb(), presets());
    EXPECT_EQ(api.dispatch("GET", "/nothing").status, 404);
    EXPECT_EQ(api.dispatch("DELETE", "/sessions").status, 404);
    auto r = api.dispatch("GET", "/sessions/s99");
    EXPECT_EQ(r.status, 404);
    EXPECT_EQ(r.body.at("code"), "UnknownSession");
    r = api.dispatch("POST", "/sessions", {}, R"({"template":"nope"})");
    EXPECT_EQ(r.status, 404);
    EXPECT_EQ(r.body.at("code"), "UnknownPreset");
    r = api.dispatch("POST", "/sessions", {}, "{not json");
    EXPECT_EQ(r.status, 400);
    EXPECT_EQ(r.body.at("code"), "SchemaViolation");
}

TEST(Service, TemplateSessionIsCompleteAndFlagged) {
    ServiceApi api(kb(), presets());
    const auto id = create(api, {{"template", "wearable-health-sensor"}});
    auto r = api.dispatch("GET", "/sessions/" + id);
    ASSERT_EQ(r.status, 200);
    EXPECT_TRUE(r.body.at("illustrative").get<bool>());
    EXPECT_TRUE(r.body.at("complete").get<bool>());
    EXPECT_EQ(r.body.at("contexts").size(), 76u);
    r = api.dispatch("GET", "/sessions/" + id + "/results");
    ASSERT_EQ(r.status, 200);
    EXPECT_EQ(r.body.at("weights").at("alternatives").size(), 50u);
}

TEST(Service, IncrementalJudgmentsReportLiveConsistency) {
    ServiceApi api(kb(), presets());
    const auto id = create(api, demo_without_judgments());
    auto r = api.dispatch("GET", "/sessions/" + id);
    EXPECT_FALSE(r.body.at("complete").get<bool>());
    EXPECT_EQ(r.body.at("incomplete_contexts").size(), 10u);

    r = api.dispatch("GET", "/sessions/" + id + "/results");
    EXPECT_EQ(r.status, 409);
    EXPECT_EQ(r.body.at("code"), "ContextsIncomplete");
    EXPECT_EQ(r.body.at("details").at("contexts").size(), 10u);

    const auto doc = demo_doc();
    std::uint64_t revision = 0;
    for (const auto& rec : doc.judgments) {
        auto body = judgment_body(rec);
        body["expected_revision"] = revision;
        r = api.dispatch("PUT", "/sessions/" + id + "/judgments", {}, body.dump());
        ASSERT_EQ(r.status, 200) << r.body.dump();
        revision = r.body.at("revision").get<std::uint64_t>();
        const auto& ctx = r.body.at("contexts").at(0);
        EXPECT_EQ(ctx.at("context"), rec.context);
        if (ctx.at("judged") == ctx.at("required")) {
            EXPECT_EQ(ctx.at("status"), "complete");
            EXPECT_TRUE(ctx.at("consistency").at("cr").is_number());
        } else {
            EXPECT_EQ(ctx.at("status"), "pending");
            EXPECT_EQ(ctx.at("consistency"), "pending");
        }
    }
    EXPECT_EQ(revision, doc.judgments.size());

    r = api.dispatch("GET", "/sessions/" + id + "/results");
    ASSERT_EQ(r.status, 200);
    const auto expected = solve(doc);
    const auto& alts = r.body.at("weights").at("alternatives");
    double sum = 0.0;
    for (std::size_t a = 0; a < alts.size(); ++a) {
        EXPECT_NEAR(alts[a].at("weight").get<double>(), expected.weights.alternatives[a].weight, 1e-12);
        sum += alts[a].at("weight").get<double>();
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
}

TEST(Service, BatchSubmissionAndErrors) {
    ServiceApi api(kb(), presets());
    const auto id = create(api, demo_without_judgments());
    const auto doc = demo_doc();
    json batch = {{"judgments", json::array()}};
    for (const auto& rec : doc.judgments) batch["judgments"].push_back(judgment_body(rec));
    auto r = api.dispatch("POST", "/sessions/" + id + "/judgments", {}, batch.dump());
    ASSERT_EQ(r.status, 200);
    EXPECT_EQ(r.body.at("revision"), 1);
    EXPECT_EQ(r.body.at("contexts").size(), 10u);

    r = api.dispatch("PUT", "/sessions/" + id + "/judgments", {},
                     json{{"context", kGoal}, {"row", "reliability and stability"}, {"col", "security and privacy"},
                          {"value", "1/3"}, {"expected_revision", 0}}
                         .dump());
    EXPECT_EQ(r.status, 409);
    EXPECT_EQ(r.body.at("code"), "StaleRevision");
    EXPECT_EQ(r.body.at("details").at("revision"), 1);

    r = api.dispatch("PUT", "/sessions/" + id + "/judgments", {},
                     json{{"context", kGoal}, {"row", "reliability and stability"}, {"col", "security and privacy"},
                          {"grade", 12}}
                         .dump());
    EXPECT_EQ(r.status, 400);
    EXPECT_EQ(r.body.at("code"), "OutOfScale");

    r = api.dispatch("PUT", "/sessions/" + id + "/judgments", {},
                     json{{"context", "nowhere"}, {"row", "a"}, {"col", "b"}, {"grade", 2}}.dump());
    EXPECT_EQ(r.body.at("code"), "UnknownContext");

    r = api.dispatch("PUT", "/sessions/" + id + "/judgments", {},
                     json{{"judgments", {{{"context", kGoal}, {"row", "reliability and stability"}}}}}.dump());
    EXPECT_EQ(r.status, 400);
    EXPECT_EQ(r.body.at("details").at("pointer"), "/judgments/0/col");
    EXPECT_EQ(api.dispatch("GET", "/sessions/" + id).body.at("revision"), 1);
}

TEST(Service, WhatIfIsNonMutatingAndIdempotent) {
    ServiceApi api(kb(), presets());
    const auto id = create(api, {{"template", "demo"}});
    const json edit = {{"context", kGoal}, {"row", "reliability and stability"}, {"col", "security and privacy"}, {"value", "1/3"}};
    const auto before = api.dispatch("GET", "/sessions/" + id + "/results").body;
    const auto first = api.dispatch("POST", "/sessions/" + id + "/whatif", {}, edit.dump());
    ASSERT_EQ(first.status, 200) << first.body.dump();
    const auto second = api.dispatch("POST", "/sessions/" + id + "/whatif", {}, edit.dump());
    EXPECT_EQ(first.body, second.body);
    EXPECT_TRUE(first.body.at("ranking_changed").get<bool>());
    EXPECT_EQ(first.body.at("new_ranking").at(0).at("name"), "Testability");
    EXPECT_EQ(first.body.at("revision"), 0);
    EXPECT_EQ(api.dispatch("GET", "/sessions/" + id + "/results").body, before);

    const auto model = solve(demo_doc());
    const auto local = what_if(model, edit_from_json(edit));
    for (std::size_t k = 0; k < local.new_ranking.size(); ++k)
        EXPECT_EQ(first.body.at("new_ranking").at(k).at("weight").get<double>(), local.new_ranking[k].weight);
}

TEST(Service, SessionsAreIsolated) {
    ServiceApi api(kb(), presets());
    const auto a = create(api, {{"template", "demo"}});
    const auto b = create(api, {{"template", "demo"}});
    EXPECT_NE(a, b);
    const auto before = api.dispatch("GET", "/sessions/" + b + "/results").body;
    const json edit = {{"context", kGoal}, {"row", "reliability and stability"}, {"col", "security and privacy"}, {"value", 9}};
    ASSERT_EQ(api.dispatch("PUT", "/sessions/" + a + "/judgments", {}, edit.dump()).status, 200);
    EXPECT_EQ(api.dispatch("GET", "/sessions/" + b + "/results").body, before);
    EXPECT_NE(api.dispatch("GET", "/sessions/" + a + "/results").body.at("weights"), before.at("weights"));
}

TEST(Service, ConcurrentSubmissionsAllLand) {
    ServiceApi api(kb(), presets());
    const auto id = create(api, {{"template", "demo"}});
    const json edit = {{"context", kGoal}, {"row", "reliability and stability"}, {"col", "security and privacy"}, {"value", 3}};
    std::vector<std::thread> threads;
    for (int t = 0; t < 8; ++t)
        threads.emplace_back([&] {
            for (int k = 0; k < 10; ++k) api.dispatch("PUT", "/sessions/" + id + "/judgments", {}, edit.dump());
        });
    for (auto& t : threads) t.join();
    EXPECT_EQ(api.dispatch("GET", "/sessions/" + id).body.at("revision"), 80);
}

TEST(Service, JournalReplayRestoresSessions) {
    const auto path = temp_path("dfx-ahp-journal");
    json results;
    {
        ServiceApi api(kb(), presets(), {}, path);
        const auto id = create(api, {{"template", "demo"}});
        create(api, demo_without_judgments());
        const json edit = {{"context", kGoal}, {"row", "reliability and stability"}, {"col", "security and privacy"}, {"value", "1/5"}};
        ASSERT_EQ(api.dispatch("PUT", "/sessions/" + id + "/judgments", {}, edit.dump()).status, 200);
        results = api.dispatch("GET", "/sessions/" + id + "/results").body;
    }
    ServiceApi restored(kb(), presets(), {}, path);
    EXPECT_EQ(restored.dispatch("GET", "/sessions/s1/results").body, results);
    EXPECT_EQ(restored.dispatch("GET", "/sessions/s2").body.at("complete"), false);
    EXPECT_EQ(create(restored, {{"template", "demo"}}), "s3");
    std::filesystem::remove(path);
}

TEST(Service, HttpRoundTrip) {
    ServiceApi api(kb(), presets());
    httplib::Server server;
    bind_routes(server, api);
    const int port = server.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port, 0);
    std::thread worker([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    httplib::Client client("127.0.0.1", port);
    auto res = client.Post("/sessions", R"({"template":"demo"})", "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 201);
    EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "*");
    const auto id = json::parse(res->body).at("session").get<std::string>();
    res = client.Get("/sessions/" + id + "/results");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    EXPECT_EQ(json::parse(res->body).at("weights").at("ranking").at(0).at("name"), "Reliability");
    res = client.Get("/catalog?scope=Product&focus=External");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    res = client.Get("/sessions/zzz");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 404);

    server.stop();
    worker.join();
}
