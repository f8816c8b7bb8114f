#include "dfx_ahp/synthesis.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

using namespace dfx_ahp;

namespace {

PriorityResult pr(std::vector<double> w) { return {std::move(w), 0.0, 0, 0.0}; }

HierarchyDocument two_criteria(Judgment criteria) {
    HierarchyDocument doc;
    doc.goal = "G";
    doc.layers = {{"criteria", {{"c1", "G"}, {"c2", "G"}}}};
    doc.alternatives = {"A", "B"};
    doc.judgments = {{"G", "c1", "c2", criteria}, {"c1", "A", "B", Judgment(3, true)}, {"c2", "A", "B", Judgment(9)}};
    return doc;
}

double sum(const std::vector<NamedWeight>& ws) {
    double s = 0.0;
    for (const auto& w : ws) s += w.weight;
    return s;
}

}  // namespace

TEST(Synthesis, TwoCriteriaHandArithmetic) {
    HierarchyDocument doc;
    doc.goal = "G";
    doc.layers = {{"criteria", {{"c1", "G"}, {"c2", "G"}}}};
    doc.alternatives = {"A", "B"};
    const auto h = build_hierarchy(doc);
    const auto w = synthesize(h, {{"G", pr({0.6, 0.4})}, {"c1", pr({0.5, 0.5})}, {"c2", pr({0.9, 0.1})}});
    EXPECT_NEAR(w.alternatives[0].weight, 0.66, 1e-15);
    EXPECT_NEAR(w.alternatives[1].weight, 0.34, 1e-15);
    EXPECT_NEAR(w.breakdown[0][0], 0.30, 1e-15);
    EXPECT_NEAR(w.breakdown[0][1], 0.36, 1e-15);
    EXPECT_EQ(w.ranking().front().name, "A");
}

TEST(Synthesis, SingleCriterionIsIdentity) {
    HierarchyDocument doc{"G", {{"c", {{"only", "G"}}}}, {"A", "B", "C"}, {}};
    const auto h = build_hierarchy(doc);
    const auto w = synthesize(h, {{"only", pr({0.2, 0.5, 0.3})}});
    EXPECT_EQ(w.alternatives[0].weight, 0.2);
    EXPECT_EQ(w.alternatives[1].weight, 0.5);
    EXPECT_EQ(w.alternatives[2].weight, 0.3);
}

TEST(Synthesis, MissingOrMisshapenLocalPriorities) {
    HierarchyDocument doc;
    doc.goal = "G";
    doc.layers = {{"criteria", {{"c1", "G"}, {"c2", "G"}}}};
    doc.alternatives = {"A", "B"};
    const auto h = build_hierarchy(doc);
    try {
        synthesize(h, {{"G", pr({0.6, 0.4})}, {"c1", pr({0.5, 0.5})}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MissingContext);
    }
    try {
        synthesize(h, {{"G", pr({0.6, 0.4})}, {"c1", pr({0.5, 0.5})}, {"c2", pr({1.0})}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    }
}

TEST(Synthesis, RandomHierarchyProperties) {
    fixtures::Rng rng(77);
    for (int trial = 0; trial < 60; ++trial) {
        const auto doc = fixtures::random_document(rng, 1 + static_cast<std::size_t>(trial) % 3);
        const auto m = solve(doc);
        const auto& w = m.weights;
        EXPECT_NEAR(sum(w.alternatives), 1.0, 1e-9);
        for (const auto& layer : w.criteria) EXPECT_NEAR(sum(layer), 1.0, 1e-9);

        // Breakdown columns add up to each leaf's global weight.
        for (std::size_t l = 0; l < w.leaf_weights.size(); ++l) {
            double col = 0.0;
            for (const auto& row : w.breakdown) col += row[l];
            EXPECT_NEAR(col, w.leaf_weights[l], 1e-9);
        }
        // Globals are convex combinations of each alternative's local priorities.
        for (std::size_t a = 0; a < w.alternatives.size(); ++a) {
            double lo = 1.0, hi = 0.0;
            for (const auto& leaf : w.leaf_criteria) {
                const double p = m.contexts.at(leaf).priorities.priorities[a];
                lo = std::min(lo, p);
                hi = std::max(hi, p);
            }
            EXPECT_GE(w.alternatives[a].weight, lo - 1e-12);
            EXPECT_LE(w.alternatives[a].weight, hi + 1e-12);
        }
    }
}

TEST(Solve, BuildMatricesReportsRecordPointers) {
    auto doc = two_criteria(Judgment(2));
    doc.judgments.push_back({"c1", "B", "A", Judgment(5)});
    try {
        solve(doc);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ConflictingJudgment);
        EXPECT_EQ(e.details()["pointer"], "/judgments/3");
    }
    doc = two_criteria(Judgment(2));
    doc.judgments.push_back({"nowhere", "A", "B", Judgment(5)});
    try {
        solve(doc);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnknownContext);
        EXPECT_EQ(e.details()["pointer"], "/judgments/3");
    }
    doc = two_criteria(Judgment(2));
    doc.judgments.push_back({"c1", "A", "Z", Judgment(5)});
    try {
        solve(doc);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnknownNode);
        EXPECT_EQ(e.details()["pointer"], "/judgments/3");
    }
    doc = two_criteria(Judgment(2));
    doc.judgments.pop_back();
    try {
        solve(doc);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MissingPair);
    }
    SolveOptions lenient;
    lenient.completion = CompletionMode::Lenient;
    EXPECT_THROW(solve(doc, lenient), Error);  // a 2x2 with no judgment has no path to impute from
}

TEST(Prune, ThresholdArithmetic) {
    GlobalWeights w;
    w.criteria = {{{"a", 0.9}, {"b", 0.05}, {"c", 0.05}}};
    w.alternatives = {{"x", 0.5}, {"y", 0.3}, {"z", 0.2}};
    const auto out = prune(w, ThresholdPolicy{0.5});
    EXPECT_EQ(out.retained_criteria, (std::vector<std::string>{"a"}));
    ASSERT_EQ(out.eliminated_criteria.size(), 2u);
    EXPECT_EQ(out.eliminated_criteria[0].weight, 0.05);
    EXPECT_EQ(out.retained_alternatives, (std::vector<std::string>{"x", "y", "z"}));
    EXPECT_EQ(out.policy, "threshold(theta=0.5)");
}

TEST(Prune, UniformWeightsKeepEverything) {
    GlobalWeights w;
    w.criteria = {{{"a", 1.0 / 3}, {"b", 1.0 / 3}, {"c", 1.0 / 3}}};
    w.alternatives = {{"x", 0.25}, {"y", 0.25}, {"z", 0.25}, {"v", 0.25}};
    for (double theta : {0.5, 1.0}) {
        const auto out = prune(w, ThresholdPolicy{theta});
        EXPECT_TRUE(out.eliminated_criteria.empty());
        EXPECT_TRUE(out.eliminated_alternatives.empty());
    }
}

TEST(Prune, Errors) {
    GlobalWeights w;
    w.criteria = {{{"a", 0.5}, {"b", 0.5}}};
    w.alternatives = {{"x", 0.9}, {"y", 0.1}};
    for (double theta : {0.0, -0.1, 1.5}) {
        try {
            prune(w, ThresholdPolicy{theta});
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
        }
    }
    try {
        prune(w, ThresholdPolicy{1.0});  // y falls below 1/2
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptyRetention);
    }
    try {
        prune(w, ExplicitListPolicy{"p", {"a"}, {"x", "q"}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnknownNode);
    }
    const auto out = prune(w, ExplicitListPolicy{"p", {"b"}, {"y", "x"}});
    EXPECT_EQ(out.retained_alternatives, (std::vector<std::string>{"x", "y"}));
    EXPECT_EQ(out.policy, "explicit-list(p)");
}

TEST(Rerun, NothingPrunedIsBitIdentical) {
    fixtures::Rng rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        const auto doc = fixtures::random_document(rng, 2);
        const auto model = solve(doc);
        std::vector<std::string> top, alts;
        for (const auto& c : model.weights.criteria.front()) top.push_back(c.name);
        alts = doc.alternatives;
        const auto again = rerun_after_prune(model, prune(model.weights, ExplicitListPolicy{"all", top, alts}));
        ASSERT_EQ(again.weights.alternatives.size(), model.weights.alternatives.size());
        for (std::size_t a = 0; a < alts.size(); ++a)
            EXPECT_EQ(again.weights.alternatives[a].weight, model.weights.alternatives[a].weight);
        EXPECT_EQ(again.weights.breakdown, model.weights.breakdown);
    }
}

TEST(Rerun, ConsistentSubmatrixGivesRenormalizedWeights) {
    // One criterion, alternatives judged from weights (8, 4, 2, 1).
    HierarchyDocument doc{"G", {{"c", {{"only", "G"}}}}, {"A", "B", "C", "D"}, {}};
    const double w[] = {8, 4, 2, 1};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j)
            doc.judgments.push_back({"only", doc.alternatives[i], doc.alternatives[j], Judgment(static_cast<int>(w[i] / w[j]))});
    const auto model = solve(doc);
    const auto out = prune(model.weights, ExplicitListPolicy{"drop-b", {"only"}, {"A", "C", "D"}});
    const auto rerun = rerun_after_prune(model, out);
    EXPECT_NEAR(rerun.weights.alternatives[0].weight, 8.0 / 11, 1e-12);
    EXPECT_NEAR(rerun.weights.alternatives[1].weight, 2.0 / 11, 1e-12);
    EXPECT_NEAR(rerun.weights.alternatives[2].weight, 1.0 / 11, 1e-12);
}

TEST(Rerun, RetainedWeightsRenormalize) {
    fixtures::Rng rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        const auto doc = fixtures::random_document(rng, 2, 4, 7);
        const auto model = solve(doc);
        PruneOutcome out;
        try {
            out = prune(model.weights, ThresholdPolicy{0.8});
        } catch (const Error&) {
            continue;  // too few survivors for this draw
        }
        const auto rerun = rerun_after_prune(model, out);
        EXPECT_NEAR(sum(rerun.weights.alternatives), 1.0, 1e-9);
        EXPECT_EQ(rerun.hierarchy.alternatives(), out.retained_alternatives);
        // Same result from the document path.
        const auto again = rerun_after_prune(doc, out);
        for (std::size_t a = 0; a < out.retained_alternatives.size(); ++a)
            EXPECT_EQ(again.weights.alternatives[a].weight, rerun.weights.alternatives[a].weight);
    }
}

TEST(WhatIf, IdempotentEditGivesEmptyDelta) {
    const auto model = solve(two_criteria(Judgment(2)));
    const auto d = what_if(model, {"G", "c1", "c2", Judgment(2)});
    EXPECT_TRUE(d.empty());
    EXPECT_FALSE(d.ranking_changed());
    // Restating the pair from the other side is the same edit.
    EXPECT_TRUE(what_if(model, {"G", "c2", "c1", Judgment(2, true)}).empty());
}

TEST(WhatIf, FlippingCriterionJudgmentSwapsWinner) {
    const auto model = solve(two_criteria(Judgment(2)));
    EXPECT_EQ(model.weights.ranking().front().name, "B");
    const auto d = what_if(model, {"G", "c1", "c2", Judgment(2, true)});
    EXPECT_TRUE(d.ranking_changed());
    EXPECT_EQ(d.new_ranking.front().name, "A");
    EXPECT_EQ(d.old_ranking.front().name, "B");
    ASSERT_EQ(d.changes.size(), 2u);
    // Matches a from-scratch solve of the edited document.
    const auto full = solve(two_criteria(Judgment(2, true)));
    EXPECT_NEAR(d.new_ranking.front().weight, full.weights.ranking().front().weight, 1e-12);
    // The model itself is untouched.
    EXPECT_EQ(model.weights.ranking().front().name, "B");
    EXPECT_EQ(model.contexts.at("G").matrix.judgment(0, 1), Judgment(2));
}

TEST(WhatIf, InconsistentEditIsFlagged) {
    HierarchyDocument doc{"G", {{"c", {{"only", "G"}}}}, {"A", "B", "C"}, {}};
    doc.judgments = {{"only", "A", "B", Judgment(2)}, {"only", "B", "C", Judgment(2)}, {"only", "A", "C", Judgment(4)}};
    const auto model = solve(doc);
    EXPECT_TRUE(model.all_consistent());
    const auto d = what_if(model, {"only", "A", "C", Judgment(4, true)});
    EXPECT_FALSE(d.consistency.pass);
    EXPECT_GE(d.consistency.cr, 0.10);
    try {
        what_if(model, {"nowhere", "A", "C", Judgment(3)});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnknownContext);
    }
}

TEST(WhatIf, IncrementalEqualsFullSolve) {
    fixtures::Rng rng(909);
    for (int trial = 0; trial < 50; ++trial) {
        auto doc = fixtures::random_document(rng, 1 + static_cast<std::size_t>(trial) % 2);
        const auto model = solve(doc);
        auto& rec = doc.judgments[rng() % doc.judgments.size()];
        const JudgmentEdit edit{rec.context, rec.row, rec.col, fixtures::random_judgment(rng)};
        const auto after = apply_edit(model, edit);
        rec.judgment = edit.judgment;
        const auto full = solve(doc);
        const auto a = after.weights.ranking(), b = full.weights.ranking();
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t k = 0; k < a.size(); ++k) {
            EXPECT_EQ(a[k].name, b[k].name);
            EXPECT_NEAR(a[k].weight, b[k].weight, 1e-9);
        }
    }
}

TEST(WhatIf, ImputedMatrixIsRebuilt) {
    HierarchyDocument doc{"G", {{"c", {{"only", "G"}}}}, {"A", "B", "C"}, {}};
    doc.judgments = {{"only", "A", "B", Judgment(3)}, {"only", "B", "C", Judgment(2)}};
    SolveOptions lenient;
    lenient.completion = CompletionMode::Lenient;
    const auto model = solve(doc, lenient);
    EXPECT_TRUE(model.contexts.at("only").matrix.imputed());
    const auto after = apply_edit(model, {"only", "A", "B", Judgment(1)});
    EXPECT_NEAR(after.contexts.at("only").matrix(0, 2), 2.0, 1e-12);
    // Judging the imputed pair makes the matrix complete.
    const auto judged = apply_edit(model, {"only", "A", "C", Judgment(6)});
    EXPECT_FALSE(judged.contexts.at("only").matrix.imputed());
}
