#pragma once

#include "dfx_ahp/comparison_matrix.hpp"
#include "dfx_ahp/hierarchy.hpp"
#include "dfx_ahp/priority.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#ifndef DFX_AHP_TEST_DATA_DIR
#define DFX_AHP_TEST_DATA_DIR "data"
#endif

namespace dfx_ahp::fixtures {

inline std::string data_dir() { return DFX_AHP_TEST_DATA_DIR; }
inline std::string data_file(const std::string& rel) { return data_dir() + "/" + rel; }

using Rng = std::mt19937_64;

/// Positive weights spanning roughly two orders of magnitude.
inline std::vector<double> random_weights(Rng& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-2.3, 2.3);
    std::vector<double> w(n);
    for (auto& x : w) x = std::exp(u(rng));
    return w;
}

inline std::vector<double> normalized(std::vector<double> w) {
    double s = 0.0;
    for (double x : w) s += x;
    for (double& x : w) x /= s;
    return w;
}

inline DenseMatrix ratio_matrix(const std::vector<double>& w) {
    DenseMatrix m(w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        for (std::size_t j = 0; j < w.size(); ++j) m(i, j) = w[i] / w[j];
    return m;
}

inline Judgment random_judgment(Rng& rng) {
    std::uniform_int_distribution<int> grade(1, 9);
    std::bernoulli_distribution flip(0.5);
    return Judgment(grade(rng), flip(rng));
}

/// Every upper-triangle pair of an n x n matrix, with random scale values.
inline std::vector<PairJudgment> random_pairs(Rng& rng, std::size_t n) {
    std::vector<PairJudgment> out;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) out.push_back({i, j, random_judgment(rng)});
    return out;
}

inline std::vector<std::string> labels(std::size_t n, const std::string& prefix = "e") {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

inline ComparisonMatrix random_matrix(Rng& rng, std::size_t n) {
    return matrix_from_judgments("ctx", labels(n), random_pairs(rng, n));
}

/// Full judgment records for one context with random scale values.
inline void append_random_judgments(Rng& rng, std::vector<JudgmentRecord>& out, const std::string& context,
                                    const std::vector<std::string>& children) {
    for (std::size_t i = 0; i < children.size(); ++i)
        for (std::size_t j = i + 1; j < children.size(); ++j)
            out.push_back({context, children[i], children[j], random_judgment(rng)});
}

/// Random complete document with `criteria_layers` layers between goal and
/// alternatives. Parents get 1..max_children children; 2..max_alternatives
/// alternatives.
inline HierarchyDocument random_document(Rng& rng, std::size_t criteria_layers, std::size_t max_children = 4,
                                         std::size_t max_alternatives = 6) {
    std::uniform_int_distribution<std::size_t> kids(1, max_children);
    std::uniform_int_distribution<std::size_t> alts(2, max_alternatives);
    HierarchyDocument doc;
    doc.goal = "goal";
    std::vector<std::string> parents{doc.goal};
    std::map<std::string, std::vector<std::string>> children;
    for (std::size_t k = 0; k < criteria_layers; ++k) {
        LayerSpec layer{"layer" + std::to_string(k + 1), {}};
        std::vector<std::string> next;
        for (const auto& p : parents) {
            const std::size_t c = kids(rng);
            for (std::size_t i = 0; i < c; ++i) {
                std::string name = "c" + std::to_string(k + 1) + "_" + std::to_string(next.size());
                layer.nodes.push_back({name, p});
                children[p].push_back(name);
                next.push_back(name);
            }
        }
        doc.layers.push_back(layer);
        parents = next;
    }
    doc.alternatives = labels(alts(rng), "alt");
    for (const auto& [parent, kids_of] : children)
        if (kids_of.size() >= 2) append_random_judgments(rng, doc.judgments, parent, kids_of);
    for (const auto& leaf : parents) append_random_judgments(rng, doc.judgments, leaf, doc.alternatives);
    return doc;
}

/// Spearman rank correlation (no tie correction; ties get average ranks).
inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    auto ranks = [](const std::vector<double>& v) {
        std::vector<std::size_t> idx(v.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](auto x, auto y) { return v[x] < v[y]; });
        std::vector<double> r(v.size());
        for (std::size_t i = 0; i < idx.size();) {
            std::size_t j = i;
            while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
            for (std::size_t k = i; k <= j; ++k) r[idx[k]] = (static_cast<double>(i + j) / 2.0) + 1.0;
            i = j + 1;
        }
        return r;
    };
    const auto ra = ranks(a), rb = ranks(b);
    const double n = static_cast<double>(a.size());
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += ra[i];
        mb += rb[i];
    }
    ma /= n;
    mb /= n;
    double cov = 0, va = 0, vb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        cov += (ra[i] - ma) * (rb[i] - mb);
        va += (ra[i] - ma) * (ra[i] - ma);
        vb += (rb[i] - mb) * (rb[i] - mb);
    }
    if (va == 0.0 && vb == 0.0) return 1.0;
    return cov / std::sqrt(va * vb);
}

}  // namespace dfx_ahp::fixtures
