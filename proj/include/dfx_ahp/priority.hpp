#pragma once

#include "dfx_ahp/comparison_matrix.hpp"
#include "dfx_ahp/error.hpp"

#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <random>
#include <tuple>
#include <vector>

namespace dfx_ahp {

/// Anything indexable as a square matrix of doubles.
template <class M>
concept SquareMatrix = requires(const M& m, std::size_t i) {
    { m.order() } -> std::convertible_to<std::size_t>;
    { m(i, i) } -> std::convertible_to<double>;
};

/// Row-major dense matrix, used for generated and intermediate matrices.
class DenseMatrix {
public:
    DenseMatrix() = default;
    explicit DenseMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}
    DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) : n_(rows.size()) {
        data_.reserve(n_ * n_);
        for (const auto& r : rows) {
            if (r.size() != n_) throw Error(ErrorCode::DimensionMismatch, "DenseMatrix rows must be square");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }
    template <SquareMatrix M>
    static DenseMatrix from(const M& m) {
        DenseMatrix d(m.order());
        for (std::size_t i = 0; i < d.n_; ++i)
            for (std::size_t j = 0; j < d.n_; ++j) d(i, j) = m(i, j);
        return d;
    }

    std::size_t order() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

struct PriorityResult {
    std::vector<double> priorities;
    double lambda_max = 0.0;
    std::size_t iterations = 0;
    double residual = 0.0;  // ||Mw - lambda w||_1
};

struct PowerIterationOptions {
    double tolerance = 1e-12;
    std::size_t max_iterations = 10'000;
};

namespace detail {

template <SquareMatrix M>
void multiply(const M& m, const std::vector<double>& w, std::vector<double>& out) {
    const std::size_t n = m.order();
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += m(i, j) * w[j];
        out[i] = s;
    }
}

inline double l1_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
}

}  // namespace detail

/// Priority vector of a positive matrix via power iteration.
///
/// Starts from the uniform vector and L1-normalizes each step until two
/// successive iterates differ by less than `tolerance` in L1. lambda_max is
/// the Rayleigh quotient w'(Mw) / w'w at the final iterate.
template <SquareMatrix M>
PriorityResult principal_eigenvector(const M& m, PowerIterationOptions options = {}) {
    const std::size_t n = m.order();
    if (n == 0) throw Error(ErrorCode::DimensionMismatch, "empty matrix");
    if (!(options.tolerance > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");

    PriorityResult result;
    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n);
    bool converged = false;
    while (result.iterations < options.max_iterations) {
        detail::multiply(m, w, next);
        const double norm = detail::l1_norm(next);
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            next[i] /= norm;
            change += std::abs(next[i] - w[i]);
        }
        w.swap(next);
        ++result.iterations;
        if (change < options.tolerance) {
            converged = true;
            break;
        }
    }

    detail::multiply(m, w, next);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += w[i] * next[i];
        den += w[i] * w[i];
    }
    result.lambda_max = num / den;
    for (std::size_t i = 0; i < n; ++i) result.residual += std::abs(next[i] - result.lambda_max * w[i]);
    if (!converged && result.residual > options.tolerance) {
        throw Error(ErrorCode::NoConvergence,
                    "power iteration did not converge in " + std::to_string(options.max_iterations) + " iterations",
                    {{"iterations", result.iterations}, {"residual", result.residual}});
    }
    result.priorities = std::move(w);
    return result;
}

/// Row geometric mean priorities. Cross-check only; the eigenvector is canonical.
template <SquareMatrix M>
std::vector<double> geometric_mean_priorities(const M& m) {
    const std::size_t n = m.order();
    std::vector<double> g(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double log_sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) log_sum += std::log(m(i, j));
        g[i] = std::exp(log_sum / static_cast<double>(n));
        total += g[i];
    }
    for (double& x : g) x /= total;
    return g;
}

// ---------------------------------------------------------------------------
// Consistency

inline constexpr double kConsistencyThreshold = 0.10;

/// Saaty's random index for orders 1..10.
inline constexpr std::array<double, 11> kRandomIndexTable{0.0,  0.00, 0.00, 0.58, 0.90, 1.12,
                                                          1.24, 1.32, 1.41, 1.45, 1.49};

struct RandomIndexOptions {
    bool monte_carlo_fallback = true;  // used for orders beyond the table
    std::uint64_t seed = 20'160'101;
    std::size_t samples = 10'000;
};

/// Mean consistency index of `samples` random reciprocal matrices of order
/// `n` whose upper-triangle entries are drawn uniformly from the 17 scale
/// values 1/9..1/2, 1, 2..9.
inline double estimate_random_index(std::size_t n, std::uint64_t seed, std::size_t samples) {
    if (n < 3) return 0.0;
    if (samples == 0) throw Error(ErrorCode::InvalidArgument, "samples must be positive");
    static constexpr std::array<double, 17> scale{1.0 / 9, 1.0 / 8, 1.0 / 7, 1.0 / 6, 1.0 / 5, 1.0 / 4,
                                                  1.0 / 3, 1.0 / 2, 1.0,     2.0,     3.0,     4.0,
                                                  5.0,     6.0,     7.0,     8.0,     9.0};
    std::mt19937_64 rng(seed);
    DenseMatrix m(n, 1.0);
    double ci_sum = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double v = scale[rng() % scale.size()];
                m(i, j) = v;
                m(j, i) = 1.0 / v;
            }
        }
        const auto r = principal_eigenvector(m, {1e-10, 10'000});
        ci_sum += (r.lambda_max - static_cast<double>(n)) / static_cast<double>(n - 1);
    }
    return ci_sum / static_cast<double>(samples);
}

/// Random index for order `n`: the published table up to 10, a cached
/// seeded Monte-Carlo estimate beyond it.
inline double random_index(std::size_t n, const RandomIndexOptions& options = {}) {
    if (n < kRandomIndexTable.size()) return kRandomIndexTable[n];
    if (!options.monte_carlo_fallback) {
        throw Error(ErrorCode::UnsupportedOrder,
                    "no random index for order " + std::to_string(n) + " and Monte-Carlo fallback is disabled",
                    {{"order", n}});
    }
    static std::mutex mutex;
    static std::map<std::tuple<std::size_t, std::uint64_t, std::size_t>, double> cache;
    const auto key = std::make_tuple(n, options.seed, options.samples);
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    const double ri = estimate_random_index(n, options.seed, options.samples);
    std::lock_guard lock(mutex);
    return cache.emplace(key, ri).first->second;
}

struct ConsistencyReport {
    double ci = 0.0;
    double cr = 0.0;
    double random_index = 0.0;
    double threshold = kConsistencyThreshold;
    bool pass = true;
};

/// CI = (lambda_max - n)/(n - 1), CR = CI / RI(n); pass iff CR < 0.10.
/// Orders up to 2 are always consistent.
inline ConsistencyReport consistency(std::size_t order, const PriorityResult& result,
                                     const RandomIndexOptions& options = {}) {
    ConsistencyReport report;
    if (result.priorities.size() != order) {
        throw Error(ErrorCode::DimensionMismatch, "priority vector does not match matrix order");
    }
    if (order <= 2) return report;
    const double n = static_cast<double>(order);
    report.ci = (result.lambda_max - n) / (n - 1.0);
    report.random_index = random_index(order, options);
    report.cr = report.ci / report.random_index;
    report.pass = report.cr < report.threshold;
    return report;
}

template <SquareMatrix M>
ConsistencyReport consistency(const M& m, const PriorityResult& result, const RandomIndexOptions& options = {}) {
    return consistency(m.order(), result, options);
}

}  // namespace dfx_ahp
