#pragma once

#include "dfx_ahp/error.hpp"
#include "dfx_ahp/judgment.hpp"

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dfx_ahp {

/// A judgment placed at (row, col) of a matrix, by child index.
struct PairJudgment {
    std::size_t row = 0;
    std::size_t col = 0;
    Judgment judgment;
};

enum class CompletionMode {
    Strict,   // every pair must be judged
    Lenient,  // missing pairs are imputed from connecting paths
};

/// Positive reciprocal matrix for one comparison context.
///
/// Judged cells hold a Judgment (exact grade + direction). In lenient mode,
/// cells with no judgment hold an imputed real value; those are the only
/// floating point entries and the matrix reports `imputed() == true`.
class ComparisonMatrix {
public:
    ComparisonMatrix() = default;

    const std::string& context() const noexcept { return context_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    std::size_t order() const noexcept { return labels_.size(); }
    bool imputed() const noexcept { return imputed_count_ > 0; }
    std::size_t imputed_count() const noexcept { return imputed_count_; }

    /// The judgment at (i, j), or nullopt for an imputed cell.
    std::optional<Judgment> judgment(std::size_t i, std::size_t j) const {
        const auto& c = cells_[i * order() + j];
        if (c.judged) return c.judgment;
        return std::nullopt;
    }

    double operator()(std::size_t i, std::size_t j) const {
        const auto& c = cells_[i * order() + j];
        return c.judged ? c.judgment.value() : c.imputed;
    }

    /// Copy with (i, j) set to `j` and (j, i) to its reciprocal.
    ComparisonMatrix with_judgment(std::size_t i, std::size_t j, Judgment judgment) const {
        check_pair(i, j);
        ComparisonMatrix m = *this;
        if (!cells_[i * order() + j].judged) --m.imputed_count_;
        m.cells_[i * order() + j] = {true, judgment, 0.0};
        m.cells_[j * order() + i] = {true, judgment.reciprocal(), 0.0};
        return m;
    }

    /// Principal submatrix over `keep` (indices into labels(), in that order).
    ComparisonMatrix submatrix(std::span<const std::size_t> keep) const {
        ComparisonMatrix m;
        m.context_ = context_;
        const std::size_t n = keep.size();
        m.cells_.resize(n * n);
        for (std::size_t a = 0; a < n; ++a) {
            if (keep[a] >= order()) throw Error(ErrorCode::DimensionMismatch, "submatrix index out of range");
            m.labels_.push_back(labels_[keep[a]]);
            for (std::size_t b = 0; b < n; ++b) {
                m.cells_[a * n + b] = cells_[keep[a] * order() + keep[b]];
                if (a < b && !m.cells_[a * n + b].judged) ++m.imputed_count_;
            }
        }
        return m;
    }

    friend bool operator==(const ComparisonMatrix& a, const ComparisonMatrix& b) {
        if (a.context_ != b.context_ || a.labels_ != b.labels_) return false;
        for (std::size_t k = 0; k < a.cells_.size(); ++k) {
            const auto& x = a.cells_[k];
            const auto& y = b.cells_[k];
            if (x.judged != y.judged) return false;
            if (x.judged ? !(x.judgment == y.judgment) : x.imputed != y.imputed) return false;
        }
        return true;
    }

private:
    friend ComparisonMatrix matrix_from_judgments(std::string context, std::vector<std::string> children,
                                                  std::span<const PairJudgment> judgments, CompletionMode mode);

    struct Cell {
        bool judged = false;
        Judgment judgment;
        double imputed = 0.0;
    };

    void check_pair(std::size_t i, std::size_t j) const {
        if (i >= order() || j >= order() || i == j) {
            throw Error(ErrorCode::InvalidPair,
                        "pair (" + std::to_string(i) + ", " + std::to_string(j) + ") is not an off-diagonal cell of '" +
                            context_ + "'",
                        {{"context", context_}, {"row", i}, {"col", j}});
        }
    }

    std::string context_;
    std::vector<std::string> labels_;
    std::vector<Cell> cells_;
    std::size_t imputed_count_ = 0;  // number of imputed upper-triangle pairs
};

/// Builds the reciprocal matrix for `context` from a list of judgments.
///
/// Diagonal cells are 1 and every given judgment fills its reciprocal cell.
/// A pair may be repeated only with an equivalent value (either orientation);
/// otherwise ConflictingJudgment. In strict mode any unjudged pair is
/// MissingPair. In lenient mode unjudged pairs are filled, pass by pass, with
/// the geometric mean of a_ik * a_kj over every k that already connects them;
/// a pair that no path ever reaches is still MissingPair.
inline ComparisonMatrix matrix_from_judgments(std::string context, std::vector<std::string> children,
                                              std::span<const PairJudgment> judgments,
                                              CompletionMode mode = CompletionMode::Strict) {
    ComparisonMatrix m;
    m.context_ = std::move(context);
    m.labels_ = std::move(children);
    const std::size_t n = m.order();
    if (n < 2) {
        throw Error(ErrorCode::DimensionMismatch, "context '" + m.context_ + "' needs at least 2 children",
                    {{"context", m.context_}});
    }
    m.cells_.assign(n * n, {});
    for (std::size_t i = 0; i < n; ++i) m.cells_[i * n + i] = {true, Judgment::equal(), 0.0};

    for (const auto& pj : judgments) {
        m.check_pair(pj.row, pj.col);
        auto& cell = m.cells_[pj.row * n + pj.col];
        if (cell.judged) {
            if (!(cell.judgment == pj.judgment)) {
                throw Error(ErrorCode::ConflictingJudgment,
                            "context '" + m.context_ + "': pair (" + m.labels_[pj.row] + ", " + m.labels_[pj.col] +
                                ") judged both " + cell.judgment.to_string() + " and " + pj.judgment.to_string(),
                            {{"context", m.context_},
                             {"row", m.labels_[pj.row]},
                             {"col", m.labels_[pj.col]},
                             {"first", cell.judgment.to_string()},
                             {"second", pj.judgment.to_string()}});
            }
            continue;
        }
        cell = {true, pj.judgment, 0.0};
        m.cells_[pj.col * n + pj.row] = {true, pj.judgment.reciprocal(), 0.0};
    }

    std::vector<std::pair<std::size_t, std::size_t>> missing;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (!m.cells_[i * n + j].judged) missing.emplace_back(i, j);
    if (missing.empty()) return m;

    auto missing_error = [&](std::size_t i, std::size_t j) {
        return Error(ErrorCode::MissingPair,
                     "context '" + m.context_ + "': no judgment for pair (" + m.labels_[i] + ", " + m.labels_[j] + ")",
                     {{"context", m.context_}, {"row", m.labels_[i]}, {"col", m.labels_[j]}, {"missing", missing.size()}});
    };
    if (mode == CompletionMode::Strict) throw missing_error(missing.front().first, missing.front().second);

    std::vector<char> known(n * n, 0);
    std::vector<double> value(n * n, 0.0);
    for (std::size_t k = 0; k < n * n; ++k) {
        known[k] = m.cells_[k].judged;
        if (known[k]) value[k] = m.cells_[k].judgment.value();
    }
    while (!missing.empty()) {
        std::vector<std::pair<std::size_t, std::size_t>> still_missing;
        std::vector<std::pair<std::size_t, double>> fills;
        for (auto [i, j] : missing) {
            double log_sum = 0.0;
            int paths = 0;
            for (std::size_t k = 0; k < n; ++k) {
                if (k == i || k == j || !known[i * n + k] || !known[k * n + j]) continue;
                log_sum += std::log(value[i * n + k]) + std::log(value[k * n + j]);
                ++paths;
            }
            if (paths == 0) {
                still_missing.emplace_back(i, j);
                continue;
            }
            fills.emplace_back(i * n + j, std::exp(log_sum / paths));
        }
        if (fills.empty()) throw missing_error(still_missing.front().first, still_missing.front().second);
        for (auto [idx, v] : fills) {
            const std::size_t i = idx / n, j = idx % n;
            known[i * n + j] = known[j * n + i] = 1;
            value[i * n + j] = v;
            value[j * n + i] = 1.0 / v;
            m.cells_[i * n + j] = {false, Judgment::equal(), v};
            m.cells_[j * n + i] = {false, Judgment::equal(), 1.0 / v};
            ++m.imputed_count_;
        }
        missing = std::move(still_missing);
    }
    return m;
}

inline ComparisonMatrix matrix_from_judgments(std::string context, std::vector<std::string> children,
                                              std::initializer_list<PairJudgment> judgments,
                                              CompletionMode mode = CompletionMode::Strict) {
    return matrix_from_judgments(std::move(context), std::move(children),
                                 std::span<const PairJudgment>(judgments.begin(), judgments.size()), mode);
}

}  // namespace dfx_ahp
