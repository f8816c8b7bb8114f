#pragma once

#include "dfx_ahp/error.hpp"

#include <cctype>
#include <cmath>
#include <string>
#include <string_view>

namespace dfx_ahp {

inline constexpr int kMinGrade = 1;
inline constexpr int kMaxGrade = 9;

/// One cell of a pairwise comparison on the 1..9 intensity scale.
///
/// Stored as an integer grade plus a direction flag: `inverted == false`
/// means the row element dominates with intensity `grade`, `inverted == true`
/// means the column element does, so the cell value is `1/grade`. Reciprocity
/// is therefore exact; no floating point value is ever stored for a judgment.
/// Grade 1 is always normalized to `inverted == false`.
class Judgment {
public:
    constexpr Judgment() = default;

    constexpr Judgment(int grade, bool inverted = false) : grade_(grade), inverted_(inverted && grade != 1) {
        if (grade < kMinGrade || grade > kMaxGrade) {
            throw Error(ErrorCode::OutOfScale, "grade " + std::to_string(grade) + " outside 1..9",
                        {{"grade", grade}});
        }
    }

    static constexpr Judgment equal() { return Judgment(1); }

    constexpr int grade() const noexcept { return grade_; }
    constexpr bool inverted() const noexcept { return inverted_; }

    double value() const noexcept { return inverted_ ? 1.0 / grade_ : static_cast<double>(grade_); }

    constexpr Judgment reciprocal() const noexcept {
        Judgment r;
        r.grade_ = grade_;
        r.inverted_ = grade_ != 1 && !inverted_;
        return r;
    }

    /// "9" or "1/9".
    std::string to_string() const {
        return inverted_ ? "1/" + std::to_string(grade_) : std::to_string(grade_);
    }

    /// Parses "7", "1/7" or "0.142857..." (the latter must be within 1e-6 of a scale value).
    static Judgment parse(std::string_view text);

    friend constexpr bool operator==(const Judgment&, const Judgment&) = default;

private:
    int grade_ = 1;
    bool inverted_ = false;
};

/// Linguistic descriptor for an intensity grade. Odd grades carry the
/// standard labels; even grades are legal intermediate judgments.
constexpr std::string_view scale_label(int grade) {
    switch (grade) {
        case 1: return "Equal Importance";
        case 3: return "Moderate Importance";
        case 5: return "Strong Importance";
        case 7: return "Very Strong or Demonstrated Importance";
        case 9: return "Extreme Importance";
        case 2:
        case 4:
        case 6:
        case 8: return "Intermediate between adjacent judgments";
        default:
            throw Error(ErrorCode::OutOfScale, "grade " + std::to_string(grade) + " outside 1..9",
                        {{"grade", grade}});
    }
}

constexpr std::string_view scale_explanation(int grade) {
    switch (grade) {
        case 1: return "Both elements matter the same to the parent";
        case 3: return "One element is somewhat more important";
        case 5: return "One element is clearly more important";
        case 7: return "One element dominates, and practice confirms it";
        case 9: return "One element dominates beyond reasonable doubt";
        case 2:
        case 4:
        case 6:
        case 8: return "Compromise between the neighbouring labeled grades";
        default:
            throw Error(ErrorCode::OutOfScale, "grade " + std::to_string(grade) + " outside 1..9",
                        {{"grade", grade}});
    }
}

constexpr bool is_labeled_grade(int grade) { return grade >= 1 && grade <= 9 && grade % 2 == 1; }

inline Judgment Judgment::parse(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    auto fail = [&] {
        return Error(ErrorCode::OutOfScale, "not a scale value: '" + std::string(text) + "'",
                     {{"value", std::string(text)}});
    };
    auto parse_int = [&](std::string_view s) {
        if (s.empty() || s.size() > 2) throw fail();
        int v = 0;
        for (char c : s) {
            if (c < '0' || c > '9') throw fail();
            v = v * 10 + (c - '0');
        }
        return v;
    };
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        if (parse_int(text.substr(0, slash)) != 1) throw fail();
        return Judgment(parse_int(text.substr(slash + 1)), true);
    }
    if (text.find('.') == std::string_view::npos) return Judgment(parse_int(text));
    double v = 0.0;
    try {
        v = std::stod(std::string(text));
    } catch (const std::exception&) {
        throw fail();
    }
    for (int g = kMinGrade; g <= kMaxGrade; ++g) {
        if (std::abs(v - g) < 1e-6) return Judgment(g);
        if (std::abs(v - 1.0 / g) < 1e-6) return Judgment(g, true);
    }
    throw fail();
}

}  // namespace dfx_ahp
