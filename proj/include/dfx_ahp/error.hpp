#pragma once

#include <nlohmann/json.hpp>

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace dfx_ahp {

enum class ErrorCode {
    // hierarchy / document
    DuplicateName,
    OrphanNode,
    EmptyLayer,
    TooFewAlternatives,
    ChildlessCriterion,
    SchemaViolation,
    // judgments
    ConflictingJudgment,
    MissingPair,
    OutOfScale,
    InvalidPair,
    // priorities
    NoConvergence,
    UnsupportedOrder,
    // synthesis / pruning
    MissingContext,
    DimensionMismatch,
    EmptyRetention,
    UnknownContext,
    UnknownNode,
    // catalog
    CardinalityMismatch,
    UnresolvedDfxName,
    UnknownFilterField,
    InvalidFilterValue,
    ChecksumMismatch,
    // service
    UnknownPreset,
    UnknownSession,
    StaleRevision,
    ContextsIncomplete,
    InvalidArgument,
    IoError,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DuplicateName: return "DuplicateName";
        case ErrorCode::OrphanNode: return "OrphanNode";
        case ErrorCode::EmptyLayer: return "EmptyLayer";
        case ErrorCode::TooFewAlternatives: return "TooFewAlternatives";
        case ErrorCode::ChildlessCriterion: return "ChildlessCriterion";
        case ErrorCode::SchemaViolation: return "SchemaViolation";
        case ErrorCode::ConflictingJudgment: return "ConflictingJudgment";
        case ErrorCode::MissingPair: return "MissingPair";
        case ErrorCode::OutOfScale: return "OutOfScale";
        case ErrorCode::InvalidPair: return "InvalidPair";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::UnsupportedOrder: return "UnsupportedOrder";
        case ErrorCode::MissingContext: return "MissingContext";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::EmptyRetention: return "EmptyRetention";
        case ErrorCode::UnknownContext: return "UnknownContext";
        case ErrorCode::UnknownNode: return "UnknownNode";
        case ErrorCode::CardinalityMismatch: return "CardinalityMismatch";
        case ErrorCode::UnresolvedDfxName: return "UnresolvedDfxName";
        case ErrorCode::UnknownFilterField: return "UnknownFilterField";
        case ErrorCode::InvalidFilterValue: return "InvalidFilterValue";
        case ErrorCode::ChecksumMismatch: return "ChecksumMismatch";
        case ErrorCode::UnknownPreset: return "UnknownPreset";
        case ErrorCode::UnknownSession: return "UnknownSession";
        case ErrorCode::StaleRevision: return "StaleRevision";
        case ErrorCode::ContextsIncomplete: return "ContextsIncomplete";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

/// Exception type for every failure raised by the library.
///
/// `details` is a free-form JSON object. Where an error can be tied to a
/// location in an input document it carries a JSON pointer under the key
/// "pointer" (e.g. "/judgments/17"), which the CLI turns into a line number.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, nlohmann::json details = nlohmann::json::object())
        : std::runtime_error(std::string(to_string(code)) + ": " + message),
          code_(code),
          message_(message),
          details_(std::move(details)) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& message() const noexcept { return message_; }
    const nlohmann::json& details() const noexcept { return details_; }

private:
    ErrorCode code_;
    std::string message_;
    nlohmann::json details_;
};

}  // namespace dfx_ahp
