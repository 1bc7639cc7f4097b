#pragma once

#include <stdexcept>
#include <string>

namespace gappred {

enum class Errc {
    NonPositiveValue,
    SizeExceedsCapacity,
    VariantMismatch,
    InfeasiblePrediction,
    MissingConsensusPermutation,
    TruthUnavailable,
    ZeroOptimum,
    BudgetExceeded,
    GammaBelowOne,
    NonIntegerCapacity,
    RankingNotTotal,
    EnumerationTooLarge,
    UnsatisfiableSpec,
    TargetUnreachable,
    ParameterOutOfRange,
    UnknownMechanism,
    BadInput,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::NonPositiveValue: return "NonPositiveValue";
        case Errc::SizeExceedsCapacity: return "SizeExceedsCapacity";
        case Errc::VariantMismatch: return "VariantMismatch";
        case Errc::InfeasiblePrediction: return "InfeasiblePrediction";
        case Errc::MissingConsensusPermutation: return "MissingConsensusPermutation";
        case Errc::TruthUnavailable: return "TruthUnavailable";
        case Errc::ZeroOptimum: return "ZeroOptimum";
        case Errc::BudgetExceeded: return "BudgetExceeded";
        case Errc::GammaBelowOne: return "GammaBelowOne";
        case Errc::NonIntegerCapacity: return "NonIntegerCapacity";
        case Errc::RankingNotTotal: return "RankingNotTotal";
        case Errc::EnumerationTooLarge: return "EnumerationTooLarge";
        case Errc::UnsatisfiableSpec: return "UnsatisfiableSpec";
        case Errc::TargetUnreachable: return "TargetUnreachable";
        case Errc::ParameterOutOfRange: return "ParameterOutOfRange";
        case Errc::UnknownMechanism: return "UnknownMechanism";
        case Errc::BadInput: return "BadInput";
    }
    return "?";
}

/// Library-wide error: a code (stable, testable) plus a human message.
class GapError : public std::runtime_error {
public:
    GapError(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw GapError(code, what); }

}  // namespace gappred
