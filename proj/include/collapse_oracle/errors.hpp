#pragma once

#include <stdexcept>
#include <string>

namespace collapse_oracle {

/// Error categories raised by the library. Each value corresponds to one
/// documented failure mode of the public operations.
enum class Errc {
    NonSquare,
    NotHermitian,
    ConvergenceFailure,
    DimensionMismatch,
    InvalidScenario,
    ZeroNormBranch,
    WeightMismatch,
    ZeroComponent,
    OutOfRange,
    NullState,
    BasisState,
    RankDeficient,
    InvariantViolation,
    Parse,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::NonSquare: return "NonSquare";
        case Errc::NotHermitian: return "NotHermitian";
        case Errc::ConvergenceFailure: return "ConvergenceFailure";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::InvalidScenario: return "InvalidScenario";
        case Errc::ZeroNormBranch: return "ZeroNormBranch";
        case Errc::WeightMismatch: return "WeightMismatch";
        case Errc::ZeroComponent: return "ZeroComponent";
        case Errc::OutOfRange: return "OutOfRange";
        case Errc::NullState: return "NullState";
        case Errc::BasisState: return "BasisState";
        case Errc::RankDeficient: return "RankDeficient";
        case Errc::InvariantViolation: return "InvariantViolation";
        case Errc::Parse: return "Parse";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

  private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, Errc code, const std::string& what) {
    if (!cond) raise(code, what);
}

}  // namespace collapse_oracle
