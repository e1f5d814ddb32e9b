#pragma once

#include <stdexcept>
#include <string>

namespace sqwell {

enum class ErrorCode {
    Validation,            // malformed or non-finite input
    Domain,                // argument outside the operation's domain
    InvalidTolerance,      // tol <= 0
    RootLost,              // no real root in the cell: reality of the spectrum is broken
    BracketFailure,        // critical-coupling scan range excludes the transition
    DegenerateMatch,       // matching system has no nontrivial solution
    NormalizationSingular, // vanishing biorthogonal overlap
    DimensionMismatch,
    Unsupported,
    NumericalFailure,      // eigensolver failure or unreachable tolerance
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

    ErrorCode code() const noexcept { return code_; }
    /// Message without the code prefix.
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

}  // namespace sqwell
