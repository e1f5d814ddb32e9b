#include "sqwell/error.hpp"

namespace sqwell {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::Validation: return "VALIDATION";
        case ErrorCode::Domain: return "DOMAIN";
        case ErrorCode::InvalidTolerance: return "INVALID_TOL";
        case ErrorCode::RootLost: return "ROOT_LOST";
        case ErrorCode::BracketFailure: return "BRACKET_FAILURE";
        case ErrorCode::DegenerateMatch: return "DEGENERATE_MATCH";
        case ErrorCode::NormalizationSingular: return "NORMALIZATION_SINGULAR";
        case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
        case ErrorCode::Unsupported: return "UNSUPPORTED";
        case ErrorCode::NumericalFailure: return "NUMERICAL_FAILURE";
    }
    return "UNKNOWN";
}

}  // namespace sqwell
