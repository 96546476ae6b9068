#include "torus/error.hpp"

namespace torus {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DegenerateBasis: return "DegenerateBasis";
        case ErrorCode::InternalInvariant: return "InternalInvariant";
        case ErrorCode::BadGrid: return "BadGrid";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::NonZeroMean: return "NonZeroMean";
        case ErrorCode::BadExponent: return "BadExponent";
        case ErrorCode::GridTooCoarse: return "GridTooCoarse";
        case ErrorCode::MixedEigenspace: return "MixedEigenspace";
        case ErrorCode::InvalidCoefficients: return "InvalidCoefficients";
        case ErrorCode::UnsupportedMoment: return "UnsupportedMoment";
        case ErrorCode::DegenerateLeadingCoefficient: return "DegenerateLeadingCoefficient";
        case ErrorCode::InconsistentMoments: return "InconsistentMoments";
        case ErrorCode::NumericalBlowup: return "NumericalBlowup";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace torus
