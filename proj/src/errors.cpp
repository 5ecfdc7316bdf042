#include "forge/errors.hpp"

namespace forge {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::TooFewSamples: return "TooFewSamples";
        case ErrorCode::NotClosed: return "NotClosed";
        case ErrorCode::CurvatureVanishes: return "CurvatureVanishes";
        case ErrorCode::UnknownFamily: return "UnknownFamily";
        case ErrorCode::InvalidParams: return "InvalidParams";
        case ErrorCode::NoSignChange: return "NoSignChange";
        case ErrorCode::NotQuantized: return "NotQuantized";
        case ErrorCode::OutOfStrip: return "OutOfStrip";
        case ErrorCode::DegenerateMetric: return "DegenerateMetric";
        case ErrorCode::IdenticallyZero: return "IdenticallyZero";
        case ErrorCode::UmbilicOnCycle: return "UmbilicOnCycle";
        case ErrorCode::SeamMismatch: return "SeamMismatch";
        case ErrorCode::EpsTooLarge: return "EpsTooLarge";
        case ErrorCode::BranchAmbiguity: return "BranchAmbiguity";
        case ErrorCode::LeftStrip: return "LeftStrip";
        case ErrorCode::Mismatch: return "Mismatch";
        case ErrorCode::ConfigError: return "ConfigError";
    }
    return "UnknownError";
}

}  // namespace forge
