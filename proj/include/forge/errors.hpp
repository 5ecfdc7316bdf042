#pragma once

#include <stdexcept>
#include <string>

namespace forge {

// Failure taxonomy shared by the library, the JSON reports, and the CLI exit codes.
enum class ErrorCode {
    TooFewSamples,
    NotClosed,
    CurvatureVanishes,
    UnknownFamily,
    InvalidParams,
    NoSignChange,
    NotQuantized,
    OutOfStrip,
    DegenerateMetric,
    IdenticallyZero,
    UmbilicOnCycle,
    SeamMismatch,
    EpsTooLarge,
    BranchAmbiguity,
    LeftStrip,
    Mismatch,
    ConfigError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

}  // namespace forge
