#pragma once

#include <stdexcept>
#include <string>

namespace benjamin {

enum class ErrorCode {
    InvalidArgument,
    NonConvergence,
    SymbolDegenerate,
    BlowupDetected,
    ConfigError,
    ResolutionLoss,
    AmbiguousFit,
    OutOfRange,
    DegenerateInput,
    OrbitLost,
    IoError,
    HypothesisViolated,
};

const char* to_string(ErrorCode code);

/// Domain error raised by every module of the lab. The code lets callers
/// (the CLI in particular) map failures to exit statuses.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace benjamin
