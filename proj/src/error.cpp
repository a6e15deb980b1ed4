#include "benjamin/error.hpp"

namespace benjamin {

const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::SymbolDegenerate: return "SymbolDegenerate";
    case ErrorCode::BlowupDetected: return "BlowupDetected";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::ResolutionLoss: return "ResolutionLoss";
    case ErrorCode::AmbiguousFit: return "AmbiguousFit";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::OrbitLost: return "OrbitLost";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    }
    return "Unknown";
}

}  // namespace benjamin
