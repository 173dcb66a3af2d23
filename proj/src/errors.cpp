#include "causalwb/errors.hpp"

namespace causalwb {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::CyclicGraph: return "CyclicGraph";
    case ErrorCode::NotExtendable: return "NotExtendable";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DegenerateColumn: return "DegenerateColumn";
    case ErrorCode::TooFewDistinctValues: return "TooFewDistinctValues";
    case ErrorCode::SingleState: return "SingleState";
    case ErrorCode::AllMissingColumn: return "AllMissingColumn";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::NodeUniverseMismatch: return "NodeUniverseMismatch";
    case ErrorCode::DegenerateTrueGraph: return "DegenerateTrueGraph";
    case ErrorCode::UnseenConfigWithZeroSmoothing: return "UnseenConfigWithZeroSmoothing";
    case ErrorCode::ZeroProbabilityEvidence: return "ZeroProbabilityEvidence";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what), line_(line) {}

}  // namespace causalwb
