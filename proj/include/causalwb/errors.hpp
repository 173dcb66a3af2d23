#ifndef CAUSALWB_ERRORS_HPP
#define CAUSALWB_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace causalwb {

enum class ErrorCode {
    InvalidArgument,
    CyclicGraph,
    NotExtendable,
    ParseError,
    DegenerateColumn,
    TooFewDistinctValues,
    SingleState,
    AllMissingColumn,
    InsufficientData,
    NodeUniverseMismatch,
    DegenerateTrueGraph,
    UnseenConfigWithZeroSmoothing,
    ZeroProbabilityEvidence,
    IoError,
    ConfigError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Raised by the graph and dataset readers; carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what);

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace causalwb

#endif  // CAUSALWB_ERRORS_HPP
