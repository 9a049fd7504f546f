#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace topocc {

enum class ErrorCode {
    DisconnectedGraph,
    EmptyTerminalSet,
    EmptySet,
    InstanceTooLarge,
    OddTerminalCount,
    OverlappingPairs,
    InvalidGraph,
    InvalidTerminals,
    InvalidCut,
    BudgetExceeded,
    NotATree,
    NotSpanning,
    MissingMatchings,
    Infeasible,
    IterationLimit,
    UnsupportedMode,
    ShapeMismatch,
    AlphabetTooSmall,
    TooFewTerminals,
    ParseError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (and tests) can dispatch on the kind rather than on message text.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace topocc
