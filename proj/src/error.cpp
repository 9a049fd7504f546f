#include "topocc/error.hpp"

namespace topocc {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
        case ErrorCode::EmptyTerminalSet: return "EmptyTerminalSet";
        case ErrorCode::EmptySet: return "EmptySet";
        case ErrorCode::InstanceTooLarge: return "InstanceTooLarge";
        case ErrorCode::OddTerminalCount: return "OddTerminalCount";
        case ErrorCode::OverlappingPairs: return "OverlappingPairs";
        case ErrorCode::InvalidGraph: return "InvalidGraph";
        case ErrorCode::InvalidTerminals: return "InvalidTerminals";
        case ErrorCode::InvalidCut: return "InvalidCut";
        case ErrorCode::BudgetExceeded: return "BudgetExceeded";
        case ErrorCode::NotATree: return "NotATree";
        case ErrorCode::NotSpanning: return "NotSpanning";
        case ErrorCode::MissingMatchings: return "MissingMatchings";
        case ErrorCode::Infeasible: return "Infeasible";
        case ErrorCode::IterationLimit: return "IterationLimit";
        case ErrorCode::UnsupportedMode: return "UnsupportedMode";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::AlphabetTooSmall: return "AlphabetTooSmall";
        case ErrorCode::TooFewTerminals: return "TooFewTerminals";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

}  // namespace topocc
