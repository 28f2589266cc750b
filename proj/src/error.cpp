#include "rbnkit/error.hpp"

namespace rbnkit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Disabled: return "Disabled";
    case ErrorCode::UnknownTransition: return "UnknownTransition";
    case ErrorCode::MessageMismatch: return "MessageMismatch";
    case ErrorCode::UnknownState: return "UnknownState";
    case ErrorCode::DuplicateState: return "DuplicateState";
    case ErrorCode::DuplicateTransition: return "DuplicateTransition";
    case ErrorCode::InvalidName: return "InvalidName";
    case ErrorCode::Inconsistent: return "Inconsistent";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::TargetNotCovered: return "TargetNotCovered";
    case ErrorCode::EmptyRange: return "EmptyRange";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidCertificate: return "InvalidCertificate";
    case ErrorCode::InvalidTrace: return "InvalidTrace";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UndeclaredState: return "UndeclaredState";
    case ErrorCode::ContradictoryAtom: return "ContradictoryAtom";
    case ErrorCode::InvalidQuery: return "InvalidQuery";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

ParseError::ParseError(ErrorCode code, std::size_t line, std::size_t column,
                       const std::string& message)
    : Error(code, std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

}  // namespace rbnkit
