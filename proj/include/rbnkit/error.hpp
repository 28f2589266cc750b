#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rbnkit {

enum class ErrorCode {
  Disabled,
  UnknownTransition,
  MessageMismatch,
  UnknownState,
  DuplicateState,
  DuplicateTransition,
  InvalidName,
  Inconsistent,
  BudgetExceeded,
  TargetNotCovered,
  EmptyRange,
  InvalidSpec,
  InvalidCertificate,
  InvalidTrace,
  ParseError,
  UndeclaredState,
  ContradictoryAtom,
  InvalidQuery,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the text parsers; carries a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, std::size_t line, std::size_t column,
             const std::string& message);

  [[nodiscard]] std::size_t line() const noexcept { return line_; }
  [[nodiscard]] std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace rbnkit
