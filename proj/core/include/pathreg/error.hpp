#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pathreg {

enum class ErrorCode {
  EmptyTable,
  WrongShape,
  ParseError,
  NegativeCount,
  IndexOutOfRange,
  InvalidArgument,
  DegenerateDataset,
  FoldDegenerate,
  RejectionBudgetExceeded,
  InsufficientPathologicalDraws,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to a stable exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parse failures remember the 1-based input line that triggered them.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace pathreg
