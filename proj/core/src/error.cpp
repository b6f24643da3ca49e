#include "pathreg/error.hpp"

namespace pathreg {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyTable: return "EmptyTable";
    case ErrorCode::WrongShape: return "WrongShape";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NegativeCount: return "NegativeCount";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegenerateDataset: return "DegenerateDataset";
    case ErrorCode::FoldDegenerate: return "FoldDegenerate";
    case ErrorCode::RejectionBudgetExceeded: return "RejectionBudgetExceeded";
    case ErrorCode::InsufficientPathologicalDraws: return "InsufficientPathologicalDraws";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what), line_(line) {}

}  // namespace pathreg
