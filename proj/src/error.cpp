#include "acsol/error.hpp"

namespace acsol {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonPositiveDefinite: return "NonPositiveDefinite";
    case ErrorKind::BadDimension: return "BadDimension";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::RankOverflow: return "RankOverflow";
    case ErrorKind::RankMismatch: return "RankMismatch";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::FloorUnderflow: return "FloorUnderflow";
    case ErrorKind::DegenerateDivisor: return "DegenerateDivisor";
    case ErrorKind::NonlinearResponse: return "NonlinearResponse";
    case ErrorKind::AllZeroResidual: return "AllZeroResidual";
    case ErrorKind::NoLeadingTerm: return "NoLeadingTerm";
    case ErrorKind::StepTooLarge: return "StepTooLarge";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

bool is_numerical(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonPositiveDefinite:
    case ErrorKind::FloorUnderflow:
    case ErrorKind::DegenerateDivisor:
    case ErrorKind::NonlinearResponse:
    case ErrorKind::AllZeroResidual:
    case ErrorKind::NoLeadingTerm:
    case ErrorKind::StepTooLarge:
    case ErrorKind::DivisionByZero:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorKind kind, std::string module, std::string operation, std::string detail)
    : std::runtime_error(module + "::" + operation + ": " + to_string(kind) + ": " + detail),
      kind_(kind),
      module_(std::move(module)),
      operation_(std::move(operation)),
      detail_(std::move(detail)) {}

}  // namespace acsol
