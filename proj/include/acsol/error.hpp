#pragma once

#include <stdexcept>
#include <string>

namespace acsol {

enum class ErrorKind {
  NonPositiveDefinite,
  BadDimension,
  ParseError,
  DivisionByZero,
  RankOverflow,
  RankMismatch,
  NotSymmetric,
  FloorUnderflow,
  DegenerateDivisor,
  NonlinearResponse,
  AllZeroResidual,
  NoLeadingTerm,
  StepTooLarge,
  InvalidArgument,
};

const char* to_string(ErrorKind kind);

// True for kinds that signal a numerical abort rather than bad input.
bool is_numerical(ErrorKind kind);

// Every error carries the module and operation that raised it plus the
// offending value, so CLI messages can be traced back without a debugger.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, std::string operation,
        std::string detail);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }
  const std::string& operation() const noexcept { return operation_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string module_;
  std::string operation_;
  std::string detail_;
};

}  // namespace acsol
