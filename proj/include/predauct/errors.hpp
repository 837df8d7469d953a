#pragma once

#include <stdexcept>
#include <string>

namespace predauct {

// Raised when a prior token cannot be parsed; `position` is the byte offset
// of the offending character in the token string.
class PriorParseError : public std::runtime_error {
 public:
  PriorParseError(const std::string& msg, std::size_t position)
      : std::runtime_error(msg + " (at position " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Numerical-precondition failures. The CLI maps these to exit code 3.
class NumericalPreconditionError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class IrregularPriorError : public NumericalPreconditionError {
  using NumericalPreconditionError::NumericalPreconditionError;
};

class NotLogConcaveError : public NumericalPreconditionError {
  using NumericalPreconditionError::NumericalPreconditionError;
};

class DegenerateSignalError : public NumericalPreconditionError {
  using NumericalPreconditionError::NumericalPreconditionError;
};

class SingularSystemError : public NumericalPreconditionError {
  using NumericalPreconditionError::NumericalPreconditionError;
};

}  // namespace predauct
