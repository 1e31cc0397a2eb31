#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace eqrh {

enum class ErrorKind {
  InvalidArgument,
  NonSquare,
  DimensionMismatch,
  ParameterMismatch,
  TransversalMismatch,
  SpectrumCollision,
  ConvergenceFailure,
  SingularMatrix,
  RegularityViolation,
  SingularB,
  EquivarianceViolation,
  NonConstantB,
  CommonEigenvectorFailure,
  Pole,
  ParseError,
};

std::string_view to_string(ErrorKind kind);

/// True for errors caused by the caller's input (bad shapes, violated object
/// invariants, malformed files). False for numeric breakdowns inside an
/// algorithm whose preconditions were met.
bool is_input_error(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace eqrh
