#include "eqrh/errors.hpp"

namespace eqrh {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonSquare: return "NonSquare";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ParameterMismatch: return "ParameterMismatch";
    case ErrorKind::TransversalMismatch: return "TransversalMismatch";
    case ErrorKind::SpectrumCollision: return "SpectrumCollision";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::RegularityViolation: return "RegularityViolation";
    case ErrorKind::SingularB: return "SingularB";
    case ErrorKind::EquivarianceViolation: return "EquivarianceViolation";
    case ErrorKind::NonConstantB: return "NonConstantB";
    case ErrorKind::CommonEigenvectorFailure: return "CommonEigenvectorFailure";
    case ErrorKind::Pole: return "Pole";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

bool is_input_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SpectrumCollision:
    case ErrorKind::ConvergenceFailure:
    case ErrorKind::NonConstantB:
    case ErrorKind::CommonEigenvectorFailure:
      return false;
    default:
      return true;
  }
}

}  // namespace eqrh
