#pragma once

#include <stdexcept>
#include <string>

namespace mrem {

// Base type for all library errors; subclasses map onto CLI exit paths.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input text; carries a 1-based line number when known.
struct ParseError : Error {
  explicit ParseError(const std::string& msg, int line_number = 0)
      : Error(line_number > 0 ? "line " + std::to_string(line_number) + ": " + msg : msg),
        line(line_number) {}
  int line;
};

// Mismatched register widths or out-of-range qubit indices.
struct DimensionError : Error {
  using Error::Error;
};

// Request exceeds a documented size ceiling (dense realization, symmetry search).
struct CapacityError : Error {
  using Error::Error;
};

// A documented precondition was violated by the caller.
struct ContractError : Error {
  using Error::Error;
};

// Numeric solve failed to converge; message carries the residual report.
struct SolverError : Error {
  using Error::Error;
};

// Determinant is not an eigenstate of a symmetry generator, or sectors disagree.
struct SectorError : Error {
  using Error::Error;
};

// Preparation template cannot reach the requested target support.
struct TemplateError : Error {
  using Error::Error;
};

// Internal consistency check failed; indicates a bug, not bad input.
struct InternalError : Error {
  using Error::Error;
};

}  // namespace mrem
