// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace fracdiff {

/// Base class of all failures raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition.
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

/// A file could not be parsed. `line` is 1-based, 0 if unknown.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, long line_no = 0)
      : Error(line_no > 0 ? what + " (line " + std::to_string(line_no) + ")" : what),
        line(line_no) {}
  long line;
};

/// Input data violates a structural requirement (asymmetry, indefiniteness, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An iteration did not reach its target accuracy within its budget.
/// Subclasses carry the best iterate found.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Coincident or numerically dependent data where distinctness is required.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// A computation is too ill-conditioned to satisfy its accuracy contract.
class ConditioningError : public Error {
 public:
  using Error::Error;
};

/// A configured size cap would be exceeded.
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

/// A function argument lies outside the mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A condition the library guarantees never to produce; indicates a defect.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace fracdiff
