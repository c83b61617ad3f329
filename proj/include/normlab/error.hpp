#pragma once

#include <stdexcept>
#include <string>

namespace normlab {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what)
      : Error("dimension mismatch: " + what) {}
};

// An input violates a documented precondition (e.g. a zero vector where a
// nonzero one is required, a non-Hermitian matrix passed to the eigensolver).
class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

// Sampled data is not convex where convexity is required.
class NotConvex : public Error {
 public:
  using Error::Error;
};

// An iterative routine exhausted its budget before meeting its tolerance.
class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

// The request is outside what the routine supports (an exponent with no
// closed form, too many cone generators, ...).
class Unsupported : public Error {
 public:
  using Error::Error;
};

// The set {u : gauge(u) <= 1} does not absorb the given direction.
class NonAbsorbing : public Error {
 public:
  using Error::Error;
};

// Text input (step-function, sparse-function or witness fixtures) is malformed.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace normlab
