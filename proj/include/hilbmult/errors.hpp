#pragma once

#include <stdexcept>
#include <string>

namespace hilbmult {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Arity or dimension mismatch between operands.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Input outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Operation called on an input kind it does not support.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Iterative method failed to reach its tolerance.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace hilbmult
