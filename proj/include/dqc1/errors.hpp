#pragma once

#include <stdexcept>
#include <string>

namespace dqc1 {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live on different qubit counts or matrix dimensions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The request exceeds a configured resource cap (e.g. dense qubit limit).
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace dqc1
