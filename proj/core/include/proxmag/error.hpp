#pragma once

#include <stdexcept>
#include <string>

namespace proxmag {

/// Base class for every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition violated by the caller (shape mismatch, non-finite data, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Requested variant or parameter combination is not implemented.
class Unsupported : public Error {
 public:
  using Error::Error;
};

/// A NaN or Inf appeared in an intermediate result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// An iterative method ran out of budget before meeting its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace proxmag
