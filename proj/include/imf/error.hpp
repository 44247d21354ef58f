#pragma once

#include <stdexcept>
#include <string>

namespace imf {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violated an operation's precondition.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An interval set would exceed its component cap. Callers should switch to
/// the transfer-operator engine.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Quadrature or iteration failed to reach its tolerance, or produced
/// non-finite values.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace imf
