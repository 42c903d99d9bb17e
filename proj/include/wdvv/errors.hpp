#ifndef WDVV_ERRORS_HPP
#define WDVV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wdvv {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched dimensions, jet shapes or out-of-range indices.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A function was evaluated outside its domain: branch cut, pole, singular
/// denominator.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A linear system whose constant-term matrix is (numerically) singular.
class SingularSystemError : public Error {
 public:
  using Error::Error;
};

/// Newton iteration failed to converge.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Input data violates a documented precondition (exponent compatibility,
/// Euclidean normalization, curve mode gates, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace wdvv

#endif  // WDVV_ERRORS_HPP
