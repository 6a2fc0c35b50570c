#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace structsparse {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument failed (bad dimension, budget, step size...).
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// The input is valid but outside what the requested routine can handle
/// (e.g. exhaustive enumeration beyond its size cap).
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// The input violates a structural model assumption (loopy group graph...).
class ModelViolation : public Error {
 public:
  using Error::Error;
};

/// A metric was requested against a reference it cannot be defined for.
class UndefinedReference : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// An iterative routine hit its iteration cap. Carries the best iterate so
/// callers can still report something.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, Eigen::VectorXd best_iterate,
                   double best_value)
      : Error(what), best_(std::move(best_iterate)), best_value_(best_value) {}

  const Eigen::VectorXd& best_iterate() const noexcept { return best_; }
  double best_value() const noexcept { return best_value_; }

 private:
  Eigen::VectorXd best_;
  double best_value_;
};

}  // namespace structsparse
