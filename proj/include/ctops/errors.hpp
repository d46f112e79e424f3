#pragma once

#include <stdexcept>
#include <string>

namespace ctops {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid arguments or a state outside the domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A matrix would exceed the configured dimension cap.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An iterative method ran out of iterations. Carries the best residual seen.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_residual)
      : Error(what), best_residual_(best_residual) {}

  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

/// A density or distribution failed its normalization check.
class NormalizationError : public Error {
 public:
  using Error::Error;
};

}  // namespace ctops
