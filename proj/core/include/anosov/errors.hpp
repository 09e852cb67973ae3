#pragma once

#include <stdexcept>
#include <string>

namespace anosov {

// Malformed or out-of-domain arguments.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A quantity left the numerical domain it must live in.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative method failed to converge.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, int iterations, double last_residual)
      : std::runtime_error(what), iterations_(iterations), last_residual_(last_residual) {}
  int iterations() const { return iterations_; }
  double last_residual() const { return last_residual_; }

 private:
  int iterations_;
  double last_residual_;
};

// A documented precondition on the arguments does not hold.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace anosov
