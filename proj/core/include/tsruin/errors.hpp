#pragma once

#include <stdexcept>
#include <string>

namespace tsruin {

// Invalid argument or violated precondition (bad parameters, empty grids, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical procedure failed to reach its tolerance.  Never carries a
// fabricated value; `residual` is the best residual reached, if any.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what, double residual = -1.0)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// An estimator was requested outside the regime where it is defined
// (e.g. B(inf) or the normalised estimate when psi_X(alpha) >= 0).
class RegimeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace tsruin
