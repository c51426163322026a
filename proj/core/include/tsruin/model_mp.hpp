#pragma once

// Extended-precision evaluation of the claims-surplus cumulant, used by the
// fixed-Talbot engine which needs the transform at M significant digits.

#include <complex>

#include "tsruin/model.hpp"
#include "tsruin/mp.hpp"

namespace tsruin {

class MpCumulant {
 public:
  MpCumulant(const ClaimsModel& m, unsigned digits);

  unsigned digits() const { return digits_; }

  mp::Complex psi_x(const mp::Complex& theta) const;
  mp::Complex psi_x_derivative(const mp::Complex& theta) const;
  const mp::Real& psi_x_alpha() const { return psi_alpha_; }
  const mp::Real& alpha() const { return alpha_; }
  const mp::Real& mean_x() const { return mean_x_; }

 private:
  unsigned digits_;
  mp::Real c_gamma_;  // c Gamma(-rho)
  mp::Real alpha_;
  mp::Real rho_;
  mp::Real alpha_rho_;
  mp::Real premium_;
  mp::Real psi_alpha_;
  mp::Real mean_x_;
};

// Newton refinement of a double-precision continuation root to the working
// precision of `delta`.  Throws NumericalError if it does not converge.
mp::Complex phi_mp(const MpCumulant& k, const mp::Complex& delta, std::complex<double> seed);

}  // namespace tsruin
