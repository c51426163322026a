#pragma once

// Reference values computed independently of the library: 50-digit
// arithmetic, closed forms via Boost.Math special functions, and plain
// bisection in place of Newton/continuation.

#include <cmath>
#include <functional>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using Big = boost::multiprecision::cpp_bin_float_50;

struct Params {
  double c;
  double alpha;
  double rho;
  double xi;
};

inline const Params kPaperRef{0.01, 1.0, 0.99, 0.2};

inline Big gamma_neg(const Big& rho) { return boost::math::tgamma(-rho); }

inline Big mean_y(const Params& p) {
  const Big rho = p.rho;
  return -Big(p.c) * rho * gamma_neg(rho) * boost::multiprecision::pow(Big(p.alpha), rho - 1);
}

inline Big premium(const Params& p) { return (1 + Big(p.xi)) * mean_y(p); }

inline Big psi_y(const Params& p, const Big& theta) {
  const Big rho = p.rho;
  const Big a = p.alpha;
  return -Big(p.c) * gamma_neg(rho) *
         (boost::multiprecision::pow(a, rho) - boost::multiprecision::pow(a - theta, rho));
}

inline Big psi_x(const Params& p, const Big& theta) { return psi_y(p, theta) - premium(p) * theta; }

inline double psi_x_alpha(const Params& p) {
  return static_cast<double>(psi_x(p, Big(p.alpha)));
}

inline double mean_x(const Params& p) { return static_cast<double>(mean_y(p) - premium(p)); }

inline double b_infinity(const Params& p) {
  const double psi = psi_x_alpha(p);
  return p.alpha * std::abs(mean_x(p)) / (psi * psi);
}

// Root of psi_X(beta) = delta on the decreasing branch, by bisection.
inline double phi(const Params& p, double delta) {
  Big lo = -1;
  while (psi_x(p, lo) < delta) lo *= 2;
  // Right end: the minimiser, located by bisection on the sign of psi_X'.
  Big a = lo, b = p.alpha;
  const Big h = Big("1e-30");
  for (int i = 0; i < 200; ++i) {
    const Big mid = (a + b) / 2;
    const Big slope = (psi_x(p, mid + h) - psi_x(p, mid - h)) / (2 * h);
    (slope < 0 ? a : b) = mid;
  }
  Big hi = a;
  for (int i = 0; i < 200; ++i) {
    const Big mid = (lo + hi) / 2;
    (psi_x(p, mid) > delta ? lo : hi) = mid;
  }
  return static_cast<double>((lo + hi) / 2);
}

// Positive Levy tail c alpha^rho Gamma(-rho, alpha u), with the upper
// incomplete gamma at negative order from Gamma(1-rho, x) by one
// recurrence step.
inline double levy_tail(const Params& p, double u) {
  const Big rho = p.rho;
  const Big x = Big(p.alpha) * u;
  const Big upper = boost::math::tgamma(1 - rho, x);
  const Big g = (upper - boost::multiprecision::pow(x, -rho) * boost::multiprecision::exp(-x)) / (-rho);
  return static_cast<double>(Big(p.c) * boost::multiprecision::pow(Big(p.alpha), rho) * g);
}

// Composite Simpson on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace oracle
