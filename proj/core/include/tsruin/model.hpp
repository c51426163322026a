#pragma once

// Tempered stable aggregate-claims process Y and the claims surplus process
// X = Y - p t.  The Levy measure of Y is c e^{-alpha x} x^{-1-rho} dx on
// x > 0 with rho in (0,1); X has no Brownian part and no negative jumps.

#include <complex>
#include <optional>

namespace tsruin {

class ClaimsModel {
 public:
  // Throws DomainError unless c > 0, alpha > 0, 0 < rho < 1 and p > E Y_1.
  static ClaimsModel with_premium(double c, double alpha, double rho, double premium);
  // Premium p = (1 + xi) E Y_1; requires xi > 0.
  static ClaimsModel with_loading(double c, double alpha, double rho, double xi);

  double c() const { return c_; }
  double alpha() const { return alpha_; }
  double rho() const { return rho_; }
  double premium() const { return premium_; }

  // Gamma(-rho), cached.
  double gamma_neg_rho() const { return gamma_neg_rho_; }
  // Safety loading implied by the premium: p / E Y_1 - 1.
  double loading() const;

 private:
  ClaimsModel(double c, double alpha, double rho, double premium);

  double c_;
  double alpha_;
  double rho_;
  double premium_;
  double gamma_neg_rho_;
};

enum class RegimeTag { Subcritical, Critical, Supercritical };

const char* to_string(RegimeTag tag);

struct Regime {
  RegimeTag tag;
  double psi_alpha;          // psi_X(alpha)
  double tolerance;          // classification tolerance used
  double loading_threshold;  // (1 - rho) / rho
};

// Change of currency (b) and time (a) units: R_t = b X_{a t}.
struct ScaleChange {
  ScaleChange(double time_scale, double currency_scale);
  double a;
  double b;
};

// Gamma(-rho) for non-integer rho > 0 via Gamma(1 - rho) / (-rho).
double gamma_neg(double rho);

// Cumulant of Y: log E e^{theta Y_1}.  Throws DomainError if theta > alpha.
double cumulant_y(const ClaimsModel& m, double theta);
std::complex<double> cumulant_y(const ClaimsModel& m, std::complex<double> theta);

double mean_y(const ClaimsModel& m);

// Cumulant of the claims surplus process, psi_Y(theta) - p theta.
double cumulant_x(const ClaimsModel& m, double theta);
std::complex<double> cumulant_x(const ClaimsModel& m, std::complex<double> theta);
// d/dtheta psi_X.
double cumulant_x_derivative(const ClaimsModel& m, double theta);
std::complex<double> cumulant_x_derivative(const ClaimsModel& m, std::complex<double> theta);

// E X_1 = E Y_1 - p (negative under net profit).
double mean_x(const ClaimsModel& m);

// Minimiser of psi_X on (-inf, alpha]; positive under net profit.
double cumulant_x_argmin(const ClaimsModel& m);

double premium_from_loading(double mean_claims, double xi);

Regime classify_regime(const ClaimsModel& m);

double min_loading_for_subcritical(double rho);

// Inverse of psi_X on its decreasing branch.  For real delta >= min psi_X
// returns the real root beta <= argmin psi_X of psi_X(beta) = delta
// (phi(0) = 0).  Throws NumericalError if the residual target is missed.
double phi(const ClaimsModel& m, double delta);

// Analytic continuation of phi off the real axis (principal branch, cut
// along (-inf, min psi_X]).  `hint` seeds Newton's method; a converged
// hinted root is only accepted if it is consistent with a continuation
// step, otherwise the root is obtained by path continuation from the
// real axis.
std::complex<double> phi(const ClaimsModel& m, std::complex<double> delta,
                         std::optional<std::complex<double>> hint = std::nullopt);

// Continuation cache: reuses the previous solution as the Newton seed, so
// evaluating phi along a contour costs a few Newton steps per point.
// Not thread-safe; use one instance per thread.
class PhiSolver {
 public:
  explicit PhiSolver(const ClaimsModel& m) : model_(m) {}

  std::complex<double> operator()(std::complex<double> delta);
  const ClaimsModel& model() const { return model_; }

 private:
  ClaimsModel model_;
  std::optional<std::complex<double>> last_delta_;
  std::complex<double> last_beta_{};
};

// Positive Levy tail: integral over (u, inf) of c e^{-alpha x} x^{-1-rho} dx.
double levy_tail(const ClaimsModel& m, double u);

// c e^{-alpha u} / (alpha u^{1+rho}); asymptotic to levy_tail as u -> inf.
double levy_tail_asymptotic(const ClaimsModel& m, double u);

// Same process in new units: c' = a b^rho c, alpha' = alpha / b, same rho
// and the same safety loading.
ClaimsModel rescale(const ClaimsModel& m, const ScaleChange& s);

}  // namespace tsruin
