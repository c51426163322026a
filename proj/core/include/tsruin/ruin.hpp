#pragma once

// Ruin-probability estimators built on the Laplace transform of the
// asymptotic ruin-time profile B(t):
//
//   int_0^inf e^{-delta t} B(t) dt = (Phi(delta) - alpha) / ((delta - psi(alpha))^2 Phi(delta)),
//
// where psi = psi_X and Phi is its inverse.  As u -> inf,
// P(tau(u) <= t) ~ Pi(u) B(t) with Pi the positive Levy tail.

#include <complex>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>

#include "tsruin/laplace.hpp"
#include "tsruin/model.hpp"
#include "tsruin/model_mp.hpp"

namespace tsruin {

enum class Method { Rft, Tulta, InfiniteHorizon, MonteCarlo };

const char* to_string(Method method);

struct RuinEstimate {
  double u = 0.0;
  double t = 0.0;  // +inf for the infinite-horizon probability
  double value = 0.0;
  Method method = Method::Rft;
  std::optional<double> std_error;  // Monte Carlo only
};

// Transform of B.  Keeps a PhiSolver for contour continuation, so a single
// instance must not be shared between threads.
class BTransform final : public laplace::TransformFn {
 public:
  explicit BTransform(const ClaimsModel& m);

  std::complex<double> operator()(std::complex<double> delta) const override;
  mp::Complex operator()(const mp::Complex& delta) const override;
  double abscissa() const override;
  bool thread_safe() const override { return false; }

 private:
  const MpCumulant& cumulant(unsigned digits) const;

  ClaimsModel model_;
  double psi_alpha_;
  mutable PhiSolver solver_;
  mutable std::unique_ptr<MpCumulant> mp_;
};

// Transform of the scale function: 1 / psi_X(-beta).
class WTransform final : public laplace::TransformFn {
 public:
  explicit WTransform(const ClaimsModel& m);

  std::complex<double> operator()(std::complex<double> beta) const override;
  mp::Complex operator()(const mp::Complex& beta) const override;
  double abscissa() const override { return 0.0; }

 private:
  ClaimsModel model_;
};

// Transform of P(tau(u) < inf) = 1 + E X_1 W(u):  1/beta + E X_1 / psi_X(-beta).
// The poles at beta = 0 cancel.
class EventualRuinTransform final : public laplace::TransformFn {
 public:
  explicit EventualRuinTransform(const ClaimsModel& m);

  std::complex<double> operator()(std::complex<double> beta) const override;
  mp::Complex operator()(const mp::Complex& beta) const override;
  double abscissa() const override { return 0.0; }

 private:
  ClaimsModel model_;
  double mean_x_;
};

// B~(delta) for Re delta > max(0, psi_X(alpha)).
std::complex<double> b_tilde(const ClaimsModel& m, std::complex<double> delta);

// B(t) by numerical inversion, memoised.  Concurrent calls are safe.
class BFunction {
 public:
  BFunction(const ClaimsModel& m, laplace::InversionSpec spec = {});

  double operator()(double t) const;
  const ClaimsModel& model() const { return model_; }
  const laplace::InversionSpec& spec() const { return spec_; }
  std::size_t cached() const;

 private:
  ClaimsModel model_;
  laplace::InversionSpec spec_;
  mutable std::shared_mutex mutex_;
  mutable std::map<double, double> memo_;
};

double b_of_t(const BFunction& bf, double t);

// alpha |E X_1| / psi_X(alpha)^2.  RegimeError unless subcritical.
double b_infinity(const ClaimsModel& m);

double scale_function(const ClaimsModel& m, double u, const laplace::InversionSpec& spec = {});

// Clamped to [0,1]; warns when the raw value leaves the interval by more
// than 1e-6.
double prob_eventual_ruin(const ClaimsModel& m, double u,
                          const laplace::InversionSpec& spec = {});

// Pi(u) B(t).  May exceed 1 for small u.
RuinEstimate estimate_rft(const BFunction& bf, double u, double t);
// P(tau(u) < inf) B(t) / B(inf).  RegimeError unless subcritical.
RuinEstimate estimate_tulta(const BFunction& bf, double u, double t);
RuinEstimate estimate_infinite(const ClaimsModel& m, double u,
                               const laplace::InversionSpec& spec = {});

struct GrowthDiagnostic {
  RegimeTag regime;
  double psi_alpha;
  double slope;      // least-squares slope of ln B over [t_lo, t_hi]
  double b_over_t;   // B(t_hi) / t_hi
  double b_over_t2;  // B(t_hi) / t_hi^2
  // Critical regime only: B(t_hi) / t_hi >= 1 - tol.
  std::optional<bool> linear_growth_ok;
};

GrowthDiagnostic growth_diagnostic(const BFunction& bf, double t_lo, double t_hi,
                                   int points = 16, double tol = 0.01);

// E exp(alpha sup_{s<=t} X_s) = B'(t) - psi_X(alpha) B(t), with B' by
// centred differences of step max(1e-4, 1e-3 t).
double b_sup_moment(const BFunction& bf, double t);

struct MeanEstimate {
  double value;      // int_0^T (1 - B(t)/B(inf)) dt
  double increment;  // contribution of [T/2, T]
};

// RegimeError unless subcritical.
MeanEstimate b_mean_estimate(const BFunction& bf, double horizon);

}  // namespace tsruin
