#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "tsruin/errors.hpp"
#include "tsruin/model.hpp"
#include "tsruin/model_mp.hpp"

namespace tsruin {
namespace {

using cplx = std::complex<double>;

constexpr double kResidualTol = 1e-12;
constexpr int kNewtonIters = 30;

std::string describe(cplx z) {
  return "(" + std::to_string(z.real()) + "," + std::to_string(z.imag()) + ")";
}

// Root of psi_X(beta) = delta on (-inf, argmin].  Bracketed bisection, then
// safeguarded Newton.
double phi_real(const ClaimsModel& m, double delta) {
  if (delta == 0.0) return 0.0;
  if (!std::isfinite(delta)) throw DomainError("phi: delta must be finite");
  const double beta_min = cumulant_x_argmin(m);
  const double psi_min = cumulant_x(m, beta_min);
  if (delta < psi_min) {
    throw DomainError("phi: delta=" + std::to_string(delta) +
                      " lies on the branch cut (below min psi_X=" + std::to_string(psi_min) + ")");
  }
  // Invariant: psi(lo) >= delta >= psi(hi).
  double lo = 0.0;
  double hi = 0.0;
  if (delta > 0.0) {
    double span = 1.0;
    while (cumulant_x(m, -span) < delta) {
      span *= 2.0;
      if (span > 1e300) throw NumericalError("phi: failed to bracket root");
    }
    lo = -span;
  } else {
    hi = beta_min;
  }
  auto f = [&](double b) { return cumulant_x(m, b) - delta; };
  const double scale = std::abs(delta);
  for (int i = 0; i < 200 && hi - lo > 1e-6 * std::max(1.0, std::abs(lo)); ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) >= 0.0 ? lo : hi) = mid;
  }
  double beta = 0.5 * (lo + hi);
  for (int i = 0; i < kNewtonIters; ++i) {
    const double r = f(beta);
    if (std::abs(r) <= 0.1 * kResidualTol * scale) break;
    (r >= 0.0 ? lo : hi) = beta;
    double next = beta - r / cumulant_x_derivative(m, beta);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == beta) break;
    beta = next;
  }
  const double residual = std::abs(f(beta));
  if (residual > kResidualTol * scale) {
    throw NumericalError("phi: residual " + std::to_string(residual / scale) +
                             " above tolerance at delta=" + std::to_string(delta),
                         residual / scale);
  }
  return beta;
}

struct NewtonResult {
  cplx beta;
  cplx first_step;
  bool converged;
};

NewtonResult newton(const ClaimsModel& m, cplx delta, cplx beta, int max_iters) {
  NewtonResult out{beta, {}, false};
  for (int i = 0; i < max_iters; ++i) {
    const cplx step = (cumulant_x(m, beta) - delta) / cumulant_x_derivative(m, beta);
    if (i == 0) out.first_step = step;
    beta -= step;
    if (!std::isfinite(beta.real()) || !std::isfinite(beta.imag())) return out;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(beta))) {
      out.beta = beta;
      out.converged = true;
      return out;
    }
  }
  out.beta = beta;
  const double residual = std::abs(cumulant_x(m, beta) - delta);
  out.converged = residual <= 0.1 * kResidualTol * std::max(1.0, std::abs(delta));
  return out;
}

// Newton from `seed`, accepted only when the root lies within a small
// multiple of the first Newton step.  For Re delta > 0 the decreasing-branch
// root is the only one left of the minimiser of psi_X, so roots to its right
// are rejected there.
bool try_hinted(const ClaimsModel& m, cplx delta, cplx seed, cplx& root) {
  const NewtonResult r = newton(m, delta, seed, 12);
  if (!r.converged) return false;
  if (delta.real() > 0.0 && r.beta.real() > cumulant_x_argmin(m)) return false;
  if (std::abs(r.beta - seed) > 2.0 * std::abs(r.first_step) + 1e-12 * (1.0 + std::abs(seed))) {
    return false;
  }
  root = r.beta;
  return true;
}

// Continuation along the segment from the real point x0 = max(Re d, 0) + Im d
// to d.  The segment stays in the open upper half plane except at x0, so it
// never touches the cut.
cplx phi_by_continuation(const ClaimsModel& m, cplx delta) {
  const double x0 = std::max(delta.real(), 0.0) + delta.imag();
  cplx beta = phi_real(m, x0);
  cplx current = x0;
  double s = 0.0;
  double ds = 0.125;
  while (s < 1.0) {
    const double next_s = std::min(1.0, s + ds);
    const cplx target = cplx(x0) + (delta - cplx(x0)) * next_s;
    const cplx predictor = beta + (target - current) / cumulant_x_derivative(m, beta);
    cplx root;
    if (try_hinted(m, target, predictor, root)) {
      beta = root;
      current = target;
      s = next_s;
      ds = std::min(0.5, 2.0 * ds);
    } else {
      ds *= 0.5;
      if (ds < 1e-12) {
        throw NumericalError("phi: continuation stalled at delta=" + describe(target));
      }
    }
  }
  return beta;
}

cplx phi_upper(const ClaimsModel& m, cplx delta, const std::optional<cplx>& hint) {
  cplx root;
  if (!(hint && try_hinted(m, delta, *hint, root))) root = phi_by_continuation(m, delta);
  const double residual = std::abs(cumulant_x(m, root) - delta);
  const double scale = std::max(std::abs(delta), std::numeric_limits<double>::min());
  if (residual > kResidualTol * scale) {
    throw NumericalError("phi: residual above tolerance at delta=" + describe(delta),
                         residual / scale);
  }
  return root;
}

}  // namespace

double phi(const ClaimsModel& m, double delta) { return phi_real(m, delta); }

std::complex<double> phi(const ClaimsModel& m, std::complex<double> delta,
                         std::optional<std::complex<double>> hint) {
  if (delta.imag() == 0.0) return phi_real(m, delta.real());
  if (delta.imag() < 0.0) {
    std::optional<cplx> mirrored;
    if (hint) mirrored = std::conj(*hint);
    return std::conj(phi_upper(m, std::conj(delta), mirrored));
  }
  return phi_upper(m, delta, hint);
}

std::complex<double> PhiSolver::operator()(std::complex<double> delta) {
  if (delta.imag() < 0.0) return std::conj((*this)(std::conj(delta)));
  if (delta.imag() == 0.0) return phi_real(model_, delta.real());
  std::optional<cplx> hint;
  if (last_delta_) hint = last_beta_;
  const cplx root = phi_upper(model_, delta, hint);
  last_delta_ = delta;
  last_beta_ = root;
  return root;
}

// ------------------------------------------------------------ MP cumulant

MpCumulant::MpCumulant(const ClaimsModel& m, unsigned digits)
    : digits_(digits),
      alpha_(m.alpha(), digits),
      rho_(m.rho(), digits),
      premium_(m.premium(), digits) {
  const mp::Real c(m.c(), digits);
  c_gamma_ = c * (mp::tgamma(1.0 - rho_) / (-rho_));
  alpha_rho_ = mp::pow(alpha_, rho_);
  psi_alpha_ = -c_gamma_ * alpha_rho_ - premium_ * alpha_;
  // E X_1 = -c rho Gamma(-rho) alpha^{rho-1} - p
  mean_x_ = -c_gamma_ * rho_ * mp::pow(alpha_, rho_ - 1.0) - premium_;
}

mp::Complex MpCumulant::psi_x(const mp::Complex& theta) const {
  const mp::Complex bracket = alpha_rho_ - mp::pow(alpha_ - theta, rho_);
  return -c_gamma_ * bracket - premium_ * theta;
}

mp::Complex MpCumulant::psi_x_derivative(const mp::Complex& theta) const {
  return -(c_gamma_ * rho_) * mp::pow(alpha_ - theta, rho_ - 1.0) - mp::Complex(premium_);
}

mp::Complex phi_mp(const MpCumulant& k, const mp::Complex& delta, std::complex<double> seed) {
  const unsigned digits = k.digits();
  mp::Complex beta(seed, digits);
  const mp::Real tol(std::pow(10.0, -static_cast<double>(digits)), digits);
  for (int i = 0; i < 60; ++i) {
    const mp::Complex step = (k.psi_x(beta) - delta) / k.psi_x_derivative(beta);
    beta -= step;
    if (mp::abs(step) <= tol * (1.0 + mp::abs(beta))) return beta;
  }
  throw NumericalError("phi: extended-precision Newton did not converge at delta=" +
                       describe(delta.to_complex()));
}

}  // namespace tsruin
