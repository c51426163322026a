#include "tsruin/ruin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "tsruin/diagnostics.hpp"
#include "tsruin/errors.hpp"

namespace tsruin {
namespace {

using cplx = std::complex<double>;

void require_positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(std::string(name) + " must be positive and finite, got " + std::to_string(x));
  }
}

void require_net_profit(const ClaimsModel& m) {
  if (!(mean_x(m) < 0.0)) throw DomainError("net profit condition E X_1 < 0 violated");
}

void require_subcritical(const ClaimsModel& m, const char* what) {
  const Regime r = classify_regime(m);
  if (r.tag != RegimeTag::Subcritical) {
    throw RegimeError(std::string(what) + " requires the subcritical regime; psi_X(alpha)=" +
                      std::to_string(r.psi_alpha) + " (" + to_string(r.tag) +
                      "), loading must exceed " + std::to_string(r.loading_threshold));
  }
}

unsigned digits_of(const mp::Complex& z) { return z.real().digits(); }

}  // namespace

const char* to_string(Method method) {
  switch (method) {
    case Method::Rft: return "rft";
    case Method::Tulta: return "tulta";
    case Method::InfiniteHorizon: return "infinite";
    case Method::MonteCarlo: return "mc";
  }
  return "unknown";
}

// ------------------------------------------------------------- transforms

BTransform::BTransform(const ClaimsModel& m)
    : model_(m), psi_alpha_(cumulant_x(m, m.alpha())), solver_(m) {}

double BTransform::abscissa() const { return std::max(0.0, psi_alpha_); }

const MpCumulant& BTransform::cumulant(unsigned digits) const {
  if (!mp_ || mp_->digits() != digits) mp_ = std::make_unique<MpCumulant>(model_, digits);
  return *mp_;
}

cplx BTransform::operator()(cplx delta) const {
  const cplx beta = solver_(delta);
  const cplx shifted = delta - psi_alpha_;
  return (beta - model_.alpha()) / (shifted * shifted * beta);
}

mp::Complex BTransform::operator()(const mp::Complex& delta) const {
  const MpCumulant& k = cumulant(digits_of(delta));
  const mp::Complex beta = phi_mp(k, delta, solver_(delta.to_complex()));
  const mp::Complex shifted = delta - k.psi_x_alpha();
  return (beta - k.alpha()) / (shifted * shifted * beta);
}

WTransform::WTransform(const ClaimsModel& m) : model_(m) { require_net_profit(m); }

cplx WTransform::operator()(cplx beta) const { return 1.0 / cumulant_x(model_, -beta); }

mp::Complex WTransform::operator()(const mp::Complex& beta) const {
  const MpCumulant k(model_, digits_of(beta));
  return 1.0 / k.psi_x(-beta);
}

EventualRuinTransform::EventualRuinTransform(const ClaimsModel& m)
    : model_(m), mean_x_(mean_x(m)) {
  require_net_profit(m);
}

cplx EventualRuinTransform::operator()(cplx beta) const {
  return 1.0 / beta + mean_x_ / cumulant_x(model_, -beta);
}

mp::Complex EventualRuinTransform::operator()(const mp::Complex& beta) const {
  const MpCumulant k(model_, digits_of(beta));
  return 1.0 / beta + k.mean_x() / k.psi_x(-beta);
}

cplx b_tilde(const ClaimsModel& m, cplx delta) {
  const double psi_alpha = cumulant_x(m, m.alpha());
  if (!(delta.real() > std::max(0.0, psi_alpha))) {
    throw DomainError("b_tilde requires Re delta > max(0, psi_X(alpha)) = " +
                      std::to_string(std::max(0.0, psi_alpha)));
  }
  const cplx beta = phi(m, delta);
  const cplx shifted = delta - psi_alpha;
  return (beta - m.alpha()) / (shifted * shifted * beta);
}

// -------------------------------------------------------------- BFunction

BFunction::BFunction(const ClaimsModel& m, laplace::InversionSpec spec)
    : model_(m), spec_(spec) {
  spec_.validate();
}

double BFunction::operator()(double t) const {
  require_positive(t, "t");
  {
    std::shared_lock lock(mutex_);
    if (auto it = memo_.find(t); it != memo_.end()) return it->second;
  }
  const BTransform transform(model_);
  double value = laplace::invert(transform, t, spec_);
  if (t < 1e-6 && value < 0.0) {
    diag::warn("B(" + std::to_string(t) + ") = " + std::to_string(value) + " clamped to 0");
    value = 0.0;
  }
  std::unique_lock lock(mutex_);
  memo_.emplace(t, value);
  return value;
}

std::size_t BFunction::cached() const {
  std::shared_lock lock(mutex_);
  return memo_.size();
}

double b_of_t(const BFunction& bf, double t) { return bf(t); }

double b_infinity(const ClaimsModel& m) {
  require_subcritical(m, "B(inf)");
  const double psi_alpha = cumulant_x(m, m.alpha());
  return m.alpha() * std::abs(mean_x(m)) / (psi_alpha * psi_alpha);
}

double scale_function(const ClaimsModel& m, double u, const laplace::InversionSpec& spec) {
  require_positive(u, "u");
  const WTransform transform(m);
  return laplace::invert(transform, u, spec);
}

double prob_eventual_ruin(const ClaimsModel& m, double u, const laplace::InversionSpec& spec) {
  require_positive(u, "u");
  const EventualRuinTransform transform(m);
  const double raw = laplace::invert(transform, u, spec);
  const double clamped = std::clamp(raw, 0.0, 1.0);
  if (std::abs(raw - clamped) > 1e-6) {
    diag::warn("P(tau(" + std::to_string(u) + ") < inf) = " + std::to_string(raw) +
               " clamped to [0,1]");
  }
  return clamped;
}

// ------------------------------------------------------------- estimators

RuinEstimate estimate_rft(const BFunction& bf, double u, double t) {
  require_positive(u, "u");
  const double b = std::isinf(t) ? b_infinity(bf.model()) : bf(t);
  return {u, t, levy_tail(bf.model(), u) * b, Method::Rft, std::nullopt};
}

RuinEstimate estimate_tulta(const BFunction& bf, double u, double t) {
  require_positive(u, "u");
  require_subcritical(bf.model(), "the tulta estimate");
  const double eventual = prob_eventual_ruin(bf.model(), u, bf.spec());
  if (std::isinf(t)) return {u, t, eventual, Method::Tulta, std::nullopt};
  const double ratio = std::clamp(bf(t) / b_infinity(bf.model()), 0.0, 1.0);
  return {u, t, eventual * ratio, Method::Tulta, std::nullopt};
}

RuinEstimate estimate_infinite(const ClaimsModel& m, double u,
                               const laplace::InversionSpec& spec) {
  return {u, std::numeric_limits<double>::infinity(), prob_eventual_ruin(m, u, spec),
          Method::InfiniteHorizon, std::nullopt};
}

// ------------------------------------------------------------ diagnostics

GrowthDiagnostic growth_diagnostic(const BFunction& bf, double t_lo, double t_hi, int points,
                                   double tol) {
  require_positive(t_lo, "t_lo");
  if (!(t_hi > t_lo)) throw DomainError("growth_diagnostic requires t_lo < t_hi");
  if (points < 2) throw DomainError("growth_diagnostic requires at least two points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < points; ++i) {
    const double t = t_lo + (t_hi - t_lo) * i / (points - 1);
    const double b = bf(t);
    if (!(b > 0.0)) throw NumericalError("growth_diagnostic: B(" + std::to_string(t) + ") <= 0");
    const double y = std::log(b);
    sx += t;
    sy += y;
    sxx += t * t;
    sxy += t * y;
  }
  const double n = points;
  GrowthDiagnostic out{};
  const Regime regime = classify_regime(bf.model());
  out.regime = regime.tag;
  out.psi_alpha = regime.psi_alpha;
  out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double b_hi = bf(t_hi);
  out.b_over_t = b_hi / t_hi;
  out.b_over_t2 = b_hi / (t_hi * t_hi);
  if (regime.tag == RegimeTag::Critical) out.linear_growth_ok = out.b_over_t >= 1.0 - tol;
  return out;
}

double b_sup_moment(const BFunction& bf, double t) {
  require_positive(t, "t");
  const double h = std::max(1e-4, 1e-3 * t);
  const double lo = std::max(0.0, t - h);
  const double b_lo = lo > 0.0 ? bf(lo) : 0.0;
  const double derivative = (bf(t + h) - b_lo) / (t + h - lo);
  const double psi_alpha = cumulant_x(bf.model(), bf.model().alpha());
  return derivative - psi_alpha * bf(t);
}

MeanEstimate b_mean_estimate(const BFunction& bf, double horizon) {
  require_subcritical(bf.model(), "b_mean_estimate");
  if (horizon == 0.0) return {0.0, 0.0};
  require_positive(horizon, "T");
  const double b_inf = b_infinity(bf.model());
  auto gap = [&](double t) { return t <= 0.0 ? 1.0 : 1.0 - bf(t) / b_inf; };
  using Quadrature = boost::math::quadrature::gauss_kronrod<double, 15>;
  const double half = 0.5 * horizon;
  const double head = Quadrature::integrate(gap, 0.0, half, 6, 1e-9);
  const double tail = Quadrature::integrate(gap, half, horizon, 6, 1e-9);
  return {head + tail, tail};
}

}  // namespace tsruin
