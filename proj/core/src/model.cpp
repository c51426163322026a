#include "tsruin/model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "tsruin/errors.hpp"

namespace tsruin {
namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw DomainError(message);
}

void require_theta(const ClaimsModel& m, double theta) {
  if (!(theta <= m.alpha())) {
    throw DomainError("cumulant undefined for theta=" + std::to_string(theta) +
                      " > alpha=" + std::to_string(m.alpha()));
  }
}

double mean_y_raw(double c, double alpha, double rho) {
  return -c * rho * gamma_neg(rho) * std::pow(alpha, rho - 1.0);
}

}  // namespace

double gamma_neg(double rho) {
  require(rho > 0.0 && std::floor(rho) != rho, "gamma_neg requires a positive non-integer rho");
  return std::tgamma(1.0 - rho) / (-rho);
}

ClaimsModel::ClaimsModel(double c, double alpha, double rho, double premium)
    : c_(c), alpha_(alpha), rho_(rho), premium_(premium), gamma_neg_rho_(0.0) {
  require(c > 0.0 && std::isfinite(c), "c must be positive");
  require(alpha > 0.0 && std::isfinite(alpha), "alpha must be positive");
  require(rho > 0.0 && rho < 1.0, "rho must lie in (0,1)");
  gamma_neg_rho_ = gamma_neg(rho);
  const double mean = mean_y_raw(c, alpha, rho);
  require(std::isfinite(premium) && premium > mean,
          "net profit condition violated: premium " + std::to_string(premium) +
              " <= E Y_1 = " + std::to_string(mean));
}

ClaimsModel ClaimsModel::with_premium(double c, double alpha, double rho, double premium) {
  return ClaimsModel(c, alpha, rho, premium);
}

ClaimsModel ClaimsModel::with_loading(double c, double alpha, double rho, double xi) {
  require(rho > 0.0 && rho < 1.0, "rho must lie in (0,1)");
  require(c > 0.0 && alpha > 0.0, "c and alpha must be positive");
  return ClaimsModel(c, alpha, rho, premium_from_loading(mean_y_raw(c, alpha, rho), xi));
}

double ClaimsModel::loading() const { return premium_ / mean_y(*this) - 1.0; }

const char* to_string(RegimeTag tag) {
  switch (tag) {
    case RegimeTag::Subcritical: return "subcritical";
    case RegimeTag::Critical: return "critical";
    case RegimeTag::Supercritical: return "supercritical";
  }
  return "unknown";
}

ScaleChange::ScaleChange(double time_scale, double currency_scale)
    : a(time_scale), b(currency_scale) {
  require(a > 0.0 && b > 0.0, "scale change factors must be positive");
}

double cumulant_y(const ClaimsModel& m, double theta) {
  require_theta(m, theta);
  // alpha^rho - (alpha - theta)^rho = -alpha^rho expm1(rho log1p(-theta/alpha)),
  // which keeps full relative accuracy for small |theta|.
  const double bracket =
      -std::pow(m.alpha(), m.rho()) * std::expm1(m.rho() * std::log1p(-theta / m.alpha()));
  return -m.c() * m.gamma_neg_rho() * bracket;
}

std::complex<double> cumulant_y(const ClaimsModel& m, std::complex<double> theta) {
  if (theta.imag() == 0.0) return cumulant_y(m, theta.real());
  const std::complex<double> alpha(m.alpha(), 0.0);
  return -m.c() * m.gamma_neg_rho() *
         (std::pow(m.alpha(), m.rho()) - std::pow(alpha - theta, m.rho()));
}

double mean_y(const ClaimsModel& m) {
  return -m.c() * m.rho() * m.gamma_neg_rho() * std::pow(m.alpha(), m.rho() - 1.0);
}

double cumulant_x(const ClaimsModel& m, double theta) {
  return cumulant_y(m, theta) - m.premium() * theta;
}

std::complex<double> cumulant_x(const ClaimsModel& m, std::complex<double> theta) {
  return cumulant_y(m, theta) - m.premium() * theta;
}

double cumulant_x_derivative(const ClaimsModel& m, double theta) {
  require_theta(m, theta);
  return -m.c() * m.gamma_neg_rho() * m.rho() * std::pow(m.alpha() - theta, m.rho() - 1.0) -
         m.premium();
}

std::complex<double> cumulant_x_derivative(const ClaimsModel& m, std::complex<double> theta) {
  const std::complex<double> alpha(m.alpha(), 0.0);
  return -m.c() * m.gamma_neg_rho() * m.rho() * std::pow(alpha - theta, m.rho() - 1.0) -
         m.premium();
}

double mean_x(const ClaimsModel& m) { return mean_y(m) - m.premium(); }

double cumulant_x_argmin(const ClaimsModel& m) {
  // psi_X'(beta) = 0  <=>  (alpha - beta)^{rho-1} = alpha^{rho-1} p / E Y_1.
  const double ratio = m.premium() / mean_y(m);
  return m.alpha() * (1.0 - std::pow(ratio, -1.0 / (1.0 - m.rho())));
}

double premium_from_loading(double mean_claims, double xi) {
  require(mean_claims > 0.0, "mean claims must be positive");
  require(xi > 0.0, "safety loading must be positive (net profit condition)");
  return (1.0 + xi) * mean_claims;
}

Regime classify_regime(const ClaimsModel& m) {
  const double psi_alpha = cumulant_x(m, m.alpha());
  const double tol = 1e-12 * std::abs(cumulant_y(m, m.alpha()));
  RegimeTag tag = RegimeTag::Critical;
  if (psi_alpha < -tol) {
    tag = RegimeTag::Subcritical;
  } else if (psi_alpha > tol) {
    tag = RegimeTag::Supercritical;
  }
  return {tag, psi_alpha, tol, min_loading_for_subcritical(m.rho())};
}

double min_loading_for_subcritical(double rho) {
  require(rho > 0.0 && rho < 1.0, "rho must lie in (0,1)");
  return (1.0 - rho) / rho;
}

double levy_tail(const ClaimsModel& m, double u) {
  require(u > 0.0 && std::isfinite(u), "levy_tail requires u > 0");
  const double a = m.alpha();
  const double rho = m.rho();
  using Quadrature = boost::math::quadrature::gauss_kronrod<double, 31>;
  constexpr double kTol = 1e-13;
  constexpr unsigned kDepth = 12;
  if (a * u < 1.0) {
    // x = u e^s:  c u^{-rho} int_0^inf exp(-rho s - alpha u e^s) ds, in unit panels
    // up to alpha u e^s = 50.
    auto integrand = [&](double s) { return std::exp(-rho * s - a * u * std::exp(s)); };
    const double end = std::log(50.0 / (a * u));
    double total = 0.0;
    for (double lo = 0.0; lo < end; lo += 1.0) {
      total += Quadrature::integrate(integrand, lo, std::min(lo + 1.0, end), kDepth, kTol);
    }
    return m.c() * std::pow(u, -rho) * total;
  }
  // x = u + y / alpha:  c e^{-alpha u} / alpha * int_0^inf e^{-y} (u + y/alpha)^{-1-rho} dy.
  const double power = -1.0 - rho;
  auto integrand = [&](double y) { return std::exp(-y) * std::pow(u + y / a, power); };
  const double total =
      Quadrature::integrate(integrand, 0.0, 1.0, kDepth, kTol) +
      Quadrature::integrate(integrand, 1.0, std::numeric_limits<double>::infinity(), kDepth, kTol);
  return m.c() * std::exp(-a * u) / a * total;
}

double levy_tail_asymptotic(const ClaimsModel& m, double u) {
  require(u > 0.0, "levy_tail_asymptotic requires u > 0");
  return m.c() * std::exp(-m.alpha() * u) / (m.alpha() * std::pow(u, 1.0 + m.rho()));
}

ClaimsModel rescale(const ClaimsModel& m, const ScaleChange& s) {
  const double c = s.a * std::pow(s.b, m.rho()) * m.c();
  const double alpha = m.alpha() / s.b;
  return ClaimsModel::with_loading(c, alpha, m.rho(), m.loading());
}

}  // namespace tsruin
