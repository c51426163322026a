#include <cmath>
#include <numbers>
#include <string>

#include "tsruin/errors.hpp"
#include "tsruin/sim.hpp"

namespace tsruin::sim {

void StableLawParams::validate() const {
  const bool rho_ok = (rho > 0.0 && rho < 1.0) || (rho > 1.0 && rho < 2.0);
  if (!rho_ok) throw DomainError("stable index must lie in (0,1) or (1,2), got " + std::to_string(rho));
  if (!(beta >= -1.0 && beta <= 1.0)) throw DomainError("stable skewness must lie in [-1,1]");
  if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError("stable scale must be positive");
  if (!std::isfinite(mu)) throw DomainError("stable location must be finite");
}

double uniform_open(Rng& rng) {
  // 53 random bits, offset by half an ulp so 0 is never returned.
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double standard_exponential(Rng& rng) { return -std::log(uniform_open(rng)); }

StableSampler::StableSampler(const StableLawParams& p) : params_(p) {
  p.validate();
  const double tangent = p.beta * std::tan(std::numbers::pi * p.rho / 2.0);
  shift_ = std::atan(tangent) / p.rho;
  factor_ = std::pow(1.0 + tangent * tangent, 1.0 / (2.0 * p.rho));
  inv_rho_ = 1.0 / p.rho;
  tail_pow_ = (1.0 - p.rho) / p.rho;
}

double StableSampler::operator()(Rng& rng) const {
  const double v = std::numbers::pi * (uniform_open(rng) - 0.5);
  const double w = standard_exponential(rng);
  const double rho = params_.rho;
  const double arg = rho * (v + shift_);
  const double x = factor_ * std::sin(arg) / std::pow(std::cos(v), inv_rho_) *
                   std::pow(std::cos(v - arg) / w, tail_pow_);
  return params_.nu * x + params_.mu;
}

double sample_stable(const StableLawParams& p, Rng& rng) { return StableSampler(p)(rng); }

StableLawParams stable_increment_params(double c, double rho, double premium, double h) {
  if (!(h > 0.0)) throw DomainError("time step h must be positive");
  if (!(c > 0.0)) throw DomainError("c must be positive");
  const double scale_rho = -h * c * std::cos(std::numbers::pi * rho / 2.0) * gamma_neg(rho);
  StableLawParams p{rho, 1.0, -premium * h, std::pow(scale_rho, 1.0 / rho)};
  p.validate();
  return p;
}

StableLawParams stable_increment_params(const ClaimsModel& m, double h) {
  return stable_increment_params(m.c(), m.rho(), m.premium(), h);
}

TemperedSampler::TemperedSampler(const ClaimsModel& m, double h)
    : proposal_([&] {
        StableLawParams p = stable_increment_params(m, h);
        p.mu = 0.0;
        return p;
      }()),
      alpha_(m.alpha()) {}

double TemperedSampler::operator()(Rng& rng) {
  for (std::uint64_t i = 0; i < kMaxProposals; ++i) {
    const double v = proposal_(rng);
    ++proposals_;
    if (uniform_open(rng) <= std::exp(-alpha_ * v)) {
      ++accepted_;
      return v;
    }
  }
  throw NumericalError("tempered sampler: no acceptance after " +
                       std::to_string(kMaxProposals) + " proposals");
}

}  // namespace tsruin::sim
