#pragma once

// Monte Carlo estimation of P(tau(u) <= t).
//
// The mc approach simulates the Esscher-transformed process, a stable
// process with drift -p, and reweights paths that cross u by
// exp(-alpha Z_t + psi_X(alpha) t).  The naive approach simulates the
// tempered increments exactly by exponential-tilting rejection.

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "tsruin/model.hpp"

namespace tsruin::sim {

using Rng = std::mt19937_64;

// Stable law with characteristic exponent
//   -nu^rho |theta|^rho (1 - i beta sgn(theta) tan(pi rho / 2)) + i mu theta,
// i.e. nu is the scale parameter.
struct StableLawParams {
  double rho = 0.5;  // (0,1) or (1,2)
  double beta = 1.0;
  double mu = 0.0;
  double nu = 1.0;

  void validate() const;
};

// Uniform on (0,1) and Exp(1) variates built directly from the 64-bit
// stream so results do not depend on the standard library's distributions.
double uniform_open(Rng& rng);
double standard_exponential(Rng& rng);

// Chambers-Mallows-Stuck sampler with the per-law constants precomputed.
class StableSampler {
 public:
  explicit StableSampler(const StableLawParams& p);

  double operator()(Rng& rng) const;
  const StableLawParams& params() const { return params_; }

 private:
  StableLawParams params_;
  double shift_;      // B = atan(beta tan(pi rho / 2)) / rho
  double factor_;     // (1 + beta^2 tan^2(pi rho / 2))^{1 / (2 rho)}
  double inv_rho_;
  double tail_pow_;   // (1 - rho) / rho
};

double sample_stable(const StableLawParams& p, Rng& rng);

// Law of the Esscher-transformed increment over a step h:
// rho, beta = 1, mu = -p h, nu = (-h c cos(pi rho / 2) Gamma(-rho))^{1/rho}.
StableLawParams stable_increment_params(const ClaimsModel& m, double h);
// Same map for raw parameters; accepts rho in (1,2) as well.
StableLawParams stable_increment_params(double c, double rho, double premium, double h);

// Exact tempered-stable claims increment over a step h: a positive stable
// proposal V accepted with probability exp(-alpha V).
class TemperedSampler {
 public:
  TemperedSampler(const ClaimsModel& m, double h);

  // Claims increment V (premium not subtracted).
  double operator()(Rng& rng);
  std::uint64_t proposals() const { return proposals_; }
  std::uint64_t accepted() const { return accepted_; }

  static constexpr std::uint64_t kMaxProposals = 1'000'000;

 private:
  StableSampler proposal_;
  double alpha_;
  std::uint64_t proposals_ = 0;
  std::uint64_t accepted_ = 0;
};

struct SimPlan {
  double h = 0.01;
  std::uint64_t paths = 16384;  // n, per batch
  std::uint64_t batches = 30;   // N
  std::uint64_t seed = 1;
  unsigned threads = 1;

  // Throws DomainError on non-positive fields, h > t or h not dividing t.
  void validate(double t) const;
  // Number of steps t / h, assuming validate(t) passed.
  std::uint64_t steps(double t) const;
};

struct BatchResult {
  double mean = 0.0;
  double std_error = 0.0;  // sample sd of batch means (N - 1) / sqrt(N)
  double elapsed_seconds = 0.0;
  std::uint64_t batches = 0;
  std::uint64_t paths_per_batch = 0;
  std::vector<double> batch_means;
};

// A batch job returns the batch estimate given its own RNG stream.
using BatchJob = std::function<double(Rng&)>;

// Seed of batch k: splitmix64 hash of (seed, k).
std::uint64_t batch_seed(std::uint64_t seed, std::uint64_t k);

// Runs plan.batches jobs on plan.threads workers.  Output depends only on
// (job, seed, batches), never on scheduling.
BatchResult run_batches(const BatchJob& job, const SimPlan& plan);

BatchResult simulate_ruin_mc(const ClaimsModel& m, double u, double t, const SimPlan& plan);
BatchResult simulate_ruin_naive(const ClaimsModel& m, double u, double t, const SimPlan& plan);

}  // namespace tsruin::sim
