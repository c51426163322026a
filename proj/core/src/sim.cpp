#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "tsruin/diagnostics.hpp"
#include "tsruin/errors.hpp"
#include "tsruin/sim.hpp"

namespace tsruin::sim {

void SimPlan::validate(double t) const {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("horizon t must be positive");
  if (!(h > 0.0)) throw DomainError("time step h must be positive");
  if (h > t) throw DomainError("time step h must not exceed t");
  if (paths == 0 || batches == 0) throw DomainError("paths and batches must be at least 1");
  if (threads == 0) throw DomainError("threads must be at least 1");
  const double ratio = t / h;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
    throw DomainError("time step h=" + std::to_string(h) + " does not divide t=" +
                      std::to_string(t));
  }
}

std::uint64_t SimPlan::steps(double t) const {
  return static_cast<std::uint64_t>(std::llround(t / h));
}

std::uint64_t batch_seed(std::uint64_t seed, std::uint64_t k) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (k + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

BatchResult run_batches(const BatchJob& job, const SimPlan& plan) {
  if (plan.batches == 0) throw DomainError("batches must be at least 1");
  const auto start = std::chrono::steady_clock::now();
  BatchResult out;
  out.batches = plan.batches;
  out.paths_per_batch = plan.paths;
  out.batch_means.assign(plan.batches, 0.0);

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::uint64_t k = next++; k < plan.batches; k = next++) {
      try {
        Rng rng(batch_seed(plan.seed, k));
        out.batch_means[k] = job(rng);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = plan.batches;
      }
    }
  };
  const auto workers = static_cast<unsigned>(
      std::min<std::uint64_t>(std::max(1u, plan.threads), plan.batches));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  const double n = static_cast<double>(plan.batches);
  double sum = 0.0;
  for (double v : out.batch_means) sum += v;
  out.mean = sum / n;
  if (plan.batches > 1) {
    double ss = 0.0;
    for (double v : out.batch_means) ss += (v - out.mean) * (v - out.mean);
    out.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  } else {
    diag::warn("single batch: standard error reported as 0");
  }
  out.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

BatchResult simulate_ruin_mc(const ClaimsModel& m, double u, double t, const SimPlan& plan) {
  if (!(u > 0.0)) throw DomainError("initial reserve u must be positive");
  plan.validate(t);
  const StableSampler increment(stable_increment_params(m, plan.h));
  const std::uint64_t steps = plan.steps(t);
  const double alpha = m.alpha();
  const double correction = std::exp(cumulant_x(m, alpha) * t);
  const std::uint64_t paths = plan.paths;
  auto job = [&](Rng& rng) {
    double weight = 0.0;
    for (std::uint64_t i = 0; i < paths; ++i) {
      double z = 0.0;
      bool hit = false;
      for (std::uint64_t s = 0; s < steps; ++s) {
        z += increment(rng);
        hit = hit || z > u;
      }
      if (hit) weight += std::exp(-alpha * z);
    }
    return correction * weight / static_cast<double>(paths);
  };
  return run_batches(job, plan);
}

BatchResult simulate_ruin_naive(const ClaimsModel& m, double u, double t, const SimPlan& plan) {
  if (!(u > 0.0)) throw DomainError("initial reserve u must be positive");
  plan.validate(t);
  const std::uint64_t steps = plan.steps(t);
  const double drift = m.premium() * plan.h;
  const std::uint64_t paths = plan.paths;
  auto job = [&](Rng& rng) {
    TemperedSampler claims(m, plan.h);
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < paths; ++i) {
      double x = 0.0;
      for (std::uint64_t s = 0; s < steps; ++s) {
        x += claims(rng) - drift;
        if (x > u) {
          ++hits;
          break;
        }
      }
    }
    return static_cast<double>(hits) / static_cast<double>(paths);
  };
  return run_batches(job, plan);
}

}  // namespace tsruin::sim
