#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "support/oracles.hpp"
#include "tsruin/diagnostics.hpp"
#include "tsruin/errors.hpp"
#include "tsruin/sim.hpp"

namespace {

namespace sim = tsruin::sim;
using tsruin::ClaimsModel;

ClaimsModel paper_ref() { return ClaimsModel::with_loading(0.01, 1.0, 0.99, 0.2); }

struct Moment {
  double mean;
  double std_error;
};

template <class Draw>
Moment laplace_moment(Draw&& draw, double lambda, int n) {
  double s = 0.0, ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = std::exp(-lambda * draw());
    s += v;
    ss += v * v;
  }
  const double mean = s / n;
  return {mean, std::sqrt(std::max(0.0, ss / n - mean * mean) / n)};
}

TEST(Stable, IncrementParametersMatchClosedForm) {
  const auto m = paper_ref();
  const auto& ref = oracle::kPaperRef;
  const auto p = sim::stable_increment_params(m, 0.01);
  EXPECT_EQ(p.rho, 0.99);
  EXPECT_EQ(p.beta, 1.0);
  EXPECT_NEAR(p.mu, -0.01 * static_cast<double>(oracle::premium(ref)), 1e-15);
  const double nu_rho = -0.01 * ref.c * std::cos(std::numbers::pi * ref.rho / 2.0) *
                        static_cast<double>(oracle::gamma_neg(oracle::Big(ref.rho)));
  EXPECT_NEAR(std::pow(p.nu, ref.rho), nu_rho, 1e-14);
  EXPECT_THROW(sim::stable_increment_params(m, 0.0), tsruin::DomainError);
  EXPECT_THROW((sim::StableLawParams{1.0, 1.0, 0.0, 1.0}.validate()), tsruin::DomainError);
  EXPECT_THROW((sim::StableLawParams{0.5, 1.5, 0.0, 1.0}.validate()), tsruin::DomainError);
  EXPECT_NO_THROW((sim::StableLawParams{1.5, -1.0, 0.0, 1.0}.validate()));
}

TEST(Stable, UniformsAreOpenAndExponentialsPositive) {
  sim::Rng rng(5);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = sim::uniform_open(rng);
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_GT(sim::standard_exponential(rng), 0.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000.0, 0.5, 5e-3);
}

TEST(Stable, LocationShiftsPathwise) {
  const sim::StableLawParams base{0.7, 1.0, 0.0, 0.3};
  sim::StableLawParams shifted = base;
  shifted.mu = -2.5;
  sim::Rng a(9), b(9);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_NEAR(sim::sample_stable(shifted, b), sim::sample_stable(base, a) - 2.5, 1e-12);
  }
}

TEST(Stable, TotallySkewedSamplesStayAboveLocation) {
  const sim::StableSampler draw({0.6, 1.0, 0.0, 1.0});
  sim::Rng rng(1);
  for (int i = 0; i < 100000; ++i) ASSERT_GE(draw(rng), 0.0);
}

class StableLaplace : public ::testing::TestWithParam<std::tuple<double, double>> {};

TEST_P(StableLaplace, MatchesLaplaceExponent) {
  const auto [rho, h] = GetParam();
  const oracle::Params par{0.01, 1.0, rho, 0.2};
  const auto m = ClaimsModel::with_loading(par.c, par.alpha, par.rho, par.xi);
  const sim::StableSampler draw(sim::stable_increment_params(m, h));
  sim::Rng rng(42);
  const double premium = static_cast<double>(oracle::premium(par));
  const double gam = static_cast<double>(oracle::gamma_neg(oracle::Big(rho)));
  for (double lambda : {0.5, 1.0, 2.0}) {
    const Moment est = laplace_moment([&] { return draw(rng); }, lambda, 200000);
    // E e^{-lambda S} = exp(h c Gamma(-rho) lambda^rho + lambda p h).
    const double exact = std::exp(h * par.c * gam * std::pow(lambda, rho) + lambda * premium * h);
    EXPECT_NEAR(est.mean, exact, 5.0 * est.std_error + 1e-12) << rho << " " << h << " " << lambda;
  }
}

INSTANTIATE_TEST_SUITE_P(Grid, StableLaplace,
                         ::testing::Combine(::testing::Values(0.5, 0.8, 0.99),
                                            ::testing::Values(0.01, 1.0)));

TEST(Stable, SumOfStepsHasTheLawOfOneLongStep) {
  const auto m = ClaimsModel::with_loading(0.3, 1.0, 0.7, 0.2);
  const sim::StableSampler fine(sim::stable_increment_params(m, 0.1));
  const sim::StableSampler coarse(sim::stable_increment_params(m, 1.0));
  sim::Rng a(3), b(4);
  for (double lambda : {0.3, 1.0}) {
    const Moment sum = laplace_moment(
        [&] {
          double s = 0.0;
          for (int k = 0; k < 10; ++k) s += fine(a);
          return s;
        },
        lambda, 100000);
    const Moment one = laplace_moment([&] { return coarse(b); }, lambda, 100000);
    EXPECT_NEAR(sum.mean, one.mean, 5.0 * std::hypot(sum.std_error, one.std_error)) << lambda;
  }
}

TEST(Tempered, LaplaceTransformAndAcceptanceRate) {
  const oracle::Params par{0.3, 1.0, 0.7, 0.2};
  const auto m = ClaimsModel::with_loading(par.c, par.alpha, par.rho, par.xi);
  const double h = 1.0;
  sim::TemperedSampler draw(m, h);
  sim::Rng rng(17);
  for (double lambda : {0.5, 2.0}) {
    const Moment est = laplace_moment([&] { return draw(rng); }, lambda, 100000);
    const double exact = std::exp(h * static_cast<double>(oracle::psi_y(par, oracle::Big(-lambda))));
    EXPECT_NEAR(est.mean, exact, 5.0 * est.std_error) << lambda;
  }
  // Acceptance probability is E e^{-alpha V} under the stable proposal.
  const double rate = static_cast<double>(draw.accepted()) / static_cast<double>(draw.proposals());
  const double expected = std::exp(h * par.c * static_cast<double>(oracle::gamma_neg(oracle::Big(par.rho))) *
                                   std::pow(par.alpha, par.rho));
  const double n = static_cast<double>(draw.proposals());
  EXPECT_NEAR(rate, expected, 5.0 * std::sqrt(expected * (1.0 - expected) / n));
  EXPECT_EQ(draw.accepted(), 200000u);
}

TEST(Tempered, MeanMatchesClaimRate) {
  const auto m = paper_ref();
  sim::TemperedSampler draw(m, 0.5);
  sim::Rng rng(8);
  const int n = 200000;
  double s = 0.0, ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = draw(rng);
    s += v;
    ss += v * v;
  }
  const double mean = s / n;
  const double se = std::sqrt((ss / n - mean * mean) / n);
  EXPECT_NEAR(mean, 0.5 * static_cast<double>(oracle::mean_y(oracle::kPaperRef)), 5.0 * se);
}

TEST(Plan, ValidatesStepAgainstHorizon) {
  sim::SimPlan plan;
  EXPECT_NO_THROW(plan.validate(2.0));
  EXPECT_EQ(plan.steps(2.0), 200u);
  plan.h = 0.3;
  EXPECT_THROW(plan.validate(1.0), tsruin::DomainError);
  plan.h = 3.0;
  EXPECT_THROW(plan.validate(1.0), tsruin::DomainError);
  plan = {};
  plan.paths = 0;
  EXPECT_THROW(plan.validate(1.0), tsruin::DomainError);
  plan = {};
  plan.threads = 0;
  EXPECT_THROW(plan.validate(1.0), tsruin::DomainError);
  plan = {};
  plan.h = 0.1;
  EXPECT_NO_THROW(plan.validate(0.7));
  EXPECT_EQ(plan.steps(0.7), 7u);
}

TEST(Batches, StatisticsOfBatchMeans) {
  sim::SimPlan plan;
  plan.batches = 4;
  int calls = 0;
  const auto r = sim::run_batches([&](sim::Rng&) { return static_cast<double>(++calls); }, plan);
  EXPECT_DOUBLE_EQ(r.mean, 2.5);
  // sd of {1,2,3,4} with N-1 is sqrt(5/3).
  EXPECT_NEAR(r.std_error, std::sqrt(5.0 / 3.0) / 2.0, 1e-15);
  EXPECT_EQ(r.batch_means.size(), 4u);
}

TEST(Batches, SeedsAreDistinct) {
  EXPECT_NE(sim::batch_seed(1, 0), sim::batch_seed(1, 1));
  EXPECT_NE(sim::batch_seed(1, 0), sim::batch_seed(2, 0));
  EXPECT_EQ(sim::batch_seed(7, 3), sim::batch_seed(7, 3));
}

TEST(Batches, SingleBatchWarnsAndReportsZeroError) {
  std::vector<std::string> notes;
  tsruin::diag::set_sink([&](const std::string& s) { notes.push_back(s); });
  sim::SimPlan plan;
  plan.batches = 1;
  plan.paths = 64;
  plan.h = 0.1;
  const auto r = sim::simulate_ruin_mc(paper_ref(), 0.1, 1.0, plan);
  tsruin::diag::reset_sink();
  EXPECT_EQ(r.std_error, 0.0);
  ASSERT_EQ(notes.size(), 1u);
  EXPECT_NE(notes[0].find("single batch"), std::string::npos);
}

TEST(Batches, ErrorsPropagateFromWorkers) {
  sim::SimPlan plan;
  plan.batches = 6;
  plan.threads = 3;
  EXPECT_THROW(sim::run_batches([](sim::Rng&) -> double { throw tsruin::NumericalError("x"); }, plan),
               tsruin::NumericalError);
}

TEST(MonteCarlo, ThreadCountDoesNotChangeResults) {
  sim::SimPlan plan;
  plan.paths = 256;
  plan.batches = 8;
  plan.seed = 99;
  const auto one = sim::simulate_ruin_mc(paper_ref(), 0.1, 0.5, plan);
  plan.threads = 4;
  const auto four = sim::simulate_ruin_mc(paper_ref(), 0.1, 0.5, plan);
  EXPECT_EQ(one.batch_means, four.batch_means);
  EXPECT_EQ(one.mean, four.mean);
  EXPECT_EQ(one.std_error, four.std_error);
  plan.seed = 100;
  EXPECT_NE(sim::simulate_ruin_mc(paper_ref(), 0.1, 0.5, plan).mean, one.mean);
}

TEST(MonteCarlo, RejectsBadInput) {
  sim::SimPlan plan;
  EXPECT_THROW(sim::simulate_ruin_mc(paper_ref(), 0.0, 1.0, plan), tsruin::DomainError);
  plan.h = 0.3;
  EXPECT_THROW(sim::simulate_ruin_mc(paper_ref(), 1.0, 1.0, plan), tsruin::DomainError);
  EXPECT_THROW(sim::simulate_ruin_naive(paper_ref(), 1.0, 1.0, plan), tsruin::DomainError);
}

TEST(MonteCarlo, FarReserveIsNeverReached) {
  sim::SimPlan plan;
  plan.paths = 512;
  plan.batches = 4;
  plan.h = 0.1;
  EXPECT_EQ(sim::simulate_ruin_mc(paper_ref(), 1e6, 1.0, plan).mean, 0.0);
}

TEST(MonteCarlo, AgreesWithNaiveSimulation) {
  const auto m = ClaimsModel::with_loading(0.3, 1.0, 0.7, 0.2);
  sim::SimPlan plan;
  plan.h = 0.05;
  plan.paths = 2000;
  plan.batches = 10;
  const auto mc = sim::simulate_ruin_mc(m, 0.5, 1.0, plan);
  const auto naive = sim::simulate_ruin_naive(m, 0.5, 1.0, plan);
  EXPECT_GT(mc.mean, 0.0);
  EXPECT_NEAR(mc.mean, naive.mean, 4.0 * std::hypot(mc.std_error, naive.std_error));
}

TEST(MonteCarlo, HalvingTheStepMovesTheMeanLittle) {
  sim::SimPlan plan;
  plan.paths = 4096;
  plan.batches = 10;
  const auto coarse = sim::simulate_ruin_mc(paper_ref(), 0.1, 1.0, plan);
  plan.h = 0.005;
  const auto fine = sim::simulate_ruin_mc(paper_ref(), 0.1, 1.0, plan);
  EXPECT_NEAR(coarse.mean, fine.mean, 3.0 * std::hypot(coarse.std_error, fine.std_error));
}

TEST(MonteCarlo, MatchesReferenceValueAtFiveUnitHorizon) {
  // Reference: 0.050478 +- 0.000295 for u = 0.1, t = 5, h = 0.01.
  sim::SimPlan plan;
  plan.paths = 4096;
  plan.batches = 30;
  const auto r = sim::simulate_ruin_mc(paper_ref(), 0.1, 5.0, plan);
  EXPECT_NEAR(r.mean, 0.050478, 3.0 * std::hypot(r.std_error, 0.000295));
}

}  // namespace
