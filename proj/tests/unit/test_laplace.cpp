#include <cmath>
#include <complex>
#include <initializer_list>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "tsruin/errors.hpp"
#include "tsruin/laplace.hpp"
#include "tsruin/ruin.hpp"

namespace {

namespace lp = tsruin::laplace;

const auto kRamp = lp::make_transform([](const auto& s) { return 1.0 / (s * s); }, 0.0);
const auto kDecay = lp::make_transform([](const auto& s) { return 1.0 / (s + 1.0); }, -1.0);
const auto kSine = lp::make_transform([](const auto& s) { return 1.0 / (s * s + 1.0); }, 0.0);

class KnownPairs : public ::testing::TestWithParam<double> {};

TEST_P(KnownPairs, TalbotRecoversRampAndDecay) {
  const double t = GetParam();
  EXPECT_NEAR(lp::talbot_invert(kRamp, t, 32), t, 1e-12 * t);
  EXPECT_NEAR(lp::talbot_invert(kDecay, t, 32), std::exp(-t), 1e-14);
}

TEST_P(KnownPairs, LevinRecoversRampAndDecay) {
  const double t = GetParam();
  EXPECT_NEAR(lp::levin_invert(kRamp, t, 64, 64), t, 1e-6);
  EXPECT_NEAR(lp::levin_invert(kDecay, t, 64, 64), std::exp(-t), 1e-6);
}

TEST_P(KnownPairs, SineNeedsTheContourToEncloseTheImaginaryPoles) {
  const double t = GetParam();
  EXPECT_NEAR(lp::talbot_invert(kSine, t, 32, 1.0), std::sin(t), 1e-12);
  EXPECT_NEAR(lp::levin_invert(kSine, t, 64, 64), std::sin(t), 1e-6);
}

INSTANTIATE_TEST_SUITE_P(Grid, KnownPairs, ::testing::Values(0.5, 1.0, 2.0, 5.0, 10.0));

TEST(Talbot, MorePrecisionHelpsAtLargeTime) {
  const double t = 40.0;
  const double exact = std::exp(-t);
  // Fixed Talbot error is roughly 10^{-0.6 M} in absolute terms.
  const double coarse = std::abs(lp::talbot_invert(kDecay, t, 16) - exact);
  const double fine = std::abs(lp::talbot_invert(kDecay, t, 48) - exact);
  EXPECT_LT(fine, 1e-27);
  EXPECT_LT(fine, coarse);
}

TEST(Talbot, ExtendedResultCarriesWorkingPrecision) {
  const auto v = lp::talbot_invert_mp(kDecay, 1.0, 50);
  const auto exact = tsruin::mp::exp(tsruin::mp::Real(-1.0, 50));
  EXPECT_LT(std::abs((v - exact).to_double()), 1e-28);
}

TEST(Talbot, RejectsShiftLeftOfAbscissa) {
  const auto f = lp::make_transform([](const auto& s) { return 1.0 / (s - 2.0); }, 2.0);
  EXPECT_THROW(lp::talbot_invert(f, 1.0, 32, 1.0), tsruin::DomainError);
  EXPECT_NEAR(lp::talbot_invert(f, 1.0, 32), std::exp(2.0), 1e-12);
}

TEST(Levin, ReportsPanelsAndRespectsAbscissa) {
  const auto growth = lp::make_transform([](const auto& s) { return 1.0 / (s - 0.5); }, 0.5);
  const auto report = lp::levin_invert_report(growth, 3.0, 64, 64);
  EXPECT_GT(report.panels, 0);
  EXPECT_GE(report.error_estimate, 0.0);
  EXPECT_NEAR(report.value, std::exp(1.5), 1e-5);
  EXPECT_THROW(lp::levin_invert(growth, 3.0, 64, 64, 0.4), tsruin::DomainError);
}

TEST(Talbot, DoublingTheTermsConvergesGeometrically) {
  for (const lp::TransformFn* f : std::initializer_list<const lp::TransformFn*>{&kRamp, &kDecay}) {
    for (double t : {0.5, 1.0, 2.0, 5.0}) {
      const auto a = lp::talbot_invert_mp(*f, t, 32);
      const auto b = lp::talbot_invert_mp(*f, t, 64);
      EXPECT_LE(std::abs(((a - b) / b).to_double()), 1e-16) << t;
    }
  }
  for (double t : {0.5, 1.0, 2.0, 5.0}) {
    const auto a = lp::talbot_invert_mp(kSine, t, 32, 1.0);
    const auto b = lp::talbot_invert_mp(kSine, t, 64, 1.0);
    EXPECT_LE(std::abs(((a - b) / b).to_double()), 1e-16) << t;
  }
}

TEST(Inversion, IsLinearInTheTransform) {
  const auto mix = lp::make_transform(
      [](const auto& s) { return 2.0 / (s * s) + 3.0 / (s + 1.0); }, 0.0);
  lp::InversionSpec levin;
  levin.engine = lp::Engine::Levin;
  for (double t : {0.5, 3.0, 9.0}) {
    EXPECT_NEAR(lp::invert(mix, t, {}),
                2.0 * lp::invert(kRamp, t, {}) + 3.0 * lp::invert(kDecay, t, {}), 1e-12);
    EXPECT_NEAR(lp::invert(mix, t, levin),
                2.0 * lp::invert(kRamp, t, levin) + 3.0 * lp::invert(kDecay, t, levin), 1e-6);
  }
}

TEST(Inversion, SpecValidation) {
  lp::InversionSpec spec;
  EXPECT_NO_THROW(spec.validate());
  spec.digits = 4;
  EXPECT_THROW(spec.validate(), tsruin::DomainError);
  spec = {};
  spec.nodes = 2;
  EXPECT_THROW(spec.validate(), tsruin::DomainError);
  spec = {};
  spec.cutoff = -1.0;
  EXPECT_THROW(spec.validate(), tsruin::DomainError);
  spec = {};
  spec.eps = 0.0;
  EXPECT_THROW(spec.validate(), tsruin::DomainError);
  EXPECT_THROW(lp::invert(kRamp, 0.0, {}), tsruin::DomainError);
  EXPECT_THROW(lp::invert(kRamp, -1.0, {}), tsruin::DomainError);
}

TEST(Inversion, DispatchesOnEngine) {
  lp::InversionSpec talbot;
  lp::InversionSpec levin;
  levin.engine = lp::Engine::Levin;
  EXPECT_NEAR(lp::invert(kDecay, 2.0, talbot), std::exp(-2.0), 1e-14);
  EXPECT_NEAR(lp::invert(kDecay, 2.0, levin), std::exp(-2.0), 1e-6);
  EXPECT_STREQ(lp::to_string(lp::Engine::Levin), "levin");
}

TEST(Inversion, GridIsElementwiseAndOrdered) {
  const std::vector<double> ts{0.5, 1.0, 4.0};
  const auto values = lp::invert_grid(kRamp, ts, {});
  ASSERT_EQ(values.size(), ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) EXPECT_NEAR(values[i], ts[i], 1e-12);
  EXPECT_TRUE(lp::invert_grid(kRamp, {}, {}).empty());
  const std::vector<double> unordered{1.0, 0.5};
  EXPECT_THROW(lp::invert_grid(kRamp, unordered, {}), tsruin::DomainError);
}

class NanTransform final : public lp::TransformFn {
 public:
  std::complex<double> operator()(std::complex<double>) const override { return {NAN, 0.0}; }
  tsruin::mp::Complex operator()(const tsruin::mp::Complex& s) const override {
    return tsruin::mp::Complex(std::complex<double>(NAN, 0.0), s.real().digits());
  }
  double abscissa() const override { return 0.0; }
};

TEST(Inversion, GridErrorNamesTheFailingPoint) {
  const std::vector<double> ts{0.5, 1.0};
  try {
    lp::invert_grid(NanTransform{}, ts, {});
    FAIL() << "expected NumericalError";
  } catch (const tsruin::NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("grid point 0"), std::string::npos) << e.what();
  }
  const std::vector<double> with_negative{-1.0, 1.0};
  try {
    lp::invert_grid(kRamp, with_negative, {});
    FAIL() << "expected DomainError";
  } catch (const tsruin::DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("grid point 0"), std::string::npos) << e.what();
  }
}

TEST(Inversion, EnginesAgreeOnRuinTransforms) {
  const auto m = tsruin::ClaimsModel::with_loading(0.01, 1.0, 0.99, 0.2);
  const tsruin::BTransform b(m);
  const tsruin::WTransform w(m);
  for (double t = 0.5; t <= 20.0; t += 0.5) {
    for (const lp::TransformFn* f : std::initializer_list<const lp::TransformFn*>{&b, &w, &kRamp}) {
      const double talbot = lp::talbot_invert(*f, t, 32);
      const double levin = lp::levin_invert(*f, t, 64, 64);
      EXPECT_NEAR(levin, talbot, 1e-5 * std::abs(talbot)) << t;
    }
  }
}

}  // namespace
