#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "anchorplan/error.hpp"
#include "anchorplan/ins_drift.hpp"

using namespace anchorplan;

namespace {

std::vector<SeriesPoint> synthetic_series(const InsDivergenceModel& m, double noise_rel, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<SeriesPoint> out;
  for (double dp = 0.0; dp <= 80000.0; dp += 1000.0) {
    const double v = position_variance(m, dp);
    out.push_back({dp, v * (1.0 + noise_rel * noise(rng))});
  }
  return out;
}

}  // namespace

TEST(PositionVariance, DefaultModelExamples) {
  const InsDivergenceModel m;
  EXPECT_NEAR(position_variance(m, 0.0), 0.049, 1e-15);
  EXPECT_NEAR(position_variance(m, 10000.0), 0.0762583600361234755223961649862, 1e-15);

  InsDivergenceModel flat;
  flat.beta1 = 0.0;
  EXPECT_EQ(position_variance(flat, 1e9), flat.sigma0_sq);

  InsDivergenceModel wild;
  wild.beta2 = 1e6;
  EXPECT_TRUE(std::isinf(position_variance(wild, 1e9)));
  EXPECT_THROW(position_variance(m, -1.0), Error);
}

TEST(PositionVarianceProperty, NondecreasingInDistance) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> coeff(0.0, 0.5);
  std::uniform_real_distribution<double> dist(0.0, 50000.0);
  for (int trial = 0; trial < 300; ++trial) {
    InsDivergenceModel m{coeff(rng), coeff(rng), coeff(rng), 1000.0};
    double a = dist(rng);
    double b = dist(rng);
    if (a > b) std::swap(a, b);
    EXPECT_LE(position_variance(m, a), position_variance(m, b));
  }
}

TEST(LegErrorExpectation, MatchesOracleMean) {
  // Ten samples, one kilometer apart: mean of 0.01 + 0.039 e^{0.053 n}.
  const InsDivergenceModel m;
  const LegSampling leg{2.0, 500.0, 10000.0};
  EXPECT_NEAR(leg_error_expectation(m, leg, AxisSet::x_only()), 0.0628058245399146709479359511197, 1e-15);
}

TEST(LegErrorExpectation, ShortLegStillTakesOneSample) {
  const InsDivergenceModel m;
  const LegSampling leg{2.0, 50.0, 30.0};
  EXPECT_EQ(leg.sample_count(), 1u);
  EXPECT_DOUBLE_EQ(leg_error_expectation(m, leg, AxisSet::x_only()), position_variance(m, 100.0));
}

TEST(LegErrorExpectation, BothAxesDoubleSingleAxis) {
  const InsDivergenceModel m;
  for (double d : {0.0, 150.0, 4000.0, 37000.0}) {
    const LegSampling leg{2.0, 50.0, d};
    const double x = leg_error_expectation(m, leg, AxisSet::x_only());
    EXPECT_EQ(leg_error_expectation(m, leg, AxisSet::y_only()), x);
    EXPECT_DOUBLE_EQ(leg_error_expectation(m, leg, AxisSet::both()), 2.0 * x);
  }
  EXPECT_THROW(leg_error_expectation(m, {2.0, 50.0, 100.0}, AxisSet{false, false}), Error);
}

TEST(LegErrorExpectationProperty, NondecreasingInLegLength) {
  const InsDivergenceModel m;
  double prev = 0.0;
  for (double d = 0.0; d <= 60000.0; d += 37.0) {
    const double v = leg_error_expectation(m, {2.0, 50.0, d}, AxisSet::x_only());
    EXPECT_GE(v, prev) << d;
    prev = v;
  }
}

TEST(LegErrorExpectation, DivergedOnOverflow) {
  InsDivergenceModel m;
  m.beta2 = 1000.0;
  try {
    leg_error_expectation(m, {2.0, 50.0, 1e6}, AxisSet::x_only());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Diverged);
  }
}

TEST(FitDivergence, RecoversNoiselessModel) {
  const InsDivergenceModel truth{0.01, 0.039, 0.053, 1000.0};
  const auto fit = fit_divergence(synthetic_series(truth, 0.0, 0));
  EXPECT_NEAR(fit.model.sigma0_sq, truth.sigma0_sq, 1e-6);
  EXPECT_NEAR(fit.model.beta1, truth.beta1, 1e-6);
  EXPECT_NEAR(fit.model.beta2, truth.beta2, 1e-6);
  EXPECT_LT(fit.residual, 1e-8);
}

TEST(FitDivergence, RecoversOtherModels) {
  for (const InsDivergenceModel truth : {InsDivergenceModel{0.0, 0.2, 0.01, 1000.0},
                                         InsDivergenceModel{1.0, 0.005, 0.08, 1000.0},
                                         InsDivergenceModel{0.3, 1.5, 0.002, 1000.0}}) {
    const auto fit = fit_divergence(synthetic_series(truth, 0.0, 0));
    EXPECT_NEAR(fit.model.beta2 / truth.beta2, 1.0, 1e-4);
    EXPECT_NEAR(fit.model.beta1 / truth.beta1, 1.0, 1e-4);
  }
}

TEST(FitDivergenceProperty, NoisyMedianGrowthRateWithinTenPercent) {
  const InsDivergenceModel truth{0.01, 0.039, 0.053, 1000.0};
  std::vector<double> rates;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    rates.push_back(fit_divergence(synthetic_series(truth, 0.02, seed)).model.beta2);
  }
  std::nth_element(rates.begin(), rates.begin() + 5, rates.end());
  EXPECT_NEAR(rates[5] / truth.beta2, 1.0, 0.10);
}

TEST(FitDivergence, ConstantSeriesHasNoGrowth) {
  std::vector<SeriesPoint> flat;
  for (int i = 0; i < 20; ++i) flat.push_back({1000.0 * i, 0.25});
  const auto fit = fit_divergence(flat);
  EXPECT_NEAR(fit.model.sigma0_sq + fit.model.beta1 * std::exp(fit.model.beta2 * 19.0), 0.25, 1e-6);
  EXPECT_LT(fit.residual, 1e-6);
}

TEST(FitDivergence, InsufficientData) {
  const std::vector<SeriesPoint> two{{0, 1}, {1000, 2}};
  const std::vector<SeriesPoint> duplicate{{0, 1}, {1000, 2}, {1000, 3}};
  for (const auto* s : {&two, &duplicate}) {
    try {
      fit_divergence(*s);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InsufficientData);
    }
  }
}
