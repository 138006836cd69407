#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "anchorplan/error.hpp"
#include "anchorplan/planner.hpp"

using namespace anchorplan;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(HybridObjective, Examples) {
  EXPECT_DOUBLE_EQ(hybrid_objective({0.5, 1.0}, 2.0, 10.0, 10.0), 6.0);
  EXPECT_DOUBLE_EQ(hybrid_objective({1.0, 1.0}, 2.0, 10.0, 10.0), 2.0);
  EXPECT_DOUBLE_EQ(hybrid_objective({0.0, 1.0}, 2.0, 7.0, 10.0), 10.0);
  EXPECT_DOUBLE_EQ(hybrid_objective({1.0, 0.0}, 2.0, 7.0, 10.0), 7.0);
  EXPECT_THROW(hybrid_objective({1.5, 1.0}, 2.0, 7.0, 10.0), Error);
  EXPECT_THROW(hybrid_objective({0.5, 1.0}, -2.0, 7.0, 10.0), Error);
}

TEST(HybridObjectiveProperty, HomogeneousAndBetweenTerms) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> term(0.0, 100.0);
  for (int trial = 0; trial < 500; ++trial) {
    const ObjectiveWeights w{u(rng), u(rng)};
    const double q = term(rng);
    const double nc = term(rng);
    const double nu = term(rng);
    const double v = hybrid_objective(w, q, nc, nu);
    EXPECT_NEAR(hybrid_objective(w, 3.0 * q, 3.0 * nc, 3.0 * nu), 3.0 * v, 1e-9 * (1.0 + v));
    EXPECT_GE(v, std::min({q, nc, nu}) - 1e-12);
    EXPECT_LE(v, std::max({q, nc, nu}) + 1e-12);
  }
}

TEST(PathObjective, AxisComposition) {
  const auto plan = layout_clusters(20.0, 48, 4, 2272.0);
  const InsDivergenceModel m;
  const LegSampling kin;
  const ObjectiveWeights w{0.3, 1.0};
  const auto r1 = path_objective(plan, 1e-4, m, kin, PathKind::R1, w);
  const auto r2 = path_objective(plan, 1e-4, m, kin, PathKind::R2, w);
  const auto r3 = path_objective(plan, 1e-4, m, kin, PathKind::R3, w);
  EXPECT_EQ(r1.nav_term, r2.nav_term);
  EXPECT_DOUBLE_EQ(r3.nav_term, 2.0 * r1.nav_term);
  EXPECT_GE(r3.objective, r1.objective);

  LegSampling leg = kin;
  leg.distance_m = plan.d_h;
  EXPECT_DOUBLE_EQ(r1.nav_term, leg_error_expectation(m, leg, AxisSet::x_only()));
  EXPECT_DOUBLE_EQ(r1.objective, 0.3 * 1e-4 + 0.7 * r1.nav_term);
}

TEST(PathObjective, OverlappingCoverageUsesZeroLeg) {
  const auto plan = layout_clusters(5.0, 48, 4, 3000.0);
  ASSERT_LT(plan.d_h, 0.0);
  const InsDivergenceModel m;
  const auto r1 = path_objective(plan, 0.0, m, {}, PathKind::R1, {0.0, 1.0});
  EXPECT_DOUBLE_EQ(r1.nav_term, position_variance(m, LegSampling{}.step_m()));
}

class OptimizeTest : public ::testing::Test {
 protected:
  SoundSpeedProfile profile = SoundSpeedProfile::default_munk_like();
  RangeErrorParams params;
  InsDivergenceModel model;
  LegSampling kin;
  ClusterDesign design;
};

TEST_F(OptimizeTest, SingleCandidateWins) {
  const std::vector<int> only{5};
  const auto r = optimize_per_cluster(20.0, 48, only, {}, model, profile, params, kin, design);
  EXPECT_EQ(r.best, 5);
  ASSERT_EQ(r.table.size(), 1u);
  const auto& row = r.table[0];
  EXPECT_TRUE(row.assessment.feasible);
  EXPECT_NEAR(row.nav_mean, (row.paths[0].nav_term + row.paths[1].nav_term + row.paths[2].nav_term) / 3.0, 1e-15);
  // With lambda1 = 1 and lambda2 = 1 only Q matters.
  EXPECT_DOUBLE_EQ(row.objective, row.assessment.q);
}

TEST_F(OptimizeTest, DuplicateCandidatesTie) {
  const std::vector<int> dup{4, 4};
  const auto r = optimize_per_cluster(20.0, 48, dup, {0.2, 1.0}, model, profile, params, kin, design);
  EXPECT_EQ(r.table[0].objective, r.table[1].objective);
  EXPECT_EQ(r.best, 4);
}

TEST_F(OptimizeTest, ArgminAgreesWithTable) {
  const std::vector<int> cands{3, 4, 5};
  for (double l1 : {0.0, 0.5, 1.0}) {
    const auto r = optimize_per_cluster(20.0, 48, cands, {l1, 1.0}, model, profile, params, kin, design);
    int best = 0;
    double best_v = INFINITY;
    for (const auto& row : r.table) {
      if (row.objective < best_v) {
        best_v = row.objective;
        best = row.assessment.n_ca;
      }
    }
    EXPECT_EQ(r.best, best) << l1;
  }
}

TEST_F(OptimizeTest, ThreadCountDoesNotChangeResult) {
  const std::vector<int> cands{3, 4, 5};
  const auto a = optimize_per_cluster(20.0, 48, cands, {0.5, 1.0}, model, profile, params, kin, design, 1);
  const auto b = optimize_per_cluster(20.0, 48, cands, {0.5, 1.0}, model, profile, params, kin, design, 3);
  ASSERT_EQ(a.table.size(), b.table.size());
  for (std::size_t i = 0; i < a.table.size(); ++i) {
    EXPECT_EQ(a.table[i].objective, b.table[i].objective);
    EXPECT_EQ(a.table[i].assessment.q, b.table[i].assessment.q);
  }
  EXPECT_EQ(a.best, b.best);
}

TEST_F(OptimizeTest, AllInfeasibleAndTooFewAnchors) {
  const std::vector<int> cands{5, 6};
  EXPECT_EQ(code_of([&] { optimize_per_cluster(20.0, 4, cands, {}, model, profile, params, kin, design); }),
            ErrorCode::AllInfeasible);

  ClusterDesign unreachable = design;
  unreachable.comm_range_m = 2600.0;
  const auto a = assess_candidate(20.0, 48, 4, profile, params, unreachable);
  EXPECT_FALSE(a.feasible);
  EXPECT_FALSE(a.failure.empty());
}

TEST(ScalingLaw, TermByTerm) {
  const InsDivergenceModel m;
  const LegSampling kin;
  const double a = 46.0 * std::numbers::pi / 180.0;
  const auto t = scaling_law(48, 4, 20.0, 3213.0, a, 4e-6, m, kin);
  EXPECT_NEAR(t.coverage_fraction, 2.0 * 3213.0 * 3 / 20000.0, 1e-15);
  EXPECT_NEAR(t.navigation_fraction, 180.5 * 4 / 20000.0, 1e-15);
  EXPECT_NEAR(t.coverage_fraction + t.navigation_fraction, 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(t.center_crlb, center_crlb(4, a, 4e-6));
  // 180.5 m at 100 m per sample: one sample at 100 m.
  EXPECT_DOUBLE_EQ(t.nav_expectation, position_variance(m, 100.0));
  EXPECT_DOUBLE_EQ(t.value, t.coverage_fraction * t.center_crlb + t.navigation_fraction * t.nav_expectation);
}

TEST(ScalingLaw, EdgeCases) {
  const LegSampling kin;
  const double a = 0.8;
  // Seamless layout: side = 2 d_com N_ch.
  const auto seamless = scaling_law(27, 3, 6.0, 1000.0, a, 1e-6, {}, kin);
  EXPECT_NEAR(seamless.navigation_fraction, 0.0, 1e-15);
  EXPECT_NEAR(seamless.value, center_crlb(3, a, 1e-6), 1e-15);

  InsDivergenceModel flat;
  flat.beta1 = 0.0;
  const auto t = scaling_law(27, 3, 30.0, 1000.0, a, 1e-6, flat, kin);
  EXPECT_DOUBLE_EQ(t.nav_expectation, flat.sigma0_sq);

  EXPECT_EQ(code_of([&] { scaling_law(27, 3, 5.0, 1000.0, a, 1e-6, {}, kin); }), ErrorCode::NegativeGap);
}

TEST(ScalingLawProperty, FractionsPartitionTheCrossing) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> total(12, 300);
  std::uniform_int_distribution<int> per(3, 6);
  std::uniform_real_distribution<double> dcom(500.0, 4500.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = total(rng);
    const int k = per(rng);
    const double d = dcom(rng);
    const int m = static_cast<int>(std::sqrt(static_cast<double>(n / k)));
    const double side_km = 2.0 * d * m / 1000.0 * (1.0 + 0.5 * (trial % 5));
    const auto t = scaling_law(n, k, side_km, d, 0.8, 2e-6, {}, {});
    EXPECT_NEAR(t.coverage_fraction + t.navigation_fraction, 1.0, 1e-12);
    EXPECT_GE(t.value, std::min(t.center_crlb, t.nav_expectation) - 1e-15);
    EXPECT_LE(t.value, std::max(t.center_crlb, t.nav_expectation) + 1e-15);
  }
}
