#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "anchorplan/error.hpp"
#include "anchorplan/io.hpp"
#include "anchorplan/simulator.hpp"

using namespace anchorplan;

namespace {

ClusterSetup default_setup() {
  ClusterSetup s;
  s.profile = SoundSpeedProfile::default_munk_like();
  return s;
}

DeploymentPlan plan_for(const ClusterSetup& s, double side_km, int n_total, int per_cluster) {
  const double d_com = coverage_radius(s.design.cluster(per_cluster), s.design.comm_range_m, s.design.rule);
  return layout_clusters(side_km, n_total, per_cluster, d_com);
}

}  // namespace

TEST(SimulatePath, PathInsideOneClusterIsAlwaysCovered) {
  const auto setup = default_setup();
  const auto plan = plan_for(setup, 5.0, 4, 4);
  ASSERT_EQ(plan.cluster_centers.size(), 1u);
  PathSpec path{SimPathKind::Custom, {2000.0, 2500.0}, {3000.0, 2500.0}, 500.0};
  const auto r = simulate_path(plan, setup, path, {}, {}, 0);
  ASSERT_EQ(r.per_sample.size(), 11u);
  const auto cluster = setup.design.cluster(4).translated_to(2500.0, 2500.0);
  const auto acoustic = setup.design.acoustic_setup(setup.profile, setup.params);
  for (const auto& s : r.per_sample) {
    EXPECT_TRUE(s.in_coverage);
    const auto expected = point_crlb(cluster, acoustic, Point3(2000.0 + s.s_m, 2500.0, 500.0));
    ASSERT_TRUE(expected.has_value());
    EXPECT_DOUBLE_EQ(s.error_var_m2, *expected);
  }
  EXPECT_EQ(r.nav_fraction, 0.0);
}

TEST(SimulatePath, NoCoverageWithFlatDriftGivesOffset) {
  auto setup = default_setup();
  const auto plan = plan_for(setup, 20.0, 48, 4);
  setup.design.comm_range_m = 2600.0;  // slant reach shorter than the ring radius
  InsDivergenceModel flat;
  flat.beta1 = 0.0;
  const auto r = simulate_path(plan, setup, {SimPathKind::R1}, flat, {}, 0);
  EXPECT_EQ(r.nav_fraction, 1.0);
  for (const auto& s : r.per_sample) EXPECT_EQ(s.error_var_m2, flat.sigma0_sq);
  EXPECT_DOUBLE_EQ(r.mean_error_var, flat.sigma0_sq);
}

TEST(SimulatePath, DriftRestartsAtEachFix) {
  const auto setup = default_setup();
  const auto plan = plan_for(setup, 30.0, 48, 4);
  const InsDivergenceModel m;
  for (auto kind : {SimPathKind::R1, SimPathKind::R2, SimPathKind::R3}) {
    const auto r = simulate_path(plan, setup, {kind}, m, {}, 0);
    const double axis_share = kind == SimPathKind::R3 ? std::sqrt(0.5) : 1.0;
    const int axes = kind == SimPathKind::R3 ? 2 : 1;
    double last_fix = 0.0;
    double prev = -1.0;
    bool saw_gap = false;
    for (const auto& s : r.per_sample) {
      if (s.in_coverage) {
        last_fix = s.s_m;
        prev = -1.0;
        continue;
      }
      saw_gap = true;
      const double expected = axes * position_variance(m, (s.s_m - last_fix) * axis_share);
      EXPECT_NEAR(s.error_var_m2, expected, 1e-12 * expected);
      EXPECT_GE(s.error_var_m2, prev);
      prev = s.error_var_m2;
    }
    EXPECT_TRUE(saw_gap) << to_string(kind);
  }
}

TEST(SimulatePath, SampleSpacingAndEndpoints) {
  const auto setup = default_setup();
  const auto plan = plan_for(setup, 20.0, 48, 4);
  const auto r = simulate_path(plan, setup, {SimPathKind::R2}, {}, {2.0, 50.0}, 0);
  ASSERT_EQ(r.per_sample.size(), 201u);
  EXPECT_DOUBLE_EQ(r.per_sample[7].s_m, 700.0);
  EXPECT_EQ(r.start.y, 0.0);
  EXPECT_EQ(r.dest.y, 20000.0);
  EXPECT_EQ(r.start.x, plan.cluster_centers[1].x);
}

TEST(SimulatePath, RandomPathCrossesLeftToRight) {
  const auto setup = default_setup();
  const auto plan = plan_for(setup, 20.0, 48, 4);
  const auto a = simulate_path(plan, setup, {SimPathKind::Random}, {}, {}, 123);
  const auto b = simulate_path(plan, setup, {SimPathKind::Random}, {}, {}, 123);
  const auto c = simulate_path(plan, setup, {SimPathKind::Random}, {}, {}, 124);
  EXPECT_EQ(a.start.x, 0.0);
  EXPECT_EQ(a.dest.x, 20000.0);
  EXPECT_EQ(a.start, b.start);
  EXPECT_EQ(a.mean_error_var, b.mean_error_var);
  EXPECT_NE(a.start, c.start);
}

TEST(SimulatePath, PathOutsideRegion) {
  const auto setup = default_setup();
  const auto plan = plan_for(setup, 20.0, 48, 4);
  try {
    simulate_path(plan, setup, {SimPathKind::Custom, {-1.0, 0.0}, {100.0, 100.0}}, {}, {}, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PathOutsideRegion);
  }
}

TEST(SimulatePath, DiscModelWithPinnedCrlb) {
  const auto setup = default_setup();
  const auto plan = plan_for(setup, 20.0, 48, 4);
  const auto r = simulate_path(plan, setup, {SimPathKind::R1}, {}, {}, 0, {CoverageModel::Disc, true});
  const auto acoustic = setup.design.acoustic_setup(setup.profile, setup.params);
  const double pinned = center_crlb(4, setup.design.design_elevation_rad,
                                    los_variance(acoustic.profile, setup.design.design_elevation_rad, acoustic.params));
  std::size_t covered = 0;
  for (const auto& s : r.per_sample) {
    if (!s.in_coverage) continue;
    ++covered;
    EXPECT_EQ(s.error_var_m2, pinned);
  }
  // The middle row crosses three discs of radius d_com.
  const double expected_len = 3 * 2 * plan.d_com;
  EXPECT_NEAR(covered * 100.0, expected_len, 3 * 100.0 + 1.0);
}

TEST(MonteCarlo, DeterministicAcrossThreadCounts) {
  const auto setup = default_setup();
  const auto plan = plan_for(setup, 20.0, 48, 4);
  const auto a = monte_carlo(plan, setup, SimPathKind::Random, 12, {}, {}, 42, {}, 500.0, 1);
  const auto b = monte_carlo(plan, setup, SimPathKind::Random, 12, {}, {}, 42, {}, 500.0, 4);
  ASSERT_EQ(a.reports.size(), b.reports.size());
  for (std::size_t t = 0; t < a.reports.size(); ++t) {
    EXPECT_EQ(a.reports[t].trial_seed, b.reports[t].trial_seed);
    EXPECT_EQ(a.reports[t].mean_error_var, b.reports[t].mean_error_var);
  }
  EXPECT_EQ(a.summary.mean, b.summary.mean);
  EXPECT_EQ(a.summary.std, b.summary.std);
  EXPECT_GT(a.summary.std, 0.0);
  EXPECT_LE(a.summary.min, a.summary.mean);
  EXPECT_GE(a.summary.max, a.summary.mean);
}

TEST(MonteCarlo, SingleTrialMatchesDirectSimulation) {
  const auto setup = default_setup();
  const auto plan = plan_for(setup, 20.0, 48, 4);
  const auto mc = monte_carlo(plan, setup, SimPathKind::Random, 1, {}, {}, 7);
  const auto direct = simulate_path(plan, setup, {SimPathKind::Random}, {}, {}, derive_trial_seed(7, 0));
  EXPECT_EQ(mc.summary.mean, direct.mean_error_var);
  EXPECT_EQ(mc.summary.std, 0.0);
  EXPECT_EQ(mc.summary.mean_nav_fraction, direct.nav_fraction);
  EXPECT_THROW(monte_carlo(plan, setup, SimPathKind::Random, 0, {}, {}, 7), Error);
}

TEST(DeriveTrialSeed, DistinctAndStable) {
  EXPECT_NE(derive_trial_seed(42, 0), derive_trial_seed(42, 1));
  EXPECT_NE(derive_trial_seed(42, 0), derive_trial_seed(43, 0));
  EXPECT_EQ(derive_trial_seed(42, 5), derive_trial_seed(42, 5));
  // splitmix64 of 0 is a published constant.
  EXPECT_EQ(derive_trial_seed(0, 0), 0xE220A8397B1DCDAFULL);
}

TEST(Io, ErrorSeriesCsv) {
  std::istringstream in("delta_p,variance_m2\n0,0.049\n1000, 0.05\n\n2000,0.051\n");
  const auto s = read_error_series_csv(in);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[1].delta_p_m, 1000.0);
  EXPECT_EQ(s[2].variance_m2, 0.051);

  std::istringstream bad("delta_p,variance_m2\n0,1,2\n");
  try {
    read_error_series_csv(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(Io, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 12345.678, -2.5}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(NAN), "nan");
  EXPECT_EQ(format_double(1.0), "1");
}

TEST(Io, FieldCsvLeavesUncoveredBlank) {
  CrlbField f;
  f.cells = {{0.0, 0.0, 1e-5, true}, {100.0, 0.0, NAN, false}};
  std::ostringstream out;
  write_field_csv(out, f);
  EXPECT_EQ(out.str(), "x_m,y_m,crlb_m2,covered\n0,0,1e-05,1\n100,0,,0\n");
}
