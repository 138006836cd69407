#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "anchorplan/deployment.hpp"
#include "anchorplan/error.hpp"

using namespace anchorplan;

TEST(LayoutClusters, NineClustersOfThree) {
  const auto p = layout_clusters(10.0, 27, 3, 1000.0);
  EXPECT_EQ(p.n_clusters, 9);
  EXPECT_EQ(p.per_axis, 3);
  EXPECT_NEAR(p.d_c, 10000.0 / 3.0, 1e-9);
  EXPECT_NEAR(p.d_h, 10000.0 / 3.0 - 2000.0, 1e-9);
  EXPECT_NEAR(p.d_h1, (10000.0 - 6000.0) / 4.0, 1e-9);
  ASSERT_EQ(p.cluster_centers.size(), 9u);
  EXPECT_NEAR(p.cluster_centers[0].x, 10000.0 / 6.0, 1e-9);
  EXPECT_NEAR(p.cluster_centers[4].x, 5000.0, 1e-9);
  EXPECT_NEAR(p.cluster_centers[4].y, 5000.0, 1e-9);
  EXPECT_EQ(p.leftover_anchors, 0);
  EXPECT_EQ(p.unplaced_clusters, 0);
}

TEST(LayoutClusters, LeftoverAnchorsAndUnplacedClusters) {
  auto p = layout_clusters(5.0, 10, 3, 500.0);
  EXPECT_EQ(p.cluster_centers.size(), 1u);
  EXPECT_EQ(p.leftover_anchors, 1);
  EXPECT_EQ(p.unplaced_clusters, 2);
  EXPECT_NEAR(p.cluster_centers[0].x, 2500.0, 1e-9);

  p = layout_clusters(20.0, 48, 4, 3213.0);
  EXPECT_EQ(p.per_axis, 3);
  EXPECT_EQ(p.unplaced_clusters, 3);
  EXPECT_NEAR(p.d_h1, 180.5, 1e-9);
}

TEST(LayoutClusters, Errors) {
  try {
    layout_clusters(10.0, 2, 3, 100.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooFewAnchors);
  }
  EXPECT_THROW(layout_clusters(10.0, 30, 2, 100.0), Error);
  EXPECT_THROW(layout_clusters(0.0, 30, 3, 100.0), Error);
  EXPECT_THROW(layout_clusters(10.0, 30, 3, -1.0), Error);
}

TEST(LayoutClustersProperty, SegmentAccountingAlongARow) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> total(3, 400);
  std::uniform_int_distribution<int> per(3, 8);
  std::uniform_real_distribution<double> side(1.0, 100.0);
  std::uniform_real_distribution<double> dcom(10.0, 5000.0);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = total(rng);
    const int k = per(rng);
    if (n < k) continue;
    const auto p = layout_clusters(side(rng), n, k, dcom(rng));
    const int m = p.per_axis;
    EXPECT_NEAR(2.0 * p.d_com * m + p.d_h1 * (m + 1), p.side_m(), 1e-6 * p.side_m());
    EXPECT_EQ(p.per_axis * p.per_axis + p.unplaced_clusters, p.n_clusters);
    EXPECT_EQ(p.n_clusters * k + p.leftover_anchors, n);
    for (const auto& c : p.cluster_centers) {
      EXPECT_GT(c.x, 0.0);
      EXPECT_LT(c.x, p.side_m());
    }
    // Deterministic for the same inputs.
    const auto again = layout_clusters(p.side_km, n, k, p.d_com);
    EXPECT_EQ(again.cluster_centers, p.cluster_centers);
  }
}

TEST(StableNavigationMargin, Examples) {
  InsDivergenceModel per_unit;
  per_unit.beta2 = 0.53;
  per_unit.distance_unit_m = 1.0;
  EXPECT_NEAR(stable_navigation_margin(5.0, 2.0, per_unit), 9.22595850133426485154296618101, 1e-12);

  const InsDivergenceModel m;
  EXPECT_NEAR(stable_navigation_margin(3000.0, 0.0, m), -(m.beta1 + 1.0) - 2.0 * m.sigma0_sq, 1e-12);
  EXPECT_THROW(stable_navigation_margin(3000.0, -1.0, m), Error);
}

TEST(StableNavigationMargin, SlopeMatchesFiniteDifference) {
  const InsDivergenceModel m;
  for (double h : {1.0, 100.0, 5000.0, 80000.0}) {
    const double eps = 1e-3 * (1.0 + h);
    const double fd =
        (stable_navigation_margin(2500.0, h + eps, m) - stable_navigation_margin(2500.0, h - eps, m)) / (2 * eps);
    EXPECT_NEAR(stable_navigation_margin_slope(2500.0, h, m), fd, 1e-5 * (1.0 + std::abs(fd)));
  }
}

TEST(StableNavigationMarginProperty, UnimodalOnFineGrid) {
  const InsDivergenceModel m;
  for (double d : {50.0, 500.0, 2279.0, 4305.0}) {
    const double h_max = 400000.0;
    int changes = 0;
    int prev_sign = 0;
    double prev = stable_navigation_margin(d, 0.0, m);
    for (int k = 1; k <= 10000; ++k) {
      const double v = stable_navigation_margin(d, h_max * k / 10000.0, m);
      const int sign = v > prev ? 1 : -1;
      if (prev_sign != 0 && sign != prev_sign) ++changes;
      prev_sign = sign;
      prev = v;
    }
    EXPECT_LE(changes, 1) << d;
  }
}

TEST(MaxCoverageSide, AsymptoteWhenGrowthIsZero) {
  InsDivergenceModel m;
  m.beta2 = 0.0;
  EXPECT_EQ(max_coverage_side(48, 4, 3000.0, m).status, CoverageSide::Status::Unbounded);
  m.beta1 = 1e9;
  EXPECT_EQ(max_coverage_side(48, 4, 3000.0, m).status, CoverageSide::Status::Infeasible);
}

TEST(MaxCoverageSide, HugeOffsetIsInfeasible) {
  InsDivergenceModel m;
  m.beta1 = 1e9;
  EXPECT_EQ(max_coverage_side(48, 4, 3000.0, m).status, CoverageSide::Status::Infeasible);
}

TEST(MaxCoverageSide, BoundaryIsAMarginRoot) {
  const InsDivergenceModel m;
  const auto r = max_coverage_side(48, 4, 3213.0, m);
  ASSERT_EQ(r.status, CoverageSide::Status::Feasible);
  EXPECT_GT(stable_navigation_margin(3213.0, r.d_h1_upper, m), 0.0);
  EXPECT_LE(stable_navigation_margin(3213.0, r.d_h1_upper + 0.1, m), 0.0);
  EXPECT_GT(stable_navigation_margin(3213.0, r.d_h1_lower * (1 + 1e-6), m), 0.0);
  EXPECT_LE(stable_navigation_margin(3213.0, r.d_h1_lower * (1 - 1e-6), m), 0.0);
  EXPECT_NEAR(r.side_km, (2.0 * 3213.0 * 3 + 4.0 * r.d_h1_upper) / 1000.0, 1e-12);
}

TEST(MaxCoverageSideProperty, StaircaseInTotalAnchors) {
  const InsDivergenceModel m;
  for (int per : {3, 4, 5}) {
    double prev = 0.0;
    int prev_axis = 0;
    for (int n = 3 * per; n <= 200; ++n) {
      const auto r = max_coverage_side(n, per, 3000.0, m);
      ASSERT_EQ(r.status, CoverageSide::Status::Feasible);
      const auto axis = static_cast<int>(std::sqrt(static_cast<double>(n / per)) + 1e-9);
      if (axis == prev_axis) {
        EXPECT_EQ(r.side_km, prev) << n;
      } else {
        EXPECT_GT(r.side_km, prev) << n;
      }
      prev = r.side_km;
      prev_axis = axis;
    }
  }
}

TEST(MaxCoverageSide, Deterministic) {
  const InsDivergenceModel m;
  const auto a = max_coverage_side(100, 4, 2272.0, m);
  const auto b = max_coverage_side(100, 4, 2272.0, m);
  EXPECT_EQ(a.side_km, b.side_km);
  EXPECT_EQ(a.d_h1_lower, b.d_h1_lower);
}
