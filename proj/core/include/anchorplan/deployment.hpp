#pragma once

#include <vector>

#include "anchorplan/ins_drift.hpp"

namespace anchorplan {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Uniform grid of anchor clusters over a square region [0, side]^2.
struct DeploymentPlan {
  double side_km = 0.0;
  int n_total = 0;
  int per_cluster = 0;
  int n_clusters = 0;  // floor(n_total / per_cluster)
  int per_axis = 0;    // floor(sqrt(n_clusters))
  std::vector<Point2> cluster_centers;  // row-major, per_axis x per_axis
  double d_c = 0.0;    // adjacent cluster spacing, m
  double d_com = 0.0;  // cluster coverage radius, m
  double d_h = 0.0;    // d_c - 2 d_com; negative when coverage discs overlap
  double d_h1 = 0.0;   // (side - 2 d_com per_axis) / (per_axis + 1)
  int leftover_anchors = 0;   // n_total mod per_cluster
  int unplaced_clusters = 0;  // n_clusters - per_axis^2

  double side_m() const { return side_km * 1000.0; }
};

DeploymentPlan layout_clusters(double side_km, int n_total, int per_cluster, double d_com);

/// d_com^2 - d_com^4 / (d_com + d_h1)^2 - (beta1 + 1) e^{beta2 d_h1} - 2 sigma0^2,
/// with beta2 applied through the model's distance unit. Positive means an
/// AUV leaving one cluster can still reach the next.
double stable_navigation_margin(double d_com, double d_h1, const InsDivergenceModel& model);

/// d/d(d_h1) of the margin.
double stable_navigation_margin_slope(double d_com, double d_h1, const InsDivergenceModel& model);

struct CoverageSide {
  enum class Status { Feasible, Infeasible, Unbounded };

  Status status = Status::Infeasible;
  double side_km = 0.0;     // valid when Feasible
  double d_h1_lower = 0.0;  // feasible gap interval (lower, upper)
  double d_h1_upper = 0.0;
};

/// Largest region side for which the stable-navigation margin stays positive
/// at the plan's gap. Scans d_h1 on 1000 steps, then bisects the upper
/// feasibility boundary to 0.1 m. Unbounded when beta2 = 0 leaves the margin
/// positive for every gap.
CoverageSide max_coverage_side(int n_total, int per_cluster, double d_com, const InsDivergenceModel& model);

}  // namespace anchorplan
