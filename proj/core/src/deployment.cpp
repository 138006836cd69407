#include "anchorplan/deployment.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "anchorplan/error.hpp"

namespace anchorplan {

namespace {

int isqrt(int n) {
  int r = static_cast<int>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

struct ClusterCounts {
  int n_clusters;
  int per_axis;
};

ClusterCounts cluster_counts(int n_total, int per_cluster) {
  require(per_cluster >= 3, "clusters need at least 3 anchors");
  require(n_total >= 0, "total anchor count must be nonnegative");
  const int n_clusters = n_total / per_cluster;
  if (n_clusters < 1) {
    fail(ErrorCode::TooFewAnchors, std::to_string(n_total) + " anchors cannot fill one cluster of " +
                                       std::to_string(per_cluster));
  }
  return {n_clusters, isqrt(n_clusters)};
}

}  // namespace

DeploymentPlan layout_clusters(double side_km, int n_total, int per_cluster, double d_com) {
  require(std::isfinite(side_km) && side_km > 0.0, "region side must be positive");
  require(std::isfinite(d_com) && d_com > 0.0, "coverage radius must be positive");
  const auto counts = cluster_counts(n_total, per_cluster);

  DeploymentPlan plan;
  plan.side_km = side_km;
  plan.n_total = n_total;
  plan.per_cluster = per_cluster;
  plan.n_clusters = counts.n_clusters;
  plan.per_axis = counts.per_axis;
  plan.leftover_anchors = n_total % per_cluster;
  plan.unplaced_clusters = counts.n_clusters - counts.per_axis * counts.per_axis;

  const double side = plan.side_m();
  const int m = plan.per_axis;
  plan.d_c = side / m;
  plan.d_com = d_com;
  plan.d_h = plan.d_c - 2.0 * d_com;
  plan.d_h1 = (side - 2.0 * d_com * m) / (m + 1);

  // Remainder space split evenly between the two margins.
  const double offset = plan.d_c / 2.0 + (side - m * plan.d_c) / 2.0;
  plan.cluster_centers.reserve(static_cast<std::size_t>(m) * m);
  for (int row = 0; row < m; ++row) {
    for (int col = 0; col < m; ++col) {
      plan.cluster_centers.push_back({offset + col * plan.d_c, offset + row * plan.d_c});
    }
  }
  return plan;
}

double stable_navigation_margin(double d_com, double d_h1, const InsDivergenceModel& model) {
  require(d_com > 0.0, "coverage radius must be positive");
  require(d_h1 >= 0.0, "navigation gap must be nonnegative");
  const double total = d_com + d_h1;
  // d^2 - d^4/(d+h)^2 rewritten without cancellation.
  const double reach_term = d_com * d_com * d_h1 * (2.0 * d_com + d_h1) / (total * total);
  const double drift_term = (model.beta1 + 1.0) * std::exp(model.beta2 * d_h1 / model.distance_unit_m);
  return reach_term - drift_term - 2.0 * model.sigma0_sq;
}

double stable_navigation_margin_slope(double d_com, double d_h1, const InsDivergenceModel& model) {
  const double total = d_com + d_h1;
  const double d4 = d_com * d_com * d_com * d_com;
  const double k = model.beta2 / model.distance_unit_m;
  return 2.0 * d4 / (total * total * total) - k * (model.beta1 + 1.0) * std::exp(k * d_h1);
}

CoverageSide max_coverage_side(int n_total, int per_cluster, double d_com, const InsDivergenceModel& model) {
  require(std::isfinite(d_com) && d_com > 0.0, "coverage radius must be positive");
  model.validate();
  const auto counts = cluster_counts(n_total, per_cluster);
  const int m = counts.per_axis;
  const auto margin = [&](double h) { return stable_navigation_margin(d_com, h, model); };

  CoverageSide out;
  if (model.beta2 == 0.0) {
    // Margin rises monotonically towards d^2 - (beta1 + 1) - 2 sigma0^2.
    const double asymptote = d_com * d_com - (model.beta1 + 1.0) - 2.0 * model.sigma0_sq;
    out.status = asymptote > 0.0 ? CoverageSide::Status::Unbounded : CoverageSide::Status::Infeasible;
    return out;
  }

  // Beyond this gap the drift term alone exceeds max(d^2, 1).
  const double h_max = std::max(
      1.0, model.distance_unit_m / model.beta2 * std::log(std::max(d_com * d_com, 1.0) / (model.beta1 + 1.0)) + 1.0);

  constexpr int kSteps = 1000;
  int best_k = 0;
  double best_value = margin(0.0);
  for (int k = 1; k <= kSteps; ++k) {
    const double v = margin(h_max * k / kSteps);
    if (v > best_value) {
      best_value = v;
      best_k = k;
    }
  }

  // The slope is strictly decreasing, so its root is the unique peak.
  double peak = h_max * best_k / kSteps;
  {
    double lo = h_max * std::max(best_k - 1, 0) / kSteps;
    double hi = h_max * std::min(best_k + 1, kSteps) / kSteps;
    if (stable_navigation_margin_slope(d_com, lo, model) > 0.0 &&
        stable_navigation_margin_slope(d_com, hi, model) < 0.0) {
      for (int it = 0; it < 200 && hi - lo > 1e-9 * (1.0 + hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (stable_navigation_margin_slope(d_com, mid, model) > 0.0 ? lo : hi) = mid;
      }
      peak = 0.5 * (lo + hi);
    }
  }
  if (!(margin(peak) > 0.0)) {
    out.status = CoverageSide::Status::Infeasible;
    return out;
  }

  // Upper boundary: margin(lo) > 0 >= margin(hi).
  double lo = peak;
  double hi = h_max;
  while (hi - lo > 0.1) {
    const double mid = 0.5 * (lo + hi);
    (margin(mid) > 0.0 ? lo : hi) = mid;
  }
  out.d_h1_upper = lo;

  double a_lo = 0.0;
  double a_hi = peak;
  if (margin(0.0) > 0.0) {
    out.d_h1_lower = 0.0;
  } else {
    for (int it = 0; it < 200 && a_hi - a_lo > 1e-12 * (1.0 + a_hi); ++it) {
      const double mid = 0.5 * (a_lo + a_hi);
      (margin(mid) > 0.0 ? a_hi : a_lo) = mid;
    }
    out.d_h1_lower = a_hi;
  }

  out.status = CoverageSide::Status::Feasible;
  out.side_km = (2.0 * d_com * m + out.d_h1_upper * (m + 1)) / 1000.0;
  return out;
}

}  // namespace anchorplan
