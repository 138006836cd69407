#include "anchorplan/localization_geometry.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "anchorplan/error.hpp"
#include "anchorplan/parallel.hpp"

namespace anchorplan {

ElevationAzimuth elevation_azimuth(const Point3& target, const AnchorPosition& anchor) {
  const double dx = anchor.x - target.x();
  const double dy = anchor.y - target.y();
  const double dz = anchor.z - target.z();
  const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
  if (!(d > 0.0)) fail(ErrorCode::CoincidentPoints, "target coincides with anchor");
  const double elevation = std::asin(std::min(1.0, std::abs(dz) / d));
  // +0.0 folds a negative zero so a due-west anchor reports +pi.
  double azimuth = std::atan2(dy + 0.0, dx);
  if (azimuth <= -std::numbers::pi) azimuth = std::numbers::pi;
  return {elevation, azimuth};
}

JacobianMatrix jacobian(const Point3& target, std::span<const AnchorPosition> anchors) {
  require(!anchors.empty(), "jacobian needs at least one anchor");
  JacobianMatrix jac(static_cast<Eigen::Index>(anchors.size()), 3);
  for (std::size_t j = 0; j < anchors.size(); ++j) {
    const Point3 delta(anchors[j].x - target.x(), anchors[j].y - target.y(), anchors[j].z - target.z());
    const double d = delta.norm();
    if (!(d > 0.0)) fail(ErrorCode::CoincidentPoints, "anchor " + std::to_string(j) + " coincides with target");
    jac.row(static_cast<Eigen::Index>(j)) = (delta / d).transpose();
  }
  return jac;
}

Eigen::Matrix3d fim(const JacobianMatrix& jac, std::span<const double> variances) {
  if (static_cast<std::size_t>(jac.rows()) != variances.size()) {
    fail(ErrorCode::DimensionMismatch, "jacobian has " + std::to_string(jac.rows()) + " rows but " +
                                           std::to_string(variances.size()) + " variances were given");
  }
  Eigen::Matrix3d phi = Eigen::Matrix3d::Zero();
  for (Eigen::Index j = 0; j < jac.rows(); ++j) {
    const double var = variances[static_cast<std::size_t>(j)];
    require(var > 0.0 && std::isfinite(var), "measurement variances must be positive");
    const Eigen::Vector3d row = jac.row(j).transpose();
    phi.noalias() += (row * row.transpose()) / var;
  }
  return phi;
}

double crlb_trace(const Eigen::Matrix3d& phi) {
  const double scale = phi.cwiseAbs().maxCoeff();
  require(((phi - phi.transpose()).cwiseAbs().maxCoeff() <= 1e-9 * std::max(scale, 1e-300)),
          "FIM must be symmetric");
  if (!(scale > 0.0)) fail(ErrorCode::SingularFim, "FIM is zero");

  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(phi, Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  const double largest = ev.cwiseAbs().maxCoeff();
  const double smallest = ev.minCoeff();
  if (!(smallest > 0.0) || largest / smallest > kMaxFimCondition) {
    fail(ErrorCode::SingularFim, "FIM condition number exceeds 1e12");
  }

  // tr(adj(F)) is the sum of the principal 2x2 minors.
  const double m00 = phi(1, 1) * phi(2, 2) - phi(1, 2) * phi(2, 1);
  const double m11 = phi(0, 0) * phi(2, 2) - phi(0, 2) * phi(2, 0);
  const double m22 = phi(0, 0) * phi(1, 1) - phi(0, 1) * phi(1, 0);
  const double det = phi(0, 0) * m00 - phi(0, 1) * (phi(1, 0) * phi(2, 2) - phi(1, 2) * phi(2, 0)) +
                     phi(0, 2) * (phi(1, 0) * phi(2, 1) - phi(1, 1) * phi(2, 0));
  return (m00 + m11 + m22) / det;
}

double center_crlb(int n_anchors, double elevation_rad, double sigma_d_sq) {
  require(n_anchors >= 3, "center CRLB needs at least 3 anchors");
  require(sigma_d_sq > 0.0, "range variance must be positive");
  if (!(elevation_rad > 0.0 && elevation_rad < std::numbers::pi / 2)) {
    fail(ErrorCode::InvalidAngle, "center CRLB needs elevation strictly inside (0, pi/2)");
  }
  const double c = std::cos(elevation_rad);
  const double s = std::sin(elevation_rad);
  const double n = n_anchors;
  return 4.0 * sigma_d_sq / (n * c * c) + sigma_d_sq / (n * s * s);
}

ClusterTopology ClusterTopology::ring(int n_anchors, double anchor_depth_m, double target_design_depth_m,
                                      double design_elevation_rad, double center_x, double center_y) {
  require(n_anchors >= 1, "cluster needs at least one anchor");
  require(anchor_depth_m > target_design_depth_m && target_design_depth_m >= 0.0,
          "anchors must lie below the target design depth");
  if (!(design_elevation_rad > 0.0 && design_elevation_rad <= std::numbers::pi / 2)) {
    fail(ErrorCode::InvalidAngle, "design elevation must lie in (0, pi/2]");
  }
  ClusterTopology c;
  c.center_x = center_x;
  c.center_y = center_y;
  c.anchor_depth = anchor_depth_m;
  c.target_design_depth = target_design_depth_m;
  c.design_elevation = design_elevation_rad;
  c.n_anchors = n_anchors;
  c.ring_radius = (anchor_depth_m - target_design_depth_m) / std::tan(design_elevation_rad);
  c.anchors.reserve(static_cast<std::size_t>(n_anchors));
  for (int j = 0; j < n_anchors; ++j) {
    const double az = 2.0 * std::numbers::pi * j / n_anchors;
    c.anchors.push_back({center_x + c.ring_radius * std::cos(az), center_y + c.ring_radius * std::sin(az),
                         anchor_depth_m});
  }
  return c;
}

ClusterTopology ClusterTopology::collapsed(int n_anchors, double anchor_depth_m, double target_design_depth_m,
                                           double center_x, double center_y) {
  auto c = ring(n_anchors, anchor_depth_m, target_design_depth_m, std::numbers::pi / 2, center_x, center_y);
  c.ring_radius = 0.0;
  for (auto& a : c.anchors) {
    a.x = center_x;
    a.y = center_y;
  }
  return c;
}

ClusterTopology ClusterTopology::translated_to(double x, double y) const {
  ClusterTopology c = *this;
  const double dx = x - center_x;
  const double dy = y - center_y;
  c.center_x = x;
  c.center_y = y;
  for (auto& a : c.anchors) {
    a.x += dx;
    a.y += dy;
  }
  return c;
}

bool CoverageRule::satisfied(std::size_t in_range, std::size_t total) const {
  if (kind == Kind::All) return total > 0 && in_range == total;
  return min_anchors > 0 && in_range >= static_cast<std::size_t>(min_anchors);
}

std::string CoverageRule::name() const {
  if (kind == Kind::All) return "all";
  return "at_least_" + std::to_string(min_anchors);
}

std::vector<std::size_t> anchors_in_range(const ClusterTopology& cluster, const Point3& target,
                                          double comm_range_m) {
  std::vector<std::size_t> out;
  const double r2 = comm_range_m * comm_range_m;
  for (std::size_t j = 0; j < cluster.anchors.size(); ++j) {
    const auto& a = cluster.anchors[j];
    const double dx = a.x - target.x();
    const double dy = a.y - target.y();
    const double dz = a.z - target.z();
    if (dx * dx + dy * dy + dz * dz <= r2) out.push_back(j);
  }
  return out;
}

namespace {

double horizontal_reach(const ClusterTopology& cluster, double comm_range_m) {
  const double dz = cluster.anchor_depth - cluster.target_design_depth;
  require(comm_range_m > dz, "comm range must exceed the anchor-to-target depth difference");
  return std::sqrt(comm_range_m * comm_range_m - dz * dz);
}

// Distance along the ray from the cluster center in direction theta at which
// the number of anchors within horizontal reach first drops below `needed`.
double boundary_along(const ClusterTopology& cluster, double reach, std::size_t needed, double theta) {
  const double ux = std::cos(theta);
  const double uy = std::sin(theta);
  struct Event {
    double t;
    int delta;
  };
  std::vector<Event> events;
  std::size_t inside = 0;
  for (const auto& a : cluster.anchors) {
    const double px = a.x - cluster.center_x;
    const double py = a.y - cluster.center_y;
    const double b = ux * px + uy * py;
    const double c = px * px + py * py - reach * reach;
    const double disc = b * b - c;
    if (disc < 0.0) continue;
    const double root = std::sqrt(disc);
    const double t0 = b - root;
    const double t1 = b + root;
    if (t1 < 0.0) continue;
    if (t0 <= 0.0) {
      ++inside;
    } else {
      events.push_back({t0, +1});
    }
    events.push_back({t1, -1});
  }
  if (inside < needed) return 0.0;
  // Entries sort ahead of exits at equal t: intervals are closed.
  std::sort(events.begin(), events.end(), [](const Event& l, const Event& r) {
    return l.t != r.t ? l.t < r.t : l.delta > r.delta;
  });
  for (const auto& e : events) {
    if (e.delta > 0) {
      ++inside;
    } else {
      --inside;
      if (inside < needed) return e.t;
    }
  }
  return 0.0;
}

}  // namespace

double coverage_radius(const ClusterTopology& cluster, double comm_range_m, const CoverageRule& rule) {
  const double reach = horizontal_reach(cluster, comm_range_m);
  const std::size_t total = cluster.anchors.size();
  const std::size_t needed =
      rule.kind == CoverageRule::Kind::All ? total : static_cast<std::size_t>(std::max(rule.min_anchors, 0));

  const Point3 center(cluster.center_x, cluster.center_y, cluster.target_design_depth);
  if (!rule.satisfied(anchors_in_range(cluster, center, comm_range_m).size(), total)) {
    fail(ErrorCode::NoCoverage, "cluster center fails coverage rule " + rule.name());
  }

  constexpr int kDirections = 720;
  const double dtheta = 2.0 * std::numbers::pi / kDirections;
  double best = std::numeric_limits<double>::infinity();
  double best_theta = 0.0;
  for (int k = 0; k < kDirections; ++k) {
    const double theta = dtheta * k;
    const double r = boundary_along(cluster, reach, needed, theta);
    if (r < best) {
      best = r;
      best_theta = theta;
    }
  }

  // The true minimum can fall between scan directions; golden-section
  // search the neighbouring bracket.
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = best_theta - dtheta;
  double hi = best_theta + dtheta;
  double a = hi - phi * (hi - lo);
  double b = lo + phi * (hi - lo);
  double fa = boundary_along(cluster, reach, needed, a);
  double fb = boundary_along(cluster, reach, needed, b);
  best = std::min({best, fa, fb});
  for (int it = 0; it < 60; ++it) {
    if (fa < fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - phi * (hi - lo);
      fa = boundary_along(cluster, reach, needed, a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + phi * (hi - lo);
      fb = boundary_along(cluster, reach, needed, b);
    }
    best = std::min({best, fa, fb});
  }
  return best;
}

std::optional<double> point_crlb(const ClusterTopology& cluster, const AcousticSetup& setup, const Point3& target) {
  const auto idx = anchors_in_range(cluster, target, setup.comm_range_m);
  if (!setup.rule.satisfied(idx.size(), cluster.anchors.size()) || idx.size() < 3) return std::nullopt;

  std::vector<AnchorPosition> used;
  std::vector<double> variances;
  used.reserve(idx.size());
  variances.reserve(idx.size());
  for (std::size_t j : idx) {
    used.push_back(cluster.anchors[j]);
    variances.push_back(los_variance(setup.profile, elevation_azimuth(target, cluster.anchors[j]).elevation,
                                     setup.params));
  }
  try {
    return crlb_trace(fim(jacobian(target, used), variances));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SingularFim) return std::nullopt;
    throw;
  }
}

Region reachable_region(const ClusterTopology& cluster, double comm_range_m) {
  const double half = cluster.ring_radius + horizontal_reach(cluster, comm_range_m);
  return {cluster.center_x - half, cluster.center_x + half, cluster.center_y - half, cluster.center_y + half};
}

CrlbField expected_crlb_field(const ClusterTopology& cluster, const AcousticSetup& setup, const Region& region,
                              double step_m, unsigned threads) {
  require(step_m > 0.0 && std::isfinite(step_m), "traversal step must be positive");
  require(region.x_max > region.x_min && region.y_max > region.y_min, "field region must be nonempty");

  CrlbField field;
  field.region = region;
  field.step = step_m;
  field.nx = static_cast<std::size_t>(std::max(1.0, std::ceil((region.x_max - region.x_min) / step_m - 1e-9)));
  field.ny = static_cast<std::size_t>(std::max(1.0, std::ceil((region.y_max - region.y_min) / step_m - 1e-9)));
  field.cells.resize(field.nx * field.ny);

  parallel_for(field.cells.size(), threads, [&](std::size_t i) {
    const std::size_t ix = i % field.nx;
    const std::size_t iy = i / field.nx;
    const double x = region.x_min + (static_cast<double>(ix) + 0.5) * step_m;
    const double y = region.y_min + (static_cast<double>(iy) + 0.5) * step_m;
    const auto value = point_crlb(cluster, setup, Point3(x, y, cluster.target_design_depth));
    field.cells[i] = {x, y, value.value_or(std::numeric_limits<double>::quiet_NaN()), value.has_value()};
  });

  double sum = 0.0;
  for (const auto& c : field.cells) {
    if (c.covered) {
      sum += c.crlb;
      ++field.covered_count;
    }
  }
  if (field.covered_count == 0) fail(ErrorCode::NoCoverage, "no cell in the region is covered");
  field.q = sum / static_cast<double>(field.covered_count);
  return field;
}

}  // namespace anchorplan
