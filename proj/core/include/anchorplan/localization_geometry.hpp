#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "anchorplan/profile_acoustics.hpp"

namespace anchorplan {

/// Seafloor anchor; z is depth in meters, positive down.
struct AnchorPosition {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Target positions use the same frame: (x, y, depth).
using Point3 = Eigen::Vector3d;

struct ElevationAzimuth {
  double elevation;  // [0, pi/2]
  double azimuth;    // (-pi, pi]
};

ElevationAzimuth elevation_azimuth(const Point3& target, const AnchorPosition& anchor);

using JacobianMatrix = Eigen::Matrix<double, Eigen::Dynamic, 3>;

/// One row per anchor: unit direction from the target to the anchor,
/// [cos a cos b, cos a sin b, sin a] with a measured downward.
JacobianMatrix jacobian(const Point3& target, std::span<const AnchorPosition> anchors);

/// J^T C^-1 J with C = diag(variances).
Eigen::Matrix3d fim(const JacobianMatrix& jac, std::span<const double> variances);

/// Condition numbers above this are reported as SingularFim.
inline constexpr double kMaxFimCondition = 1e12;

/// Trace of the inverse FIM, via the 3x3 adjugate.
double crlb_trace(const Eigen::Matrix3d& fim);

/// Closed-form CRLB trace at the center of a symmetric ring of n anchors that
/// all share elevation a and range variance s2:
/// 4 s2 / (n cos^2 a) + s2 / (n sin^2 a).
double center_crlb(int n_anchors, double elevation_rad, double sigma_d_sq);

/// One anchor cluster: a ring of anchors on the seafloor, sized so the
/// anchors subtend `design_elevation` from a target at the ring center and
/// `target_design_depth`.
struct ClusterTopology {
  double center_x = 0.0;
  double center_y = 0.0;
  double anchor_depth = 3000.0;
  double target_design_depth = 500.0;
  double design_elevation = 0.0;
  int n_anchors = 0;
  double ring_radius = 0.0;
  std::vector<AnchorPosition> anchors;

  /// Anchors at azimuths 2 pi j / n, starting due east.
  static ClusterTopology ring(int n_anchors, double anchor_depth_m, double target_design_depth_m,
                              double design_elevation_rad, double center_x = 0.0, double center_y = 0.0);

  /// Same geometry with every anchor at the center (ring radius 0).
  static ClusterTopology collapsed(int n_anchors, double anchor_depth_m, double target_design_depth_m,
                                   double center_x = 0.0, double center_y = 0.0);

  ClusterTopology translated_to(double x, double y) const;
};

/// Which points count as served by a cluster.
struct CoverageRule {
  enum class Kind { AtLeast, All };

  Kind kind = Kind::AtLeast;
  int min_anchors = 3;

  static CoverageRule at_least(int k) { return {Kind::AtLeast, k}; }
  static CoverageRule all() { return {Kind::All, 0}; }

  bool satisfied(std::size_t in_range, std::size_t total) const;
  std::string name() const;
};

/// Indices of anchors whose slant distance to `target` is within comm_range_m.
std::vector<std::size_t> anchors_in_range(const ClusterTopology& cluster, const Point3& target,
                                          double comm_range_m);

/// Largest disc about the cluster center, at the target design depth, on
/// which every point satisfies `rule`.
double coverage_radius(const ClusterTopology& cluster, double comm_range_m, const CoverageRule& rule);

/// Everything needed to evaluate the CRLB at an arbitrary target point.
struct AcousticSetup {
  SoundSpeedProfile profile;  // already resampled onto the target/anchor slab
  RangeErrorParams params;
  double comm_range_m = 5000.0;
  CoverageRule rule;
};

/// CRLB trace at `target` using only anchors within comm range, or nullopt
/// when the rule fails or the in-range geometry is singular.
std::optional<double> point_crlb(const ClusterTopology& cluster, const AcousticSetup& setup, const Point3& target);

struct Region {
  double x_min;
  double x_max;
  double y_min;
  double y_max;
};

/// Square centered on the cluster that contains every point any anchor can reach.
Region reachable_region(const ClusterTopology& cluster, double comm_range_m);

struct FieldCell {
  double x;
  double y;
  double crlb;  // NaN when uncovered
  bool covered;
};

struct CrlbField {
  Region region{};
  double step = 0.0;
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<FieldCell> cells;  // row-major: y outer, x inner
  std::size_t covered_count = 0;
  double q = 0.0;  // mean CRLB over covered cells
};

/// Samples the CRLB at cell centers of `region` at the cluster's target
/// design depth. Cells are evaluated in parallel; Q is summed in cell order.
CrlbField expected_crlb_field(const ClusterTopology& cluster, const AcousticSetup& setup, const Region& region,
                              double step_m, unsigned threads = 1);

}  // namespace anchorplan
