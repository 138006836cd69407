#include "anchorplan/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <string>

#include "anchorplan/error.hpp"
#include "anchorplan/localization_geometry.hpp"
#include "anchorplan/parallel.hpp"

namespace anchorplan {

std::string_view to_string(SimPathKind kind) {
  switch (kind) {
    case SimPathKind::R1: return "r1";
    case SimPathKind::R2: return "r2";
    case SimPathKind::R3: return "r3";
    case SimPathKind::Random: return "random";
    case SimPathKind::Custom: return "custom";
  }
  return "?";
}

SimPathKind sim_path_kind_from_string(std::string_view name) {
  if (name == "r1") return SimPathKind::R1;
  if (name == "r2") return SimPathKind::R2;
  if (name == "r3") return SimPathKind::R3;
  if (name == "random") return SimPathKind::Random;
  if (name == "custom") return SimPathKind::Custom;
  fail(ErrorCode::InvalidArgument, "unknown path kind '" + std::string(name) + "'");
}

std::uint64_t derive_trial_seed(std::uint64_t master_seed, std::uint64_t trial) {
  std::uint64_t z = (master_seed ^ trial) + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

// [0, 1) from the top 53 bits; std::uniform_real_distribution is not
// bit-stable across standard libraries.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

bool inside(const Point2& p, double side) { return p.x >= 0.0 && p.x <= side && p.y >= 0.0 && p.y <= side; }

struct Endpoints {
  Point2 start;
  Point2 dest;
};

Endpoints resolve_endpoints(const DeploymentPlan& plan, const PathSpec& path, std::uint64_t seed) {
  const double side = plan.side_m();
  const int m = plan.per_axis;
  switch (path.kind) {
    case SimPathKind::R1: {
      const double y = plan.cluster_centers[static_cast<std::size_t>(m / 2) * m].y;
      return {{0.0, y}, {side, y}};
    }
    case SimPathKind::R2: {
      const double x = plan.cluster_centers[static_cast<std::size_t>(m / 2)].x;
      return {{x, 0.0}, {x, side}};
    }
    case SimPathKind::R3:
      return {{0.0, 0.0}, {side, side}};
    case SimPathKind::Random: {
      std::mt19937_64 rng(seed);
      const double y0 = unit_uniform(rng) * side;
      const double y1 = unit_uniform(rng) * side;
      return {{0.0, y0}, {side, y1}};
    }
    case SimPathKind::Custom:
      if (!inside(path.start, side) || !inside(path.dest, side)) {
        fail(ErrorCode::PathOutsideRegion, "path endpoints must lie inside the deployment region");
      }
      return {path.start, path.dest};
  }
  fail(ErrorCode::InvalidArgument, "unhandled path kind");
}

class CoverageOracle {
 public:
  CoverageOracle(const DeploymentPlan& plan, const ClusterSetup& clusters, double depth_m,
                 const SimulationOptions& options)
      : plan_(plan),
        options_(options),
        prototype_(clusters.design.cluster(plan.per_cluster)),
        setup_{clusters.profile.resample(depth_m, clusters.design.anchor_depth_m, clusters.design.layer_thickness_m),
               clusters.params, clusters.design.comm_range_m, clusters.design.rule},
        depth_(depth_m) {
    const auto& d = clusters.design;
    const double dz = d.anchor_depth_m - depth_m;
    reach_ = d.comm_range_m > dz ? prototype_.ring_radius + std::sqrt(d.comm_range_m * d.comm_range_m - dz * dz)
                                 : -1.0;
    if (options.pin_center_crlb) {
      pinned_ = center_crlb(plan.per_cluster, d.design_elevation_rad,
                            los_variance(setup_.profile, d.design_elevation_rad, setup_.params));
    }
  }

  /// CRLB of the best covering cluster, or nullopt when uncovered.
  std::optional<double> at(const Point2& p) const {
    std::optional<double> best;
    const auto consider = [&](double v) {
      if (!best || v < *best) best = v;
    };

    if (options_.coverage == CoverageModel::Disc) {
      // Nearest center only; ties keep the first in row-major order.
      std::size_t nearest = 0;
      double nearest_d2 = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < plan_.cluster_centers.size(); ++i) {
        const auto& c = plan_.cluster_centers[i];
        const double d2 = (p.x - c.x) * (p.x - c.x) + (p.y - c.y) * (p.y - c.y);
        if (d2 < nearest_d2) {
          nearest_d2 = d2;
          nearest = i;
        }
      }
      if (nearest_d2 > plan_.d_com * plan_.d_com) return std::nullopt;
      if (options_.pin_center_crlb) return pinned_;
      const auto& c = plan_.cluster_centers[nearest];
      return point_crlb(prototype_.translated_to(c.x, c.y), setup_, Point3(p.x, p.y, depth_));
    }

    for (const auto& c : plan_.cluster_centers) {
      const double d2 = (p.x - c.x) * (p.x - c.x) + (p.y - c.y) * (p.y - c.y);
      if (reach_ < 0.0 || d2 > reach_ * reach_) continue;
      const auto v = point_crlb(prototype_.translated_to(c.x, c.y), setup_, Point3(p.x, p.y, depth_));
      if (v) consider(options_.pin_center_crlb ? pinned_ : *v);
    }
    return best;
  }

 private:
  const DeploymentPlan& plan_;
  SimulationOptions options_;
  ClusterTopology prototype_;
  AcousticSetup setup_;
  double reach_ = 0.0;
  double pinned_ = 0.0;
  double depth_ = 0.0;
};

}  // namespace

SimulationReport simulate_path(const DeploymentPlan& plan, const ClusterSetup& clusters, const PathSpec& path,
                               const InsDivergenceModel& model, const LegSampling& kinematics, std::uint64_t seed,
                               const SimulationOptions& options) {
  model.validate();
  require(kinematics.speed_mps > 0.0 && kinematics.slot_s > 0.0, "speed and time slot must be positive");
  require(!plan.cluster_centers.empty(), "plan has no clusters");
  require(path.depth_m >= 0.0 && path.depth_m < clusters.design.anchor_depth_m,
          "path depth must lie between the surface and the anchors");

  const auto ends = resolve_endpoints(plan, path, seed);
  const double dx = ends.dest.x - ends.start.x;
  const double dy = ends.dest.y - ends.start.y;
  const double length = std::hypot(dx, dy);
  require(length > 0.0, "path start and dest must differ");
  const double ux = std::abs(dx) / length;
  const double uy = std::abs(dy) / length;

  const CoverageOracle coverage(plan, clusters, path.depth_m, options);
  const double step = kinematics.step_m();
  const auto n_steps = static_cast<std::size_t>(std::floor(length / step + 1e-9));

  SimulationReport report;
  report.trial_seed = seed;
  report.start = ends.start;
  report.dest = ends.dest;
  report.per_sample.reserve(n_steps + 1);

  double last_fix_s = 0.0;
  double sum = 0.0;
  std::size_t uncovered = 0;
  for (std::size_t k = 0; k <= n_steps; ++k) {
    const double s = static_cast<double>(k) * step;
    const double t = s / length;
    const Point2 p{ends.start.x + t * dx, ends.start.y + t * dy};

    PathSample sample{s, 0.0, false};
    if (const auto crlb = coverage.at(p)) {
      sample.error_var_m2 = *crlb;
      sample.in_coverage = true;
      last_fix_s = s;
    } else {
      const double since_fix = s - last_fix_s;
      double v = 0.0;
      if (ux > 1e-12) v += position_variance(model, since_fix * ux);
      if (uy > 1e-12) v += position_variance(model, since_fix * uy);
      if (!std::isfinite(v)) fail(ErrorCode::Diverged, "drift variance overflowed at s = " + std::to_string(s));
      sample.error_var_m2 = v;
      ++uncovered;
    }
    sum += sample.error_var_m2;
    report.per_sample.push_back(sample);
  }
  report.mean_error_var = sum / static_cast<double>(report.per_sample.size());
  report.nav_fraction = static_cast<double>(uncovered) / static_cast<double>(report.per_sample.size());
  return report;
}

MonteCarloResult monte_carlo(const DeploymentPlan& plan, const ClusterSetup& clusters, SimPathKind kind,
                             std::size_t trials, const InsDivergenceModel& model, const LegSampling& kinematics,
                             std::uint64_t master_seed, const SimulationOptions& options, double depth_m,
                             unsigned threads) {
  require(trials >= 1, "need at least one trial");
  require(kind != SimPathKind::Custom, "Monte Carlo trials need a derived path kind");

  MonteCarloResult result;
  result.reports.resize(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    PathSpec spec;
    spec.kind = kind;
    spec.depth_m = depth_m;
    result.reports[t] =
        simulate_path(plan, clusters, spec, model, kinematics, derive_trial_seed(master_seed, t), options);
  });

  auto& s = result.summary;
  s.trials = trials;
  s.master_seed = master_seed;
  s.min = std::numeric_limits<double>::infinity();
  s.max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  double nav = 0.0;
  for (const auto& r : result.reports) {
    sum += r.mean_error_var;
    nav += r.nav_fraction;
    s.min = std::min(s.min, r.mean_error_var);
    s.max = std::max(s.max, r.mean_error_var);
  }
  s.mean = sum / static_cast<double>(trials);
  s.mean_nav_fraction = nav / static_cast<double>(trials);
  if (trials > 1) {
    double ss = 0.0;
    for (const auto& r : result.reports) ss += (r.mean_error_var - s.mean) * (r.mean_error_var - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(trials - 1));
  }
  return result;
}

}  // namespace anchorplan
