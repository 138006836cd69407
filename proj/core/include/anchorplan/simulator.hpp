#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "anchorplan/deployment.hpp"
#include "anchorplan/ins_drift.hpp"
#include "anchorplan/planner.hpp"
#include "anchorplan/profile_acoustics.hpp"

namespace anchorplan {

enum class SimPathKind {
  R1,      // along x through the middle row of clusters
  R2,      // along y through the middle column
  R3,      // corner-to-corner diagonal through the diagonal clusters
  Random,  // left edge to right edge, endpoints drawn from the trial seed
  Custom,  // caller-supplied start and dest
};

std::string_view to_string(SimPathKind kind);
SimPathKind sim_path_kind_from_string(std::string_view name);

struct PathSpec {
  SimPathKind kind = SimPathKind::R1;
  Point2 start;  // used by Custom only
  Point2 dest;
  double depth_m = 500.0;
};

/// Cluster geometry and acoustics shared by every cluster of a plan.
struct ClusterSetup {
  ClusterDesign design;
  SoundSpeedProfile profile = SoundSpeedProfile::iso1500();  // raw, resampled per path depth
  RangeErrorParams params;
};

enum class CoverageModel {
  Rule,  // a point is served when the coverage rule holds for some cluster
  Disc,  // a point is served within the plan's d_com of a cluster center
};

struct SimulationOptions {
  CoverageModel coverage = CoverageModel::Rule;
  /// Report the closed-form center CRLB for every covered sample instead of
  /// the local CRLB.
  bool pin_center_crlb = false;
};

struct PathSample {
  double s_m;
  double error_var_m2;
  bool in_coverage;
};

struct SimulationReport {
  std::vector<PathSample> per_sample;  // ordered by s
  double mean_error_var = 0.0;
  double nav_fraction = 0.0;  // share of samples outside coverage
  std::uint64_t trial_seed = 0;
  Point2 start;
  Point2 dest;
};

/// Walks the path at arc-length steps of speed * slot. A covered sample
/// reports the CRLB and resets the drift odometer; an uncovered sample
/// reports the summed per-axis drift variance at the distance since the last
/// fix, projected on the axes the path moves along.
SimulationReport simulate_path(const DeploymentPlan& plan, const ClusterSetup& clusters, const PathSpec& path,
                               const InsDivergenceModel& model, const LegSampling& kinematics, std::uint64_t seed,
                               const SimulationOptions& options = {});

/// splitmix64 finalizer applied to master_seed XOR trial.
std::uint64_t derive_trial_seed(std::uint64_t master_seed, std::uint64_t trial);

struct MonteCarloSummary {
  std::size_t trials = 0;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for a single trial
  double min = 0.0;
  double max = 0.0;
  double mean_nav_fraction = 0.0;
  std::uint64_t master_seed = 0;
};

struct MonteCarloResult {
  std::vector<SimulationReport> reports;  // trial order
  MonteCarloSummary summary;
};

MonteCarloResult monte_carlo(const DeploymentPlan& plan, const ClusterSetup& clusters, SimPathKind kind,
                             std::size_t trials, const InsDivergenceModel& model, const LegSampling& kinematics,
                             std::uint64_t master_seed, const SimulationOptions& options = {},
                             double depth_m = 500.0, unsigned threads = 1);

}  // namespace anchorplan
