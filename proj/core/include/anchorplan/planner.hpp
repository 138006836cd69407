#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "anchorplan/deployment.hpp"
#include "anchorplan/ins_drift.hpp"
#include "anchorplan/localization_geometry.hpp"
#include "anchorplan/profile_acoustics.hpp"

namespace anchorplan {

struct ObjectiveWeights {
  double lambda1 = 1.0;  // weight of the covered portion
  double lambda2 = 1.0;  // positioning vs navigation inside coverage

  void validate() const;
};

/// Straight traversals between adjacent clusters: along x, along y, diagonal.
enum class PathKind { R1, R2, R3 };

std::string_view to_string(PathKind kind);
PathKind path_kind_from_string(std::string_view name);
inline constexpr std::array<PathKind, 3> kAllPathKinds{PathKind::R1, PathKind::R2, PathKind::R3};

struct PlanEvaluation {
  double q_term = 0.0;
  double nav_term = 0.0;
  double objective = 0.0;
  PathKind path = PathKind::R1;
};

/// (1 - l1) nav_uncovered + l1 (l2 q + (1 - l2) nav_covered).
double hybrid_objective(const ObjectiveWeights& weights, double q, double nav_covered, double nav_uncovered);

/// Navigation term of one path kind: a leg of length max(d_h, 0) drifting on
/// x (r1), y (r2) or both axes at full length (r3). The same navigation
/// expectation fills both navigation slots of the hybrid objective, so with
/// lambda2 = 1 the objective is l1 q + (1 - l1) nav.
PlanEvaluation path_objective(const DeploymentPlan& plan, double q, const InsDivergenceModel& model,
                              const LegSampling& kinematics, PathKind path, const ObjectiveWeights& weights);

/// Fixed geometry shared by every candidate cluster size.
struct ClusterDesign {
  double anchor_depth_m = 3000.0;
  double target_depth_m = 500.0;
  double design_elevation_rad = 0.8028514559173916;  // 46 degrees
  double comm_range_m = 5000.0;
  CoverageRule rule = CoverageRule::at_least(3);
  double layer_thickness_m = 100.0;
  double step_m = 100.0;

  ClusterTopology cluster(int n_anchors) const;
  AcousticSetup acoustic_setup(const SoundSpeedProfile& profile, const RangeErrorParams& params) const;
};

/// Everything about one anchors-per-cluster choice that does not depend on
/// the objective weights.
struct CandidateAssessment {
  int n_ca = 0;
  bool feasible = false;
  std::string failure;  // reason when infeasible
  double d_com = 0.0;
  double q = 0.0;
  std::size_t covered_cells = 0;
  DeploymentPlan plan;
};

CandidateAssessment assess_candidate(double side_km, int n_total, int n_ca, const SoundSpeedProfile& profile,
                                     const RangeErrorParams& params, const ClusterDesign& design,
                                     unsigned threads = 1);

struct CandidateEvaluation {
  CandidateAssessment assessment;
  std::array<PlanEvaluation, 3> paths{};  // r1, r2, r3
  double nav_mean = 0.0;
  double objective = 0.0;  // uniform mean over the three paths
};

/// Scores an assessed candidate under `weights`. Requires a feasible assessment.
CandidateEvaluation score_candidate(const CandidateAssessment& assessment, const ObjectiveWeights& weights,
                                    const InsDivergenceModel& model, const LegSampling& kinematics);

struct OptimizationResult {
  int best = 0;
  std::vector<CandidateEvaluation> table;  // input order; infeasible rows keep objective = NaN
};

/// Runs the full pipeline per candidate and returns the argmin of the
/// path-averaged objective. Ties go to the smaller candidate.
OptimizationResult optimize_per_cluster(double side_km, int n_total, std::span<const int> candidates,
                                        const ObjectiveWeights& weights, const InsDivergenceModel& model,
                                        const SoundSpeedProfile& profile, const RangeErrorParams& params,
                                        const LegSampling& kinematics, const ClusterDesign& design,
                                        unsigned threads = 1);

struct ScalingLawTerms {
  double coverage_fraction = 0.0;    // 2 d_com N_ch / side
  double navigation_fraction = 0.0;  // d_h1 (N_ch + 1) / side
  double center_crlb = 0.0;
  double nav_expectation = 0.0;      // x-axis leg of length d_h1
  double value = 0.0;
};

/// Expected voyage error of a straight crossing through a row of cluster
/// centers, splitting the path into covered and pure-navigation lengths.
ScalingLawTerms scaling_law(int n_total, int per_cluster, double side_km, double d_com, double elevation_rad,
                            double sigma_d_sq, const InsDivergenceModel& model, const LegSampling& kinematics);

}  // namespace anchorplan
