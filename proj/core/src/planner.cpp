#include "anchorplan/planner.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "anchorplan/error.hpp"
#include "anchorplan/parallel.hpp"

namespace anchorplan {

void ObjectiveWeights::validate() const {
  require(lambda1 >= 0.0 && lambda1 <= 1.0, "lambda1 must lie in [0, 1]");
  require(lambda2 >= 0.0 && lambda2 <= 1.0, "lambda2 must lie in [0, 1]");
}

std::string_view to_string(PathKind kind) {
  switch (kind) {
    case PathKind::R1: return "r1";
    case PathKind::R2: return "r2";
    case PathKind::R3: return "r3";
  }
  return "?";
}

PathKind path_kind_from_string(std::string_view name) {
  if (name == "r1") return PathKind::R1;
  if (name == "r2") return PathKind::R2;
  if (name == "r3") return PathKind::R3;
  fail(ErrorCode::InvalidArgument, "unknown path kind '" + std::string(name) + "'");
}

double hybrid_objective(const ObjectiveWeights& weights, double q, double nav_covered, double nav_uncovered) {
  weights.validate();
  require(q >= 0.0 && nav_covered >= 0.0 && nav_uncovered >= 0.0, "objective terms must be nonnegative");
  return (1.0 - weights.lambda1) * nav_uncovered +
         weights.lambda1 * (weights.lambda2 * q + (1.0 - weights.lambda2) * nav_covered);
}

PlanEvaluation path_objective(const DeploymentPlan& plan, double q, const InsDivergenceModel& model,
                              const LegSampling& kinematics, PathKind path, const ObjectiveWeights& weights) {
  LegSampling leg = kinematics;
  leg.distance_m = std::max(plan.d_h, 0.0);
  AxisSet axes = AxisSet::x_only();
  if (path == PathKind::R2) axes = AxisSet::y_only();
  if (path == PathKind::R3) axes = AxisSet::both();

  PlanEvaluation eval;
  eval.path = path;
  eval.q_term = q;
  eval.nav_term = leg_error_expectation(model, leg, axes);
  eval.objective = hybrid_objective(weights, q, eval.nav_term, eval.nav_term);
  return eval;
}

ClusterTopology ClusterDesign::cluster(int n_anchors) const {
  return ClusterTopology::ring(n_anchors, anchor_depth_m, target_depth_m, design_elevation_rad);
}

AcousticSetup ClusterDesign::acoustic_setup(const SoundSpeedProfile& profile, const RangeErrorParams& params) const {
  return {profile.resample(target_depth_m, anchor_depth_m, layer_thickness_m), params, comm_range_m, rule};
}

CandidateAssessment assess_candidate(double side_km, int n_total, int n_ca, const SoundSpeedProfile& profile,
                                     const RangeErrorParams& params, const ClusterDesign& design,
                                     unsigned threads) {
  require(n_ca >= 3, "candidate cluster sizes must be at least 3");
  CandidateAssessment out;
  out.n_ca = n_ca;
  try {
    const auto cluster = design.cluster(n_ca);
    const auto setup = design.acoustic_setup(profile, params);
    out.d_com = coverage_radius(cluster, design.comm_range_m, design.rule);
    const auto field =
        expected_crlb_field(cluster, setup, reachable_region(cluster, design.comm_range_m), design.step_m, threads);
    out.q = field.q;
    out.covered_cells = field.covered_count;
    out.plan = layout_clusters(side_km, n_total, n_ca, out.d_com);
    out.feasible = true;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoCoverage && e.code() != ErrorCode::TooFewAnchors) throw;
    out.failure = e.what();
  }
  return out;
}

CandidateEvaluation score_candidate(const CandidateAssessment& assessment, const ObjectiveWeights& weights,
                                    const InsDivergenceModel& model, const LegSampling& kinematics) {
  require(assessment.feasible, "cannot score an infeasible candidate");
  CandidateEvaluation eval;
  eval.assessment = assessment;
  double nav = 0.0;
  double objective = 0.0;
  for (std::size_t i = 0; i < kAllPathKinds.size(); ++i) {
    eval.paths[i] = path_objective(assessment.plan, assessment.q, model, kinematics, kAllPathKinds[i], weights);
    nav += eval.paths[i].nav_term;
    objective += eval.paths[i].objective;
  }
  eval.nav_mean = nav / 3.0;
  eval.objective = objective / 3.0;
  return eval;
}

OptimizationResult optimize_per_cluster(double side_km, int n_total, std::span<const int> candidates,
                                        const ObjectiveWeights& weights, const InsDivergenceModel& model,
                                        const SoundSpeedProfile& profile, const RangeErrorParams& params,
                                        const LegSampling& kinematics, const ClusterDesign& design,
                                        unsigned threads) {
  require(!candidates.empty(), "candidate list must not be empty");
  for (int c : candidates) require(c >= 3, "candidate cluster sizes must be at least 3");
  weights.validate();
  model.validate();

  OptimizationResult result;
  result.table.resize(candidates.size());
  parallel_for(candidates.size(), threads, [&](std::size_t i) {
    auto assessment = assess_candidate(side_km, n_total, candidates[i], profile, params, design, 1);
    if (assessment.feasible) {
      result.table[i] = score_candidate(assessment, weights, model, kinematics);
    } else {
      result.table[i].assessment = std::move(assessment);
      result.table[i].objective = std::numeric_limits<double>::quiet_NaN();
      result.table[i].nav_mean = std::numeric_limits<double>::quiet_NaN();
    }
  });

  const CandidateEvaluation* best = nullptr;
  for (const auto& row : result.table) {
    if (!row.assessment.feasible) continue;
    if (!best || row.objective < best->objective ||
        (row.objective == best->objective && row.assessment.n_ca < best->assessment.n_ca)) {
      best = &row;
    }
  }
  if (!best) fail(ErrorCode::AllInfeasible, "every candidate failed layout or coverage");
  result.best = best->assessment.n_ca;
  return result;
}

ScalingLawTerms scaling_law(int n_total, int per_cluster, double side_km, double d_com, double elevation_rad,
                            double sigma_d_sq, const InsDivergenceModel& model, const LegSampling& kinematics) {
  const auto plan = layout_clusters(side_km, n_total, per_cluster, d_com);
  // Rounding in side - 2 d_com N_ch can leave a seamless layout a hair below zero.
  const double gap = std::abs(plan.d_h1) <= 1e-9 * plan.side_m() ? 0.0 : plan.d_h1;
  if (gap < 0.0) {
    fail(ErrorCode::NegativeGap, "coverage overlaps (d_h1 = " + std::to_string(plan.d_h1) +
                                     " m); the scaling law does not apply to seamless layouts");
  }
  const double side = plan.side_m();
  const int m = plan.per_axis;

  ScalingLawTerms terms;
  terms.coverage_fraction = 2.0 * d_com * m / side;
  terms.navigation_fraction = gap * (m + 1) / side;
  terms.center_crlb = center_crlb(per_cluster, elevation_rad, sigma_d_sq);
  LegSampling leg = kinematics;
  leg.distance_m = gap;
  terms.nav_expectation = leg_error_expectation(model, leg, AxisSet::x_only());
  terms.value = terms.coverage_fraction * terms.center_crlb + terms.navigation_fraction * terms.nav_expectation;
  return terms;
}

}  // namespace anchorplan
