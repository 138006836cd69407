#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include "anchorplan/deployment.hpp"
#include "anchorplan/io.hpp"
#include "anchorplan/localization_geometry.hpp"
#include "anchorplan/parallel.hpp"
#include "anchorplan/planner.hpp"
#include "anchorplan/simulator.hpp"

namespace anchorplan::cli {

using ojson = nlohmann::ordered_json;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NoCoverage:
    case ErrorCode::AllInfeasible:
    case ErrorCode::NegativeGap:
    case ErrorCode::TotalReflection:
      return kExitInfeasible;
    case ErrorCode::SingularFim:
    case ErrorCode::Diverged:
    case ErrorCode::FitDiverged:
      return kExitNumeric;
    default:
      return kExitValidation;
  }
}

namespace {

void write_file(const RunOptions& options, const std::string& name, const std::string& content) {
  std::filesystem::create_directories(options.out_dir);
  const auto path = options.out_dir / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

void write_json(const RunOptions& options, const std::string& name, const ojson& doc) {
  write_file(options, name, doc.dump(2) + "\n");
}

std::string fmt(double v) { return format_double(v); }

ojson nullable(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

ojson plan_json(const DeploymentPlan& p) {
  ojson centers = ojson::array();
  for (const auto& c : p.cluster_centers) centers.push_back({c.x, c.y});
  return {{"side_km", p.side_km},
          {"n_total", p.n_total},
          {"per_cluster", p.per_cluster},
          {"n_clusters", p.n_clusters},
          {"per_axis", p.per_axis},
          {"leftover_anchors", p.leftover_anchors},
          {"unplaced_clusters", p.unplaced_clusters},
          {"d_c_m", p.d_c},
          {"d_com_m", p.d_com},
          {"d_h_m", p.d_h},
          {"d_h1_m", p.d_h1},
          {"cluster_centers_m", centers}};
}

}  // namespace

void run_field(const ScenarioConfig& config, const RunOptions& options) {
  const auto design = config.design();
  const auto cluster = design.cluster(config.anchors.per_cluster);
  const auto setup = design.acoustic_setup(config.sound_speed_profile(), config.range_params());
  const Region region = config.field.has_region
                            ? Region{config.field.x_min, config.field.x_max, config.field.y_min, config.field.y_max}
                            : reachable_region(cluster, design.comm_range_m);
  const auto field = expected_crlb_field(cluster, setup, region, design.step_m, options.threads);

  std::optional<double> d_com;
  try {
    d_com = coverage_radius(cluster, design.comm_range_m, design.rule);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoCoverage) throw;
  }
  const double sigma_d_sq = los_variance(setup.profile, design.design_elevation_rad, setup.params);

  std::ostringstream csv;
  write_field_csv(csv, field);
  write_file(options, "field.csv", csv.str());

  ojson meta;
  meta["command"] = "field";
  meta["n_anchors"] = config.anchors.per_cluster;
  meta["ring_radius_m"] = cluster.ring_radius;
  meta["region_m"] = {{"x_min", region.x_min}, {"x_max", region.x_max}, {"y_min", region.y_min},
                      {"y_max", region.y_max}};
  meta["step_m"] = field.step;
  meta["nx"] = field.nx;
  meta["ny"] = field.ny;
  meta["covered_cells"] = field.covered_count;
  meta["total_cells"] = field.cells.size();
  meta["q_m2"] = field.q;
  meta["design_sigma_d_sq_m2"] = sigma_d_sq;
  meta["center_crlb_m2"] = center_crlb(config.anchors.per_cluster, design.design_elevation_rad, sigma_d_sq);
  meta["coverage_rule"] = design.rule.name();
  meta["coverage_radius_m"] = d_com ? ojson(*d_com) : ojson(nullptr);
  meta["config"] = to_json(config);
  write_json(options, "field.json", meta);
}

void run_optimize(const ScenarioConfig& config, const RunOptions& options) {
  const auto design = config.design();
  const auto profile = config.sound_speed_profile();
  const auto params = config.range_params();
  const auto kin = config.leg_sampling();
  const auto& cands = config.anchors.candidates;
  const auto& grid = config.weights.lambda1_grid;

  std::vector<CandidateAssessment> assessed(cands.size());
  parallel_for(cands.size(), options.threads, [&](std::size_t i) {
    assessed[i] = assess_candidate(config.region.side_km, config.anchors.n_total, cands[i], profile, params, design);
  });

  // table[i][g]: candidate i under lambda1 grid point g.
  std::vector<std::vector<CandidateEvaluation>> table(cands.size());
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (!assessed[i].feasible) continue;
    for (double l1 : grid) {
      table[i].push_back(score_candidate(assessed[i], {l1, config.weights.lambda2}, config.ins, kin));
    }
  }

  std::optional<std::size_t> best_i;
  std::size_t best_g = 0;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    for (std::size_t g = 0; g < table[i].size(); ++g) {
      const double v = table[i][g].objective;
      if (!best_i) {
        best_i = i;
        best_g = g;
        continue;
      }
      const double b = table[*best_i][best_g].objective;
      if (v < b || (v == b && cands[i] < cands[*best_i])) {
        best_i = i;
        best_g = g;
      }
    }
  }
  if (!best_i) fail(ErrorCode::AllInfeasible, "every candidate failed layout or coverage");

  std::ostringstream csv;
  csv << "n_ca,lambda1,q_m2,nav_m2,objective_m2,path\n";
  ojson rows = ojson::array();
  for (std::size_t i = 0; i < cands.size(); ++i) {
    ojson row;
    row["n_ca"] = cands[i];
    row["feasible"] = assessed[i].feasible;
    if (!assessed[i].feasible) {
      for (double l1 : grid) csv << cands[i] << ',' << fmt(l1) << ",,,,infeasible\n";
      row["failure"] = assessed[i].failure;
      rows.push_back(row);
      continue;
    }
    ojson by_lambda = ojson::array();
    std::size_t cand_best = 0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const auto& e = table[i][g];
      for (const auto& p : e.paths) {
        csv << cands[i] << ',' << fmt(grid[g]) << ',' << fmt(p.q_term) << ',' << fmt(p.nav_term) << ','
            << fmt(p.objective) << ',' << to_string(p.path) << '\n';
      }
      csv << cands[i] << ',' << fmt(grid[g]) << ',' << fmt(e.assessment.q) << ',' << fmt(e.nav_mean) << ','
          << fmt(e.objective) << ",mean\n";
      by_lambda.push_back({{"lambda1", grid[g]}, {"objective_m2", e.objective}});
      if (e.objective < table[i][cand_best].objective) cand_best = g;
    }
    row["d_com_m"] = assessed[i].d_com;
    row["q_m2"] = assessed[i].q;
    row["covered_cells"] = assessed[i].covered_cells;
    row["nav_mean_m2"] = table[i][0].nav_mean;
    row["best_lambda1"] = grid[cand_best];
    row["objective_by_lambda1"] = by_lambda;
    row["plan"] = plan_json(assessed[i].plan);
    rows.push_back(row);
  }
  write_file(options, "sweep.csv", csv.str());

  ojson verdict;
  verdict["command"] = "optimize";
  verdict["best_n_ca"] = cands[*best_i];
  verdict["best_lambda1"] = grid[best_g];
  verdict["best_objective_m2"] = table[*best_i][best_g].objective;
  verdict["candidates"] = rows;
  verdict["config"] = to_json(config);
  write_json(options, "verdict.json", verdict);
}

void run_feasibility(const ScenarioConfig& config, const RunOptions& options) {
  const auto design = config.design();
  const auto& cands = config.anchors.candidates;

  std::vector<std::optional<double>> d_com(cands.size());
  parallel_for(cands.size(), options.threads, [&](std::size_t i) {
    try {
      d_com[i] = coverage_radius(design.cluster(cands[i]), design.comm_range_m, design.rule);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoCoverage) throw;
    }
  });

  std::ostringstream csv;
  csv << "n_total,max_side_km,per_cluster,status,d_h1_lower_m,d_h1_upper_m\n";
  ojson series = ojson::array();
  for (std::size_t i = 0; i < cands.size(); ++i) {
    std::size_t feasible_rows = 0;
    for (int n = config.feasibility.n_total_min; n <= config.feasibility.n_total_max; ++n) {
      csv << n << ',';
      if (!d_com[i]) {
        csv << ',' << cands[i] << ",no_coverage,,\n";
        continue;
      }
      if (n < cands[i]) {
        csv << ',' << cands[i] << ",too_few_anchors,,\n";
        continue;
      }
      const auto r = max_coverage_side(n, cands[i], *d_com[i], config.ins);
      switch (r.status) {
        case CoverageSide::Status::Feasible:
          ++feasible_rows;
          csv << fmt(r.side_km) << ',' << cands[i] << ",feasible," << fmt(r.d_h1_lower) << ','
              << fmt(r.d_h1_upper) << '\n';
          break;
        case CoverageSide::Status::Unbounded:
          csv << "inf," << cands[i] << ",unbounded,,\n";
          break;
        case CoverageSide::Status::Infeasible:
          csv << ',' << cands[i] << ",infeasible,,\n";
          break;
      }
    }
    series.push_back({{"per_cluster", cands[i]},
                      {"d_com_m", d_com[i] ? ojson(*d_com[i]) : ojson(nullptr)},
                      {"feasible_rows", feasible_rows}});
  }
  write_file(options, "feasibility.csv", csv.str());

  ojson meta;
  meta["command"] = "feasibility";
  meta["series"] = series;
  meta["config"] = to_json(config);
  write_json(options, "feasibility.json", meta);
}

void run_simulate(const ScenarioConfig& config, const RunOptions& options) {
  const auto setup = config.cluster_setup();
  const auto kin = config.leg_sampling();
  const auto sim_opts = config.simulation_options();
  const auto kind = sim_path_kind_from_string(config.simulation.path_kind);
  const auto& cands = config.anchors.candidates;

  std::ostringstream trials_csv;
  trials_csv << "trial,seed,mean_error_var_m2,nav_fraction,n_ca\n";
  std::ostringstream samples_csv;
  samples_csv << "trial,s_m,error_var_m2,in_coverage,n_ca\n";
  ojson summaries = ojson::array();
  std::size_t simulated = 0;

  for (int n_ca : cands) {
    ojson s;
    s["n_ca"] = n_ca;
    std::optional<DeploymentPlan> plan;
    try {
      const double d_com = coverage_radius(setup.design.cluster(n_ca), setup.design.comm_range_m, setup.design.rule);
      plan = layout_clusters(config.region.side_km, config.anchors.n_total, n_ca, d_com);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoCoverage && e.code() != ErrorCode::TooFewAnchors) throw;
      s["feasible"] = false;
      s["failure"] = e.what();
      summaries.push_back(s);
      continue;
    }
    const auto mc = monte_carlo(*plan, setup, kind, config.simulation.trials, config.ins, kin,
                                config.simulation.master_seed, sim_opts, config.target.depth_m, options.threads);
    ++simulated;
    for (std::size_t t = 0; t < mc.reports.size(); ++t) {
      const auto& r = mc.reports[t];
      trials_csv << t << ',' << r.trial_seed << ',' << fmt(r.mean_error_var) << ',' << fmt(r.nav_fraction) << ','
                 << n_ca << '\n';
      if (options.write_samples) {
        for (const auto& p : r.per_sample) {
          samples_csv << t << ',' << fmt(p.s_m) << ',' << fmt(p.error_var_m2) << ',' << (p.in_coverage ? 1 : 0)
                      << ',' << n_ca << '\n';
        }
      }
    }
    const auto& m = mc.summary;
    s["feasible"] = true;
    s["trials"] = m.trials;
    s["master_seed"] = m.master_seed;
    s["mean"] = m.mean;
    s["std"] = m.std;
    s["min"] = m.min;
    s["max"] = m.max;
    s["rmse_m"] = std::sqrt(m.mean);
    s["mean_nav_fraction"] = m.mean_nav_fraction;
    s["plan"] = plan_json(*plan);
    summaries.push_back(s);
  }
  if (simulated == 0) fail(ErrorCode::AllInfeasible, "no candidate cluster size produced a layout");

  write_file(options, "trials.csv", trials_csv.str());
  if (options.write_samples) write_file(options, "samples.csv", samples_csv.str());

  ojson summary;
  summary["command"] = "simulate";
  summary["path_kind"] = config.simulation.path_kind;
  summary["master_seed"] = config.simulation.master_seed;
  summary["candidates"] = summaries;
  summary["config"] = to_json(config);
  write_json(options, "summary.json", summary);
}

void run_fit(const ScenarioConfig& config, const std::filesystem::path& input_csv, const RunOptions& options) {
  const auto series = read_error_series_csv_file(input_csv);
  const auto fit = fit_divergence(series, config.ins.distance_unit_m);

  ojson model;
  model["command"] = "fit";
  model["input"] = input_csv.filename().string();
  model["n_points"] = series.size();
  model["sigma0_sq"] = fit.model.sigma0_sq;
  model["beta1"] = fit.model.beta1;
  model["beta2"] = fit.model.beta2;
  model["distance_unit_m"] = fit.model.distance_unit_m;
  model["residual_l2"] = fit.residual;
  model["residual_rms"] = nullable(fit.residual / std::sqrt(static_cast<double>(series.size())));
  model["config"] = to_json(config);
  write_json(options, "model.json", model);
}

}  // namespace anchorplan::cli
