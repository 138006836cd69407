#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "anchorplan/ins_drift.hpp"
#include "anchorplan/planner.hpp"
#include "anchorplan/profile_acoustics.hpp"
#include "anchorplan/simulator.hpp"

namespace anchorplan::cli {

/// Raised for malformed or out-of-range configuration; exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
  struct Region {
    double side_km = 20.0;
  } region;

  struct Anchors {
    int n_total = 48;
    int per_cluster = 4;
    std::vector<int> candidates{3, 4, 5};
    double anchor_depth_m = 3000.0;
    double design_elevation_deg = 46.0;
    double comm_range_m = 5000.0;
    double gamma = 0.001;
  } anchors;

  struct Target {
    double depth_m = 500.0;
  } target;

  struct Profile {
    std::string name = "default-munk-like";
    std::string csv;  // overrides name when set
    double layer_thickness_m = 100.0;
  } profile;

  InsDivergenceModel ins;

  struct Kinematics {
    double speed_mps = 2.0;
    double slot_s = 50.0;
  } kinematics;

  struct Weights {
    std::vector<double> lambda1_grid{0.0, 0.5, 1.0};
    double lambda2 = 1.0;
  } weights;

  struct Traversal {
    double step_m = 100.0;
  } traversal;

  struct Coverage {
    std::string rule = "at_least";
    int min_anchors = 3;
  } coverage;

  struct Field {
    // Window relative to the cluster center; unset means the reachable square.
    bool has_region = false;
    double x_min = 0.0;
    double x_max = 0.0;
    double y_min = 0.0;
    double y_max = 0.0;
  } field;

  struct Simulation {
    std::size_t trials = 100;
    std::uint64_t master_seed = 42;
    std::string path_kind = "random";
    std::string coverage_model = "rule";
    bool pin_center_crlb = false;
  } simulation;

  struct Feasibility {
    int n_total_min = 27;
    int n_total_max = 200;
  } feasibility;

  // Derived views used by the commands.
  CoverageRule coverage_rule() const;
  ClusterDesign design() const;
  SoundSpeedProfile sound_speed_profile() const;
  RangeErrorParams range_params() const { return {anchors.gamma}; }
  LegSampling leg_sampling() const { return {kinematics.speed_mps, kinematics.slot_s, 0.0}; }
  ClusterSetup cluster_setup() const;
  SimulationOptions simulation_options() const;
};

/// JSON pointer of every key and array element mapped to its 1-based source line.
std::map<std::string, int> json_pointer_lines(const std::string& text);

/// Parses and validates a config document. Missing keys take defaults;
/// unknown keys are rejected. Messages carry `<source>:<line>: <pointer>`.
ScenarioConfig parse_config(const std::string& text, const std::string& source_name = "config");
ScenarioConfig load_config(const std::filesystem::path& path);

/// Every field with its effective value, in a stable key order.
nlohmann::ordered_json to_json(const ScenarioConfig& config);

}  // namespace anchorplan::cli
