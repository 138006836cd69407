#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "anchorplan/error.hpp"

namespace anchorplan::cli {

using nlohmann::json;

CoverageRule ScenarioConfig::coverage_rule() const {
  return coverage.rule == "all" ? CoverageRule::all() : CoverageRule::at_least(coverage.min_anchors);
}

ClusterDesign ScenarioConfig::design() const {
  ClusterDesign d;
  d.anchor_depth_m = anchors.anchor_depth_m;
  d.target_depth_m = target.depth_m;
  d.design_elevation_rad = anchors.design_elevation_deg * std::numbers::pi / 180.0;
  d.comm_range_m = anchors.comm_range_m;
  d.rule = coverage_rule();
  d.layer_thickness_m = profile.layer_thickness_m;
  d.step_m = traversal.step_m;
  return d;
}

SoundSpeedProfile ScenarioConfig::sound_speed_profile() const {
  if (!profile.csv.empty()) return SoundSpeedProfile::from_csv_file(profile.csv);
  return SoundSpeedProfile::builtin(profile.name);
}

ClusterSetup ScenarioConfig::cluster_setup() const { return {design(), sound_speed_profile(), range_params()}; }

SimulationOptions ScenarioConfig::simulation_options() const {
  SimulationOptions o;
  o.coverage = simulation.coverage_model == "disc" ? CoverageModel::Disc : CoverageModel::Rule;
  o.pin_center_crlb = simulation.pin_center_crlb;
  return o;
}

namespace {

std::string escape_pointer_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

}  // namespace

std::map<std::string, int> json_pointer_lines(const std::string& text) {
  struct Frame {
    bool object;
    std::string pointer;
    std::size_t index = 0;
    bool expect_key = true;
    std::string key;
  };
  std::map<std::string, int> lines;
  std::vector<Frame> stack;
  int line = 1;

  const auto value_pointer = [&]() -> std::string {
    if (stack.empty()) return "";
    const auto& top = stack.back();
    return top.pointer + "/" + (top.object ? escape_pointer_token(top.key) : std::to_string(top.index));
  };
  const auto mark_value = [&]() {
    if (!stack.empty() && !stack.back().object) lines.emplace(value_pointer(), line);
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r' || c == ':') continue;
    if (c == '"') {
      const int start_line = line;
      std::string s;
      for (++i; i < text.size() && text[i] != '"'; ++i) {
        if (text[i] == '\\' && i + 1 < text.size()) ++i;
        if (text[i] == '\n') ++line;
        s += text[i];
      }
      if (!stack.empty() && stack.back().object && stack.back().expect_key) {
        stack.back().key = s;
        stack.back().expect_key = false;
        lines.emplace(value_pointer(), start_line);
      } else {
        mark_value();
      }
      continue;
    }
    if (c == '{' || c == '[') {
      mark_value();
      stack.push_back({c == '{', value_pointer(), 0, true, {}});
      continue;
    }
    if (c == '}' || c == ']') {
      if (!stack.empty()) stack.pop_back();
      continue;
    }
    if (c == ',') {
      if (!stack.empty()) {
        if (stack.back().object) {
          stack.back().expect_key = true;
        } else {
          ++stack.back().index;
        }
      }
      continue;
    }
    // Scalar literal: consume it whole.
    mark_value();
    while (i + 1 < text.size() && std::string_view(",}] \t\r\n").find(text[i + 1]) == std::string_view::npos) ++i;
  }
  return lines;
}

namespace {

class Reader {
 public:
  Reader(const json& doc, std::map<std::string, int> lines, std::string source)
      : doc_(doc), lines_(std::move(lines)), source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& pointer, const std::string& message) const {
    int line = 1;
    std::string p = pointer;
    while (true) {
      if (auto it = lines_.find(p); it != lines_.end()) {
        line = it->second;
        break;
      }
      const auto slash = p.rfind('/');
      if (slash == std::string::npos || p.empty()) break;
      p.erase(slash);
    }
    throw ConfigError(source_ + ":" + std::to_string(line) + ": " + (pointer.empty() ? "/" : pointer) + ": " +
                      message);
  }

  /// The object at `pointer`, or nullptr when absent. Rejects unknown keys.
  const json* object(const std::string& pointer, std::initializer_list<const char*> allowed) const {
    const json* node = find(pointer);
    if (!node || node->is_null()) return nullptr;
    if (!node->is_object()) fail(pointer, "expected an object");
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& [k, v] : node->items()) {
      if (!keys.count(k)) fail(pointer + "/" + escape_pointer_token(k), "unknown key");
    }
    return node;
  }

  void number(const std::string& pointer, double& out) const {
    const json* node = find(pointer);
    if (!node) return;
    if (!node->is_number()) fail(pointer, "expected a number");
    out = node->get<double>();
    if (!std::isfinite(out)) fail(pointer, "must be finite");
  }

  void positive(const std::string& pointer, double& out) const {
    number(pointer, out);
    if (!(out > 0.0)) fail(pointer, "must be positive");
  }

  void nonnegative(const std::string& pointer, double& out) const {
    number(pointer, out);
    if (!(out >= 0.0)) fail(pointer, "must be nonnegative");
  }

  void unit_interval(const std::string& pointer, double& out) const {
    number(pointer, out);
    if (out < 0.0 || out > 1.0) fail(pointer, "must lie in [0, 1]");
  }

  template <class Int>
  void integer(const std::string& pointer, Int& out, long long min_value) const {
    const json* node = find(pointer);
    if (!node) return;
    if (!node->is_number_integer()) fail(pointer, "expected an integer");
    if (node->is_number_unsigned()) {
      const auto v = node->get<unsigned long long>();
      if (v < static_cast<unsigned long long>(std::max(min_value, 0LL))) {
        fail(pointer, "must be at least " + std::to_string(min_value));
      }
      out = static_cast<Int>(v);
      return;
    }
    const auto v = node->get<long long>();
    if (v < min_value) fail(pointer, "must be at least " + std::to_string(min_value));
    out = static_cast<Int>(v);
  }

  void string(const std::string& pointer, std::string& out, std::initializer_list<const char*> choices = {}) const {
    const json* node = find(pointer);
    if (!node) return;
    if (!node->is_string()) fail(pointer, "expected a string");
    out = node->get<std::string>();
    if (choices.size() == 0) return;
    std::string list;
    for (const char* c : choices) {
      if (out == c) return;
      list += list.empty() ? c : std::string(", ") + c;
    }
    fail(pointer, "must be one of: " + list);
  }

  void boolean(const std::string& pointer, bool& out) const {
    const json* node = find(pointer);
    if (!node) return;
    if (!node->is_boolean()) fail(pointer, "expected true or false");
    out = node->get<bool>();
  }

  const json* array(const std::string& pointer) const {
    const json* node = find(pointer);
    if (!node) return nullptr;
    if (!node->is_array()) fail(pointer, "expected an array");
    if (node->empty()) fail(pointer, "must not be empty");
    return node;
  }

  bool has(const std::string& pointer) const { return find(pointer) != nullptr; }

 private:
  const json* find(const std::string& pointer) const {
    const json::json_pointer p(pointer);
    if (!doc_.contains(p)) return nullptr;
    return &doc_.at(p);
  }

  const json& doc_;
  std::map<std::string, int> lines_;
  std::string source_;
};

}  // namespace

ScenarioConfig parse_config(const std::string& text, const std::string& source_name) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    throw ConfigError(source_name + ":" + std::to_string(line) + ": invalid JSON: " + e.what());
  }
  const Reader r(doc, json_pointer_lines(text), source_name);
  if (!doc.is_object()) r.fail("", "config must be a JSON object");
  r.object("", {"region", "anchors", "target", "profile", "ins", "kinematics", "weights", "traversal", "coverage",
                "field", "simulation", "feasibility"});

  ScenarioConfig c;
  r.object("/region", {"side_km"});
  r.positive("/region/side_km", c.region.side_km);

  r.object("/anchors", {"n_total", "per_cluster", "candidates", "anchor_depth_m", "design_elevation_deg",
                        "comm_range_m", "gamma"});
  r.integer("/anchors/n_total", c.anchors.n_total, 1);
  r.integer("/anchors/per_cluster", c.anchors.per_cluster, 3);
  if (const json* cands = r.array("/anchors/candidates")) {
    c.anchors.candidates.assign(cands->size(), 0);
    for (std::size_t i = 0; i < cands->size(); ++i) {
      r.integer("/anchors/candidates/" + std::to_string(i), c.anchors.candidates[i], 3);
    }
  }
  r.positive("/anchors/anchor_depth_m", c.anchors.anchor_depth_m);
  r.number("/anchors/design_elevation_deg", c.anchors.design_elevation_deg);
  if (!(c.anchors.design_elevation_deg > 0.0 && c.anchors.design_elevation_deg < 90.0)) {
    r.fail("/anchors/design_elevation_deg", "must lie strictly between 0 and 90 degrees");
  }
  r.positive("/anchors/comm_range_m", c.anchors.comm_range_m);
  r.positive("/anchors/gamma", c.anchors.gamma);
  if (c.anchors.n_total < c.anchors.per_cluster) {
    r.fail("/anchors/n_total", "must be at least per_cluster (" + std::to_string(c.anchors.per_cluster) + ")");
  }

  r.object("/target", {"depth_m"});
  r.nonnegative("/target/depth_m", c.target.depth_m);
  if (c.target.depth_m >= c.anchors.anchor_depth_m) r.fail("/target/depth_m", "must be shallower than the anchors");

  r.object("/profile", {"name", "csv", "layer_thickness_m"});
  r.string("/profile/name", c.profile.name, {"default-munk-like", "iso1500"});
  r.string("/profile/csv", c.profile.csv);
  r.positive("/profile/layer_thickness_m", c.profile.layer_thickness_m);

  r.object("/ins", {"sigma0_sq", "beta1", "beta2", "distance_unit_m"});
  r.nonnegative("/ins/sigma0_sq", c.ins.sigma0_sq);
  r.nonnegative("/ins/beta1", c.ins.beta1);
  r.nonnegative("/ins/beta2", c.ins.beta2);
  r.positive("/ins/distance_unit_m", c.ins.distance_unit_m);

  r.object("/kinematics", {"speed_mps", "slot_s"});
  r.positive("/kinematics/speed_mps", c.kinematics.speed_mps);
  r.positive("/kinematics/slot_s", c.kinematics.slot_s);

  r.object("/weights", {"lambda1", "lambda1_grid", "lambda2"});
  if (r.has("/weights/lambda1") && r.has("/weights/lambda1_grid")) {
    r.fail("/weights/lambda1", "give either lambda1 or lambda1_grid, not both");
  }
  if (r.has("/weights/lambda1")) {
    double l1 = 0.0;
    r.unit_interval("/weights/lambda1", l1);
    c.weights.lambda1_grid = {l1};
  }
  if (const json* grid = r.array("/weights/lambda1_grid")) {
    c.weights.lambda1_grid.assign(grid->size(), 0.0);
    for (std::size_t i = 0; i < grid->size(); ++i) {
      r.unit_interval("/weights/lambda1_grid/" + std::to_string(i), c.weights.lambda1_grid[i]);
    }
  }
  r.unit_interval("/weights/lambda2", c.weights.lambda2);

  r.object("/traversal", {"step_m"});
  r.positive("/traversal/step_m", c.traversal.step_m);

  r.object("/coverage", {"rule", "min_anchors"});
  r.string("/coverage/rule", c.coverage.rule, {"at_least", "all"});
  r.integer("/coverage/min_anchors", c.coverage.min_anchors, 1);

  r.object("/field", {"region"});
  if (r.object("/field/region", {"x_min", "x_max", "y_min", "y_max"})) {
    c.field.has_region = true;
    for (const char* k : {"x_min", "x_max", "y_min", "y_max"}) {
      if (!r.has(std::string("/field/region/") + k)) r.fail("/field/region", std::string("missing ") + k);
    }
    r.number("/field/region/x_min", c.field.x_min);
    r.number("/field/region/x_max", c.field.x_max);
    r.number("/field/region/y_min", c.field.y_min);
    r.number("/field/region/y_max", c.field.y_max);
    if (!(c.field.x_max > c.field.x_min)) r.fail("/field/region/x_max", "must exceed x_min");
    if (!(c.field.y_max > c.field.y_min)) r.fail("/field/region/y_max", "must exceed y_min");
  }

  r.object("/simulation", {"trials", "master_seed", "path_kind", "coverage_model", "pin_center_crlb"});
  r.integer("/simulation/trials", c.simulation.trials, 1);
  r.integer("/simulation/master_seed", c.simulation.master_seed, 0);
  r.string("/simulation/path_kind", c.simulation.path_kind, {"r1", "r2", "r3", "random"});
  r.string("/simulation/coverage_model", c.simulation.coverage_model, {"rule", "disc"});
  r.boolean("/simulation/pin_center_crlb", c.simulation.pin_center_crlb);

  r.object("/feasibility", {"n_total_min", "n_total_max"});
  r.integer("/feasibility/n_total_min", c.feasibility.n_total_min, 1);
  r.integer("/feasibility/n_total_max", c.feasibility.n_total_max, 1);
  if (c.feasibility.n_total_max < c.feasibility.n_total_min) {
    r.fail("/feasibility/n_total_max", "must be at least n_total_min");
  }
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.string());
}

nlohmann::ordered_json to_json(const ScenarioConfig& c) {
  nlohmann::ordered_json j;
  j["region"] = {{"side_km", c.region.side_km}};
  j["anchors"] = {{"n_total", c.anchors.n_total},
                  {"per_cluster", c.anchors.per_cluster},
                  {"candidates", c.anchors.candidates},
                  {"anchor_depth_m", c.anchors.anchor_depth_m},
                  {"design_elevation_deg", c.anchors.design_elevation_deg},
                  {"comm_range_m", c.anchors.comm_range_m},
                  {"gamma", c.anchors.gamma}};
  j["target"] = {{"depth_m", c.target.depth_m}};
  j["profile"] = {{"name", c.profile.name}, {"csv", c.profile.csv}, {"layer_thickness_m", c.profile.layer_thickness_m}};
  j["ins"] = {{"sigma0_sq", c.ins.sigma0_sq},
              {"beta1", c.ins.beta1},
              {"beta2", c.ins.beta2},
              {"distance_unit_m", c.ins.distance_unit_m}};
  j["kinematics"] = {{"speed_mps", c.kinematics.speed_mps}, {"slot_s", c.kinematics.slot_s}};
  j["weights"] = {{"lambda1_grid", c.weights.lambda1_grid}, {"lambda2", c.weights.lambda2}};
  j["traversal"] = {{"step_m", c.traversal.step_m}};
  j["coverage"] = {{"rule", c.coverage.rule}, {"min_anchors", c.coverage.min_anchors}};
  if (c.field.has_region) {
    j["field"] = {{"region",
                   {{"x_min", c.field.x_min}, {"x_max", c.field.x_max}, {"y_min", c.field.y_min},
                    {"y_max", c.field.y_max}}}};
  } else {
    j["field"] = {{"region", nullptr}};
  }
  j["simulation"] = {{"trials", c.simulation.trials},
                     {"master_seed", c.simulation.master_seed},
                     {"path_kind", c.simulation.path_kind},
                     {"coverage_model", c.simulation.coverage_model},
                     {"pin_center_crlb", c.simulation.pin_center_crlb}};
  j["feasibility"] = {{"n_total_min", c.feasibility.n_total_min}, {"n_total_max", c.feasibility.n_total_max}};
  return j;
}

}  // namespace anchorplan::cli
