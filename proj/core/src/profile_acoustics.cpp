#include "anchorplan/profile_acoustics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "anchorplan/error.hpp"

namespace anchorplan {

namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

double parse_number(const std::string& field, std::size_t line) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(field, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != field.size()) {
    fail(ErrorCode::ParseError, "line " + std::to_string(line) + ": not a number: '" + field + "'");
  }
  return value;
}

}  // namespace

SoundSpeedProfile::SoundSpeedProfile(std::vector<SoundSpeedLayer> layers) : layers_(std::move(layers)) {
  require(!layers_.empty(), "sound speed profile needs at least one layer");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    require(std::isfinite(layers_[i].depth_m) && std::isfinite(layers_[i].speed_mps),
            "sound speed profile entries must be finite");
    require(layers_[i].speed_mps > 0.0, "sound speeds must be strictly positive");
    if (i > 0) {
      require(layers_[i].depth_m > layers_[i - 1].depth_m,
              "sound speed profile depths must be strictly increasing");
    }
  }
}

SoundSpeedProfile SoundSpeedProfile::iso1500() {
  return SoundSpeedProfile({{0.0, 1500.0}, {11000.0, 1500.0}});
}

SoundSpeedProfile SoundSpeedProfile::default_munk_like() {
  return SoundSpeedProfile({{0.0, 1520.0}, {1000.0, 1490.0}, {6000.0, 1490.0 + 0.017 * 5000.0}});
}

SoundSpeedProfile SoundSpeedProfile::builtin(std::string_view name) {
  if (name == "iso1500") return iso1500();
  if (name == "default-munk-like") return default_munk_like();
  fail(ErrorCode::InvalidArgument, "unknown built-in profile '" + std::string(name) + "'");
}

SoundSpeedProfile SoundSpeedProfile::from_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<SoundSpeedLayer> layers;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (!header_seen) {
      if (trim(line) != "depth_m,speed_mps") {
        fail(ErrorCode::ParseError, "line " + std::to_string(line_no) +
                                        ": expected header 'depth_m,speed_mps'");
      }
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      fail(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected two columns");
    }
    layers.push_back({parse_number(trim(line.substr(0, comma)), line_no),
                      parse_number(trim(line.substr(comma + 1)), line_no)});
  }
  if (!header_seen) fail(ErrorCode::ParseError, "empty profile file");
  return SoundSpeedProfile(std::move(layers));
}

SoundSpeedProfile SoundSpeedProfile::from_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::InvalidArgument, "cannot open profile file " + path.string());
  return from_csv(in);
}

double SoundSpeedProfile::speed_at(double depth_m) const {
  if (depth_m <= layers_.front().depth_m) return layers_.front().speed_mps;
  if (depth_m >= layers_.back().depth_m) return layers_.back().speed_mps;
  const auto upper = std::upper_bound(layers_.begin(), layers_.end(), depth_m,
                                      [](double d, const SoundSpeedLayer& l) { return d < l.depth_m; });
  const auto lower = upper - 1;
  const double t = (depth_m - lower->depth_m) / (upper->depth_m - lower->depth_m);
  return lower->speed_mps + t * (upper->speed_mps - lower->speed_mps);
}

SoundSpeedProfile SoundSpeedProfile::resample(double top_m, double bottom_m, double thickness_m) const {
  require(thickness_m > 0.0, "layer thickness must be positive");
  require(bottom_m > top_m, "resample slab must have bottom below top");
  const double span = bottom_m - top_m;
  const auto count = static_cast<std::size_t>(std::max(1.0, std::ceil(span / thickness_m - 1e-9)));
  const double h = span / static_cast<double>(count);
  std::vector<SoundSpeedLayer> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double top = top_m + h * static_cast<double>(k);
    out.push_back({top, speed_at(top + 0.5 * h)});
  }
  return SoundSpeedProfile(std::move(out));
}

void RangeErrorParams::validate() const {
  require(std::isfinite(gamma) && gamma > 0.0, "gamma must be positive");
}

std::vector<double> los_variance_terms(const SoundSpeedProfile& profile, double elevation_rad,
                                       const RangeErrorParams& params) {
  params.validate();
  if (!(elevation_rad > 0.0 && elevation_rad <= std::numbers::pi / 2)) {
    fail(ErrorCode::InvalidAngle, "elevation must lie in (0, pi/2], got " + std::to_string(elevation_rad));
  }
  const auto layers = profile.layers();
  const double s1 = layers.front().speed_mps;
  const double cos_a = std::cos(elevation_rad);
  const double g2 = params.gamma * params.gamma;

  std::vector<double> terms;
  terms.reserve(layers.size() > 0 ? layers.size() - 1 : 0);
  for (std::size_t i = 2; i <= layers.size(); ++i) {
    const double s = layers[i - 2].speed_mps;
    const double denom = s1 * s1 - s * s * cos_a * cos_a;
    if (!(denom > 0.0)) {
      throw TotalReflectionError(i, "layer " + std::to_string(i) +
                                        " reflects totally at elevation " + std::to_string(elevation_rad));
    }
    terms.push_back(g2 * s * s / denom);
  }
  return terms;
}

double los_variance(const SoundSpeedProfile& profile, double elevation_rad, const RangeErrorParams& params) {
  const auto terms = los_variance_terms(profile, elevation_rad, params);
  double sum = 0.0;
  for (double t : terms) sum += t;
  return sum;
}

}  // namespace anchorplan
