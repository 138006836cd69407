#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace anchorplan {

struct SoundSpeedLayer {
  double depth_m;
  double speed_mps;
};

/// Depth-ordered sound speed table. Layer 1 is the shallowest entry; when a
/// profile is resampled onto a target/anchor slab, layer 1 is the layer the
/// target sits in and the last layer is the one touching the anchor.
class SoundSpeedProfile {
 public:
  /// Depths must be strictly increasing and speeds strictly positive.
  explicit SoundSpeedProfile(std::vector<SoundSpeedLayer> layers);

  /// Constant 1500 m/s from the surface to 11 km.
  static SoundSpeedProfile iso1500();
  /// Two linear segments: 1520 m/s at the surface falling to a 1490 m/s
  /// channel axis at 1000 m, then rising at 0.017 s^-1 to 6000 m.
  static SoundSpeedProfile default_munk_like();
  /// "iso1500" or "default-munk-like"; throws InvalidArgument otherwise.
  static SoundSpeedProfile builtin(std::string_view name);

  /// CSV with header `depth_m,speed_mps`, rows sorted by depth.
  static SoundSpeedProfile from_csv(std::istream& in);
  static SoundSpeedProfile from_csv_file(const std::filesystem::path& path);

  std::span<const SoundSpeedLayer> layers() const { return layers_; }
  std::size_t size() const { return layers_.size(); }

  /// Piecewise-linear in depth, held constant beyond the table ends.
  double speed_at(double depth_m) const;

  /// Splits [top_m, bottom_m] into equal layers no thicker than
  /// `thickness_m`; each layer takes the speed at its midpoint.
  SoundSpeedProfile resample(double top_m, double bottom_m, double thickness_m = 100.0) const;

 private:
  std::vector<SoundSpeedLayer> layers_;
};

struct RangeErrorParams {
  /// Timing-error scale: range error std is gamma times path length.
  double gamma = 0.001;

  void validate() const;
};

/// Individual summands gamma^2 s_{i-1}^2 / (s_1^2 - s_{i-1}^2 cos^2 a) for
/// i = 2..I, in layer order. Empty for a single-layer profile.
std::vector<double> los_variance_terms(const SoundSpeedProfile& profile, double elevation_rad,
                                       const RangeErrorParams& params);

/// Refraction-aware variance of the line-of-sight range between a target and
/// an anchor seen at `elevation_rad`, in m^2.
double los_variance(const SoundSpeedProfile& profile, double elevation_rad,
                    const RangeErrorParams& params);

}  // namespace anchorplan
