#pragma once

#include <cstddef>
#include <span>

namespace anchorplan {

/// Exponential divergence of the per-axis INS position-error variance with
/// traveled distance: sigma0^2 + beta1 * exp(beta2 * dp / distance_unit_m).
///
/// beta2 is expressed per `distance_unit_m` meters (default: per kilometer).
/// At dp = 0 the variance is sigma0^2 + beta1, not sigma0^2; the law is kept
/// as is, including that step.
struct InsDivergenceModel {
  double sigma0_sq = 0.01;
  double beta1 = 0.039;
  double beta2 = 0.053;
  double distance_unit_m = 1000.0;

  void validate() const;
};

/// Horizontal axes a leg accumulates drift on.
struct AxisSet {
  bool x = true;
  bool y = false;

  static constexpr AxisSet x_only() { return {true, false}; }
  static constexpr AxisSet y_only() { return {false, true}; }
  static constexpr AxisSet both() { return {true, true}; }

  int count() const { return static_cast<int>(x) + static_cast<int>(y); }
};

/// Constant-speed discretization of one pure-navigation leg.
struct LegSampling {
  double speed_mps = 2.0;
  double slot_s = 50.0;
  double distance_m = 0.0;

  void validate() const;
  /// Distance covered per slot.
  double step_m() const { return speed_mps * slot_s; }
  /// max(1, floor(distance / (speed * slot))).
  std::size_t sample_count() const;
};

/// Per-axis variance after `delta_p_m` meters. Returns +inf on overflow.
double position_variance(const InsDivergenceModel& model, double delta_p_m);

/// Mean over samples n = 1..N of the summed per-axis variances, each active
/// axis having traveled n * speed * slot meters. Inactive axes contribute
/// nothing. Throws Diverged if any sample overflows.
double leg_error_expectation(const InsDivergenceModel& model, const LegSampling& leg, AxisSet axes);

struct SeriesPoint {
  double delta_p_m;
  double variance_m2;
};

struct FitResult {
  InsDivergenceModel model;
  /// Euclidean norm of the residual vector at the returned model.
  double residual = 0.0;
};

/// Least-squares fit of the divergence law to a measured error series.
///
/// Gauss-Newton (Levenberg damped) over (beta1, beta2) with sigma0^2 profiled
/// out as the mean offset, started from 20 log-spaced beta2 values in
/// [0.001, 1] with beta1 from a linear regression at each. All coefficients
/// are kept nonnegative.
FitResult fit_divergence(std::span<const SeriesPoint> series, double distance_unit_m = 1000.0);

}  // namespace anchorplan
