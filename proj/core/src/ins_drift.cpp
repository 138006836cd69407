#include "anchorplan/ins_drift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "anchorplan/error.hpp"

namespace anchorplan {

void InsDivergenceModel::validate() const {
  require(std::isfinite(sigma0_sq) && sigma0_sq >= 0.0, "sigma0_sq must be nonnegative");
  require(std::isfinite(beta1) && beta1 >= 0.0, "beta1 must be nonnegative");
  require(std::isfinite(beta2) && beta2 >= 0.0, "beta2 must be nonnegative");
  require(std::isfinite(distance_unit_m) && distance_unit_m > 0.0, "distance_unit_m must be positive");
}

void LegSampling::validate() const {
  require(std::isfinite(speed_mps) && speed_mps > 0.0, "speed must be positive");
  require(std::isfinite(slot_s) && slot_s > 0.0, "time slot must be positive");
  require(std::isfinite(distance_m) && distance_m >= 0.0, "leg distance must be nonnegative");
}

std::size_t LegSampling::sample_count() const {
  const double n = std::floor(distance_m / step_m() + 1e-9);
  return n < 1.0 ? 1 : static_cast<std::size_t>(n);
}

double position_variance(const InsDivergenceModel& model, double delta_p_m) {
  require(delta_p_m >= 0.0, "traveled distance must be nonnegative");
  if (model.beta1 == 0.0) return model.sigma0_sq;
  const double v = model.sigma0_sq + model.beta1 * std::exp(model.beta2 * delta_p_m / model.distance_unit_m);
  return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

double leg_error_expectation(const InsDivergenceModel& model, const LegSampling& leg, AxisSet axes) {
  model.validate();
  leg.validate();
  require(axes.count() > 0, "at least one axis must be active");
  const std::size_t n_samples = leg.sample_count();
  double sum = 0.0;
  for (std::size_t n = 1; n <= n_samples; ++n) {
    const double v = position_variance(model, static_cast<double>(n) * leg.step_m());
    if (!std::isfinite(v)) {
      fail(ErrorCode::Diverged, "variance overflowed at sample " + std::to_string(n));
    }
    sum += axes.count() * v;
  }
  const double mean = sum / static_cast<double>(n_samples);
  if (!std::isfinite(mean)) fail(ErrorCode::Diverged, "leg error expectation overflowed");
  return mean;
}

namespace {

struct FitState {
  double beta1;
  double beta2;
  double sigma0_sq;
  double ssr;
};

// Evaluates the profiled residuals r_i = y_i - s0 - b1 e^{b2 x_i} with s0 the
// (clamped) mean offset. Returns nullopt on overflow.
std::optional<FitState> evaluate(std::span<const double> x, std::span<const double> y, double b1, double b2,
                                 std::vector<double>* residuals = nullptr, std::vector<double>* jac_b1 = nullptr,
                                 std::vector<double>* jac_b2 = nullptr) {
  const std::size_t n = x.size();
  std::vector<double> e(n);
  std::vector<double> xe(n);
  double mean_offset = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    e[i] = std::exp(b2 * x[i]);
    xe[i] = x[i] * e[i];
    if (!std::isfinite(e[i]) || !std::isfinite(xe[i])) return std::nullopt;
    mean_offset += y[i] - b1 * e[i];
  }
  mean_offset /= static_cast<double>(n);
  const bool clamped = mean_offset < 0.0;
  const double s0 = clamped ? 0.0 : mean_offset;

  double mean_e = 0.0;
  double mean_xe = 0.0;
  if (!clamped) {
    for (std::size_t i = 0; i < n; ++i) {
      mean_e += e[i];
      mean_xe += xe[i];
    }
    mean_e /= static_cast<double>(n);
    mean_xe /= static_cast<double>(n);
  }

  double ssr = 0.0;
  if (residuals) residuals->resize(n);
  if (jac_b1) jac_b1->resize(n);
  if (jac_b2) jac_b2->resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - s0 - b1 * e[i];
    ssr += r * r;
    if (residuals) (*residuals)[i] = r;
    if (jac_b1) (*jac_b1)[i] = -(e[i] - mean_e);
    if (jac_b2) (*jac_b2)[i] = -b1 * (xe[i] - mean_xe);
  }
  if (!std::isfinite(ssr)) return std::nullopt;
  return FitState{b1, b2, s0, ssr};
}

// beta1 from the linear regression of y on exp(b2 x), clamped at zero.
double regress_beta1(std::span<const double> x, std::span<const double> y, double b2) {
  const std::size_t n = x.size();
  double me = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    me += std::exp(b2 * x[i]);
    my += y[i];
  }
  me /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double de = std::exp(b2 * x[i]) - me;
    sxy += de * (y[i] - my);
    sxx += de * de;
  }
  if (!(sxx > 0.0) || !std::isfinite(sxy / sxx)) return 0.0;
  return std::max(0.0, sxy / sxx);
}

std::optional<FitState> gauss_newton(std::span<const double> x, std::span<const double> y, double b1, double b2) {
  std::vector<double> r;
  std::vector<double> j1;
  std::vector<double> j2;
  auto state = evaluate(x, y, b1, b2, &r, &j1, &j2);
  if (!state) return std::nullopt;

  double damping = 1e-3;
  for (int iter = 0; iter < 500; ++iter) {
    double h11 = 0.0, h12 = 0.0, h22 = 0.0, g1 = 0.0, g2 = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      h11 += j1[i] * j1[i];
      h12 += j1[i] * j2[i];
      h22 += j2[i] * j2[i];
      g1 += j1[i] * r[i];
      g2 += j2[i] * r[i];
    }

    bool accepted = false;
    while (damping < 1e20) {
      const double a11 = h11 * (1.0 + damping) + 1e-300;
      const double a22 = h22 * (1.0 + damping) + 1e-300;
      const double det = a11 * a22 - h12 * h12;
      if (!(std::abs(det) > 0.0) || !std::isfinite(det)) {
        damping *= 10.0;
        continue;
      }
      const double d1 = -(a22 * g1 - h12 * g2) / det;
      const double d2 = -(a11 * g2 - h12 * g1) / det;
      const double nb1 = std::max(0.0, state->beta1 + d1);
      const double nb2 = std::max(0.0, state->beta2 + d2);
      std::vector<double> nr, nj1, nj2;
      auto trial = evaluate(x, y, nb1, nb2, &nr, &nj1, &nj2);
      if (trial && trial->ssr <= state->ssr) {
        const double step = std::abs(nb1 - state->beta1) / (std::abs(state->beta1) + 1e-12) +
                            std::abs(nb2 - state->beta2) / (std::abs(state->beta2) + 1e-12);
        const double improvement = state->ssr - trial->ssr;
        state = trial;
        r = std::move(nr);
        j1 = std::move(nj1);
        j2 = std::move(nj2);
        damping = std::max(damping / 3.0, 1e-12);
        accepted = true;
        if (step < 1e-13 || improvement <= 1e-30 + 1e-16 * state->ssr) return state;
        break;
      }
      damping *= 4.0;
    }
    if (!accepted) return state;  // no downhill step left: stationary
  }
  return state;
}

}  // namespace

FitResult fit_divergence(std::span<const SeriesPoint> series, double distance_unit_m) {
  require(std::isfinite(distance_unit_m) && distance_unit_m > 0.0, "distance_unit_m must be positive");
  if (series.size() < 3) {
    fail(ErrorCode::InsufficientData, "need at least 3 points, got " + std::to_string(series.size()));
  }
  std::vector<double> x;
  std::vector<double> y;
  x.reserve(series.size());
  y.reserve(series.size());
  for (const auto& p : series) {
    require(std::isfinite(p.delta_p_m) && p.delta_p_m >= 0.0, "delta_p values must be finite and nonnegative");
    require(std::isfinite(p.variance_m2), "variance values must be finite");
    x.push_back(p.delta_p_m / distance_unit_m);
    y.push_back(p.variance_m2);
  }
  {
    auto sorted = x;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      fail(ErrorCode::InsufficientData, "delta_p values must be distinct");
    }
  }

  std::optional<FitState> best;
  constexpr int kStarts = 20;
  for (int k = 0; k < kStarts; ++k) {
    const double b2 = std::pow(10.0, -3.0 + 3.0 * k / (kStarts - 1));
    const double b1 = regress_beta1(x, y, b2);
    const auto fit = gauss_newton(x, y, b1, b2);
    if (fit && (!best || fit->ssr < best->ssr)) best = fit;
  }
  if (!best) fail(ErrorCode::FitDiverged, "Gauss-Newton failed from every start");

  FitResult out;
  out.model = {best->sigma0_sq, best->beta1, best->beta2, distance_unit_m};
  out.residual = std::sqrt(best->ssr);
  return out;
}

}  // namespace anchorplan
