#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "levylt/exponent.hpp"

namespace levylt {

/// How density() evaluates the Fourier-cosine inversion.
enum class DensityRoute {
  automatic,    // rotated ray
  real_axis,    // cosine panels along the real frequency axis
  rotated_ray,  // contour turned into the upper half plane
};

/// Transition densities p_s(x) of the symmetric Lévy process with exponent ψ,
/// p_s(x) = (1/π)∫_0^∞ cos(px) e^{-sψ(p)} dp, and functionals built on them.
///
/// The evaluator is immutable; every member is safe to call concurrently.
/// Quadrature that cannot reach abs_tol throws quad::QuadratureError.
class DensityEvaluator {
 public:
  explicit DensityEvaluator(LevyExponent exponent, double abs_tol = 1e-9,
                            DensityRoute route = DensityRoute::automatic);

  [[nodiscard]] const LevyExponent& exponent() const noexcept { return exponent_; }
  [[nodiscard]] double abs_tol() const noexcept { return abs_tol_; }

  [[nodiscard]] double density(double s, double x) const;
  [[nodiscard]] double density(double s, double x, DensityRoute route) const;

  /// p_s(x+h) - p_s(x).
  [[nodiscard]] double delta_h(double s, double x, double h) const;
  /// Same quantity from its frequency-domain form
  /// -(2/π)∫cos(px)sin²(hp/2)e^{-sψ} - (1/π)∫sin(px)sin(hp)e^{-sψ}.
  [[nodiscard]] double delta_h_spectral(double s, double x, double h) const;

  /// 2p_s(x) - p_s(x+h) - p_s(x-h) from (4/π)∫cos(px)sin²(hp/2)e^{-sψ}dp,
  /// falling back to the three-point form when the panel budget is exceeded.
  [[nodiscard]] double second_diff(double s, double x, double h) const;
  [[nodiscard]] double second_diff_spectral(double s, double x, double h) const;
  [[nodiscard]] double second_diff_direct(double s, double x, double h) const;

  /// ∫_0^τ p_r(x) dr = (1/π)∫cos(px)(1 - e^{-τψ(p)})/ψ(p) dp.
  [[nodiscard]] double green(double x, double tau) const;

  /// ∫_0^1 p_s(x) ds, ∫_0^1 |Δ^h p_s(x)| ds and ∫_0^1 |Δ^hΔ^{-h} p_s(x)| ds.
  [[nodiscard]] double u_integral(double x) const;
  [[nodiscard]] double v_integral(double x, double h) const;
  [[nodiscard]] double w_integral(double x, double h) const;

  /// ∫ p_s(x) dx over the whole line.
  [[nodiscard]] double total_mass(double s) const;
  /// ∫ p_s(y) p_t(x - y) dy.
  [[nodiscard]] double convolution(double s, double t, double x) const;

  /// Number of tiny negative density values that were clamped to zero.
  [[nodiscard]] static std::size_t clamped_count() noexcept;

 private:
  // (1/π) Re[e^{iθ} ∫_0^∞ e^{i d r e^{iθ}} F(r e^{iθ}) dr], with the cut-off
  // radius where |F| becomes negligible supplied by the caller.
  [[nodiscard]] double ray_integral(double d, const std::function<std::complex<double>(double, double)>& f,
                                    double f_cutoff, double scale, bool power_tail_decay) const;
  // (1/π)∫_0^∞ g(p) e^{-sψ(p)} dp in cosine-aligned panels.
  [[nodiscard]] double real_axis_integral(const std::function<double(double)>& g, double s, double frequency,
                                          std::size_t budget = 20000) const;
  [[nodiscard]] double clamp(double value, const char* what) const;
  [[nodiscard]] double time_integral(const std::function<double(double)>& g) const;
  [[nodiscard]] double line_integral(const std::function<double(double)>& g, double decay, double scale) const;

  LevyExponent exponent_;
  double abs_tol_;
  DensityRoute route_;
  double theta_;
};

/// One observed/shape ratio of a density estimate.
struct BoundRow {
  std::string bound;
  double x = 0.0;
  double h = 0.0;
  double s = 0.0;
  double observed = 0.0;
  double shape = 0.0;
  double ratio = 0.0;
  bool failed = false;  // quadrature failed at this point
};

struct BoundSummary {
  std::string bound;
  double sup_ratio = 0.0;
  // Log-log slope of the per-h sup ratio against h; very negative values mean
  // the ratio grows as h decreases.
  double trend = 0.0;
  bool consistent = true;
};

struct BoundAuditReport {
  std::vector<double> x_grid;
  std::vector<double> h_grid;
  std::vector<double> s_grid;
  std::vector<BoundRow> rows;
  std::vector<BoundSummary> summaries;
  double space_time_mass = 0.0;  // ∫∫_0^1 p_s(x) ds dx, expected 1
  bool consistent = true;
};

/// Slope below which a sup ratio is considered to blow up as h decreases.
inline constexpr double kBlowUpSlope = -0.25;

BoundAuditReport audit_density_bounds(const DensityEvaluator& ev, const std::vector<double>& x_grid,
                               const std::vector<double>& h_grid);

std::string to_csv(const BoundAuditReport& report);
std::string to_json(const BoundAuditReport& report);

}  // namespace levylt
