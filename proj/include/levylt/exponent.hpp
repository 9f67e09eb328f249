#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace levylt {

/// One term c·|λ|^β of a stable-power mixture.
struct StableComponent {
  double weight = 1.0;
  double index = 2.0;

  friend bool operator==(const StableComponent&, const StableComponent&) = default;
};

/// Lévy exponent ψ(λ) = Σ c_i |λ|^{β_i} of a symmetric Lévy process, with
/// every c_i > 0 and every β_i in (1, 2].
///
/// Pure stable exponents are the single-component case with unit weight.
/// Values are immutable after construction and safe to share across threads.
class LevyExponent {
 public:
  /// ψ(λ) = |λ|^β.
  static LevyExponent stable(double beta);
  /// ψ(λ) = Σ c_i |λ|^{β_i}; components with equal index are merged.
  static LevyExponent mixture(std::vector<StableComponent> components);
  /// Parses "stable:1.5" or "mix:1.0*1.8+1.0*1.2".
  static LevyExponent parse(std::string_view text);

  [[nodiscard]] const std::vector<StableComponent>& components() const noexcept { return components_; }
  /// Index of regular variation at infinity (the largest β_i).
  [[nodiscard]] double beta_infinity() const noexcept { return components_.front().index; }
  /// Index governing the behaviour at the origin (the smallest β_i).
  [[nodiscard]] double beta_zero() const noexcept { return components_.back().index; }
  /// Weight of the component with the largest index.
  [[nodiscard]] double leading_weight() const noexcept { return components_.front().weight; }
  [[nodiscard]] bool is_stable() const noexcept {
    return components_.size() == 1 && components_.front().weight == 1.0;
  }

  [[nodiscard]] double operator()(double lambda) const noexcept;
  /// Principal-branch continuation ψ(r e^{iθ}) = Σ c_i r^{β_i} e^{iβ_iθ}, r ≥ 0.
  [[nodiscard]] std::complex<double> on_ray(double r, double theta) const noexcept;
  /// (ψ'(λ), ψ''(λ)) for λ > 0. Throws std::domain_error at λ = 0 when a
  /// component has β < 2, and for λ < 0.
  [[nodiscard]] std::pair<double, double> derivatives(double lambda) const;
  /// Smallest λ ≥ 0 with ψ(λ) = u.
  [[nodiscard]] double inverse(double u) const;

  /// Canonical string form, parseable by `parse`.
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const LevyExponent&, const LevyExponent&) = default;

 private:
  explicit LevyExponent(std::vector<StableComponent> components);
  std::vector<StableComponent> components_;  // sorted by decreasing index
};

inline double eval_psi(const LevyExponent& exponent, double lambda) { return exponent(lambda); }
inline std::pair<double, double> eval_psi_derivs(const LevyExponent& exponent, double lambda) {
  return exponent.derivatives(lambda);
}
inline double psi_inverse(const LevyExponent& exponent, double u) { return exponent.inverse(u); }

enum class Verdict { pass, fail, indeterminate };
std::string_view to_string(Verdict v) noexcept;

/// Numerical audit of the regularity hypotheses on ψ.
struct RegularityReport {
  std::vector<double> grid;
  std::vector<double> ratios_d1;  // λ|ψ'(λ)|/ψ(λ)
  std::vector<double> ratios_d2;  // λ²|ψ''(λ)|/ψ(λ)
  std::vector<double> ratios_quadratic;  // ψ(λ)/λ² on the grid points ≥ 1
  double d1_observed = 0.0;  // sup of ratios_d1 over grid points ≥ 1
  double d2_observed = 0.0;
  double integral_114a = 0.0;  // ∫_0^1 ψ'(λ)² dλ
  double integral_114b = 0.0;  // ∫_0^1 |ψ''(λ)| dλ
  double integral_116 = 0.0;   // ∫_0^1 ψ(λ)/λ dλ
  Verdict index_condition = Verdict::indeterminate;
  Verdict derivative_bounds = Verdict::indeterminate;
  Verdict integrals_114 = Verdict::indeterminate;
  Verdict integral_116_condition = Verdict::indeterminate;
  Verdict quadratic_growth = Verdict::indeterminate;
  Verdict overall = Verdict::indeterminate;
};

RegularityReport check_regularity(const LevyExponent& exponent, const std::vector<double>& lambda_grid);

}  // namespace levylt
