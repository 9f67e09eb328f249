#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "levylt/exponent.hpp"
#include "levylt/kac.hpp"

namespace levylt {

/// Centering m(h) subtracted from J_h before normalization.
enum class Centering {
  kac_exact,           // mean_sq_increment(ψ, 1, h)
  stable_closed_form,  // 4c_{β,0}h^{β-1}
  estimator_exact,     // exact mean of the binned estimator at the run's dt and eps
};

std::string to_string(Centering mode);
Centering parse_centering(const std::string& name);

/// Seed streams; paths of different streams never share a generator.
namespace streams {
inline constexpr std::uint64_t paths = 0;
inline constexpr std::uint64_t mixture_paths = 1;
inline constexpr std::uint64_t mixture_normals = 2;
inline constexpr std::uint64_t scaling_base = 16;
inline constexpr std::uint64_t moments_base = 1024;
}  // namespace streams

/// Discretization shared by the Monte Carlo experiments. eps defaults to the
/// smallest h divided by kDefaultBinsPerH.
struct Discretization {
  std::size_t n_steps = 100'000;
  std::optional<double> eps;
};

inline constexpr double kDefaultBinsPerH = 50.0;

struct CltConfig {
  LevyExponent exponent = LevyExponent::stable(1.5);
  std::vector<double> h_schedule{0.2, 0.1, 0.05};
  std::size_t n_paths = 2000;
  Discretization grid;
  std::uint64_t seed = 12345;
  Centering centering = Centering::estimator_exact;
  std::size_t threads = 1;
};

/// √(hψ²(1/h)), the normalization of J_h - m(h).
double clt_normalization(const LevyExponent& exponent, double h);
/// Z = √(hψ²(1/h))·(J - m) for every J.
std::vector<double> normalize(const LevyExponent& exponent, double h, const std::vector<double>& j, double center);

/// α and J_h (every h of a schedule) from one simulated path, binned on the
/// default grid with a sub-bin offset drawn from a generator derived from the
/// path seed.
struct PathFunctionals {
  double alpha = 0.0;
  std::vector<double> j;
  double coverage = 0.0;
};
PathFunctionals path_functionals(const LevyExponent& exponent, double horizon, std::size_t n_steps, double eps,
                                 const std::vector<double>& h_schedule, std::uint64_t path_seed);

struct CltRow {
  double h = 0.0;
  double center = 0.0;  // m(h) under the configured mode
  double mean_kac = 0.0;
  double mean_closed_form = 0.0;  // stable exponents only, else NaN
  double mean_estimator = 0.0;
  double normalization = 0.0;
  double mean_j = 0.0;
  double se_j = 0.0;
  std::vector<double> z;
  double mean_z = 0.0;
  double variance_z = 0.0;
  double variance_ratio = 0.0;  // Var(Z_h)/(8c_{β,1}E α₁)
  double ks_statistic = 0.0;
  double p_value = 1.0;
};

struct CltVerdict {
  bool variance_ratio_in_band = false;  // final ratio in [0.7, 1.3]
  bool variance_ratio_improves = false; // final ratio strictly closer to 1 than the first
  bool ks_accepts = false;              // final p-value above 0.01
  bool passed = false;
};

struct ExperimentReport {
  CltConfig config;
  double eps = 0.0;
  double dt = 0.0;
  double c_beta_1 = 0.0;
  double mean_alpha_exact = 0.0;   // E α₁ from the Kac oracle
  double mean_alpha_mc = 0.0;
  double se_alpha_mc = 0.0;
  double min_coverage = 0.0;
  std::vector<double> mixture;     // √(8c_{β,1})√α₁'η
  std::vector<CltRow> rows;
  // Diagnostic only: r_∞ from r(h) = r_∞ - a·h^{β-1} through the last two rows.
  double variance_ratio_extrapolated = 0.0;
  CltVerdict verdict;
  double runtime_seconds = 0.0;
};

/// Monte Carlo check of the mixture CLT for J_h.
ExperimentReport clt_experiment(const CltConfig& config);

struct ScalingConfig {
  LevyExponent exponent = LevyExponent::stable(2.0);
  std::vector<double> t_values{0.5};
  std::size_t n_paths = 2000;
  Discretization grid{10'000, 0.01};  // eps at t = 1; scaled by t^{1/β}
  std::uint64_t seed = 12345;
  std::size_t threads = 1;
};

struct ScalingRow {
  double t = 0.0;
  double eps = 0.0;
  double mean_alpha = 0.0;
  double se_alpha = 0.0;
  double mean_alpha_sq = 0.0;
  double se_alpha_sq = 0.0;
  double mean_alpha_exact = 0.0;  // kac oracle at t
  double ratio_1 = 0.0;           // E α_t/(t^{(2β-1)/β}E α₁)
  double ratio_1_se = 0.0;
  double ratio_2 = 0.0;           // E α_t²/(t^{2(2β-1)/β}E α₁²)
  double ratio_2_se = 0.0;
};

struct ScalingReport {
  ScalingConfig config;
  double exponent_power = 0.0;  // (2β-1)/β
  ScalingRow unit;              // t = 1 reference batch
  std::vector<ScalingRow> rows;
  double runtime_seconds = 0.0;
};

/// Self-similarity α_t =_d t^{(2β-1)/β}α₁ for ψ(λ) = |λ|^β, each t from an
/// independent batch. Throws std::invalid_argument for other exponents.
ScalingReport scaling_experiment(const ScalingConfig& config);

struct MeanConvergenceConfig {
  LevyExponent exponent = LevyExponent::stable(1.5);
  std::vector<double> h_schedule{0.2, 0.1, 0.05};
  std::size_t n_paths = 2000;
  Discretization grid;
  std::uint64_t seed = 12345;
  std::size_t threads = 1;
};

struct MeanRow {
  double h = 0.0;
  double mean_j = 0.0;
  double se_j = 0.0;
  double leading = 0.0;           // 4c_{ψ,h,0}
  double mean_kac = 0.0;          // mean_sq_increment
  double mean_estimator = 0.0;
  double remainder_shape = 0.0;   // ḡ(h)
  double residual = 0.0;          // mean_j - leading
  double scaled_mean = 0.0;       // mean_j/h^{β-1}, stable exponents only
  double scaled_se = 0.0;
  VarianceBound bound;
  bool within_kac = false;        // |mean_j - mean_kac| ≤ max(3 se, 10%)
};

struct MeanConvergenceReport {
  MeanConvergenceConfig config;
  double eps = 0.0;
  double limit_scaled = 0.0;  // 4c_{β,0}
  std::vector<MeanRow> rows;
  double runtime_seconds = 0.0;
};

MeanConvergenceReport mean_convergence_experiment(const MeanConvergenceConfig& config);

struct MomentConfig {
  LevyExponent exponent = LevyExponent::stable(1.5);
  std::vector<double> t_grid{1.0, 0.3, 0.1, 0.03, 0.01};
  std::size_t n_paths = 2000;
  Discretization grid{10'000, 0.01};  // eps at t = 1; scaled by 1/ψ^{-1}(1/t)
  std::uint64_t seed = 12345;
  std::size_t threads = 1;
};

struct MomentRow {
  double t = 0.0;
  double eps = 0.0;
  double shape = 0.0;                 // t²ψ^{-1}(1/t)
  std::array<double, 3> norms{};      // ‖α_t‖_n, n = 1, 2, 3
  std::array<double, 3> ratios{};     // norms/shape
  double mean_alpha_exact = 0.0;
  double mean_alpha_se = 0.0;
};

struct MomentReport {
  MomentConfig config;
  std::vector<MomentRow> rows;
  std::array<double, 3> trend{};  // log-log slope of ratio against t
  bool consistent = false;        // ratios finite and slopes above kBlowUpSlope
  double runtime_seconds = 0.0;
};

MomentReport moment_bound_experiment(const MomentConfig& config);

/// JSON with floats at 17 significant digits; wall-clock fields only when
/// with_timing is set.
std::string to_json(const ExperimentReport& report, bool with_timing = true);
std::string to_json(const ScalingReport& report, bool with_timing = true);
std::string to_json(const MeanConvergenceReport& report, bool with_timing = true);
std::string to_json(const MomentReport& report, bool with_timing = true);

/// Per-h summary: h, var_ratio, ks_stat, p_value.
std::string table_csv(const ExperimentReport& report);
/// One value per row under the given column name.
std::string column_csv(const std::string& name, const std::vector<double>& values);

}  // namespace levylt
