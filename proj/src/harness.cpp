#include "levylt/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "levylt/constants.hpp"
#include "levylt/density.hpp"
#include "levylt/localtime.hpp"
#include "levylt/parallel.hpp"
#include "levylt/report_io.hpp"
#include "levylt/rng.hpp"
#include "levylt/simulate.hpp"
#include "levylt/stats.hpp"
#include "levylt/json_io.hpp"

namespace levylt {

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::uint64_t kOffsetSalt = 0x6f66667365745f31ULL;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void require_schedule(const std::vector<double>& hs) {
  if (hs.empty()) throw std::invalid_argument("h schedule must not be empty");
  for (std::size_t i = 0; i < hs.size(); ++i) {
    if (!(hs[i] > 0.0 && hs[i] < 1.0)) throw std::invalid_argument("h schedule entries must lie in (0, 1)");
    if (i > 0 && !(hs[i] < hs[i - 1])) throw std::invalid_argument("h schedule must be strictly decreasing");
  }
}

double resolve_eps(const Discretization& grid, const std::vector<double>& hs) {
  if (grid.n_steps == 0) throw std::invalid_argument("n_steps must be positive");
  const double eps = grid.eps ? *grid.eps : hs.back() / kDefaultBinsPerH;
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  for (double h : hs) (void)bins_per_shift(h, eps);
  return eps;
}

double unit_eps(const Discretization& grid) {
  if (grid.n_steps == 0) throw std::invalid_argument("n_steps must be positive");
  if (!grid.eps || !(*grid.eps > 0.0)) throw std::invalid_argument("eps must be positive");
  return *grid.eps;
}

// Functionals of n paths from one seed stream, in path-index order.
std::vector<PathFunctionals> batch(const LevyExponent& exponent, double horizon, std::size_t n_steps, double eps,
                                   const std::vector<double>& hs, std::uint64_t seed, std::uint64_t stream,
                                   std::size_t n_paths, std::size_t threads) {
  std::vector<PathFunctionals> out(n_paths);
  parallel_for(n_paths, threads, [&](std::size_t i) {
    out[i] = path_functionals(exponent, horizon, n_steps, eps, hs, derive_seed(seed, stream, i));
  });
  return out;
}

std::vector<double> alphas(const std::vector<PathFunctionals>& fs) {
  std::vector<double> a;
  a.reserve(fs.size());
  for (const auto& f : fs) a.push_back(f.alpha);
  return a;
}

std::vector<double> powers(const std::vector<double>& xs, int n) {
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(std::pow(x, n));
  return out;
}

// Standard error of r = c·a/b for independent a and b.
double ratio_se(double r, double a, double se_a, double b, double se_b) {
  return std::abs(r) * std::hypot(se_a / a, se_b / b);
}

ScalingRow scaling_row(double t, double eps, const std::vector<double>& a) {
  ScalingRow row;
  row.t = t;
  row.eps = eps;
  const auto a2 = powers(a, 2);
  row.mean_alpha = stats::mean(a);
  row.se_alpha = stats::standard_error(a);
  row.mean_alpha_sq = stats::mean(a2);
  row.se_alpha_sq = stats::standard_error(a2);
  return row;
}

double log_log_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  if (n < 2) return 0.0;
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(xs[i]);
    my += std::log(ys[i]);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(xs[i]) - mx;
    sxy += dx * (std::log(ys[i]) - my);
    sxx += dx * dx;
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

ordered_json grid_json(std::size_t n_steps, double eps) { return {{"n_steps", n_steps}, {"eps", eps}}; }

void add_timing(ordered_json& j, bool with_timing, std::size_t threads, double runtime) {
  if (with_timing) j["execution"] = {{"threads", threads}, {"runtime_seconds", runtime}};
}

}  // namespace

std::string to_string(Centering mode) {
  switch (mode) {
    case Centering::kac_exact:
      return "kac_exact";
    case Centering::stable_closed_form:
      return "stable_closed_form";
    case Centering::estimator_exact:
      return "estimator_exact";
  }
  return "unknown";
}

Centering parse_centering(const std::string& name) {
  for (auto mode : {Centering::kac_exact, Centering::stable_closed_form, Centering::estimator_exact})
    if (to_string(mode) == name) return mode;
  throw std::invalid_argument("unknown centering mode: " + name);
}

double clt_normalization(const LevyExponent& exponent, double h) {
  const double psi = exponent(1.0 / h);
  return std::sqrt(h * psi * psi);
}

std::vector<double> normalize(const LevyExponent& exponent, double h, const std::vector<double>& j, double center) {
  const double scale = clt_normalization(exponent, h);
  std::vector<double> z;
  z.reserve(j.size());
  for (double v : j) z.push_back(scale * (v - center));
  return z;
}

PathFunctionals path_functionals(const LevyExponent& exponent, double horizon, std::size_t n_steps, double eps,
                                 const std::vector<double>& h_schedule, std::uint64_t path_seed) {
  const SamplePath path = simulate_path({exponent, horizon, n_steps, path_seed});
  Rng offset(mix64(path_seed ^ kOffsetSalt));
  const LocalTimeField field = estimate_local_time(path, default_grid(path, eps, offset.uniform()));
  PathFunctionals f;
  f.alpha = alpha(field);
  f.coverage = field.coverage;
  f.j.reserve(h_schedule.size());
  for (double h : h_schedule) f.j.push_back(l2_modulus(field, h));
  return f;
}

ExperimentReport clt_experiment(const CltConfig& config) {
  const auto start = Clock::now();
  require_schedule(config.h_schedule);
  if (config.n_paths < 100) throw std::invalid_argument("clt_experiment: n_paths must be at least 100");
  const auto& e = config.exponent;
  if (config.centering == Centering::stable_closed_form && !e.is_stable())
    throw std::invalid_argument("clt_experiment: closed-form centering needs a pure stable exponent");

  ExperimentReport report;
  report.config = config;
  report.eps = resolve_eps(config.grid, config.h_schedule);
  report.dt = 1.0 / static_cast<double>(config.grid.n_steps);
  const double beta = e.beta_infinity();
  report.c_beta_1 = c_beta_1(beta);
  report.mean_alpha_exact = mean_alpha(e, 1.0);

  const auto main = batch(e, 1.0, config.grid.n_steps, report.eps, config.h_schedule, config.seed, streams::paths,
                          config.n_paths, config.threads);
  const auto fresh = batch(e, 1.0, config.grid.n_steps, report.eps, {}, config.seed, streams::mixture_paths,
                           config.n_paths, config.threads);

  const auto a = alphas(main);
  report.mean_alpha_mc = stats::mean(a);
  report.se_alpha_mc = stats::standard_error(a);
  report.min_coverage = 1.0;
  for (const auto* fs : {&main, &fresh})
    for (const auto& f : *fs) report.min_coverage = std::min(report.min_coverage, f.coverage);

  const double sigma = std::sqrt(8.0 * report.c_beta_1);
  report.mixture.resize(config.n_paths);
  for (std::size_t i = 0; i < config.n_paths; ++i) {
    Rng eta(derive_seed(config.seed, streams::mixture_normals, i));
    report.mixture[i] = sigma * std::sqrt(fresh[i].alpha) * eta.normal();
  }

  const double limit_variance = 8.0 * report.c_beta_1 * report.mean_alpha_exact;
  for (std::size_t k = 0; k < config.h_schedule.size(); ++k) {
    CltRow row;
    row.h = config.h_schedule[k];
    row.mean_kac = mean_sq_increment_spectral(e, 1.0, row.h);
    row.mean_closed_form = e.is_stable() ? 4.0 * c_beta_0(beta) * std::pow(row.h, beta - 1.0) : kNaN;
    row.mean_estimator = estimator_mean_sq_increment(e, 1.0, row.h, config.grid.n_steps, report.eps);
    switch (config.centering) {
      case Centering::kac_exact:
        row.center = row.mean_kac;
        break;
      case Centering::stable_closed_form:
        row.center = row.mean_closed_form;
        break;
      case Centering::estimator_exact:
        row.center = row.mean_estimator;
        break;
    }
    std::vector<double> j;
    j.reserve(main.size());
    for (const auto& f : main) j.push_back(f.j[k]);
    row.mean_j = stats::mean(j);
    row.se_j = stats::standard_error(j);
    row.normalization = clt_normalization(e, row.h);
    row.z = normalize(e, row.h, j, row.center);
    row.mean_z = stats::mean(row.z);
    row.variance_z = stats::variance(row.z);
    row.variance_ratio = row.variance_z / limit_variance;
    const auto ks = stats::ks_two_sample(row.z, report.mixture);
    row.ks_statistic = ks.statistic;
    row.p_value = ks.p_value;
    report.rows.push_back(std::move(row));
  }

  const auto& first = report.rows.front();
  const auto& last = report.rows.back();
  report.variance_ratio_extrapolated = kNaN;
  if (report.rows.size() > 1) {
    const auto& previous = report.rows[report.rows.size() - 2];
    const double u0 = std::pow(previous.h, beta - 1.0);
    const double u1 = std::pow(last.h, beta - 1.0);
    const double slope = (last.variance_ratio - previous.variance_ratio) / (u0 - u1);
    report.variance_ratio_extrapolated = last.variance_ratio + slope * u1;
  }
  auto& v = report.verdict;
  v.variance_ratio_in_band = last.variance_ratio >= 0.7 && last.variance_ratio <= 1.3;
  v.variance_ratio_improves =
      report.rows.size() > 1 && std::abs(last.variance_ratio - 1.0) < std::abs(first.variance_ratio - 1.0);
  v.ks_accepts = last.p_value > 0.01;
  v.passed = v.variance_ratio_in_band && v.variance_ratio_improves && v.ks_accepts;
  report.runtime_seconds = seconds_since(start);
  return report;
}

ScalingReport scaling_experiment(const ScalingConfig& config) {
  const auto start = Clock::now();
  const auto& e = config.exponent;
  if (!e.is_stable()) throw std::invalid_argument("scaling_experiment: needs a pure stable exponent");
  const double beta = e.beta_infinity();
  if (config.t_values.empty()) throw std::invalid_argument("scaling_experiment: empty t list");
  for (double t : config.t_values)
    if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("scaling_experiment: t must lie in (0, 1]");
  if (config.n_paths < 2) throw std::invalid_argument("scaling_experiment: n_paths must be at least 2");
  const double eps = unit_eps(config.grid);

  ScalingReport report;
  report.config = config;
  report.exponent_power = (2.0 * beta - 1.0) / beta;
  const auto unit = alphas(batch(e, 1.0, config.grid.n_steps, eps, {}, config.seed, streams::scaling_base,
                                 config.n_paths, config.threads));
  report.unit = scaling_row(1.0, eps, unit);
  report.unit.mean_alpha_exact = mean_alpha(e, 1.0);
  report.unit.ratio_1 = 1.0;
  report.unit.ratio_2 = 1.0;

  for (std::size_t k = 0; k < config.t_values.size(); ++k) {
    const double t = config.t_values[k];
    const double eps_t = eps * std::pow(t, 1.0 / beta);
    const auto a = t == 1.0 ? unit
                            : alphas(batch(e, t, config.grid.n_steps, eps_t, {}, config.seed,
                                           streams::scaling_base + 1 + k, config.n_paths, config.threads));
    ScalingRow row = scaling_row(t, eps_t, a);
    row.mean_alpha_exact = mean_alpha(e, t);
    const double s1 = std::pow(t, report.exponent_power);
    const double s2 = s1 * s1;
    row.ratio_1 = row.mean_alpha / (s1 * report.unit.mean_alpha);
    row.ratio_2 = row.mean_alpha_sq / (s2 * report.unit.mean_alpha_sq);
    if (t != 1.0) {
      row.ratio_1_se = ratio_se(row.ratio_1, row.mean_alpha, row.se_alpha, report.unit.mean_alpha, report.unit.se_alpha);
      row.ratio_2_se =
          ratio_se(row.ratio_2, row.mean_alpha_sq, row.se_alpha_sq, report.unit.mean_alpha_sq, report.unit.se_alpha_sq);
    }
    report.rows.push_back(row);
  }
  report.runtime_seconds = seconds_since(start);
  return report;
}

MeanConvergenceReport mean_convergence_experiment(const MeanConvergenceConfig& config) {
  const auto start = Clock::now();
  require_schedule(config.h_schedule);
  if (config.n_paths < 2) throw std::invalid_argument("mean_convergence_experiment: n_paths must be at least 2");
  const auto& e = config.exponent;
  MeanConvergenceReport report;
  report.config = config;
  report.eps = resolve_eps(config.grid, config.h_schedule);
  const double beta = e.beta_infinity();
  report.limit_scaled = 4.0 * c_beta_0(beta);
  const auto fs = batch(e, 1.0, config.grid.n_steps, report.eps, config.h_schedule, config.seed, streams::paths,
                        config.n_paths, config.threads);
  for (std::size_t k = 0; k < config.h_schedule.size(); ++k) {
    MeanRow row;
    row.h = config.h_schedule[k];
    std::vector<double> j;
    j.reserve(fs.size());
    for (const auto& f : fs) j.push_back(f.j[k]);
    row.mean_j = stats::mean(j);
    row.se_j = stats::standard_error(j);
    row.leading = 4.0 * c_psi_h_0(e, row.h);
    row.mean_kac = mean_sq_increment_spectral(e, 1.0, row.h);
    row.mean_estimator = estimator_mean_sq_increment(e, 1.0, row.h, config.grid.n_steps, report.eps);
    row.remainder_shape = remainder_shape_unit(e, row.h);
    row.residual = row.mean_j - row.leading;
    if (e.is_stable()) {
      const double scale = std::pow(row.h, beta - 1.0);
      row.scaled_mean = row.mean_j / scale;
      row.scaled_se = row.se_j / scale;
    } else {
      row.scaled_mean = kNaN;
      row.scaled_se = kNaN;
    }
    row.bound = variance_bound_check(e, 1.0, row.h);
    row.within_kac = std::abs(row.mean_j - row.mean_kac) <= std::max(3.0 * row.se_j, 0.1 * row.mean_kac);
    report.rows.push_back(row);
  }
  report.runtime_seconds = seconds_since(start);
  return report;
}

MomentReport moment_bound_experiment(const MomentConfig& config) {
  const auto start = Clock::now();
  if (config.t_grid.empty()) throw std::invalid_argument("moment_bound_experiment: empty t grid");
  for (double t : config.t_grid)
    if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("moment_bound_experiment: t must lie in (0, 1]");
  if (config.n_paths < 2) throw std::invalid_argument("moment_bound_experiment: n_paths must be at least 2");
  const auto& e = config.exponent;
  const double eps = unit_eps(config.grid);
  MomentReport report;
  report.config = config;
  for (std::size_t k = 0; k < config.t_grid.size(); ++k) {
    MomentRow row;
    row.t = config.t_grid[k];
    const double scale = e.inverse(1.0 / row.t);
    row.eps = eps / scale;
    row.shape = row.t * row.t * scale;
    const auto a = alphas(batch(e, row.t, config.grid.n_steps, row.eps, {}, config.seed, streams::moments_base + k,
                                config.n_paths, config.threads));
    for (int n = 1; n <= 3; ++n) {
      row.norms[n - 1] = std::pow(stats::mean(powers(a, n)), 1.0 / n);
      row.ratios[n - 1] = row.norms[n - 1] / row.shape;
    }
    row.mean_alpha_exact = mean_alpha(e, row.t);
    row.mean_alpha_se = stats::standard_error(a);
    report.rows.push_back(row);
  }
  report.consistent = true;
  std::vector<double> ts;
  for (const auto& r : report.rows) ts.push_back(r.t);
  for (std::size_t n = 0; n < 3; ++n) {
    std::vector<double> ratios;
    for (const auto& r : report.rows) {
      if (!std::isfinite(r.ratios[n]) || !(r.ratios[n] > 0.0)) report.consistent = false;
      ratios.push_back(r.ratios[n]);
    }
    if (!report.consistent) break;
    // Growth as t decreases shows up as a negative slope.
    report.trend[n] = log_log_slope(ts, ratios);
    if (report.trend[n] < kBlowUpSlope) report.consistent = false;
  }
  report.runtime_seconds = seconds_since(start);
  return report;
}

std::string to_json(const ExperimentReport& report, bool with_timing) {
  const auto& c = report.config;
  ordered_json j;
  j["experiment"] = "clt";
  j["config"] = {{"exponent", c.exponent.to_string()},
                 {"h_schedule", c.h_schedule},
                 {"n_paths", c.n_paths},
                 {"horizon", 1.0},
                 {"grid", grid_json(c.grid.n_steps, report.eps)},
                 {"seed", c.seed},
                 {"centering", to_string(c.centering)}};
  j["dt"] = report.dt;
  j["c_beta_1"] = report.c_beta_1;
  j["mean_alpha_exact"] = report.mean_alpha_exact;
  j["mean_alpha_mc"] = report.mean_alpha_mc;
  j["se_alpha_mc"] = report.se_alpha_mc;
  j["min_coverage"] = report.min_coverage;
  j["mixture"] = {{"seed", c.seed},
                  {"alpha_stream", streams::mixture_paths},
                  {"normal_stream", streams::mixture_normals},
                  {"sample", report.mixture}};
  auto rows = ordered_json::array();
  for (const auto& r : report.rows)
    rows.push_back({{"h", r.h},
                    {"center", r.center},
                    {"mean_kac", r.mean_kac},
                    {"mean_closed_form", r.mean_closed_form},
                    {"mean_estimator", r.mean_estimator},
                    {"normalization", r.normalization},
                    {"mean_j", r.mean_j},
                    {"se_j", r.se_j},
                    {"mean_z", r.mean_z},
                    {"variance_z", r.variance_z},
                    {"variance_ratio", r.variance_ratio},
                    {"ks_statistic", r.ks_statistic},
                    {"p_value", r.p_value},
                    {"z", r.z}});
  j["rows"] = rows;
  j["variance_ratio_extrapolated"] = report.variance_ratio_extrapolated;
  const auto& v = report.verdict;
  j["verdict"] = {{"variance_ratio_in_band", v.variance_ratio_in_band},
                  {"variance_ratio_improves", v.variance_ratio_improves},
                  {"ks_accepts", v.ks_accepts},
                  {"passed", v.passed}};
  add_timing(j, with_timing, c.threads, report.runtime_seconds);
  return dump_json(j);
}

namespace {

ordered_json scaling_row_json(const ScalingRow& r) {
  return {{"t", r.t},
          {"eps", r.eps},
          {"mean_alpha", r.mean_alpha},
          {"se_alpha", r.se_alpha},
          {"mean_alpha_sq", r.mean_alpha_sq},
          {"se_alpha_sq", r.se_alpha_sq},
          {"mean_alpha_exact", r.mean_alpha_exact},
          {"ratio_1", r.ratio_1},
          {"ratio_1_se", r.ratio_1_se},
          {"ratio_2", r.ratio_2},
          {"ratio_2_se", r.ratio_2_se}};
}

}  // namespace

std::string to_json(const ScalingReport& report, bool with_timing) {
  const auto& c = report.config;
  ordered_json j;
  j["experiment"] = "scaling";
  j["config"] = {{"exponent", c.exponent.to_string()},
                 {"t_values", c.t_values},
                 {"n_paths", c.n_paths},
                 {"grid", grid_json(c.grid.n_steps, c.grid.eps.value_or(kNaN))},
                 {"seed", c.seed}};
  j["exponent_power"] = report.exponent_power;
  j["unit"] = scaling_row_json(report.unit);
  auto rows = ordered_json::array();
  for (const auto& r : report.rows) rows.push_back(scaling_row_json(r));
  j["rows"] = rows;
  add_timing(j, with_timing, c.threads, report.runtime_seconds);
  return dump_json(j);
}

std::string to_json(const MeanConvergenceReport& report, bool with_timing) {
  const auto& c = report.config;
  ordered_json j;
  j["experiment"] = "mean_convergence";
  j["config"] = {{"exponent", c.exponent.to_string()},
                 {"h_schedule", c.h_schedule},
                 {"n_paths", c.n_paths},
                 {"horizon", 1.0},
                 {"grid", grid_json(c.grid.n_steps, report.eps)},
                 {"seed", c.seed}};
  j["limit_scaled"] = report.limit_scaled;
  auto rows = ordered_json::array();
  for (const auto& r : report.rows)
    rows.push_back({{"h", r.h},
                    {"mean_j", r.mean_j},
                    {"se_j", r.se_j},
                    {"leading", r.leading},
                    {"mean_kac", r.mean_kac},
                    {"mean_estimator", r.mean_estimator},
                    {"remainder_shape", r.remainder_shape},
                    {"residual", r.residual},
                    {"scaled_mean", r.scaled_mean},
                    {"scaled_se", r.scaled_se},
                    {"variance_bound", {{"terms", r.bound.terms}, {"dominant", r.bound.dominant}, {"total", r.bound.total}}},
                    {"within_kac", r.within_kac}});
  j["rows"] = rows;
  add_timing(j, with_timing, c.threads, report.runtime_seconds);
  return dump_json(j);
}

std::string to_json(const MomentReport& report, bool with_timing) {
  const auto& c = report.config;
  ordered_json j;
  j["experiment"] = "moments";
  j["config"] = {{"exponent", c.exponent.to_string()},
                 {"t_grid", c.t_grid},
                 {"n_paths", c.n_paths},
                 {"grid", grid_json(c.grid.n_steps, c.grid.eps.value_or(kNaN))},
                 {"seed", c.seed}};
  auto rows = ordered_json::array();
  for (const auto& r : report.rows)
    rows.push_back({{"t", r.t},
                    {"eps", r.eps},
                    {"shape", r.shape},
                    {"norms", r.norms},
                    {"ratios", r.ratios},
                    {"mean_alpha_exact", r.mean_alpha_exact},
                    {"mean_alpha_se", r.mean_alpha_se}});
  j["rows"] = rows;
  j["trend"] = report.trend;
  j["consistent"] = report.consistent;
  add_timing(j, with_timing, c.threads, report.runtime_seconds);
  return dump_json(j);
}

std::string table_csv(const ExperimentReport& report) {
  std::vector<std::vector<double>> rows;
  for (const auto& r : report.rows) rows.push_back({r.h, r.variance_ratio, r.ks_statistic, r.p_value});
  return numeric_csv({"h", "var_ratio", "ks_stat", "p_value"}, rows);
}

std::string column_csv(const std::string& name, const std::vector<double>& values) {
  std::vector<std::vector<double>> rows;
  rows.reserve(values.size());
  for (double v : values) rows.push_back({v});
  return numeric_csv({name}, rows);
}

}  // namespace levylt
