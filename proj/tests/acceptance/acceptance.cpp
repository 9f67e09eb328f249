#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "levylt/constants.hpp"
#include "levylt/density.hpp"
#include "levylt/harness.hpp"
#include "levylt/kac.hpp"
#include "levylt/localtime.hpp"
#include "levylt/rng.hpp"
#include "levylt/simulate.hpp"

using namespace levylt;
using std::numbers::pi;

namespace {

constexpr std::uint64_t kSeed = 12345;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof(buffer), format, args...);
  return buffer;
}

double elapsed(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double gauss(double s, double x) { return std::exp(-x * x / (4 * s)) / std::sqrt(4 * pi * s); }

Outcome ac1() {
  const auto start = std::chrono::steady_clock::now();
  const double e0 = std::abs(c_beta_0(2.0) - 0.5);
  const double e1 = std::abs(c_beta_1(2.0) - 2.0 / 3.0);
  const double seconds = elapsed(start);
  return {e0 <= 1e-6 && e1 <= 1e-6 && seconds < 1.0,
          fmt("|c_2,0 - 1/2| = %.2e, |c_2,1 - 2/3| = %.2e, %.3f s", e0, e1, seconds)};
}

Outcome ac2() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (double beta : {1.2, 1.5, 1.8, 2.0})
    for (double h : {0.1, 0.01, 0.001}) {
      const double scaled = std::pow(h, beta - 1.0) * c_beta_0(beta);
      worst = std::max(worst, std::abs(c_psi_h_0(LevyExponent::stable(beta), h) / scaled - 1.0));
    }
  const double seconds = elapsed(start);
  return {worst <= 1e-4 && seconds < 10.0, fmt("max relative error %.2e, %.3f s", worst, seconds)};
}

Outcome ac3() {
  const auto start = std::chrono::steady_clock::now();
  const auto table = limit_table(LevyExponent::parse("mix:1*1.8+1*1.2"), {1e-1, 1e-2, 1e-3, 1e-4});
  const double seconds = elapsed(start);
  const auto& last = table.rows.back();
  const double r0 = std::abs(last.scaled_0 / table.c_beta_0 - 1.0);
  const double r1 = std::abs(last.scaled_1 / table.c_beta_1 - 1.0);
  const bool monotone = table.diagnostics_0.monotone && table.diagnostics_1.monotone;
  const auto& d1 = table.diagnostics_1.distances;
  return {r0 <= 0.05 && r1 <= 0.05 && monotone && seconds < 30.0,
          fmt("rel. dist at 1e-4: %.2e, %.2e; monotone %d/%d; dist_1 at 1e-3, 1e-4: %.3e, %.3e; %.3f s", r0, r1,
              table.diagnostics_0.monotone, table.diagnostics_1.monotone, d1[2], d1[3], seconds)};
}

Outcome ac4() {
  const DensityEvaluator g(LevyExponent::stable(2.0));
  double density_error = 0.0;
  for (double s : {0.01, 0.1, 1.0})
    for (double x : {0.0, 0.5, 1.0, 3.0}) density_error = std::max(density_error, std::abs(g.density(s, x) - gauss(s, x)));
  double ck_error = 0.0;
  const DensityEvaluator stable(LevyExponent::stable(1.5));
  const DensityEvaluator mix(LevyExponent::parse("mix:1*1.8+1*1.2"));
  ck_error = std::max(ck_error, std::abs(stable.convolution(0.3, 0.5, 0.4) - stable.density(0.8, 0.4)));
  ck_error = std::max(ck_error, std::abs(mix.convolution(0.2, 0.7, -1.1) - mix.density(0.9, -1.1)));
  ck_error = std::max(ck_error, std::abs(g.convolution(0.5, 0.25, 2.0) - g.density(0.75, 2.0)));
  double mass_error = 0.0;
  for (const auto* ev : {&g, &stable, &mix})
    for (double s : {0.1, 1.0}) mass_error = std::max(mass_error, std::abs(ev->total_mass(s) - 1.0));
  return {density_error <= 1e-6 && ck_error <= 1e-4 && mass_error <= 1e-6,
          fmt("Gaussian max error %.2e, Chapman-Kolmogorov %.2e, mass %.2e", density_error, ck_error, mass_error)};
}

// Midpoint rule over the quarter disc u1² + u2² ≤ t after r_i = u_i².
double riemann_two_level(double t, double z, double x1, double x2, std::size_t n) {
  const double top = std::sqrt(t);
  const double du = top / static_cast<double>(n);
  auto term = [&](double a, double b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double u1 = (static_cast<double>(i) + 0.5) * du;
      for (std::size_t j = 0; j < n; ++j) {
        const double u2 = (static_cast<double>(j) + 0.5) * du;
        if (u1 * u1 + u2 * u2 > t) break;
        sum += 4.0 * u1 * u2 * gauss(u1 * u1, a) * gauss(u2 * u2, b);
      }
    }
    return sum * du * du;
  };
  return term(x1 - z, x2 - x1) + term(x2 - z, x1 - x2);
}

Outcome ac5() {
  const auto g = LevyExponent::stable(2.0);
  const double alpha_error = std::abs(mean_alpha(g, 1.0) - 4.0 / (3.0 * std::sqrt(pi)));
  const double kac = kac_moment({g, 1.0, {0.3, -0.2}, 0.1});
  const double brute = riemann_two_level(1.0, 0.1, 0.3, -0.2, 2000);
  const double kac_error = std::abs(kac - brute);
  return {alpha_error <= 1e-6 && kac_error <= 1e-3,
          fmt("|E alpha_1 - 4/(3 sqrt pi)| = %.2e, |Kac - Riemann| = %.2e (%.6f vs %.6f)", alpha_error, kac_error, kac,
              brute)};
}

Outcome ac6(const ExperimentReport& clt) {
  const CltRow* row = nullptr;
  for (const auto& r : clt.rows)
    if (std::abs(r.h - 0.05) < 1e-12) row = &r;
  if (row == nullptr) return {false, "h = 0.05 missing from the run"};
  const double exact = mean_sq_increment(clt.config.exponent, 1.0, 0.05);
  const double allowance = std::max(3.0 * row->se_j, 0.1 * exact);
  const double gap = std::abs(row->mean_j - exact);
  return {gap <= allowance && clt.runtime_seconds <= 600.0,
          fmt("MC %.5f +- %.5f vs exact %.5f, gap %.4f <= %.4f; binned-estimator mean %.5f; run %.1f s", row->mean_j,
              row->se_j, exact, gap, allowance, row->mean_estimator, clt.runtime_seconds)};
}

Outcome ac7() {
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    const auto e = i % 2 == 0 ? LevyExponent::stable(1.5) : LevyExponent::parse("mix:1*1.8+1*1.2");
    const auto path = simulate_path({e, 1.0, 10'000, derive_seed(kSeed, 99, i)});
    Rng pick(derive_seed(kSeed, 98, i));
    const auto grid = default_grid(path, 0.01, pick.uniform());
    const auto field = estimate_local_time(path, grid);
    std::vector<bool> chosen(field.values.size());
    for (std::size_t b = 0; b < chosen.size(); ++b) chosen[b] = pick.uniform() < 0.5;
    std::size_t hits = 0;
    for (std::size_t k = 0; k < path.n_steps(); ++k)
      if (chosen[static_cast<std::size_t>((path.positions[k] - grid.x_min) / grid.eps)]) ++hits;
    const double time_side = static_cast<double>(hits) * path.dt;
    long double space_side = 0.0L;
    for (std::size_t b = 0; b < chosen.size(); ++b)
      if (chosen[b]) space_side += field.values[b] * grid.eps;
    worst = std::max(worst, std::abs(time_side - static_cast<double>(space_side)));
  }
  const double tolerance = 64 * std::numeric_limits<double>::epsilon();
  return {worst <= tolerance, fmt("max |time side - space side| over 100 paths = %.2e (<= %.2e)", worst, tolerance)};
}

Outcome ac8(const ExperimentReport& clt) {
  const auto& first = clt.rows.front();
  const auto& last = clt.rows.back();
  const auto& v = clt.verdict;
  return {v.passed && clt.runtime_seconds <= 900.0,
          fmt("var ratio %.4f -> %.4f (in band %d, closer to 1 %d, extrapolated %.3f); KS p at h=%.2f: %.3g (> 0.01: %d); "
              "%.1f s",
              first.variance_ratio, last.variance_ratio, v.variance_ratio_in_band, v.variance_ratio_improves,
              clt.variance_ratio_extrapolated, last.h, last.p_value, v.ks_accepts, clt.runtime_seconds)};
}

Outcome ac9() {
  ScalingConfig c;
  c.exponent = LevyExponent::stable(2.0);
  c.t_values = {0.5};
  c.n_paths = 2000;
  c.seed = kSeed;
  const auto r = scaling_experiment(c);
  const auto& row = r.rows.front();
  return {std::abs(row.ratio_1 - 1.0) <= 0.05,
          fmt("E alpha_0.5 / (0.5^1.5 E alpha_1) = %.4f +- %.4f; second-moment ratio %.4f +- %.4f", row.ratio_1,
              row.ratio_1_se, row.ratio_2, row.ratio_2_se)};
}

Outcome ac10() {
  CltConfig c;
  c.n_paths = 200;
  c.grid.n_steps = 10'000;
  c.grid.eps = 0.005;
  c.seed = kSeed;
  c.threads = 1;
  const auto a = to_json(clt_experiment(c), false);
  c.threads = 4;
  const auto b = to_json(clt_experiment(c), false);
  c.threads = 2;
  const auto again = to_json(clt_experiment(c), false);
  ScalingConfig s;
  s.n_paths = 300;
  s.t_values = {0.5, 0.25};
  s.seed = kSeed;
  s.threads = 1;
  const auto sa = to_json(scaling_experiment(s), false);
  s.threads = 3;
  const auto sb = to_json(scaling_experiment(s), false);
  const bool same = a == b && a == again && sa == sb;
  return {same, fmt("clt reports at 1/4/2 threads identical: %d (%zu bytes); scaling at 1/3 threads identical: %d",
                    a == b && a == again, a.size(), sa == sb)};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](const char* id, const char* title, const std::function<Outcome()>& check) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %s %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), elapsed(start));
    std::fflush(stdout);
  };

  report("AC1", "closed-form constants", ac1);
  report("AC2", "stable scaling of c_psi_h_0", ac2);
  report("AC3", "mixture limit relations", ac3);
  report("AC4", "density oracle", ac4);
  report("AC5", "Kac oracle", ac5);

  CltConfig clt;
  clt.seed = kSeed;
  clt.threads = 1;
  ExperimentReport run;
  bool ran = false;
  auto with_run = [&](Outcome (*check)(const ExperimentReport&)) {
    return [&, check] {
      if (!ran) {
        run = clt_experiment(clt);
        ran = true;
      }
      return check(run);
    };
  };
  report("AC6", "exact vs Monte Carlo mean of J_h", with_run(ac6));
  report("AC7", "occupation identity", ac7);
  report("AC8", "CLT property suite", with_run(ac8));
  report("AC9", "scaling law", ac9);
  report("AC10", "determinism", ac10);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
