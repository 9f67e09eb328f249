#include <charconv>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "levylt/constants.hpp"
#include "levylt/density.hpp"
#include "levylt/harness.hpp"
#include "levylt/json_io.hpp"
#include "levylt/kac.hpp"
#include "levylt/localtime.hpp"
#include "levylt/parallel.hpp"
#include "levylt/report_io.hpp"
#include "levylt/simulate.hpp"

namespace fs = std::filesystem;
using namespace levylt;

namespace {

struct Global {
  std::uint64_t seed = 12345;
  std::optional<std::size_t> threads;
  fs::path out_dir = "out";
};

// Shortest decimal that reads back to h, for file names.
std::string short_name(double h) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), h);
  return std::string(buffer, ptr);
}

void emit(const fs::path& file, const std::string& text) {
  write_text_file(file, text);
  std::cerr << "wrote " << file.string() << '\n';
}

std::string density_json(const DensityEvaluator& ev, const std::vector<double>& ss, const std::vector<double>& xs) {
  nlohmann::ordered_json j;
  j["exponent"] = ev.exponent().to_string();
  auto rows = nlohmann::ordered_json::array();
  for (double s : ss)
    for (double x : xs) rows.push_back({{"s", s}, {"x", x}, {"p", ev.density(s, x)}});
  j["values"] = rows;
  return dump_json(j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local times of symmetric Lévy processes: constants, exact moments and Monte Carlo checks"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  std::size_t threads_flag = 0;
  app.add_option("--seed", g.seed, "Master seed");
  auto* threads_opt = app.add_option("--threads", threads_flag, "Worker threads (LEVYLT_THREADS overrides)");
  app.add_option("--out-dir", g.out_dir, "Directory for reports");

  std::string exponent_spec;
  auto add_exponent = [&](CLI::App* sub) { sub->add_option("--exponent", exponent_spec, "stable:B or mix:C*B+C*B"); };

  auto* constants = app.add_subcommand("constants", "Constants c_{ψ,h,0}, c_{ψ,h,1} and their limits");
  add_exponent(constants);
  std::vector<double> hs{0.1, 0.01, 0.001, 0.0001};
  constants->add_option("--h", hs, "Decreasing h values")->delimiter(',');

  auto* density = app.add_subcommand("density", "Transition densities p_s(x)");
  add_exponent(density);
  std::vector<double> ss{1.0};
  std::vector<double> xs{0.0};
  bool audit = false;
  density->add_option("--s", ss, "Times")->delimiter(',');
  density->add_option("--x", xs, "Points")->delimiter(',');
  density->add_flag("--audit", audit, "Also write the density bound audit");

  auto* mean = app.add_subcommand("mean", "Exact means of α_t and J_h");
  add_exponent(mean);
  double t = 1.0;
  double h = 0.05;
  std::size_t mc_paths = 0;
  std::size_t mc_steps = 100'000;
  std::optional<double> mc_eps;
  mean->add_option("--t", t, "Horizon in (0, 1]");
  mean->add_option("--h", h, "Shift");
  mean->add_option("--paths", mc_paths, "Also run the Monte Carlo mean check with this many paths");
  mean->add_option("--steps", mc_steps, "Steps per path for the Monte Carlo check");
  mean->add_option("--eps", mc_eps, "Bin width for the Monte Carlo check");

  auto* simulate = app.add_subcommand("simulate", "Simulate one path");
  add_exponent(simulate);
  std::size_t steps = 100'000;
  double horizon = 1.0;
  fs::path out_file;
  std::optional<double> field_eps;
  simulate->add_option("--steps", steps, "Number of steps");
  simulate->add_option("--T", horizon, "Horizon");
  simulate->add_option("--out", out_file, "Binary path file (default <out-dir>/path.bin)");
  simulate->add_option("--field-eps", field_eps, "Also write the local-time field at this bin width");

  auto* clt = app.add_subcommand("clt", "Mixture CLT experiment");
  add_exponent(clt);
  CltConfig clt_config;
  std::string centering = to_string(clt_config.centering);
  clt->add_option("--h", clt_config.h_schedule, "Decreasing h schedule")->delimiter(',');
  clt->add_option("--paths", clt_config.n_paths, "Paths per batch");
  clt->add_option("--steps", clt_config.grid.n_steps, "Steps per path");
  clt->add_option("--eps", clt_config.grid.eps, "Bin width (default smallest h / 50)");
  clt->add_option("--centering", centering, "kac_exact, stable_closed_form or estimator_exact");

  auto* scaling = app.add_subcommand("scaling", "Self-similarity of α_t for stable exponents");
  add_exponent(scaling);
  ScalingConfig scaling_config;
  scaling->add_option("--t", scaling_config.t_values, "Horizons in (0, 1]")->delimiter(',');
  scaling->add_option("--paths", scaling_config.n_paths, "Paths per batch");
  scaling->add_option("--steps", scaling_config.grid.n_steps, "Steps per path");
  scaling->add_option("--eps", scaling_config.grid.eps, "Bin width at t = 1");

  auto* moments = app.add_subcommand("moments", "Moment bounds for α_t");
  add_exponent(moments);
  MomentConfig moment_config;
  moments->add_option("--t", moment_config.t_grid, "Horizons in (0, 1]")->delimiter(',');
  moments->add_option("--paths", moment_config.n_paths, "Paths per horizon");
  moments->add_option("--steps", moment_config.grid.n_steps, "Steps per path");
  moments->add_option("--eps", moment_config.grid.eps, "Bin width at t = 1");

  CLI11_PARSE(app, argc, argv);
  if (exponent_spec.empty()) exponent_spec = scaling->parsed() ? "stable:2" : "stable:1.5";

  try {
    if (threads_opt->count() > 0) g.threads = threads_flag;
    const std::size_t threads = resolve_threads(g.threads);
    const auto exponent = LevyExponent::parse(exponent_spec);

    if (constants->parsed()) {
      const auto table = limit_table(exponent, hs);
      const std::string json = to_json(table);
      emit(g.out_dir / "report.json", json);
      emit(g.out_dir / "table.csv", to_csv(table));
      std::cout << json;
    } else if (density->parsed()) {
      const DensityEvaluator ev(exponent);
      std::cout << density_json(ev, ss, xs);
      if (audit) {
        const auto report = audit_density_bounds(ev, {0.0, 0.1, 0.5, 1.0, 2.0}, {0.1, 0.05, 0.02, 0.01});
        emit(g.out_dir / "audit.csv", to_csv(report));
        emit(g.out_dir / "report.json", to_json(report));
      }
    } else if (mean->parsed()) {
      nlohmann::ordered_json j;
      j["exponent"] = exponent.to_string();
      j["t"] = t;
      j["h"] = h;
      j["mean_alpha"] = {{"time_domain", mean_alpha(exponent, t)}, {"spectral", mean_alpha_spectral(exponent, t)}};
      j["mean_sq_increment"] = {{"time_domain", mean_sq_increment(exponent, t, h)},
                                {"spectral", mean_sq_increment_spectral(exponent, t, h)},
                                {"leading", 4.0 * c_psi_h_0(exponent, h) * t}};
      // E[L^0_t L^0_t] and E[L^0_t L^h_t] from the Kac formula.
      j["kac"] = {{"origin_second_moment", kac_moment({exponent, t, {0.0, 0.0}, 0.0})},
                  {"cross_moment", kac_moment({exponent, t, {0.0, h}, 0.0})}};
      if (h < 1.0) j["variance_bound"] = nlohmann::ordered_json::parse(to_json(variance_bound_check(exponent, t, h)));
      std::cout << dump_json(j);
      if (mc_paths > 0) {
        MeanConvergenceConfig c;
        c.exponent = exponent;
        c.h_schedule = {h};
        c.n_paths = mc_paths;
        c.grid = {mc_steps, mc_eps};
        c.seed = g.seed;
        c.threads = threads;
        emit(g.out_dir / "report.json", to_json(mean_convergence_experiment(c)));
      }
    } else if (simulate->parsed()) {
      const auto path = simulate_path({exponent, horizon, steps, g.seed});
      const fs::path file = out_file.empty() ? g.out_dir / "path.bin" : out_file;
      write_path(file, path);
      std::cerr << "wrote " << file.string() << '\n';
      if (field_eps) emit(g.out_dir / "field.csv", to_csv(estimate_local_time(path, default_grid(path, *field_eps))));
    } else if (clt->parsed()) {
      clt_config.exponent = exponent;
      clt_config.seed = g.seed;
      clt_config.threads = threads;
      clt_config.centering = parse_centering(centering);
      const auto report = clt_experiment(clt_config);
      emit(g.out_dir / "report.json", to_json(report));
      for (const auto& row : report.rows)
        emit(g.out_dir / ("samples_" + short_name(row.h) + ".csv"), column_csv("z", row.z));
      emit(g.out_dir / "mixture.csv", column_csv("w", report.mixture));
      const std::string table = table_csv(report);
      emit(g.out_dir / "table.csv", table);
      std::cout << table;
    } else if (scaling->parsed()) {
      scaling_config.exponent = exponent;
      scaling_config.seed = g.seed;
      scaling_config.threads = threads;
      const auto report = scaling_experiment(scaling_config);
      emit(g.out_dir / "report.json", to_json(report));
      std::vector<std::vector<double>> rows;
      for (const auto& r : report.rows) rows.push_back({r.t, r.ratio_1, r.ratio_1_se, r.ratio_2, r.ratio_2_se});
      const std::string table = numeric_csv({"t", "ratio_1", "ratio_1_se", "ratio_2", "ratio_2_se"}, rows);
      emit(g.out_dir / "table.csv", table);
      std::cout << table;
    } else if (moments->parsed()) {
      moment_config.exponent = exponent;
      moment_config.seed = g.seed;
      moment_config.threads = threads;
      const auto report = moment_bound_experiment(moment_config);
      emit(g.out_dir / "report.json", to_json(report));
      std::vector<std::vector<double>> rows;
      for (const auto& r : report.rows) rows.push_back({r.t, r.ratios[0], r.ratios[1], r.ratios[2]});
      const std::string table = numeric_csv({"t", "ratio_1", "ratio_2", "ratio_3"}, rows);
      emit(g.out_dir / "table.csv", table);
      std::cout << table;
    }
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << '\n';
    return 1;
  }
  return 0;
}
