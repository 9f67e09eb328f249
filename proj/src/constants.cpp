#include "levylt/constants.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "levylt/json_io.hpp"

#include "levylt/density.hpp"
#include "levylt/quadrature.hpp"
#include "levylt/report_io.hpp"
#include "transforms.hpp"

namespace levylt {

namespace {

using std::numbers::pi;

void require_beta(double beta) {
  if (!(beta > 1.0 && beta <= 2.0)) throw std::invalid_argument("constants: beta must lie in (1, 2]");
}

void require_h(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("constants: h must be positive");
}

LimitDiagnostics diagnose(const std::vector<double>& hs, const std::vector<double>& values, double limit) {
  LimitDiagnostics d;
  d.limit = limit;
  for (double v : values) d.distances.push_back(std::abs(v - limit));
  for (std::size_t k = 1; k < values.size(); ++k) d.differences.push_back(values[k] - values[k - 1]);
  d.monotone = !d.differences.empty();
  for (std::size_t k = 1; k < d.differences.size(); ++k)
    if ((d.differences[k] > 0) != (d.differences[0] > 0) || d.differences[k] == 0.0) d.monotone = false;
  d.extrapolated = values.back();
  const std::size_t n = values.size();
  if (n >= 3) {
    const double d1 = values[n - 2] - values[n - 3];
    const double d2 = values[n - 1] - values[n - 2];
    if (d2 - d1 != 0.0) d.extrapolated = values[n - 1] - d2 * d2 / (d2 - d1);
    if (d1 != 0.0 && d2 != 0.0) d.observed_rate = std::log(std::abs(d2 / d1)) / std::log(hs[n - 1] / hs[n - 2]);
  }
  return d;
}

}  // namespace

namespace detail {

namespace {

double sin2_half(double q) {
  const double s = std::sin(0.5 * q);
  return s * s;
}

}  // namespace

double sin2_transform(const quad::Integrand& f, double decay, quad::Tolerance tol) {
  double value = quad::toward_zero([&](double q) { return sin2_half(q) * f(q); }, 1.0, tol).value;
  value += 0.5 * quad::power_tail(f, 1.0, decay, tol).value;
  value -= 0.5 * quad::oscillatory_tail(f, 1.0, 0.0, 1.0, tol).value;
  return value;
}

// Beyond q = 1, sin⁴(q/2) = (3 - 4cos q + cos 2q)/8.
double sin4_transform(const quad::Integrand& f, double decay, quad::Tolerance tol) {
  double value =
      quad::toward_zero([&](double q) { return sin2_half(q) * sin2_half(q) * f(q); }, 1.0, tol).value;
  value += 0.375 * quad::power_tail(f, 1.0, decay, tol).value;
  value -= 0.5 * quad::oscillatory_tail(f, 1.0, 0.0, 1.0, tol).value;
  value += 0.125 * quad::oscillatory_tail(f, 2.0, 0.0, 1.0, tol).value;
  return value;
}

}  // namespace detail

using detail::sin2_transform;
using detail::sin4_transform;

double c_beta_0(double beta) {
  require_beta(beta);
  return (2.0 / pi) * sin2_transform([beta](double p) { return std::pow(p, -beta); }, beta);
}

double c_beta_1(double beta) {
  require_beta(beta);
  return (16.0 / pi) * sin4_transform([beta](double p) { return std::pow(p, -2.0 * beta); }, 2.0 * beta);
}

double c_psi_h_0(const LevyExponent& exponent, double h) {
  require_h(h);
  auto f = [&](double q) { return 1.0 / exponent(q / h); };
  return (2.0 / (pi * h)) * sin2_transform(f, exponent.beta_infinity());
}

double c_psi_h_1(const LevyExponent& exponent, double h) {
  require_h(h);
  auto f = [&](double q) {
    const double psi = exponent(q / h);
    return 1.0 / (psi * psi);
  };
  return (16.0 / (pi * h)) * sin4_transform(f, 2.0 * exponent.beta_infinity());
}

double c_psi_h_0_time_domain(const LevyExponent& exponent, double h) {
  require_h(h);
  const DensityEvaluator ev(exponent, 1e-12);
  auto g = [&](double s) { return 0.5 * ev.second_diff(s, 0.0, h); };
  const quad::Tolerance tol{1e-13, 1e-9};
  return quad::toward_zero(g, 1.0, tol).value + quad::doubling_tail(g, 1.0, tol).value;
}

ConstantsTable limit_table(const LevyExponent& exponent, const std::vector<double>& h_schedule) {
  if (h_schedule.empty()) throw std::invalid_argument("limit_table: empty h schedule");
  for (std::size_t i = 0; i < h_schedule.size(); ++i) {
    require_h(h_schedule[i]);
    if (i > 0 && !(h_schedule[i] < h_schedule[i - 1]))
      throw std::invalid_argument("limit_table: h schedule must be strictly decreasing");
  }
  ConstantsTable table;
  table.exponent = exponent.to_string();
  table.beta = exponent.beta_infinity();
  table.c_beta_0 = c_beta_0(table.beta);
  table.c_beta_1 = c_beta_1(table.beta);
  std::vector<double> s0;
  std::vector<double> s1;
  for (double h : h_schedule) {
    ConstantsRow row;
    row.h = h;
    row.c_psi_h_0 = c_psi_h_0(exponent, h);
    row.c_psi_h_1 = c_psi_h_1(exponent, h);
    const double psi = exponent(1.0 / h);
    row.scaled_0 = h * psi * row.c_psi_h_0;
    row.scaled_1 = h * psi * psi * row.c_psi_h_1;
    table.rows.push_back(row);
    s0.push_back(row.scaled_0);
    s1.push_back(row.scaled_1);
  }
  table.diagnostics_0 = diagnose(h_schedule, s0, table.c_beta_0);
  table.diagnostics_1 = diagnose(h_schedule, s1, table.c_beta_1);
  return table;
}

std::string to_csv(const ConstantsTable& table) {
  std::vector<std::vector<double>> rows;
  for (const auto& r : table.rows) rows.push_back({r.h, r.c_psi_h_0, r.c_psi_h_1, r.scaled_0, r.scaled_1});
  return numeric_csv({"h", "c_psi_h_0", "c_psi_h_1", "scaled_0", "scaled_1"}, rows);
}

namespace {

nlohmann::ordered_json diagnostics_json(const LimitDiagnostics& d) {
  return {{"limit", d.limit},           {"extrapolated", d.extrapolated}, {"observed_rate", d.observed_rate},
          {"monotone", d.monotone},     {"differences", d.differences},   {"distances", d.distances}};
}

}  // namespace

std::string to_json(const ConstantsTable& table) {
  nlohmann::ordered_json j;
  j["exponent"] = table.exponent;
  j["beta"] = table.beta;
  j["c_beta_0"] = table.c_beta_0;
  j["c_beta_1"] = table.c_beta_1;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : table.rows)
    rows.push_back({{"h", r.h},
                    {"c_psi_h_0", r.c_psi_h_0},
                    {"c_psi_h_1", r.c_psi_h_1},
                    {"scaled_0", r.scaled_0},
                    {"scaled_1", r.scaled_1}});
  j["rows"] = rows;
  j["diagnostics_0"] = diagnostics_json(table.diagnostics_0);
  j["diagnostics_1"] = diagnostics_json(table.diagnostics_1);
  return dump_json(j);
}

}  // namespace levylt
