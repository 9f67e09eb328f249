#pragma once

#include <string>
#include <vector>

#include "levylt/exponent.hpp"

namespace levylt {

/// c_{β,0} = (2/π)∫_0^∞ sin²(p/2)/p^β dp, β in (1, 2].
double c_beta_0(double beta);
/// c_{β,1} = (16/π)∫_0^∞ sin⁴(p/2)/p^{2β} dp, β in (1, 2].
double c_beta_1(double beta);

/// c_{ψ,h,0} = (1/π)∫_0^∞ (1 - cos ph)/ψ(p) dp.
double c_psi_h_0(const LevyExponent& exponent, double h);
/// The same constant as ∫_0^∞ (p_s(0) - p_s(h)) ds, computed from densities.
double c_psi_h_0_time_domain(const LevyExponent& exponent, double h);
/// c_{ψ,h,1} = (16/π)∫_0^∞ sin⁴(hp/2)/ψ²(p) dp.
double c_psi_h_1(const LevyExponent& exponent, double h);

struct ConstantsRow {
  double h = 0.0;
  double c_psi_h_0 = 0.0;
  double c_psi_h_1 = 0.0;
  double scaled_0 = 0.0;  // hψ(1/h) c_{ψ,h,0}
  double scaled_1 = 0.0;  // hψ²(1/h) c_{ψ,h,1}
};

/// Convergence diagnostics for one scaled column.
struct LimitDiagnostics {
  double limit = 0.0;         // c_{β,·} at the index at infinity
  double extrapolated = 0.0;  // Aitken extrapolation of the last three rows
  double observed_rate = 0.0; // log(|d_k/d_{k-1}|)/log(h_k/h_{k-1}) for the last differences
  bool monotone = false;      // successive values move in one direction
  std::vector<double> differences;  // scaled(h_k) - scaled(h_{k-1})
  std::vector<double> distances;    // |scaled(h_k) - limit|
};

struct ConstantsTable {
  std::string exponent;
  double beta = 0.0;  // index at infinity
  double c_beta_0 = 0.0;
  double c_beta_1 = 0.0;
  std::vector<ConstantsRow> rows;
  LimitDiagnostics diagnostics_0;
  LimitDiagnostics diagnostics_1;
};

/// Rows follow the schedule order, which must be strictly decreasing and positive.
ConstantsTable limit_table(const LevyExponent& exponent, const std::vector<double>& h_schedule);

std::string to_csv(const ConstantsTable& table);
std::string to_json(const ConstantsTable& table);

}  // namespace levylt
