#include "levylt/density.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>

#include "levylt/json_io.hpp"

#include "levylt/quadrature.hpp"
#include "levylt/report_io.hpp"

namespace levylt {

namespace {

using std::numbers::pi;
using Complex = std::complex<double>;

// e^{-kDecayExponent} is far below double resolution of any O(1) quantity.
constexpr double kDecayExponent = 46.0;
constexpr std::size_t kPanelBudget = 20000;
// Beyond this many panels the three-point form is cheaper and just as accurate.
constexpr std::size_t kSecondDiffBudget = 2000;

std::atomic<std::size_t> g_clamped{0};

// Weights c_i cos(β_i θ): Re ψ(r e^{iθ}) is the exponent with these weights.
LevyExponent ray_real_part(const LevyExponent& e, double theta) {
  std::vector<StableComponent> parts;
  for (const auto& c : e.components()) parts.push_back({c.weight * std::cos(c.index * theta), c.index});
  return LevyExponent::mixture(std::move(parts));
}

std::vector<double> geometric_breakpoints(double top, double bottom) {
  std::vector<double> points;
  for (double r = 0.5 * top; r > bottom && points.size() < 64; r *= 0.5) points.push_back(r);
  return points;
}

}  // namespace

DensityEvaluator::DensityEvaluator(LevyExponent exponent, double abs_tol, DensityRoute route)
    : exponent_(std::move(exponent)), abs_tol_(abs_tol), route_(route) {
  if (!(abs_tol_ > 0.0)) throw std::invalid_argument("DensityEvaluator: abs_tol must be positive");
  theta_ = pi / (4.0 * exponent_.beta_infinity());
}

std::size_t DensityEvaluator::clamped_count() noexcept { return g_clamped.load(); }

double DensityEvaluator::clamp(double value, const char* what) const {
  if (value >= 0.0) return value;
  if (value > -abs_tol_) {
    if (g_clamped.fetch_add(1) == 0)
      std::cerr << "levylt: clamped small negative " << what << " (" << value << ") to zero\n";
    return 0.0;
  }
  throw quad::QuadratureError(std::string(what) + ": negative value " + std::to_string(value) +
                              " beyond tolerance");
}

double DensityEvaluator::ray_integral(double d, const std::function<Complex(double, double)>& f, double f_cutoff,
                                      double scale, bool power_tail_decay) const {
  const double theta = d > 0.0 ? theta_ : 0.0;
  const Complex rot = std::polar(1.0, theta);
  double cutoff = f_cutoff;
  if (d > 0.0) cutoff = std::min(cutoff, kDecayExponent / (d * std::sin(theta)));
  const bool tail = power_tail_decay && d == 0.0;
  auto g = [&](double r) {
    const Complex z = r * rot;
    return (rot * std::exp(Complex(0.0, d) * z) * f(r, theta)).real();
  };
  const quad::Tolerance tol{pi * abs_tol_ / 20.0, 1e-11};
  const auto breaks = geometric_breakpoints(cutoff, 1e-4 * std::min(scale, cutoff));
  double value = quad::adaptive(g, 0.0, cutoff, tol, breaks, 8000).value;
  if (tail) value += quad::power_tail(g, cutoff, exponent_.beta_infinity(), tol).value;
  return value / pi;
}

double DensityEvaluator::real_axis_integral(const std::function<double(double)>& g, double s, double frequency,
                                            std::size_t budget) const {
  const double top = exponent_.inverse(39.0 / s);
  const double width = pi / (4.0 * std::max(frequency, 1.0));
  const double panels = std::ceil(top / width);
  if (panels > static_cast<double>(budget))
    throw quad::QuadratureError("real-axis quadrature: panel budget exceeded (" + std::to_string(panels) + " panels)");
  std::vector<double> breaks;
  for (double k = 1.0; k < panels; k += 1.0) breaks.push_back(k * width);
  auto f = [&](double p) { return g(p) * std::exp(-s * exponent_(p)); };
  const quad::Tolerance tol{pi * abs_tol_ / 20.0, 1e-11};
  return quad::adaptive(f, 0.0, top, tol, breaks, 8 * static_cast<std::size_t>(panels) + 200).value / pi;
}

double DensityEvaluator::density(double s, double x) const { return density(s, x, route_); }

double DensityEvaluator::density(double s, double x, DensityRoute route) const {
  if (!(s > 0.0)) throw std::invalid_argument("density: s must be positive");
  const double d = std::abs(x);
  double value = 0.0;
  if (route == DensityRoute::real_axis) {
    value = real_axis_integral([d](double p) { return std::cos(p * d); }, s, d);
  } else {
    const double theta = d > 0.0 ? theta_ : 0.0;
    const LevyExponent real_part = theta > 0.0 ? ray_real_part(exponent_, theta) : exponent_;
    const double cutoff = real_part.inverse(kDecayExponent / s);
    auto f = [&](double r, double th) { return std::exp(-s * exponent_.on_ray(r, th)); };
    value = ray_integral(d, f, cutoff, exponent_.inverse(1.0 / s), false);
  }
  return clamp(value, "density");
}

double DensityEvaluator::delta_h(double s, double x, double h) const {
  if (!(h > 0.0)) throw std::invalid_argument("delta_h: h must be positive");
  return density(s, x + h) - density(s, x);
}

double DensityEvaluator::delta_h_spectral(double s, double x, double h) const {
  if (!(s > 0.0) || !(h > 0.0)) throw std::invalid_argument("delta_h_spectral: s and h must be positive");
  auto g = [x, h](double p) {
    const double half = std::sin(0.5 * h * p);
    return -2.0 * std::cos(p * x) * half * half - std::sin(p * x) * std::sin(h * p);
  };
  return real_axis_integral(g, s, std::abs(x) + h);
}

double DensityEvaluator::second_diff_spectral(double s, double x, double h) const {
  if (!(s > 0.0) || !(h > 0.0)) throw std::invalid_argument("second_diff: s and h must be positive");
  auto g = [x, h](double p) {
    const double half = std::sin(0.5 * h * p);
    return 4.0 * std::cos(p * x) * half * half;
  };
  return real_axis_integral(g, s, std::max(std::abs(x), h));
}

double DensityEvaluator::second_diff_direct(double s, double x, double h) const {
  if (!(h > 0.0)) throw std::invalid_argument("second_diff: h must be positive");
  return 2.0 * density(s, x) - density(s, x + h) - density(s, x - h);
}

double DensityEvaluator::second_diff(double s, double x, double h) const {
  try {
    if (!(s > 0.0) || !(h > 0.0)) throw std::invalid_argument("second_diff: s and h must be positive");
    auto g = [x, h](double p) {
      const double half = std::sin(0.5 * h * p);
      return 4.0 * std::cos(p * x) * half * half;
    };
    return real_axis_integral(g, s, std::max(std::abs(x), h), kSecondDiffBudget);
  } catch (const quad::QuadratureError&) {
    return second_diff_direct(s, x, h);
  }
}

double DensityEvaluator::green(double x, double tau) const {
  if (!(tau > 0.0)) throw std::invalid_argument("green: tau must be positive");
  const double d = std::abs(x);
  auto f = [&](double r, double th) -> Complex {
    if (r == 0.0) return tau;
    const Complex psi = exponent_.on_ray(r, th);
    const Complex w = tau * psi;
    if (std::abs(w) < 1e-4) return tau * (1.0 - w / 2.0 + w * w / 6.0);
    return (1.0 - std::exp(-w)) / psi;
  };
  const double scale = exponent_.inverse(1.0 / tau);
  const double cutoff = d > 0.0 ? std::numeric_limits<double>::infinity() : exponent_.inverse(kDecayExponent / tau);
  return clamp(ray_integral(d, f, cutoff, scale, true), "green");
}

double DensityEvaluator::time_integral(const std::function<double(double)>& g) const {
  return quad::toward_zero(g, 1.0, quad::Tolerance{abs_tol_, 1e-9}).value;
}

double DensityEvaluator::u_integral(double x) const {
  return time_integral([&](double s) { return density(s, x); });
}

double DensityEvaluator::v_integral(double x, double h) const {
  if (!(h > 0.0)) throw std::invalid_argument("v_integral: h must be positive");
  return time_integral([&](double s) { return std::abs(delta_h(s, x, h)); });
}

double DensityEvaluator::w_integral(double x, double h) const {
  if (!(h > 0.0)) throw std::invalid_argument("w_integral: h must be positive");
  return time_integral([&](double s) { return std::abs(second_diff_direct(s, x, h)); });
}

double DensityEvaluator::line_integral(const std::function<double(double)>& g, double /*decay*/, double scale) const {
  // g is even about the origin here; fold and integrate the half line.
  const double a = 20.0 * scale;
  const quad::Tolerance tol{abs_tol_ / 10.0, 1e-10};
  auto breaks = geometric_breakpoints(a, 1e-3 * scale);
  double value = quad::adaptive(g, 0.0, a, tol, breaks, 8000).value;
  value += quad::doubling_tail(g, a, tol).value;
  return 2.0 * value;
}

double DensityEvaluator::total_mass(double s) const {
  if (!(s > 0.0)) throw std::invalid_argument("total_mass: s must be positive");
  const double scale = 1.0 / exponent_.inverse(1.0 / s);
  return line_integral([&](double x) { return density(s, x); }, 1.0 + exponent_.beta_zero(), scale);
}

double DensityEvaluator::convolution(double s, double t, double x) const {
  if (!(s > 0.0) || !(t > 0.0)) throw std::invalid_argument("convolution: times must be positive");
  const double scale = std::max(1.0 / exponent_.inverse(1.0 / s), 1.0 / exponent_.inverse(1.0 / t));
  auto f = [&](double y) { return density(s, y) * density(t, x - y); };
  const quad::Tolerance tol{abs_tol_ / 10.0, 1e-10};
  const double lo = std::min(0.0, x);
  const double hi = std::max(0.0, x);
  const double a = 20.0 * scale;
  std::vector<double> breaks{lo, hi};
  double value = quad::adaptive(f, lo - a, hi + a, tol, breaks, 8000).value;
  value += quad::doubling_tail([&](double u) { return f(hi + u); }, a, tol).value;
  value += quad::doubling_tail([&](double u) { return f(lo - u); }, a, tol).value;
  return value;
}

namespace {

struct AuditContext {
  const DensityEvaluator& ev;
  BoundAuditReport& report;

  void add(const std::string& bound, double x, double h, double s, const std::function<double()>& observed,
           double shape) {
    BoundRow row{bound, x, h, s, 0.0, shape, 0.0, false};
    try {
      row.observed = observed();
      row.ratio = row.observed / shape;
      if (!std::isfinite(row.ratio)) row.failed = true;
    } catch (const std::exception&) {
      row.failed = true;
    }
    report.rows.push_back(row);
  }
};

// ∫_ℝ g(x) dx for a nonnegative g decaying algebraically, at audit accuracy.
double audit_line_integral(const std::function<double(double)>& g, double scale, double lower = 0.0) {
  const quad::Tolerance tol{1e-10, 1e-5};
  const double a = std::max(lower, 0.0) + 40.0 * scale;
  auto folded = [&](double x) { return g(x) + g(-x); };
  double value = 0.0;
  if (lower > 0.0) {
    value = quad::adaptive(folded, lower, a, tol, geometric_breakpoints(a, lower)).value;
  } else {
    value = quad::adaptive(folded, 0.0, a, tol, geometric_breakpoints(a, 1e-3 * scale)).value;
  }
  value += quad::doubling_tail(folded, a, tol, 60).value;
  return value;
}

double log_log_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(ys[i] > 0.0) || !std::isfinite(ys[i])) continue;
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return 0.0;
  const double denom = n * sxx - sx * sx;
  return denom == 0.0 ? 0.0 : (n * sxy - sx * sy) / denom;
}

}  // namespace

BoundAuditReport audit_density_bounds(const DensityEvaluator& ev, const std::vector<double>& x_grid,
                               const std::vector<double>& h_grid) {
  if (x_grid.empty() || h_grid.empty()) throw std::invalid_argument("audit: grids must be nonempty");
  for (double h : h_grid)
    if (!(h > 0.0 && h <= 0.5)) throw std::invalid_argument("audit: h values must lie in (0, 0.5]");

  const LevyExponent& psi = ev.exponent();
  BoundAuditReport report;
  report.x_grid = x_grid;
  report.h_grid = h_grid;
  report.s_grid = {1e-3, 1e-2, 1e-1, 1.0};
  AuditContext ctx{ev, report};

  for (double s : report.s_grid)
    for (double x : x_grid)
      ctx.add("density", x, 0.0, s, [&] { return ev.density(s, x); },
              std::max(psi.inverse(1.0 / s), 1.0) / (1.0 + x * x));
  for (double x : x_grid) ctx.add("u", x, 0.0, 0.0, [&] { return ev.u_integral(x); }, 1.0 / (1.0 + x * x));

  try {
    report.space_time_mass = audit_line_integral([&](double x) { return ev.green(x, 1.0); }, 1.0);
  } catch (const std::exception&) {
    report.space_time_mass = std::numeric_limits<double>::quiet_NaN();
  }

  for (double h : h_grid) {
    const double ph = psi(1.0 / h);
    const double big = 1.0 / (h * ph);
    const double inf = std::numeric_limits<double>::infinity();
    for (double x : x_grid) {
      const double ax = std::abs(x);
      const double v_shape = std::min({big, ax > 0 ? h / ax : inf, ax > 0 ? h / (x * x) : inf});
      const double w_shape = std::min({big, ax > 0 ? 1.0 / (ph * ax) : inf, ax > 0 ? h * h / (x * x) : inf});
      ctx.add("v", x, h, 0.0, [&] { return ev.v_integral(x, h); }, v_shape);
      ctx.add("w", x, h, 0.0, [&] { return ev.w_integral(x, h); }, w_shape);
    }
    auto v = [&](double x) { return ev.v_integral(x, h); };
    auto w = [&](double x) { return ev.w_integral(x, h); };
    ctx.add("int_v", 0.0, h, 0.0, [&] { return audit_line_integral(v, h); }, h * std::log(1.0 / h));
    ctx.add("int_v2", 0.0, h, 0.0, [&] { return audit_line_integral([&](double x) { return std::pow(v(x), 2); }, h); },
            1.0 / ph);
    ctx.add("int_w", 0.0, h, 0.0, [&] { return audit_line_integral(w, h); }, std::log(1.0 / h) / ph);
    ctx.add("int_w2", 0.0, h, 0.0, [&] { return audit_line_integral([&](double x) { return std::pow(w(x), 2); }, h); },
            1.0 / (h * ph * ph));
    for (double u : x_grid) {
      if (!(u > 0.0)) continue;
      ctx.add("int_w2_tail", u, h, 0.0,
              [&] { return audit_line_integral([&](double x) { return std::pow(w(x), 2); }, h, u); },
              1.0 / (u * ph * ph));
    }
  }

  std::vector<std::string> names;
  for (const auto& row : report.rows)
    if (std::find(names.begin(), names.end(), row.bound) == names.end()) names.push_back(row.bound);
  for (const auto& name : names) {
    BoundSummary summary{name, 0.0, 0.0, true};
    std::vector<double> hs;
    std::vector<double> sups;
    for (const auto& row : report.rows) {
      if (row.bound != name) continue;
      if (row.failed) {
        summary.consistent = false;
        continue;
      }
      summary.sup_ratio = std::max(summary.sup_ratio, row.ratio);
      auto it = std::find(hs.begin(), hs.end(), row.h);
      if (it == hs.end()) {
        hs.push_back(row.h);
        sups.push_back(row.ratio);
      } else {
        auto& sup = sups[static_cast<std::size_t>(it - hs.begin())];
        sup = std::max(sup, row.ratio);
      }
    }
    if (hs.size() >= 2 && hs.front() > 0.0) summary.trend = log_log_slope(hs, sups);
    if (summary.trend < kBlowUpSlope) summary.consistent = false;
    report.consistent = report.consistent && summary.consistent;
    report.summaries.push_back(summary);
  }
  return report;
}

std::string to_csv(const BoundAuditReport& report) {
  std::ostringstream out;
  out << "bound,x,h,s,observed,shape,ratio,failed\n";
  for (const auto& r : report.rows)
    out << r.bound << ',' << format_double(r.x) << ',' << format_double(r.h) << ',' << format_double(r.s) << ','
        << format_double(r.observed) << ',' << format_double(r.shape) << ',' << format_double(r.ratio) << ','
        << (r.failed ? 1 : 0) << '\n';
  return out.str();
}

std::string to_json(const BoundAuditReport& report) {
  nlohmann::ordered_json j;
  j["space_time_mass"] = report.space_time_mass;
  j["consistent"] = report.consistent;
  j["h_grid"] = report.h_grid;
  j["x_grid"] = report.x_grid;
  auto& bounds = j["bounds"];
  bounds = nlohmann::ordered_json::object();
  for (const auto& s : report.summaries)
    bounds[s.bound] = {{"sup_ratio", s.sup_ratio}, {"trend", s.trend}, {"consistent", s.consistent}};
  return dump_json(j);
}

}  // namespace levylt
