#include "levylt/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace levylt::quad {

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
using Gauss = boost::math::quadrature::gauss<double, 10>;

struct Interval {
  double a;
  double b;
  Estimate est;
  bool operator<(const Interval& other) const noexcept { return est.error < other.est.error; }
};

std::string describe(const char* routine, double value, double error, double target) {
  return std::string(routine) + ": tolerance not met (value " + std::to_string(value) + ", error " +
         std::to_string(error) + ", target " + std::to_string(target) + ")";
}

// Tail correction for a sequence of panel contributions that decays
// geometrically. Returns false while the ratio has not settled; otherwise sets
// the tail sum and an estimate of its uncertainty.
bool geometric_tail(const std::vector<double>& contributions, double& tail, double& uncertainty) {
  const std::size_t n = contributions.size();
  if (n < 5) return false;
  const double c0 = contributions[n - 4];
  const double c1 = contributions[n - 3];
  const double c2 = contributions[n - 2];
  const double c3 = contributions[n - 1];
  if (c0 == 0.0 || c1 == 0.0 || c2 == 0.0) return false;
  const double r1 = c1 / c0;
  const double r2 = c2 / c1;
  const double r3 = c3 / c2;
  if (!(r1 > 0.0 && r2 > 0.0 && r3 > 0.0 && r3 < 0.99)) return false;
  const double spread = std::max(std::abs(r3 - r2), std::abs(r2 - r1));
  if (spread > 0.05 * r3) return false;
  tail = c3 * r3 / (1.0 - r3);
  uncertainty = std::abs(c3) * (spread + 1e-3 * r3) / ((1.0 - r3) * (1.0 - r3));
  return true;
}

}  // namespace

double Tolerance::target(double magnitude) const noexcept { return std::max(abs, rel * std::abs(magnitude)); }

Estimate kronrod21(const Integrand& f, double a, double b) {
  const auto& x = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  // Gauss order 10 is even: the center is a Kronrod-only node.
  double fc = f(center);
  double kronrod = fc * wk[0];
  double gauss = 0.0;
  for (std::size_t i = 1; i < x.size(); i += 2) {
    const double fp = f(center + half * x[i]);
    const double fm = f(center - half * x[i]);
    kronrod += (fp + fm) * wk[i];
    gauss += (fp + fm) * wg[i / 2];
  }
  for (std::size_t i = 2; i < x.size(); i += 2) {
    const double fp = f(center + half * x[i]);
    const double fm = f(center - half * x[i]);
    kronrod += (fp + fm) * wk[i];
  }
  Estimate e;
  e.value = kronrod * half;
  e.error = std::max(std::abs((kronrod - gauss) * half), std::abs(e.value) * 4.0e-16);
  e.evaluations = 21;
  if (!std::isfinite(e.value)) throw QuadratureError("kronrod21: non-finite integrand value");
  return e;
}

Estimate adaptive(const Integrand& f, double a, double b, Tolerance tol, std::span<const double> breakpoints,
                  std::size_t max_intervals) {
  if (a == b) return {};
  if (b < a) {
    Estimate e = adaptive(f, b, a, tol, breakpoints, max_intervals);
    e.value = -e.value;
    return e;
  }
  std::vector<double> cuts{a};
  for (double p : breakpoints)
    if (p > a && p < b) cuts.push_back(p);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<Interval> queue;
  Estimate frozen;  // intervals too narrow to split further
  Estimate total;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Interval iv{cuts[i], cuts[i + 1], kronrod21(f, cuts[i], cuts[i + 1])};
    total += iv.est;
    queue.push(iv);
  }
  std::size_t count = queue.size();
  while (true) {
    if (total.error <= tol.target(total.value)) return total;
    if (queue.empty()) break;
    if (count >= max_intervals) break;
    Interval worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) || (worst.b - worst.a) < 1e-14 * std::max(std::abs(worst.a), 1e-300)) {
      frozen += worst.est;
      continue;
    }
    Interval left{worst.a, mid, kronrod21(f, worst.a, mid)};
    Interval right{mid, worst.b, kronrod21(f, mid, worst.b)};
    total.value += left.est.value + right.est.value - worst.est.value;
    total.error += left.est.error + right.est.error - worst.est.error;
    total.evaluations += left.est.evaluations + right.est.evaluations;
    queue.push(left);
    queue.push(right);
    ++count;
  }
  // Recompute the totals exactly to avoid drift from the running updates.
  Estimate exact = frozen;
  exact.evaluations = total.evaluations;
  while (!queue.empty()) {
    exact.value += queue.top().est.value;
    exact.error += queue.top().est.error;
    queue.pop();
  }
  if (exact.error <= tol.target(exact.value)) return exact;
  throw QuadratureError(describe("adaptive", exact.value, exact.error, tol.target(exact.value)));
}

Estimate toward_zero(const Integrand& g, double w, Tolerance tol, int max_panels) {
  if (w <= 0.0) return {};
  const Tolerance panel_tol{tol.abs / 32.0, tol.rel / 8.0};
  Estimate total;
  std::vector<double> contributions;
  double hi = w;
  for (int k = 0; k < max_panels; ++k) {
    const double lo = 0.5 * hi;
    if (lo <= 0.0) break;
    const Estimate panel = adaptive(g, lo, hi, panel_tol);
    total += panel;
    contributions.push_back(panel.value);
    hi = lo;
    const double target = tol.target(total.value);
    double tail = 0.0;
    double uncertainty = 0.0;
    if (geometric_tail(contributions, tail, uncertainty) && uncertainty <= 0.25 * target) {
      total.value += tail;
      total.error += uncertainty;
      return total;
    }
    const std::size_t n = contributions.size();
    if (n >= 4 && std::abs(contributions[n - 1]) <= 1e-3 * target && std::abs(contributions[n - 2]) <= 1e-3 * target &&
        std::abs(contributions[n - 1]) <= std::abs(contributions[n - 2]))
      return total;
  }
  throw QuadratureError(describe("toward_zero", total.value, total.error, tol.target(total.value)));
}

Estimate power_tail(const Integrand& f, double a, double decay, Tolerance tol) {
  if (!(decay > 1.0) || !(a > 0.0)) throw std::invalid_argument("power_tail: need decay > 1 and a > 0");
  const double exponent = -1.0 / (decay - 1.0);
  const double scale = std::pow(a, 1.0 - decay) / (decay - 1.0);
  auto g = [&](double v) {
    const double p = a * std::pow(v, exponent);
    if (!std::isfinite(p)) return 0.0;
    return f(p) * std::pow(p, decay) * scale;
  };
  return adaptive(g, 0.0, 1.0, tol);
}

Estimate doubling_tail(const Integrand& f, double a, Tolerance tol, int max_panels) {
  if (!(a > 0.0)) throw std::invalid_argument("doubling_tail: need a > 0");
  const Tolerance panel_tol{tol.abs / 32.0, tol.rel / 8.0};
  Estimate total;
  std::vector<double> contributions;
  double lo = a;
  for (int k = 0; k < max_panels; ++k) {
    const double hi = 2.0 * lo;
    const Estimate panel = adaptive(f, lo, hi, panel_tol);
    total += panel;
    contributions.push_back(panel.value);
    lo = hi;
    const double target = tol.target(total.value);
    double tail = 0.0;
    double uncertainty = 0.0;
    if (geometric_tail(contributions, tail, uncertainty) && uncertainty <= 0.25 * target) {
      total.value += tail;
      total.error += uncertainty;
      return total;
    }
    const std::size_t n = contributions.size();
    if (n >= 3 && std::abs(contributions[n - 1]) <= 1e-3 * target && std::abs(contributions[n - 2]) <= 1e-3 * target)
      return total;
  }
  throw QuadratureError(describe("doubling_tail", total.value, total.error, tol.target(total.value)));
}

std::pair<double, double> wynn_epsilon(std::span<const double> partial_sums) {
  const std::size_t n = partial_sums.size();
  if (n == 0) return {0.0, 0.0};
  if (n < 3) return {partial_sums.back(), n == 2 ? std::abs(partial_sums[1] - partial_sums[0]) : 0.0};
  // Column-by-column table; prev holds column k-1, cur column k.
  std::vector<double> prev(n + 1, 0.0);
  std::vector<double> cur(partial_sums.begin(), partial_sums.end());
  double best = cur.back();
  double previous_best = cur[n - 2];
  for (std::size_t k = 1; k < n; ++k) {
    std::vector<double> next(n - k);
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      const double diff = cur[i + 1] - cur[i];
      if (diff == 0.0) return {cur[i + 1], std::abs(best - previous_best)};
      next[i] = prev[i + 1] + 1.0 / diff;
      if (!std::isfinite(next[i])) return {best, std::abs(best - previous_best)};
    }
    prev = std::move(cur);
    cur = std::move(next);
    if (k % 2 == 0) {
      previous_best = cur.size() >= 2 ? cur[cur.size() - 2] : best;
      best = cur.back();
    }
  }
  return {best, std::abs(best - previous_best)};
}

Estimate oscillatory_tail(const Integrand& g, double omega, double phase, double a, Tolerance tol,
                          std::size_t max_panels) {
  if (!(omega > 0.0)) throw std::invalid_argument("oscillatory_tail: need omega > 0");
  auto f = [&](double p) { return g(p) * std::cos(omega * p + phase); };
  const double pi = std::numbers::pi;
  double j = std::ceil((omega * a + phase - 0.5 * pi) / pi);
  double zero = ((0.5 * pi + j * pi) - phase) / omega;
  if (zero <= a) {
    j += 1.0;
    zero = ((0.5 * pi + j * pi) - phase) / omega;
  }
  const Tolerance panel_tol{tol.abs / 64.0, tol.rel / 16.0};
  Estimate total = adaptive(f, a, zero, panel_tol);
  std::vector<double> sums{total.value};
  constexpr std::size_t window = 40;
  double last_extrapolation = total.value;
  int settled = 0;
  double lo = zero;
  for (std::size_t k = 0; k < max_panels; ++k) {
    j += 1.0;
    const double hi = ((0.5 * pi + j * pi) - phase) / omega;
    const Estimate panel = adaptive(f, lo, hi, panel_tol);
    lo = hi;
    total.error += panel.error;
    total.evaluations += panel.evaluations;
    sums.push_back(sums.back() + panel.value);
    const std::size_t first = sums.size() > window ? sums.size() - window : 0;
    const auto [extrapolated, spread] = wynn_epsilon(std::span<const double>(sums).subspan(first));
    const double target = tol.target(extrapolated);
    if (std::abs(panel.value) <= 1e-4 * target) {
      total.value = sums.back();
      return total;
    }
    if (sums.size() >= 6 && std::abs(extrapolated - last_extrapolation) <= 0.1 * target && spread <= target) {
      if (++settled >= 2) {
        total.value = extrapolated;
        total.error += std::abs(extrapolated - last_extrapolation) + spread;
        return total;
      }
    } else {
      settled = 0;
    }
    last_extrapolation = extrapolated;
  }
  throw QuadratureError(describe("oscillatory_tail", last_extrapolation, total.error, tol.target(last_extrapolation)));
}

}  // namespace levylt::quad
