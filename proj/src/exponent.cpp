#include "levylt/exponent.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "levylt/quadrature.hpp"

namespace levylt {

namespace {

void validate(const StableComponent& c) {
  if (!(c.index > 1.0 && c.index <= 2.0))
    throw std::invalid_argument("exponent: index must lie in (1, 2], got " + std::to_string(c.index));
  if (!(c.weight > 0.0) || !std::isfinite(c.weight))
    throw std::invalid_argument("exponent: weight must be positive and finite");
}

double parse_number(std::string_view text, std::string_view whole) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc{} || ptr != last || !std::isfinite(value))
    throw std::invalid_argument("exponent: malformed number '" + std::string(text) + "' in '" + std::string(whole) + "'");
  return value;
}

}  // namespace

LevyExponent::LevyExponent(std::vector<StableComponent> components) : components_(std::move(components)) {
  if (components_.empty()) throw std::invalid_argument("exponent: at least one component required");
  for (const auto& c : components_) validate(c);
  std::sort(components_.begin(), components_.end(),
            [](const StableComponent& a, const StableComponent& b) { return a.index > b.index; });
  std::vector<StableComponent> merged;
  for (const auto& c : components_) {
    if (!merged.empty() && merged.back().index == c.index)
      merged.back().weight += c.weight;
    else
      merged.push_back(c);
  }
  components_ = std::move(merged);
}

LevyExponent LevyExponent::stable(double beta) { return LevyExponent({StableComponent{1.0, beta}}); }

LevyExponent LevyExponent::mixture(std::vector<StableComponent> components) {
  return LevyExponent(std::move(components));
}

LevyExponent LevyExponent::parse(std::string_view spec) {
  constexpr std::string_view stable_prefix = "stable:";
  constexpr std::string_view mix_prefix = "mix:";
  if (spec.starts_with(stable_prefix)) return stable(parse_number(spec.substr(stable_prefix.size()), spec));
  if (!spec.starts_with(mix_prefix))
    throw std::invalid_argument("exponent: expected 'stable:<beta>' or 'mix:<c>*<beta>+...', got '" +
                                std::string(spec) + "'");
  std::vector<StableComponent> parts;
  std::string_view rest = spec.substr(mix_prefix.size());
  while (true) {
    const auto plus = rest.find('+');
    const std::string_view term = rest.substr(0, plus);
    const auto star = term.find('*');
    if (star == std::string_view::npos)
      throw std::invalid_argument("exponent: mixture term '" + std::string(term) + "' lacks '*'");
    parts.push_back({parse_number(term.substr(0, star), spec), parse_number(term.substr(star + 1), spec)});
    if (plus == std::string_view::npos) break;
    rest = rest.substr(plus + 1);
  }
  return mixture(std::move(parts));
}

double LevyExponent::operator()(double lambda) const noexcept {
  const double a = std::abs(lambda);
  if (a == 0.0) return 0.0;
  double sum = 0.0;
  for (const auto& c : components_) sum += c.weight * (c.index == 2.0 ? a * a : std::pow(a, c.index));
  return sum;
}

std::complex<double> LevyExponent::on_ray(double r, double theta) const noexcept {
  if (r == 0.0) return {0.0, 0.0};
  std::complex<double> sum{0.0, 0.0};
  for (const auto& c : components_) sum += c.weight * std::pow(r, c.index) * std::polar(1.0, c.index * theta);
  return sum;
}

std::pair<double, double> LevyExponent::derivatives(double lambda) const {
  if (lambda < 0.0) throw std::domain_error("exponent: derivatives requested at negative lambda");
  if (lambda == 0.0 && beta_zero() < 2.0)
    throw std::domain_error("exponent: derivatives are singular at lambda = 0");
  double d1 = 0.0;
  double d2 = 0.0;
  for (const auto& c : components_) {
    if (c.index == 2.0) {
      d1 += 2.0 * c.weight * lambda;
      d2 += 2.0 * c.weight;
    } else {
      d1 += c.weight * c.index * std::pow(lambda, c.index - 1.0);
      d2 += c.weight * c.index * (c.index - 1.0) * std::pow(lambda, c.index - 2.0);
    }
  }
  return {d1, d2};
}

double LevyExponent::inverse(double u) const {
  if (u < 0.0 || std::isnan(u)) throw std::domain_error("exponent: inverse requires u >= 0");
  if (u == 0.0) return 0.0;
  if (std::isinf(u)) return u;
  if (components_.size() == 1) {
    const auto& c = components_.front();
    return std::pow(u / c.weight, 1.0 / c.index);
  }
  double lo = 0.0;
  double hi = 2.0 * std::max(1.0, std::pow(u, 1.0 / beta_infinity()));
  while ((*this)(hi) < u) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if ((*this)(mid) < u)
      lo = mid;
    else
      hi = mid;
  }
  return std::abs((*this)(lo) - u) < std::abs((*this)(hi) - u) ? lo : hi;
}

std::string LevyExponent::to_string() const {
  std::ostringstream out;
  out.precision(17);
  if (is_stable()) {
    out << "stable:" << components_.front().index;
    return out.str();
  }
  out << "mix:";
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (i) out << '+';
    out << components_[i].weight << '*' << components_[i].index;
  }
  return out.str();
}

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

RegularityReport check_regularity(const LevyExponent& exponent, const std::vector<double>& lambda_grid) {
  if (lambda_grid.empty()) throw std::invalid_argument("check_regularity: empty grid");
  bool has_large = false;
  for (double l : lambda_grid) {
    if (!(l > 0.0) || !std::isfinite(l)) throw std::invalid_argument("check_regularity: grid values must be in (0, inf)");
    has_large = has_large || l >= 1.0;
  }
  if (!has_large) throw std::invalid_argument("check_regularity: grid must include points >= 1");

  RegularityReport r;
  r.grid = lambda_grid;
  bool ratios_ok = true;
  bool quadratic_ok = true;
  for (double l : lambda_grid) {
    const double psi = exponent(l);
    const auto [d1, d2] = exponent.derivatives(l);
    const double q1 = l * std::abs(d1) / psi;
    const double q2 = l * l * std::abs(d2) / psi;
    r.ratios_d1.push_back(q1);
    r.ratios_d2.push_back(q2);
    if (l >= 1.0) {
      ratios_ok = ratios_ok && std::isfinite(q1) && std::isfinite(q2) && q1 > 0.0 && q2 > 0.0;
      r.d1_observed = std::max(r.d1_observed, q1);
      r.d2_observed = std::max(r.d2_observed, q2);
      const double quad = psi / (l * l);
      r.ratios_quadratic.push_back(quad);
      quadratic_ok = quadratic_ok && std::isfinite(quad);
    }
  }

  const double b = exponent.beta_infinity();
  r.index_condition = (b > 1.0 && b <= 2.0) ? Verdict::pass : Verdict::fail;
  r.derivative_bounds = ratios_ok ? Verdict::pass : Verdict::fail;
  r.quadratic_growth = quadratic_ok ? Verdict::pass : Verdict::fail;

  const quad::Tolerance tol{1e-12, 1e-9};
  try {
    r.integral_114a = quad::toward_zero([&](double l) { return std::pow(exponent.derivatives(l).first, 2); }, 1.0, tol).value;
    r.integral_114b = quad::toward_zero([&](double l) { return std::abs(exponent.derivatives(l).second); }, 1.0, tol).value;
    r.integrals_114 = (std::isfinite(r.integral_114a) && std::isfinite(r.integral_114b)) ? Verdict::pass : Verdict::fail;
  } catch (const quad::QuadratureError&) {
    r.integrals_114 = Verdict::indeterminate;
  }
  try {
    r.integral_116 = quad::toward_zero([&](double l) { return exponent(l) / l; }, 1.0, tol).value;
    r.integral_116_condition = std::isfinite(r.integral_116) ? Verdict::pass : Verdict::fail;
  } catch (const quad::QuadratureError&) {
    r.integral_116_condition = Verdict::indeterminate;
  }

  const Verdict all[] = {r.index_condition, r.derivative_bounds, r.integrals_114, r.integral_116_condition,
                         r.quadratic_growth};
  r.overall = Verdict::pass;
  for (Verdict v : all) {
    if (v == Verdict::fail) {
      r.overall = Verdict::fail;
      break;
    }
    if (v == Verdict::indeterminate) r.overall = Verdict::indeterminate;
  }
  return r;
}

}  // namespace levylt
