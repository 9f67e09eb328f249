#pragma once

#include <span>

namespace levylt::stats {

double mean(std::span<const double> xs);
/// Unbiased sample variance; 0 for fewer than two values.
double variance(std::span<const double> xs);
/// Standard error of the mean.
double standard_error(std::span<const double> xs);

/// P(K > λ) for the Kolmogorov distribution.
double kolmogorov_survival(double lambda);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;  // asymptotic, with the small-sample correction of Stephens
};

/// Two-sample Kolmogorov–Smirnov test. Throws std::invalid_argument on an empty sample.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

}  // namespace levylt::stats
