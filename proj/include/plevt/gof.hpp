#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace plevt {

// Standard normal cdf, 0.5 erfc(-x / sqrt 2).
double normal_cdf(double x) noexcept;

// Gumbel cdf exp(-exp(-x)).
double gumbel_cdf(double x) noexcept;

// sup |F_n - F| for an ascending sample against a continuous cdf.
double ks_one_sample(std::span<const double> sorted,
                     const std::function<double(double)>& cdf);

// sup |F_n - G_m| for two ascending samples.
double ks_two_sample(std::span<const double> sorted_a,
                     std::span<const double> sorted_b);

// c(alpha) = sqrt(-log(alpha / 2) / 2); 1.9495 at alpha = 0.001.
double ks_critical_coefficient(double alpha);

// c(alpha) / sqrt(n).
double ks_critical_one_sample(std::size_t n, double alpha);

// c(alpha) sqrt((n + m) / (n m)).
double ks_critical_two_sample(std::size_t n, std::size_t m, double alpha);

struct SummaryStats {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // population variance (denominator n)
};

// Welford's online algorithm over the values in the given order.
SummaryStats summarize(std::span<const double> xs);

}  // namespace plevt
