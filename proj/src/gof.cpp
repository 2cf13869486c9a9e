#include "plevt/gof.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "plevt/error.hpp"

namespace plevt {

double normal_cdf(double x) noexcept {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double gumbel_cdf(double x) noexcept { return std::exp(-std::exp(-x)); }

double ks_one_sample(std::span<const double> sorted,
                     const std::function<double(double)>& cdf) {
  if (sorted.empty()) throw DomainError("KS distance of an empty sample");
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double i_d = static_cast<double>(i);
    d = std::max({d, (i_d + 1.0) / n - f, f - i_d / n});
  }
  return std::clamp(d, 0.0, 1.0);
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DomainError("KS distance of an empty sample");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  return d;
}

double ks_critical_coefficient(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  return std::sqrt(-0.5 * std::log(0.5 * alpha));
}

double ks_critical_one_sample(std::size_t n, double alpha) {
  return ks_critical_coefficient(alpha) / std::sqrt(static_cast<double>(n));
}

double ks_critical_two_sample(std::size_t n, std::size_t m, double alpha) {
  const double nd = static_cast<double>(n), md = static_cast<double>(m);
  return ks_critical_coefficient(alpha) * std::sqrt((nd + md) / (nd * md));
}

SummaryStats summarize(std::span<const double> xs) {
  SummaryStats s;
  double m2 = 0.0;
  for (double x : xs) {
    ++s.n;
    const double d1 = x - s.mean;
    s.mean += d1 / static_cast<double>(s.n);
    m2 += d1 * (x - s.mean);
  }
  if (s.n > 0) s.variance = m2 / static_cast<double>(s.n);
  return s;
}

}  // namespace plevt
