#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "plevt/sorted_sample.hpp"

namespace plevt {

// Weight function f: {1, 2, ...} -> (0, inf) of the double-indexed Hill
// statistic.
class WeightFunction {
 public:
  enum class Kind { identity, power, log1p, table };

  static WeightFunction identity();
  // f(j) = j^a.
  static WeightFunction power(double exponent);
  // f(j) = log(1 + j).
  static WeightFunction log1p();
  // f(j) = values[j - 1]; every entry must be finite and > 0.
  static WeightFunction table(std::vector<double> values);

  Kind kind() const noexcept { return kind_; }
  double exponent() const noexcept { return exponent_; }
  const std::vector<double>& table_values() const noexcept { return table_; }

  double operator()(std::size_t j) const;

  // Throws DomainError if f is not defined on 1..k.
  void require_covers(std::size_t k) const;

  // Mini-grammar: identity | pow:<a> | log1p | table:<path>. Table files are
  // one positive value per line. Throws DomainError / ParseError.
  static WeightFunction parse(const std::string& spec);
  std::string describe() const;

 private:
  WeightFunction(Kind kind, double exponent, std::vector<double> table)
      : kind_(kind), exponent_(exponent), table_(std::move(table)) {}

  Kind kind_;
  double exponent_;
  std::vector<double> table_;
};

// Hill estimator H_n = (1/k) sum_{j<=k} j (X_{n-j+1,n} - X_{n-j,n}).
// Requires 1 <= k <= n - 1.
double hill(const SortedSample& sample, std::size_t k);

// Normalizers of the functional statistic; pure functions of (f, k, s), s >= 1.
//   centering:  Gamma(s+1) sum_{j<=k} f(j) j^{-s}
//   scale:      sqrt((Gamma(2s+1) - Gamma(s+1)^2) sum_{j<=k} f(j)^2 j^{-2s})
//   max weight: max_{j<=k} f(j) j^{-s} / scale
double dh_centering(const WeightFunction& f, std::size_t k, double s);
double dh_scale(const WeightFunction& f, std::size_t k, double s);
double dh_max_weight_ratio(const WeightFunction& f, std::size_t k, double s);

// Gamma(2s+1) - Gamma(s+1)^2.
double dh_variance_constant(double s);

struct TailStatistics {
  std::size_t k = 0;
  double s = 1.0;
  double hill = 0.0;
  double weighted_sum = 0.0;      // T_n(f, s) = sum f(j) spacing_j^s
  double centering = 0.0;         // a_n(f, s)
  double scale = 0.0;             // s_n(f, s)
  double max_weight_ratio = 0.0;  // B_n(f, s)
  double estimate = 0.0;          // (weighted_sum / centering)^{1/s}
};

// Fills every TailStatistics field. Requires 2 <= k <= n - 1 and s >= 1;
// throws DegenerateSampleError when all top-k spacings are zero.
TailStatistics dh_statistic(const SortedSample& sample, const WeightFunction& f,
                            std::size_t k, double s);

struct StandardizedTail {
  double z_sum;       // (T_n - gamma^s a_n) / s_n
  double z_estimate;  // (a_n / s_n) (H_n(f, s) - gamma)
};

StandardizedTail standardize_dh(const TailStatistics& ts, double gamma);

// k^{3/4} / log n, the rate quantity of the Hill central limit condition.
double check_k1(std::size_t n, std::size_t k);

// max(5, floor((log n)^{4/5})), capped at n - 1.
std::size_t default_hill_k(std::size_t n);

struct DhConditions {
  double variance_ratio;    // s_n(f, 1) / (s_n(f, s) log n)
  double max_weight_ratio;  // B_n(f, s)
  double growth;            // a_n(f, s) / s_n(f, s)
};

DhConditions check_dh_conditions(const WeightFunction& f, std::size_t n,
                                 std::size_t k, double s);

}  // namespace plevt
