#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "plevt/params.hpp"
#include "plevt/rng.hpp"

namespace plevt {

struct SimulatedOrigin {
  SeedSpec seed;
  Params params;
};

struct IngestedOrigin {
  std::string path;
};

using SampleOrigin = std::variant<SimulatedOrigin, IngestedOrigin>;

// Ascending order statistics X_{1,n} <= ... <= X_{n,n} with provenance.
// Every value is finite.
class SortedSample {
 public:
  // Sorts `values`; throws DomainError if any value is not finite.
  static SortedSample from_unsorted(std::vector<double> values,
                                    SampleOrigin origin);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  const SampleOrigin& origin() const noexcept { return origin_; }

  // X_{i,n}, 1-based ascending.
  double order_stat(std::size_t i) const { return values_.at(i - 1); }
  // X_{n-j+1,n}: j = 1 is the maximum.
  double upper(std::size_t j) const { return values_.at(values_.size() - j); }

  // The m largest observations, still ascending. Upper spacings of the result
  // coincide with those of the full sample for j < m.
  SortedSample top(std::size_t m) const;

 private:
  SortedSample(std::vector<double> values, SampleOrigin origin)
      : values_(std::move(values)), origin_(std::move(origin)) {}

  std::vector<double> values_;
  SampleOrigin origin_;
};

}  // namespace plevt
