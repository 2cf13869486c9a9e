#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "plevt/params.hpp"
#include "plevt/rng.hpp"

namespace plevt {

// Upper records X^{(1)} < X^{(2)} < ... of a stream. `indices` are 1-based
// positions in the source stream and are empty for direct simulation.
struct RecordSequence {
  std::vector<double> values;
  std::vector<std::size_t> indices;
};

// Strict upper records: ties with the running maximum do not count. The first
// observation is always the first record. Throws DomainError when empty.
RecordSequence extract_records(std::span<const double> stream);

// Sum of n standard exponentials from the given stream.
double gamma_sum(unsigned n, StreamRng& rng);

// The n-th record value for a given Gamma_n: F^{-1}(1 - e^{-Gamma_n}), solved
// on the log scale so any Gamma_n > 0 is exact.
double record_from_gamma_sum(double gamma_n, const Params& p);

// One draw of the n-th record value via the gamma-sum representation.
double simulate_record(unsigned n, const Params& p, SeedSpec seed);

// (x_n - gamma n) / (gamma sqrt(n)).
double standardized_record(double x_n, unsigned n, const Params& p);

// (x_n - F^{-1}(1 - e^{-n})) / (gamma sqrt(n)).
double standardized_record_exact_centering(double x_n, unsigned n,
                                           const Params& p);

}  // namespace plevt
