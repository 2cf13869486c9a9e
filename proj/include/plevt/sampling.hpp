#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "plevt/params.hpp"
#include "plevt/rng.hpp"
#include "plevt/sorted_sample.hpp"

namespace plevt {

// One Pseudo-Lindley variate from the mixture: Exp(theta) with probability
// (beta - 1)/beta, else the sum of two Exp(theta). Always consumes three
// 64-bit words so stream positions do not depend on the branch taken.
double draw_mixture_variate(StreamRng& rng, const Params& p) noexcept;

// n mixture draws in generation order. Throws DomainError for n == 0.
std::vector<double> draw_mixture(std::size_t n, const Params& p, SeedSpec seed);

SortedSample sample_mixture(std::size_t n, const Params& p, SeedSpec seed);

// The m largest of n mixture draws. Bitwise identical to
// sample_mixture(n, p, seed).top(m) without sorting the full sample.
SortedSample sample_mixture_top(std::size_t n, std::size_t m, const Params& p,
                                SeedSpec seed);

// Inverse-cdf sampler: tail masses U_i uniform on (0, 1), values
// quantile_exact(U_i).
SortedSample sample_inverse_cdf(std::size_t n, const Params& p, SeedSpec seed);

// Deterministic variant over caller-supplied tail masses.
SortedSample sample_inverse_cdf(std::span<const double> tail_masses,
                                const Params& p, SeedSpec seed = {});

// Upper spacings X_{n-j+1,n} - X_{n-j,n}, j = 1..k. Requires 1 <= k <= n-1.
std::vector<double> spacings(const SortedSample& sample, std::size_t k);

}  // namespace plevt
