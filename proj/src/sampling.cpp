#include "plevt/sampling.hpp"

#include <algorithm>
#include <sstream>

#include "plevt/error.hpp"
#include "plevt/quantile.hpp"

namespace plevt {

namespace {

void require_positive(std::size_t n) {
  if (n == 0) throw DomainError("sample size must be >= 1");
}

}  // namespace

double draw_mixture_variate(StreamRng& rng, const Params& p) noexcept {
  const double choice = rng.uniform_open_closed();
  const double e1 = rng.exponential(p.theta());
  const double e2 = rng.exponential(p.theta());
  return choice * p.beta() <= p.beta() - 1.0 ? e1 : e1 + e2;
}

std::vector<double> draw_mixture(std::size_t n, const Params& p, SeedSpec seed) {
  require_positive(n);
  StreamRng rng(seed);
  std::vector<double> out(n);
  for (auto& v : out) v = draw_mixture_variate(rng, p);
  return out;
}

SortedSample sample_mixture(std::size_t n, const Params& p, SeedSpec seed) {
  return SortedSample::from_unsorted(draw_mixture(n, p, seed),
                                     SimulatedOrigin{seed, p});
}

SortedSample sample_mixture_top(std::size_t n, std::size_t m, const Params& p,
                                SeedSpec seed) {
  std::vector<double> draws = draw_mixture(n, p, seed);
  m = std::min(m, n);
  const auto cut = draws.end() - static_cast<std::ptrdiff_t>(m);
  std::nth_element(draws.begin(), cut, draws.end());
  draws.erase(draws.begin(), cut);
  return SortedSample::from_unsorted(std::move(draws), SimulatedOrigin{seed, p});
}

SortedSample sample_inverse_cdf(std::size_t n, const Params& p, SeedSpec seed) {
  require_positive(n);
  StreamRng rng(seed);
  std::vector<double> out(n);
  for (auto& v : out) v = quantile_exact(rng.uniform_open(), p).value;
  return SortedSample::from_unsorted(std::move(out), SimulatedOrigin{seed, p});
}

SortedSample sample_inverse_cdf(std::span<const double> tail_masses,
                                const Params& p, SeedSpec seed) {
  require_positive(tail_masses.size());
  std::vector<double> out;
  out.reserve(tail_masses.size());
  for (double u : tail_masses) out.push_back(quantile_exact(u, p).value);
  return SortedSample::from_unsorted(std::move(out), SimulatedOrigin{seed, p});
}

std::vector<double> spacings(const SortedSample& sample, std::size_t k) {
  const std::size_t n = sample.size();
  if (k < 1 || k + 1 > n) {
    std::ostringstream msg;
    msg << "spacing count k = " << k << " outside [1, " << (n > 0 ? n - 1 : 0)
        << "]";
    throw DomainError(msg.str());
  }
  std::vector<double> out(k);
  for (std::size_t j = 1; j <= k; ++j) {
    out[j - 1] = sample.upper(j) - sample.upper(j + 1);
  }
  return out;
}

}  // namespace plevt
