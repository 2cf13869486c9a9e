#include "plevt/records.hpp"

#include <cmath>

#include "plevt/error.hpp"
#include "plevt/quantile.hpp"

namespace plevt {

RecordSequence extract_records(std::span<const double> stream) {
  if (stream.empty()) throw DomainError("record extraction needs a nonempty stream");
  RecordSequence out;
  double current = stream[0];
  out.values.push_back(current);
  out.indices.push_back(1);
  for (std::size_t i = 1; i < stream.size(); ++i) {
    if (stream[i] > current) {
      current = stream[i];
      out.values.push_back(current);
      out.indices.push_back(i + 1);
    }
  }
  return out;
}

double gamma_sum(unsigned n, StreamRng& rng) {
  double g = 0.0;
  for (unsigned i = 0; i < n; ++i) g += rng.exponential(1.0);
  return g;
}

double record_from_gamma_sum(double gamma_n, const Params& p) {
  if (!(gamma_n > 0.0)) throw DomainError("gamma sum must be > 0");
  return quantile_from_log_tail(-gamma_n, p).value;
}

double simulate_record(unsigned n, const Params& p, SeedSpec seed) {
  if (n < 1) throw DomainError("record index must be >= 1");
  StreamRng rng(seed);
  return record_from_gamma_sum(gamma_sum(n, rng), p);
}

double standardized_record(double x_n, unsigned n, const Params& p) {
  const double nd = static_cast<double>(n);
  return (x_n - p.gamma() * nd) / (p.gamma() * std::sqrt(nd));
}

double standardized_record_exact_centering(double x_n, unsigned n,
                                           const Params& p) {
  const double nd = static_cast<double>(n);
  const double centre = quantile_from_log_tail(-nd, p).value;
  return (x_n - centre) / (p.gamma() * std::sqrt(nd));
}

}  // namespace plevt
