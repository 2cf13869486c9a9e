#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "plevt/distribution.hpp"
#include "plevt/error.hpp"
#include "plevt/gof.hpp"
#include "plevt/quantile.hpp"
#include "plevt/records.hpp"
#include "plevt/sampling.hpp"

using namespace plevt;

namespace {

// n-th record by scanning a fresh stream; nullopt when the stream cap is hit.
std::optional<double> scan_record(unsigned n, const Params& p, StreamRng& rng,
                                  std::size_t cap) {
  double best = -1;
  unsigned count = 0;
  for (std::size_t i = 0; i < cap; ++i) {
    const double x = draw_mixture_variate(rng, p);
    if (x > best) {
      best = x;
      if (++count == n) return best;
    }
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("record extraction") {
  const std::vector<double> s{3, 1, 4, 1, 5};
  const RecordSequence r = extract_records(s);
  CHECK(r.values == std::vector<double>{3, 4, 5});
  CHECK(r.indices == std::vector<std::size_t>{1, 3, 5});

  const std::vector<double> up{0.5, 1, 2, 7};
  CHECK(extract_records(up).values == up);
  const std::vector<double> ties{2, 2, 1, 2, 3};
  CHECK(extract_records(ties).values == std::vector<double>{2, 3});
  CHECK(extract_records(ties).indices.front() == 1);
  CHECK_THROWS_AS(extract_records(std::vector<double>{}), DomainError);
}

TEST_CASE("record from gamma sum") {
  const Params p(1.0, 2.0);
  CHECK(record_from_gamma_sum(3.0, p) ==
        doctest::Approx(quantile_exact(std::exp(-3.0), p).value).epsilon(1e-12));
  // far beyond the double range of e^{-Gamma}
  const double x = record_from_gamma_sum(5000.0, p);
  CHECK(log_survival(x, p) == doctest::Approx(-5000.0).epsilon(1e-12));
  CHECK_THROWS_AS(record_from_gamma_sum(0.0, p), DomainError);
  CHECK_THROWS_AS(simulate_record(0, p, SeedSpec{}), DomainError);
}

TEST_CASE("records increase along a shared gamma path") {
  const Params p(0.7, 3.0);
  StreamRng rng(SeedSpec{12, 0});
  double g = 0, prev = -1;
  for (int n = 1; n <= 300; ++n) {
    g += rng.exponential(1.0);
    const double x = record_from_gamma_sum(g, p);
    CHECK(x > prev);
    prev = x;
  }
}

TEST_CASE("first record is a single draw") {
  const Params p(1.0, 2.0);
  std::vector<double> xs;
  for (std::uint64_t i = 0; i < 10000; ++i) xs.push_back(simulate_record(1, p, SeedSpec{77, i}));
  std::sort(xs.begin(), xs.end());
  CHECK(ks_one_sample(xs, [&](double x) { return cdf(x, p); }) <=
        ks_critical_one_sample(xs.size(), 0.001));
}

TEST_CASE("simulated records match scanned streams") {
  const Params p(1.0, 2.0);
  const std::size_t reps = 10000;
  for (unsigned n = 1; n <= 3; ++n) {
    std::vector<double> sim, scan;
    std::size_t truncated = 0;
    StreamRng rng(SeedSpec{31337, n});
    for (std::uint64_t i = 0; i < reps; ++i) {
      sim.push_back(simulate_record(n, p, SeedSpec{4242 + n, i}));
      if (auto r = scan_record(n, p, rng, 10000000)) {
        scan.push_back(*r);
      } else {
        ++truncated;
      }
    }
    CHECK(truncated <= 2);
    std::sort(sim.begin(), sim.end());
    std::sort(scan.begin(), scan.end());
    CHECK(ks_two_sample(sim, scan) <= ks_critical_two_sample(sim.size(), scan.size(), 0.001));
  }
}

TEST_CASE("record standardizations") {
  const Params p(2.0, 3.0);
  CHECK(standardized_record(p.gamma() * 50, 50, p) == doctest::Approx(0.0));
  const double centre = quantile_from_log_tail(-50.0, p).value;
  CHECK(standardized_record_exact_centering(centre, 50, p) == doctest::Approx(0.0));
  CHECK(standardized_record(p.gamma() * 50 + p.gamma() * std::sqrt(50.0), 50, p) ==
        doctest::Approx(1.0));
}

TEST_CASE("gamma control and exact centering at moderate n") {
  const Params p(1.0, 2.0);
  const unsigned n = 400;
  std::vector<double> control, exact, plain;
  for (std::uint64_t i = 0; i < 5000; ++i) {
    StreamRng rng(SeedSpec{900, i});
    const double g = gamma_sum(n, rng);
    control.push_back((g - n) / std::sqrt(static_cast<double>(n)));
    const double x = record_from_gamma_sum(g, p);
    exact.push_back(standardized_record_exact_centering(x, n, p));
    plain.push_back(standardized_record(x, n, p));
  }
  const auto c = summarize(control);
  // 5000 reps: se(mean) ~ 0.014, se(var) ~ 0.02
  CHECK(std::abs(c.mean) <= 0.05);
  CHECK(std::abs(c.variance - 1) <= 0.1);
  const auto e = summarize(exact);
  CHECK(std::abs(e.mean) <= 0.1);
  CHECK(std::abs(e.variance - 1) <= 0.2);

  std::sort(exact.begin(), exact.end());
  std::sort(plain.begin(), plain.end());
  CHECK(ks_one_sample(exact, normal_cdf) < ks_one_sample(plain, normal_cdf));
}
