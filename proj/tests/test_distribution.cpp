#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "plevt/distribution.hpp"
#include "plevt/error.hpp"
#include "plevt/sampling.hpp"

using namespace plevt;

namespace {
const double kThetas[] = {0.5, 1.0, 2.0};
const double kBetas[] = {1.1, 2.0, 5.0};
}  // namespace

TEST_CASE("pdf integrates to one over the grid") {
  for (double t : kThetas) {
    for (double b : kBetas) {
      const Params p(t, b);
      const double total = oracle::integrate_from([&](double x) { return pdf(x, p); }, 0.0);
      CHECK(std::abs(total - 1.0) <= 1e-10);
    }
  }
}

TEST_CASE("pdf matches the mixture form and is zero below the support") {
  const Params p(1.3, 2.7);
  for (double x : {0.0, 0.01, 0.5, 3.0, 40.0}) {
    CHECK(pdf(x, p) == doctest::Approx(oracle::pdf(x, 1.3, 2.7)).epsilon(1e-14));
  }
  CHECK(pdf(-0.1, p) == 0.0);
  CHECK(survival(-1.0, p) == 1.0);
  CHECK(cdf(-1.0, p) == 0.0);
  CHECK(pdf(0.0, Params(1.0, 2.0)) == doctest::Approx(0.5));
}

TEST_CASE("survival is the quadrature complement") {
  for (double t : kThetas) {
    for (double b : kBetas) {
      const Params p(t, b);
      for (double x : {0.1, 1.0, 5.0, 20.0}) {
        CHECK(std::abs(survival(x, p) - oracle::survival_by_quadrature(x, t, b)) <= 1e-10);
        CHECK(cdf(x, p) + survival(x, p) == doctest::Approx(1.0).epsilon(1e-15));
      }
    }
  }
}

TEST_CASE("log survival stays finite deep in the tail") {
  const Params p(1.0, 2.0);
  const double x = 2000.0;
  CHECK(survival(x, p) == 0.0);
  CHECK(log_survival(x, p) == doctest::Approx(std::log1p(x / 2.0) - x).epsilon(1e-14));
  CHECK(log_survival(1.0, p) == doctest::Approx(std::log(survival(1.0, p))).epsilon(1e-14));
}

TEST_CASE("minus d/dx survival equals pdf") {
  const double h = 1e-5;
  for (double t : kThetas) {
    for (double b : kBetas) {
      const Params p(t, b);
      for (double x : {0.05, 0.7, 2.0, 9.0}) {
        const double fd = -(survival(x + h, p) - survival(x - h, p)) / (2 * h);
        CHECK(std::abs(fd - pdf(x, p)) <= 1e-6);
      }
    }
  }
}

TEST_CASE("pdf derivative against central differences") {
  const Params p(0.8, 1.7);
  const double h = 1e-5;
  for (double x : {0.1, 1.0, 4.0}) {
    const double fd = (pdf(x + h, p) - pdf(x - h, p)) / (2 * h);
    CHECK(pdf_derivative(x, p) == doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("Lindley reduction at beta = 1 + theta") {
  for (double t : kThetas) {
    const Params p(t, 1.0 + t);
    for (double x : {0.0, 0.3, 1.0, 4.5, 17.0, 60.0}) {
      const double ref = oracle::lindley_pdf(x, t);
      CHECK(std::abs(pdf(x, p) - ref) <= 1e-14 * ref);
    }
  }
}

TEST_CASE("moments against quadrature") {
  for (double t : kThetas) {
    for (double b : kBetas) {
      const Params p(t, b);
      for (unsigned n = 1; n <= 6; ++n) {
        const double ref = oracle::integrate_from(
            [&](double x) {
              const double f = oracle::pdf(x, t, b);
              return f == 0.0 ? 0.0 : std::pow(x, n) * f;
            }, 0.0);
        CHECK(std::abs(moment(n, p) - ref) <= 1e-8 * ref);
      }
    }
  }
  CHECK(moment(1, Params(1.0, 2.0)) == doctest::Approx(1.5));
  CHECK(moment(2, Params(2.0, 3.0)) == doctest::Approx(5.0 / 6.0));
  // large beta leaves the exponential component
  CHECK(moment(1, Params(3.0, 1e12)) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("moment overflow and order zero") {
  const Params p(0.5, 2.0);
  CHECK_THROWS_AS(moment(0, p), DomainError);
  CHECK(std::isfinite(log_moment(400, p)));
  CHECK_THROWS_AS(moment(400, p), OutOfRangeError);
  CHECK(std::log(moment(100, p)) == doctest::Approx(log_moment(100, p)).epsilon(1e-12));
  // log-gamma path against a direct product
  double direct = std::log(4.0 + 20) - std::log(4.0) - 20 * std::log(1.5);
  for (int i = 2; i <= 20; ++i) direct += std::log(static_cast<double>(i));
  CHECK(log_moment(20, Params(1.5, 4.0)) == doctest::Approx(direct).epsilon(1e-13));
}

TEST_CASE("moment radius sequence") {
  const Params p(1.0, 2.0);
  const auto r = moment_radius_sequence(p, 50);
  REQUIRE(r.size() == 50);
  CHECK(r[0] == doctest::Approx(moment(1, p)));
  CHECK(r[0] == doctest::Approx(1.5));
  for (unsigned n = 1; n <= 50; ++n) {
    double fact = std::lgamma(n + 1.0);
    CHECK(r[n - 1] == doctest::Approx(std::exp((log_moment(n, p) - fact) / n)).epsilon(1e-12));
  }
  // monotone decrease toward 1/theta, bounded by y(1+y)/theta, y = log(1+n/beta)/n
  for (double t : kThetas) {
    for (double b : kBetas) {
      const Params q(t, b);
      const auto seq = moment_radius_sequence(q, 400);
      for (unsigned n = 10; n <= 400; ++n) {
        const double y = std::log1p(n / b) / n;
        CHECK(seq[n - 1] - 1.0 / t >= 0.0);
        CHECK(seq[n - 1] - 1.0 / t <= y * (1 + y) / t + 1e-12);
        if (n > 10) CHECK(seq[n - 1] <= seq[n - 2]);
      }
      CHECK(seq.back() == doctest::Approx(1.0 / t).epsilon(0.02));
    }
  }
  CHECK_THROWS_AS(moment_radius_sequence(p, 1), DomainError);
}

TEST_CASE("von Mises ratio") {
  const Params p(1.0, 2.0);
  auto fd_ratio = [&](double x) {
    const double h = 1e-4 * x;
    const double d = (pdf(x + h, p) - pdf(x - h, p)) / (2 * h);
    return d * survival(x, p) / (pdf(x, p) * pdf(x, p));
  };
  CHECK(std::abs(von_mises_ratio(50.0, p) + 1.0) <= 0.1);
  CHECK(std::abs(von_mises_ratio(200.0, p) + 1.0) <= 0.02);
  CHECK(von_mises_ratio(50.0, p) == doctest::Approx(fd_ratio(50.0)).epsilon(1e-5));
  CHECK(von_mises_ratio(3.0, p) == doctest::Approx(fd_ratio(3.0)).epsilon(1e-5));
  // depends only on (theta x, beta)
  for (double x : {0.4, 2.0, 30.0}) {
    CHECK(von_mises_ratio(x, Params(2.5, 3.0)) ==
          doctest::Approx(von_mises_ratio(2.5 * x, Params(1.0, 3.0))).epsilon(1e-13));
  }
  CHECK_THROWS_AS(von_mises_ratio(0.0, p), DomainError);
  CHECK_THROWS_AS(von_mises_ratio(1e5, p), NotEvaluableError);
}

TEST_CASE("method of moments") {
  for (double t : kThetas) {
    for (double b : kBetas) {
      const Params p(t, b);
      const Params fit = fit_from_moments(moment(1, p), moment(2, p));
      CHECK(std::abs(fit.theta() - t) <= 1e-9 * t);
      CHECK(std::abs(fit.beta() - b) <= 1e-9 * b);
    }
  }

  // the quadratic in beta has the true beta as a root
  const Params q(1.0, 2.0);
  const double m1 = moment(1, q), m2 = moment(2, q), b = 2.0;
  CHECK((2 * m1 * m1 - m2) * b * b + (4 * m1 * m1 - 2 * m2) * b - m2 ==
        doctest::Approx(0.0).epsilon(1e-12));

  const std::vector<double> same(20, 3.0);
  CHECK_THROWS_AS(fit_method_of_moments(same), FitInfeasibleError);
  try {
    fit_method_of_moments(same);
  } catch (const FitInfeasibleError& e) {
    CHECK(e.first_moment() == doctest::Approx(3.0));
    CHECK(e.second_moment() == doctest::Approx(9.0));
  }
  CHECK_THROWS_AS(fit_method_of_moments(std::vector<double>{1.0}), DomainError);
}

TEST_CASE("method of moments on a large simulated sample") {
  const Params p(1.0, 3.0);
  const std::size_t n = 1000000;
  const auto xs = draw_mixture(n, p, SeedSpec{20240611, 0});
  const Params fit = fit_method_of_moments(xs);
  // bootstrap standard error of theta-hat
  std::vector<double> thetas;
  for (std::uint64_t b = 0; b < 40; ++b) {
    StreamRng rng(SeedSpec{99, b});
    double s1 = 0, s2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = xs[static_cast<std::size_t>(rng.next_u64() % n)];
      s1 += x;
      s2 += x * x;
    }
    thetas.push_back(fit_from_moments(s1 / n, s2 / n).theta());
  }
  double mean = 0, var = 0;
  for (double t : thetas) mean += t / thetas.size();
  for (double t : thetas) var += (t - mean) * (t - mean) / (thetas.size() - 1);
  CHECK(std::abs(fit.theta() - 1.0) <= 3 * std::sqrt(var));
}
