#include "plevt/quantile.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "plevt/distribution.hpp"
#include "plevt/error.hpp"

namespace plevt {

namespace {

constexpr int kMaxIterations = 200;
constexpr double kLogTolerance = 1e-13;

[[noreturn]] void domain(const char* what, double u) {
  std::ostringstream msg;
  msg << what << ", got u = " << u;
  throw DomainError(msg.str());
}

// Solve g(x) = log S(x) - log_u = 0. g is strictly decreasing on [0, inf)
// with g(0) = -log_u > 0 and g'(x) = -f(x)/S(x) = -theta (beta - 1 + tx)/(beta + tx).
QuantileResult solve_log_tail(double log_u, const Params& p) {
  const double theta = p.theta();
  const double beta = p.beta();
  auto g = [&](double x) { return log_survival(x, p) - log_u; };

  const double big_l = -log_u;
  // One fixed-point step of theta x = L + log1p(theta x / beta) from theta x = L.
  double x = (big_l + std::log1p(big_l / beta)) / theta;

  double lo = 0.0;
  double hi = x;
  while (g(hi) > 0.0) {
    lo = hi;
    hi = 2.0 * hi + 1.0 / theta;
  }

  int it = 0;
  double gx = g(x);
  for (; it < kMaxIterations; ++it) {
    if (std::abs(gx) <= kLogTolerance) break;
    if (gx > 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double tx = theta * x;
    const double slope = -theta * (beta - 1.0 + tx) / (beta + tx);
    double next = x - gx / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == x || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
      x = next;
      gx = g(x);
      break;
    }
    x = next;
    gx = g(x);
  }
  return {x, it, gx, QuantileMethod::root_solve};
}

}  // namespace

const char* to_string(QuantileMethod m) noexcept {
  switch (m) {
    case QuantileMethod::root_solve:
      return "root_solve";
    case QuantileMethod::expansion:
      return "expansion";
    case QuantileMethod::expansion_integral:
      return "expansion_integral";
  }
  return "unknown";
}

QuantileResult quantile_exact(double u, const Params& p) {
  if (!(u > 0.0 && u < 1.0)) domain("tail mass must lie in (0, 1)", u);
  QuantileResult r = solve_log_tail(std::log(u), p);
  r.residual = survival(r.value, p) - u;
  return r;
}

QuantileResult quantile_from_log_tail(double log_u, const Params& p) {
  if (!(log_u < 0.0) || std::isnan(log_u) || std::isinf(log_u)) {
    std::ostringstream msg;
    msg << "log tail mass must be finite and < 0, got " << log_u;
    throw DomainError(msg.str());
  }
  return solve_log_tail(log_u, p);
}

double quantile_expansion(double u, const Params& p) {
  if (!(u > 0.0 && u < std::exp(-1.0))) {
    domain("two-term expansion needs 0 < u < e^{-1}", u);
  }
  const double l = -std::log(u);
  return (l - std::log(l)) / p.theta();
}

double quantile_expansion_integral_form(double u, const Params& p) {
  if (!(u > 0.0 && u < 0.5)) domain("integral-form expansion needs 0 < u < 1/2", u);
  const double l = -std::log(u);
  const double log_log_2 = std::log(std::numbers::ln2);
  const double integral = std::log(l) - log_log_2;
  const double d = -log_log_2 / p.theta();
  return d + (l - integral) / p.theta();
}

ExpansionTerms expansion_intermediates(double u, const Params& p) {
  const QuantileResult q = quantile_exact(u, p);
  if (!(q.value > 0.0)) domain("expansion intermediates need quantile > 0", u);
  ExpansionTerms t;
  t.x = q.value;
  t.log_inv_u = -std::log(u);
  t.ratio_r = p.beta() / p.theta();
  t.a = std::log1p(t.ratio_r / t.x);
  t.b = -std::log(t.ratio_r) + std::log(t.x) + t.a;
  t.d = -std::log(t.ratio_r) + t.a;
  t.h = t.b / t.log_inv_u;
  t.fixed_point_residual = p.theta() * t.x - t.log_inv_u - t.b;
  return t;
}

}  // namespace plevt
