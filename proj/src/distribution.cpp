#include "plevt/distribution.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "plevt/error.hpp"

namespace plevt {

double pdf(double x, const Params& p) noexcept {
  if (x < 0.0) return 0.0;
  const double t = p.theta();
  return t * (p.beta() - 1.0 + t * x) * std::exp(-t * x) / p.beta();
}

double survival(double x, const Params& p) noexcept {
  if (x < 0.0) return 1.0;
  const double t = p.theta();
  return (p.beta() + t * x) * std::exp(-t * x) / p.beta();
}

double log_survival(double x, const Params& p) noexcept {
  if (x < 0.0) return 0.0;
  const double tx = p.theta() * x;
  return std::log1p(tx / p.beta()) - tx;
}

double cdf(double x, const Params& p) noexcept {
  if (x < 0.0) return 0.0;
  // 1 - S(x) loses precision near 0; -expm1(log S) does not.
  return -std::expm1(log_survival(x, p));
}

double pdf_derivative(double x, const Params& p) noexcept {
  const double t = p.theta();
  return t * t * std::exp(-t * x) * (2.0 - p.beta() - t * x) / p.beta();
}

double log_moment(unsigned n, const Params& p) {
  if (n == 0) throw DomainError("moment order must be >= 1");
  const double nd = static_cast<double>(n);
  return std::lgamma(nd + 1.0) + std::log(p.beta() + nd) -
         nd * std::log(p.theta()) - std::log(p.beta());
}

double moment(unsigned n, const Params& p) {
  const double lm = log_moment(n, p);
  if (lm > std::log(std::numeric_limits<double>::max())) {
    std::ostringstream msg;
    msg << "moment of order " << n << " overflows (log value " << lm << ")";
    throw OutOfRangeError(msg.str());
  }
  // direct product while everything stays representable; exact for small n
  if (n <= 170) {
    const double nd = static_cast<double>(n);
    const double scale = std::pow(p.theta(), nd);
    const double direct = std::tgamma(nd + 1.0) * ((p.beta() + nd) / p.beta()) / scale;
    if (std::isnormal(scale) && std::isfinite(direct)) return direct;
  }
  return std::exp(lm);
}

std::vector<double> moment_radius_sequence(const Params& p, unsigned n_max) {
  if (n_max < 2) throw DomainError("moment_radius_sequence needs n_max >= 2");
  std::vector<double> r;
  r.reserve(n_max);
  for (unsigned k = 1; k <= n_max; ++k) {
    const double kd = static_cast<double>(k);
    // m_k / k! = (1 + k / beta) / theta^k
    r.push_back(std::exp(std::log1p(kd / p.beta()) / kd) / p.theta());
  }
  return r;
}

double von_mises_ratio(double x, const Params& p) {
  if (!(x > 0.0)) throw DomainError("von_mises_ratio needs x > 0");
  const double f = pdf(x, p);
  if (!(f > 0.0) || !std::isfinite(1.0 / (f * f))) {
    std::ostringstream msg;
    msg << "density underflows at x = " << x;
    throw NotEvaluableError(msg.str());
  }
  // The exponentials cancel: f' S / f^2 = (2 - beta - tx)(beta + tx) / (beta - 1 + tx)^2.
  const double tx = p.theta() * x;
  const double b = p.beta();
  const double g = b - 1.0 + tx;
  return (2.0 - b - tx) * (b + tx) / (g * g);
}

Params fit_from_moments(double m1, double m2) {
  // With c = m2 / m1^2 the moment equations reduce to
  // (2 - c) beta^2 + (4 - 2c) beta - c = 0, i.e. beta = sqrt(2 / (2 - c)) - 1,
  // which exceeds 1 exactly when 3/2 < c < 2.
  if (!(m1 > 0.0) || !(m2 > 0.0) || !std::isfinite(m1) || !std::isfinite(m2)) {
    throw FitInfeasibleError("empirical moments must be positive and finite",
                             m1, m2);
  }
  const double c = m2 / (m1 * m1);
  if (!(c > 1.5 && c < 2.0)) {
    std::ostringstream msg;
    msg << "no admissible root: m2/m1^2 = " << c << " outside (1.5, 2)";
    throw FitInfeasibleError(msg.str(), m1, m2);
  }
  const double beta = std::sqrt(2.0 / (2.0 - c)) - 1.0;
  const double theta = (beta + 1.0) / (beta * m1);
  if (!(beta > 1.0) || !(theta > 0.0) || !std::isfinite(theta)) {
    throw FitInfeasibleError("root outside the parameter space", m1, m2);
  }
  return Params(theta, beta);
}

Params fit_method_of_moments(std::span<const double> values) {
  if (values.size() < 2) {
    throw DomainError("method of moments needs at least two observations");
  }
  double s1 = 0.0, s2 = 0.0;
  for (double v : values) {
    s1 += v;
    s2 += v * v;
  }
  const double n = static_cast<double>(values.size());
  return fit_from_moments(s1 / n, s2 / n);
}

Params fit_method_of_moments(const SortedSample& sample) {
  return fit_method_of_moments(sample.values());
}

}  // namespace plevt
