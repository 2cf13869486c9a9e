#include "plevt/tail.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "plevt/error.hpp"
#include "plevt/io.hpp"

namespace plevt {

namespace {

// Kahan-Babuska (Neumaier) summation.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Gamma(x) for x >= 1: tgamma while representable, log-gamma beyond.
double gamma_fn(double x) {
  if (x < 171.0) return std::tgamma(x);
  return std::exp(std::lgamma(x));
}

void require_s(double s) {
  if (!(s >= 1.0) || !std::isfinite(s)) {
    std::ostringstream msg;
    msg << "index s must be finite and >= 1, got " << s;
    throw DomainError(msg.str());
  }
}

void require_k_for_sample(const SortedSample& sample, std::size_t k,
                          std::size_t k_min) {
  const std::size_t n = sample.size();
  if (k < k_min || k + 1 > n) {
    std::ostringstream msg;
    msg << "k = " << k << " outside [" << k_min << ", "
        << (n > 0 ? n - 1 : 0) << "] for a sample of size " << n;
    throw DomainError(msg.str());
  }
}

// f(j) / j^s; division keeps f = identity, s = 1 exact.
double weight_over_power(const WeightFunction& f, std::size_t j, double s) {
  const double jd = static_cast<double>(j);
  return f(j) / std::pow(jd, s);
}

}  // namespace

WeightFunction WeightFunction::identity() { return {Kind::identity, 1.0, {}}; }

WeightFunction WeightFunction::power(double exponent) {
  if (!std::isfinite(exponent)) throw DomainError("power exponent must be finite");
  return {Kind::power, exponent, {}};
}

WeightFunction WeightFunction::log1p() { return {Kind::log1p, 0.0, {}}; }

WeightFunction WeightFunction::table(std::vector<double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
      std::ostringstream msg;
      msg << "weight table entry " << i + 1 << " must be finite and > 0";
      throw DomainError(msg.str());
    }
  }
  if (values.empty()) throw DomainError("weight table is empty");
  return {Kind::table, 0.0, std::move(values)};
}

double WeightFunction::operator()(std::size_t j) const {
  if (j == 0) throw DomainError("weight function is defined for j >= 1");
  const double jd = static_cast<double>(j);
  switch (kind_) {
    case Kind::identity:
      return jd;
    case Kind::power:
      return std::pow(jd, exponent_);
    case Kind::log1p:
      return std::log1p(jd);
    case Kind::table:
      if (j > table_.size()) {
        std::ostringstream msg;
        msg << "weight table has " << table_.size() << " entries, j = " << j;
        throw DomainError(msg.str());
      }
      return table_[j - 1];
  }
  return 0.0;
}

void WeightFunction::require_covers(std::size_t k) const {
  if (kind_ == Kind::table && k > table_.size()) {
    std::ostringstream msg;
    msg << "weight table has " << table_.size() << " entries but k = " << k;
    throw DomainError(msg.str());
  }
}

WeightFunction WeightFunction::parse(const std::string& spec) {
  if (spec == "identity") return identity();
  if (spec == "log1p") return log1p();
  if (spec.rfind("pow:", 0) == 0) {
    const std::string arg = spec.substr(4);
    std::size_t used = 0;
    double a = 0.0;
    try {
      a = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != arg.size()) {
      throw DomainError("cannot parse power exponent in weight spec '" + spec + "'");
    }
    return power(a);
  }
  if (spec.rfind("table:", 0) == 0) {
    const std::string path = spec.substr(6);
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open weight table '" + path + "'");
    return table(read_values(in));
  }
  throw DomainError("unknown weight spec '" + spec +
                    "' (expected identity, pow:<a>, log1p or table:<path>)");
}

std::string WeightFunction::describe() const {
  switch (kind_) {
    case Kind::identity:
      return "identity";
    case Kind::power: {
      std::ostringstream out;
      out << "pow:" << exponent_;
      return out.str();
    }
    case Kind::log1p:
      return "log1p";
    case Kind::table:
      return "table[" + std::to_string(table_.size()) + "]";
  }
  return "unknown";
}

double hill(const SortedSample& sample, std::size_t k) {
  require_k_for_sample(sample, k, 1);
  CompensatedSum sum;
  for (std::size_t j = 1; j <= k; ++j) {
    sum.add(static_cast<double>(j) * (sample.upper(j) - sample.upper(j + 1)));
  }
  return sum.value() / static_cast<double>(k);
}

double dh_variance_constant(double s) {
  require_s(s);
  const double g1 = gamma_fn(s + 1.0);
  return gamma_fn(2.0 * s + 1.0) - g1 * g1;
}

double dh_centering(const WeightFunction& f, std::size_t k, double s) {
  require_s(s);
  if (k < 1) throw DomainError("k must be >= 1");
  f.require_covers(k);
  CompensatedSum sum;
  for (std::size_t j = 1; j <= k; ++j) sum.add(weight_over_power(f, j, s));
  return gamma_fn(s + 1.0) * sum.value();
}

double dh_scale(const WeightFunction& f, std::size_t k, double s) {
  require_s(s);
  if (k < 1) throw DomainError("k must be >= 1");
  f.require_covers(k);
  CompensatedSum sum;
  for (std::size_t j = 1; j <= k; ++j) {
    const double w = weight_over_power(f, j, s);
    sum.add(w * w);
  }
  return std::sqrt(dh_variance_constant(s) * sum.value());
}

double dh_max_weight_ratio(const WeightFunction& f, std::size_t k, double s) {
  const double scale = dh_scale(f, k, s);
  double best = 0.0;
  for (std::size_t j = 1; j <= k; ++j) {
    best = std::max(best, weight_over_power(f, j, s));
  }
  return best / scale;
}

TailStatistics dh_statistic(const SortedSample& sample, const WeightFunction& f,
                            std::size_t k, double s) {
  require_s(s);
  require_k_for_sample(sample, k, 2);
  f.require_covers(k);

  TailStatistics ts;
  ts.k = k;
  ts.s = s;
  ts.hill = hill(sample, k);

  CompensatedSum sum;
  for (std::size_t j = 1; j <= k; ++j) {
    const double spacing = sample.upper(j) - sample.upper(j + 1);
    sum.add(f(j) * (s == 1.0 ? spacing : std::pow(spacing, s)));
  }
  ts.weighted_sum = sum.value();
  if (!(ts.weighted_sum > 0.0)) {
    throw DegenerateSampleError("all top-k spacings are zero");
  }
  ts.centering = dh_centering(f, k, s);
  ts.scale = dh_scale(f, k, s);
  ts.max_weight_ratio = dh_max_weight_ratio(f, k, s);
  const double ratio = ts.weighted_sum / ts.centering;
  ts.estimate = s == 1.0 ? ratio : std::pow(ratio, 1.0 / s);
  return ts;
}

StandardizedTail standardize_dh(const TailStatistics& ts, double gamma) {
  const double gamma_s = ts.s == 1.0 ? gamma : std::pow(gamma, ts.s);
  return {(ts.weighted_sum - gamma_s * ts.centering) / ts.scale,
          (ts.centering / ts.scale) * (ts.estimate - gamma)};
}

double check_k1(std::size_t n, std::size_t k) {
  if (n < 3) throw DomainError("check_k1 needs n >= 3");
  if (k < 1) throw DomainError("check_k1 needs k >= 1");
  return std::pow(static_cast<double>(k), 0.75) /
         std::log(static_cast<double>(n));
}

std::size_t default_hill_k(std::size_t n) {
  if (n < 3) throw DomainError("default_hill_k needs n >= 3");
  const double raw = std::floor(std::pow(std::log(static_cast<double>(n)), 0.8));
  const std::size_t k = std::max<std::size_t>(5, static_cast<std::size_t>(raw));
  return std::min(k, n - 1);
}

DhConditions check_dh_conditions(const WeightFunction& f, std::size_t n,
                                 std::size_t k, double s) {
  if (n < 3) throw DomainError("check_dh_conditions needs n >= 3");
  const double scale_s = dh_scale(f, k, s);
  const double scale_1 = dh_scale(f, k, 1.0);
  return {scale_1 / (scale_s * std::log(static_cast<double>(n))),
          dh_max_weight_ratio(f, k, s), dh_centering(f, k, s) / scale_s};
}

}  // namespace plevt
