#include "plevt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "plevt/distribution.hpp"
#include "plevt/error.hpp"
#include "plevt/gof.hpp"
#include "plevt/quantile.hpp"
#include "plevt/records.hpp"
#include "plevt/rng.hpp"
#include "plevt/sampling.hpp"

namespace plevt {

namespace {

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs body(i) for i in [0, count) on up to `workers` threads. Each index is
// handled exactly once; the first exception is rethrown after joining.
template <class Body>
void parallel_for(std::size_t count, unsigned workers, Body body) {
  workers = static_cast<unsigned>(
      std::min<std::size_t>(resolve_workers(workers), std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::size_t effective_k(const Experiment& e) {
  return e.k ? *e.k : default_hill_k(e.n);
}

double gamma_power(double gamma, double s) {
  return s == 1.0 ? gamma : std::pow(gamma, s);
}

struct Scored {
  SummaryStats stats;
  double ks = 0.0;
};

// Order-independent: statistics are taken over the sorted values.
Scored score(std::vector<double> values, ReferenceLaw law) {
  std::sort(values.begin(), values.end());
  Scored out;
  out.stats = summarize(values);
  if (law == ReferenceLaw::gumbel) {
    out.ks = ks_one_sample(values, gumbel_cdf);
  } else {
    out.ks = ks_one_sample(values, normal_cdf);
  }
  return out;
}

bool passes(const Scored& s, const PassCriteria& c) {
  bool ok = s.ks <= c.ks;
  if (c.mean_abs) ok = ok && std::abs(s.stats.mean) <= *c.mean_abs;
  if (c.var_dev) ok = ok && std::abs(s.stats.variance - 1.0) <= *c.var_dev;
  return ok;
}

McReport base_report(const Experiment& e, std::size_t k) {
  McReport r;
  r.kind = e.kind;
  r.reps = e.reps;
  r.n = e.n;
  r.k = k;
  r.seed = e.seed;
  return r;
}

void fill_scored(McReport& r, const Scored& s, const PassCriteria& c,
                 ReferenceLaw law) {
  r.empirical_mean = s.stats.mean;
  r.empirical_var = s.stats.variance;
  r.ks_distance = s.ks;
  r.reference = law;
  r.threshold = c.ks;
  r.passed = passes(s, c);
}

using Clock = std::chrono::steady_clock;

std::int64_t elapsed_ms(Clock::time_point start, const HarnessConfig& cfg) {
  if (!cfg.record_timing) return 0;
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start)
      .count();
}

void require_kind(const Experiment& e, ExperimentKind kind) {
  if (e.kind != kind) {
    throw DomainError(std::string("experiment kind is ") + to_string(e.kind) +
                      ", expected " + to_string(kind));
  }
}

// Per-replication outputs of the record experiment: the gamma-centred
// statistic, the exactly centred one and the gamma-sum control.
struct RecordOutputs {
  std::vector<double> standardized;
  std::vector<double> exact_centering;
  std::vector<double> gamma_control;
};

RecordOutputs record_outputs(const Experiment& e, const HarnessConfig& cfg) {
  const unsigned n = static_cast<unsigned>(e.n);
  RecordOutputs out;
  out.standardized.resize(e.reps);
  out.exact_centering.resize(e.reps);
  out.gamma_control.resize(e.reps);
  const double centre = quantile_from_log_tail(-static_cast<double>(n), e.params).value;
  const double scale = e.params.gamma() * std::sqrt(static_cast<double>(n));
  parallel_for(e.reps, cfg.workers, [&](std::size_t i) {
    StreamRng rng(SeedSpec{e.seed, i});
    const double g = gamma_sum(n, rng);
    const double x = record_from_gamma_sum(g, e.params);
    out.standardized[i] = standardized_record(x, n, e.params);
    out.exact_centering[i] = (x - centre) / scale;
    out.gamma_control[i] = (g - n) / std::sqrt(static_cast<double>(n));
  });
  return out;
}

struct DhOutputs {
  std::vector<double> z_sum;
  std::vector<double> z_estimate;
};

DhOutputs dh_outputs(const Experiment& e, const HarnessConfig& cfg) {
  const std::size_t k = effective_k(e);
  const double gamma = e.params.gamma();
  const double gamma_s = gamma_power(gamma, e.s);
  DhOutputs out;
  out.z_sum.resize(e.reps);
  out.z_estimate.resize(e.reps);
  parallel_for(e.reps, cfg.workers, [&](std::size_t i) {
    const SortedSample top =
        sample_mixture_top(e.n, k + 1, e.params, SeedSpec{e.seed, i});
    const TailStatistics ts = dh_statistic(top, e.f, k, e.s);
    const StandardizedTail z = standardize_dh(ts, gamma);
    out.z_sum[i] = z.z_sum / gamma_s;
    out.z_estimate[i] = z.z_estimate * e.s / gamma;
  });
  return out;
}

McReport with_rerun(const Experiment& e, const HarnessConfig& cfg,
                    McReport (*run)(const Experiment&, const HarnessConfig&)) {
  McReport first = run(e, cfg);
  if (first.passed || !cfg.allow_rerun) return first;
  Experiment again = e;
  again.seed = rerun_seed(e.seed);
  McReport second = run(again, cfg);
  second.rerun = true;
  second.diagnostics["first_attempt_ks"] = first.ks_distance;
  second.diagnostics["first_attempt_mean"] = first.empirical_mean;
  second.diagnostics["first_attempt_var"] = first.empirical_var;
  second.runtime_ms += first.runtime_ms;
  return second;
}

}  // namespace

const char* to_string(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::max_gumbel:
      return "max_gumbel";
    case ExperimentKind::hill_clt:
      return "hill_clt";
    case ExperimentKind::dh_clt:
      return "dh_clt";
    case ExperimentKind::record_clt:
      return "record_clt";
    case ExperimentKind::sampler_gof:
      return "sampler_gof";
    case ExperimentKind::quantile_error_order:
      return "quantile_error_order";
  }
  return "unknown";
}

const char* to_string(ReferenceLaw law) noexcept {
  switch (law) {
    case ReferenceLaw::std_normal:
      return "std_normal";
    case ReferenceLaw::gumbel:
      return "gumbel";
    case ReferenceLaw::pseudo_lindley:
      return "pseudo_lindley";
    case ReferenceLaw::none:
      return "none";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& name) {
  for (auto kind : {ExperimentKind::max_gumbel, ExperimentKind::hill_clt,
                    ExperimentKind::dh_clt, ExperimentKind::record_clt,
                    ExperimentKind::sampler_gof,
                    ExperimentKind::quantile_error_order}) {
    if (name == to_string(kind)) return kind;
  }
  throw DomainError("unknown experiment kind '" + name + "'");
}

ReferenceLaw parse_reference_law(const std::string& name) {
  for (auto law : {ReferenceLaw::std_normal, ReferenceLaw::gumbel,
                   ReferenceLaw::pseudo_lindley, ReferenceLaw::none}) {
    if (name == to_string(law)) return law;
  }
  throw DomainError("unknown reference law '" + name + "'");
}

std::uint64_t rerun_seed(std::uint64_t seed) noexcept { return splitmix64(seed); }

void validate_experiment(const Experiment& e, const HarnessConfig& cfg) {
  const bool replicated = e.kind != ExperimentKind::sampler_gof &&
                          e.kind != ExperimentKind::quantile_error_order;
  if (replicated && e.reps < cfg.min_reps) {
    std::ostringstream msg;
    msg << "reps = " << e.reps << " below the minimum " << cfg.min_reps;
    throw DomainError(msg.str());
  }
  switch (e.kind) {
    case ExperimentKind::max_gumbel:
      if (e.n < 2) throw DomainError("max_gumbel needs n >= 2");
      return;
    case ExperimentKind::record_clt:
      if (e.n < 1) throw DomainError("record_clt needs a record index n >= 1");
      return;
    case ExperimentKind::sampler_gof:
      if (e.n < 2) throw DomainError("sampler_gof needs n >= 2");
      return;
    case ExperimentKind::quantile_error_order:
      return;
    case ExperimentKind::hill_clt:
    case ExperimentKind::dh_clt:
      break;
  }

  if (e.n < 3) throw DomainError("tail experiments need n >= 3");
  const std::size_t k = effective_k(e);
  const bool dh = e.kind == ExperimentKind::dh_clt;
  if (k < 2 || k + 1 > e.n) {
    std::ostringstream msg;
    msg << "k = " << k << " outside [2, " << e.n - 1 << "]";
    throw DomainError(msg.str());
  }
  if (dh) {
    if (!(e.s >= 1.0)) throw DomainError("s must be >= 1");
    e.f.require_covers(k);
  }
  if (!cfg.enforce_conditions) return;

  std::map<std::string, double> diag;
  const double k1 = check_k1(e.n, k);
  diag["k1"] = k1;
  diag["k"] = static_cast<double>(k);
  diag["n"] = static_cast<double>(e.n);
  if (static_cast<double>(k) > cfg.max_k_fraction * static_cast<double>(e.n)) {
    throw ConditionRefusedError("k exceeds the allowed fraction of n", diag);
  }
  if (!dh) {
    if (k1 > cfg.k1_bound) {
      std::ostringstream msg;
      msg << "rate condition violated: k^{3/4}/log n = " << k1 << " > "
          << cfg.k1_bound;
      throw ConditionRefusedError(msg.str(), diag);
    }
    return;
  }
  const DhConditions c = check_dh_conditions(e.f, e.n, k, e.s);
  diag["variance_ratio"] = c.variance_ratio;
  diag["max_weight_ratio"] = c.max_weight_ratio;
  diag["growth"] = c.growth;
  if (c.variance_ratio > cfg.dh_variance_ratio_bound ||
      c.max_weight_ratio > cfg.dh_max_weight_bound) {
    std::ostringstream msg;
    msg << "functional Hill conditions violated: variance ratio "
        << c.variance_ratio << " (bound " << cfg.dh_variance_ratio_bound
        << "), max weight ratio " << c.max_weight_ratio << " (bound "
        << cfg.dh_max_weight_bound << ")";
    throw ConditionRefusedError(msg.str(), diag);
  }
}

std::vector<double> replicate_statistics(const Experiment& e,
                                         const HarnessConfig& cfg) {
  validate_experiment(e, cfg);
  std::vector<double> out(e.reps);
  switch (e.kind) {
    case ExperimentKind::max_gumbel: {
      const double centre = quantile_exact(1.0 / static_cast<double>(e.n), e.params).value;
      parallel_for(e.reps, cfg.workers, [&](std::size_t i) {
        const SortedSample top = sample_mixture_top(e.n, 1, e.params, SeedSpec{e.seed, i});
        out[i] = e.params.theta() * (top.upper(1) - centre);
      });
      return out;
    }
    case ExperimentKind::hill_clt: {
      const std::size_t k = effective_k(e);
      const double gamma = e.params.gamma();
      const double root_k = std::sqrt(static_cast<double>(k));
      parallel_for(e.reps, cfg.workers, [&](std::size_t i) {
        const SortedSample top =
            sample_mixture_top(e.n, k + 1, e.params, SeedSpec{e.seed, i});
        out[i] = root_k * (hill(top, k) - gamma) / gamma;
      });
      return out;
    }
    case ExperimentKind::dh_clt:
      return dh_outputs(e, cfg).z_sum;
    case ExperimentKind::record_clt:
      return record_outputs(e, cfg).standardized;
    case ExperimentKind::sampler_gof:
    case ExperimentKind::quantile_error_order:
      break;
  }
  throw DomainError(std::string(to_string(e.kind)) + " is not a replicated experiment");
}

McReport run_max_gumbel(const Experiment& e, const HarnessConfig& cfg) {
  require_kind(e, ExperimentKind::max_gumbel);
  const auto start = Clock::now();
  McReport r = base_report(e, 0);
  const Scored s = score(replicate_statistics(e, cfg), ReferenceLaw::gumbel);
  fill_scored(r, s, cfg.max_gumbel, ReferenceLaw::gumbel);
  r.diagnostics["centre"] = quantile_exact(1.0 / static_cast<double>(e.n), e.params).value;
  r.runtime_ms = elapsed_ms(start, cfg);
  return r;
}

McReport run_hill_clt(const Experiment& e, const HarnessConfig& cfg) {
  require_kind(e, ExperimentKind::hill_clt);
  const auto start = Clock::now();
  const std::size_t k = effective_k(e);
  McReport r = base_report(e, k);
  const Scored s = score(replicate_statistics(e, cfg), ReferenceLaw::std_normal);
  fill_scored(r, s, cfg.hill, ReferenceLaw::std_normal);
  r.diagnostics["k1"] = check_k1(e.n, k);
  r.runtime_ms = elapsed_ms(start, cfg);
  return r;
}

McReport run_dh_clt(const Experiment& e, const HarnessConfig& cfg) {
  require_kind(e, ExperimentKind::dh_clt);
  const auto start = Clock::now();
  validate_experiment(e, cfg);
  const std::size_t k = effective_k(e);
  McReport r = base_report(e, k);
  DhOutputs out = dh_outputs(e, cfg);
  const Scored s = score(std::move(out.z_sum), ReferenceLaw::std_normal);
  fill_scored(r, s, cfg.dh, ReferenceLaw::std_normal);

  const DhConditions c = check_dh_conditions(e.f, e.n, k, e.s);
  r.diagnostics["variance_ratio"] = c.variance_ratio;
  r.diagnostics["max_weight_ratio"] = c.max_weight_ratio;
  r.diagnostics["growth"] = c.growth;
  r.diagnostics["s"] = e.s;
  if (c.growth >= cfg.dh_estimate_growth) {
    const Scored zb = score(std::move(out.z_estimate), ReferenceLaw::std_normal);
    r.diagnostics["estimate_mean"] = zb.stats.mean;
    r.diagnostics["estimate_var"] = zb.stats.variance;
    r.diagnostics["estimate_ks"] = zb.ks;
  }
  r.runtime_ms = elapsed_ms(start, cfg);
  return r;
}

McReport run_record_clt(const Experiment& e, const HarnessConfig& cfg) {
  require_kind(e, ExperimentKind::record_clt);
  const auto start = Clock::now();
  validate_experiment(e, cfg);
  McReport r = base_report(e, 0);
  RecordOutputs out = record_outputs(e, cfg);
  const Scored s = score(std::move(out.standardized), ReferenceLaw::std_normal);
  fill_scored(r, s, cfg.record, ReferenceLaw::std_normal);
  const Scored exact = score(std::move(out.exact_centering), ReferenceLaw::std_normal);
  const Scored control = score(std::move(out.gamma_control), ReferenceLaw::std_normal);
  r.diagnostics["exact_centering_mean"] = exact.stats.mean;
  r.diagnostics["exact_centering_var"] = exact.stats.variance;
  r.diagnostics["exact_centering_ks"] = exact.ks;
  r.diagnostics["gamma_control_mean"] = control.stats.mean;
  r.diagnostics["gamma_control_var"] = control.stats.variance;
  r.diagnostics["gamma_control_ks"] = control.ks;
  r.runtime_ms = elapsed_ms(start, cfg);
  return r;
}

McReport run_sampler_gof(const Experiment& e, const HarnessConfig& cfg) {
  require_kind(e, ExperimentKind::sampler_gof);
  const auto start = Clock::now();
  validate_experiment(e, cfg);
  McReport r = base_report(e, 0);
  r.reps = 1;
  const Params p = e.params;
  const SortedSample mix = sample_mixture(e.n, p, SeedSpec{e.seed, 0});
  const SortedSample inv = sample_inverse_cdf(e.n, p, SeedSpec{e.seed, 1});
  const SummaryStats st = summarize(mix.values());

  r.empirical_mean = st.mean;
  r.empirical_var = st.variance;
  r.reference = ReferenceLaw::pseudo_lindley;
  r.ks_distance = ks_one_sample(mix.values(), [&](double x) { return cdf(x, p); });
  r.threshold = ks_critical_one_sample(e.n, cfg.sampler_alpha);

  const double two_sample = ks_two_sample(mix.values(), inv.values());
  const double two_sample_crit = ks_critical_two_sample(e.n, e.n, cfg.sampler_alpha);
  const double m1 = moment(1, p);
  const double var = moment(2, p) - m1 * m1;
  const double mean_z = (st.mean - m1) / std::sqrt(var / static_cast<double>(e.n));

  r.diagnostics["two_sample_ks"] = two_sample;
  r.diagnostics["two_sample_threshold"] = two_sample_crit;
  r.diagnostics["mean_z"] = mean_z;
  r.diagnostics["model_mean"] = m1;
  r.diagnostics["model_var"] = var;
  r.passed = r.ks_distance <= r.threshold && two_sample <= two_sample_crit &&
             std::abs(mean_z) <= cfg.sampler_moment_se;
  r.runtime_ms = elapsed_ms(start, cfg);
  return r;
}

McReport run_quantile_error_order(const Experiment& e, const HarnessConfig& cfg) {
  require_kind(e, ExperimentKind::quantile_error_order);
  const auto start = Clock::now();
  McReport r = base_report(e, 0);
  r.reps = 1;
  r.n = 0;
  r.reference = ReferenceLaw::none;
  r.threshold = cfg.quantile_ratio_bound;

  std::vector<double> scaled;
  std::vector<double> raw;
  for (double ex : cfg.quantile_grid_exponents) {
    const double u = std::pow(10.0, -ex);
    const double l = -std::log(u);
    const double err =
        std::abs(quantile_exact(u, e.params).value - quantile_expansion(u, e.params));
    raw.push_back(err);
    scaled.push_back(err * l * l);
    std::ostringstream key;
    key << "scaled_error_1e-" << ex;
    r.diagnostics[key.str()] = err * l * l;
  }
  const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
  const double ratio = *hi / *lo;
  bool monotone = true;
  for (std::size_t i = 1; i < raw.size(); ++i) monotone = monotone && raw[i] < raw[i - 1];

  const SummaryStats st = summarize(scaled);
  r.empirical_mean = st.mean;
  r.empirical_var = st.variance;
  r.diagnostics["ratio"] = ratio;
  r.diagnostics["raw_error_monotone_decreasing"] = monotone ? 1.0 : 0.0;
  r.passed = ratio <= cfg.quantile_ratio_bound;
  r.runtime_ms = elapsed_ms(start, cfg);
  return r;
}

McReport run_experiment(const Experiment& e, const HarnessConfig& cfg) {
  switch (e.kind) {
    case ExperimentKind::max_gumbel:
      return with_rerun(e, cfg, run_max_gumbel);
    case ExperimentKind::hill_clt:
      return with_rerun(e, cfg, run_hill_clt);
    case ExperimentKind::dh_clt:
      return with_rerun(e, cfg, run_dh_clt);
    case ExperimentKind::record_clt:
      return with_rerun(e, cfg, run_record_clt);
    case ExperimentKind::sampler_gof:
      return with_rerun(e, cfg, run_sampler_gof);
    case ExperimentKind::quantile_error_order:
      return run_quantile_error_order(e, cfg);
  }
  throw DomainError("unknown experiment kind");
}

std::vector<Experiment> default_suite(std::uint64_t seed) {
  const Params base(1.0, 2.0);
  std::vector<Experiment> suite;
  auto add = [&](ExperimentKind kind, std::size_t n, std::size_t reps) -> Experiment& {
    Experiment e;
    e.kind = kind;
    e.params = base;
    e.n = n;
    e.reps = reps;
    e.seed = seed;
    suite.push_back(e);
    return suite.back();
  };
  add(ExperimentKind::sampler_gof, 100000, 1);
  add(ExperimentKind::max_gumbel, 100000, 2000);
  add(ExperimentKind::hill_clt, 100000, 3000);
  for (std::size_t k : {20, 50}) {
    Experiment& a = add(ExperimentKind::dh_clt, 100000, 3000);
    a.k = k;
    a.s = 2.0;
    Experiment& b = add(ExperimentKind::dh_clt, 100000, 3000);
    b.k = k;
    b.f = WeightFunction::power(0.5);
  }
  add(ExperimentKind::record_clt, 400, 5000);
  add(ExperimentKind::quantile_error_order, 0, 1);
  add(ExperimentKind::quantile_error_order, 0, 1).params = Params(3.0, 1.5);
  return suite;
}

std::vector<McReport> run_suite(const std::vector<Experiment>& suite,
                                const HarnessConfig& cfg) {
  std::vector<McReport> out;
  out.reserve(suite.size());
  for (const Experiment& e : suite) {
    try {
      out.push_back(run_experiment(e, cfg));
    } catch (const ConditionRefusedError& refused) {
      McReport r = base_report(
          e, e.k ? *e.k : (e.n >= 3 ? default_hill_k(e.n) : 0));
      r.reference = ReferenceLaw::std_normal;
      r.passed = false;
      r.diagnostics = refused.diagnostics();
      r.diagnostics["refused"] = 1.0;
      out.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace plevt
