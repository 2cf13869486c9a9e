#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "plevt/params.hpp"
#include "plevt/tail.hpp"

namespace plevt {

enum class ExperimentKind {
  max_gumbel,
  hill_clt,
  dh_clt,
  record_clt,
  sampler_gof,
  quantile_error_order
};

enum class ReferenceLaw { std_normal, gumbel, pseudo_lindley, none };

const char* to_string(ExperimentKind kind) noexcept;
const char* to_string(ReferenceLaw law) noexcept;
// Throws DomainError on an unknown name.
ExperimentKind parse_experiment_kind(const std::string& name);
ReferenceLaw parse_reference_law(const std::string& name);

struct Experiment {
  ExperimentKind kind = ExperimentKind::hill_clt;
  Params params{1.0, 2.0};
  // Sample size; for record_clt the record index.
  std::size_t n = 100000;
  // hill_clt / dh_clt only; default_hill_k(n) when absent.
  std::optional<std::size_t> k;
  WeightFunction f = WeightFunction::identity();
  double s = 1.0;
  std::size_t reps = 1000;
  std::uint64_t seed = 0;
};

// Pass rule: ks_distance <= ks, plus |mean| <= mean_abs and |var - 1| <= var_dev
// when those windows are set.
struct PassCriteria {
  double ks = 0.05;
  std::optional<double> mean_abs;
  std::optional<double> var_dev;
};

// Every threshold the harness applies. Defaults are the desk-scale engineering
// choices; the limit theorems give no finite-sample rates.
struct HarnessConfig {
  PassCriteria max_gumbel{0.05, std::nullopt, std::nullopt};
  PassCriteria hill{0.08, 0.15, 0.3};
  PassCriteria dh{0.1, 0.2, std::nullopt};
  PassCriteria record{0.05, 0.05, 0.1};

  double k1_bound = 1.5;
  double dh_variance_ratio_bound = 0.2;
  double dh_max_weight_bound = 0.3;
  // z_b is tested only when a_n / s_n reaches this.
  double dh_estimate_growth = 5.0;
  // k above max_k_fraction * n is refused.
  double max_k_fraction = 0.25;

  double sampler_alpha = 0.001;
  double sampler_moment_se = 4.0;

  double quantile_ratio_bound = 50.0;
  std::vector<double> quantile_grid_exponents{2, 4, 6, 8, 10, 12, 14};

  std::size_t min_reps = 100;
  bool enforce_conditions = true;
  bool allow_rerun = true;
  bool record_timing = true;
  // 0 picks std::thread::hardware_concurrency().
  unsigned workers = 0;
};

struct McReport {
  ExperimentKind kind = ExperimentKind::hill_clt;
  std::size_t reps = 0;
  std::size_t n = 0;
  std::size_t k = 0;
  double empirical_mean = 0.0;
  double empirical_var = 0.0;
  double ks_distance = 0.0;
  ReferenceLaw reference = ReferenceLaw::std_normal;
  double threshold = 0.0;
  bool passed = false;
  std::int64_t runtime_ms = 0;
  // Master seed the reported statistics came from (the derived seed after a re-run).
  std::uint64_t seed = 0;
  bool rerun = false;
  std::map<std::string, double> diagnostics;

  friend bool operator==(const McReport&, const McReport&) = default;
};

// Seed of the single automatic re-run after a failed attempt.
std::uint64_t rerun_seed(std::uint64_t seed) noexcept;

// Checks kind-specific preconditions and side conditions. Throws DomainError
// for malformed experiments and ConditionRefusedError (with diagnostics) when a
// limit-theorem condition is violated and cfg.enforce_conditions is set.
void validate_experiment(const Experiment& e, const HarnessConfig& cfg);

// Per-replication standardized statistics in replication order, for the
// replicated kinds (max_gumbel, hill_clt, dh_clt, record_clt). Replication i
// uses SeedSpec{e.seed, i}; the result does not depend on cfg.workers.
std::vector<double> replicate_statistics(const Experiment& e,
                                         const HarnessConfig& cfg);

McReport run_max_gumbel(const Experiment& e, const HarnessConfig& cfg = {});
McReport run_hill_clt(const Experiment& e, const HarnessConfig& cfg = {});
McReport run_dh_clt(const Experiment& e, const HarnessConfig& cfg = {});
McReport run_record_clt(const Experiment& e, const HarnessConfig& cfg = {});
McReport run_sampler_gof(const Experiment& e, const HarnessConfig& cfg = {});
McReport run_quantile_error_order(const Experiment& e,
                                  const HarnessConfig& cfg = {});

// Dispatches on e.kind and applies the re-run rule.
McReport run_experiment(const Experiment& e, const HarnessConfig& cfg = {});

// The standard verification batch at desk scale.
std::vector<Experiment> default_suite(std::uint64_t seed);

// Runs each experiment; refused experiments yield passed = false with
// diagnostics["refused"] = 1 and the condition values.
std::vector<McReport> run_suite(const std::vector<Experiment>& suite,
                                const HarnessConfig& cfg = {});

// JSON (snake_case keys) and CSV summary.
std::string to_json(const McReport& r, int indent = 2);
std::string to_json(const std::vector<McReport>& rs, int indent = 2);
McReport report_from_json(const std::string& text);
std::vector<McReport> reports_from_json(const std::string& text);
// Header kind,n,k,reps,mean,var,ks,passed then one row per report.
std::string csv_summary(const std::vector<McReport>& rs);

}  // namespace plevt
