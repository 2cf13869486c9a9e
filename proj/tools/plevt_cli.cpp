// plevt: command-line front end for the Pseudo-Lindley extreme-value library.
//
// Exit codes: 0 ok/passed, 1 verify failed, 2 usage, 3 write error,
// 4 parse error, 5 precondition or condition-check refusal.

#include <CLI11.hpp>
#include <algorithm>
#include <json.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "plevt/distribution.hpp"
#include "plevt/error.hpp"
#include "plevt/harness.hpp"
#include "plevt/io.hpp"
#include "plevt/quantile.hpp"
#include "plevt/records.hpp"
#include "plevt/sampling.hpp"
#include "plevt/tail.hpp"

namespace {

using namespace plevt;

enum ExitCode : int {
  kOk = 0,
  kVerifyFailed = 1,
  kUsage = 2,
  kWriteError = 3,
  kParseError = 4,
  kRefused = 5,
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct WriteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Input violates a command precondition (exit 5).
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string env_name(const std::string& flag) {
  std::string out = "PLEVT_";
  for (char c : flag) out += c == '-' ? '_' : static_cast<char>(std::toupper(c));
  return out;
}

template <class T>
CLI::Option* add(CLI::App* app, const std::string& names, const std::string& env,
                 T& target, const std::string& help) {
  return app->add_option(names, target, help)->envname(env_name(env));
}

struct ModelFlags {
  double theta = 1.0;
  double beta = 2.0;

  void attach(CLI::App* app) {
    add(app, "--theta", "theta", theta, "rate parameter (> 0)")->capture_default_str();
    add(app, "--beta", "beta", beta, "shape parameter (> 1)")->capture_default_str();
  }

  Params params() const {
    if (!std::isfinite(theta) || !(theta > 0.0)) {
      throw UsageError("invalid --theta: must be finite and > 0");
    }
    if (!std::isfinite(beta) || !(beta > 1.0)) {
      throw UsageError("invalid --beta: must be finite and > 1");
    }
    return Params(theta, beta);
  }
};

struct OutputFlags {
  std::string output;
  std::string format = "csv";

  void attach(CLI::App* app, bool with_format = true) {
    add(app, "-o,--output", "output", output, "output path (default: stdout)");
    if (with_format) {
      add(app, "--format", "format", format, "csv or json")
          ->check(CLI::IsMember({"csv", "json"}))
          ->capture_default_str();
    }
  }
};

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw WriteError("cannot open '" + path + "' for writing");
  out << content;
  out.close();
  if (!out) throw WriteError("failed writing '" + path + "'");
}

std::vector<double> read_input(const std::string& path) {
  if (path.empty() || path == "-") return read_values(std::cin);
  return read_values_file(path);
}

std::string input_name(const std::string& path) {
  return path.empty() || path == "-" ? std::string("<stdin>") : path;
}

std::string fmt(double v) { return format_double(v); }

// ---------------------------------------------------------------- eval

struct EvalCmd {
  ModelFlags model;
  std::string fn;
  std::vector<double> xs;
  std::vector<double> us;
  unsigned order = 1;

  void attach(CLI::App* app) {
    model.attach(app);
    add(app, "--fn", "fn", fn,
        "pdf | cdf | survival | quantile | moment | radius | von_mises")
        ->required()
        ->check(CLI::IsMember(
            {"pdf", "cdf", "survival", "quantile", "moment", "radius", "von_mises"}));
    add(app, "--x", "x", xs, "evaluation points");
    add(app, "--u", "u", us, "tail masses for --fn quantile");
    add(app, "--n", "n", order, "moment order, or n_max for radius");
  }

  int run() const {
    const Params p = model.params();
    std::ostringstream out;
    auto need_x = [&] {
      if (xs.empty()) throw UsageError("--fn " + fn + " needs --x");
    };
    if (fn == "pdf" || fn == "cdf" || fn == "survival" || fn == "von_mises") {
      need_x();
      for (double x : xs) {
        double v = 0.0;
        if (fn == "pdf") {
          v = pdf(x, p);
        } else if (fn == "cdf") {
          v = cdf(x, p);
        } else if (fn == "survival") {
          v = survival(x, p);
        } else {
          v = von_mises_ratio(x, p);
        }
        out << fmt(v) << '\n';
      }
    } else if (fn == "quantile") {
      if (us.empty()) throw UsageError("--fn quantile needs --u");
      for (double u : us) {
        if (!(u > 0.0 && u < 1.0)) throw UsageError("invalid --u: tail mass must lie in (0, 1)");
        out << fmt(quantile_exact(u, p).value) << '\n';
      }
    } else if (fn == "moment") {
      if (order < 1) throw UsageError("invalid --n: moment order must be >= 1");
      out << fmt(moment(order, p)) << '\n';
    } else {
      if (order < 2) throw UsageError("invalid --n: radius needs n_max >= 2");
      for (double r : moment_radius_sequence(p, order)) out << fmt(r) << '\n';
    }
    emit("", out.str());
    return kOk;
  }
};

// ---------------------------------------------------------------- sample

struct SampleCmd {
  ModelFlags model;
  OutputFlags io;
  long long n = -1;
  std::optional<std::uint64_t> seed;
  std::uint64_t stream = 0;
  bool sorted = false;
  std::string method = "mixture";

  void attach(CLI::App* app) {
    model.attach(app);
    io.attach(app, false);
    add(app, "-n,--n", "n", n, "number of draws (>= 1)")->required();
    add(app, "--seed", "seed", seed, "master seed");
    add(app, "--stream", "stream", stream, "stream id");
    app->add_flag("--sorted", sorted, "emit ascending order statistics")
        ->envname(env_name("sorted"));
    add(app, "--method", "method", method, "mixture or inverse")
        ->check(CLI::IsMember({"mixture", "inverse"}))
        ->capture_default_str();
  }

  int run() const {
    const Params p = model.params();
    if (n < 1) throw UsageError("invalid -n: must be >= 1");
    if (!seed) std::cerr << "warning: no --seed given, using 0\n";
    const SeedSpec spec{seed.value_or(0), stream};
    const auto count = static_cast<std::size_t>(n);
    std::vector<double> values;
    if (method == "mixture") {
      values = draw_mixture(count, p, spec);
      if (sorted) std::sort(values.begin(), values.end());
    } else {
      StreamRng rng(spec);
      values.reserve(count);
      for (std::size_t i = 0; i < count; ++i) {
        values.push_back(quantile_exact(rng.uniform_open(), p).value);
      }
      if (sorted) std::sort(values.begin(), values.end());
    }
    std::ostringstream out;
    write_values(out, values);
    emit(io.output, out.str());
    return kOk;
  }
};

// ---------------------------------------------------------------- fit

struct FitCmd {
  OutputFlags io;
  std::string input;

  void attach(CLI::App* app) {
    io.attach(app);
    add(app, "-i,--input", "input", input, "CSV of observations (default: stdin)");
  }

  int run() const {
    const std::vector<double> values = read_input(input);
    if (values.size() < 2) throw PreconditionError("fit needs at least two observations");
    double s1 = 0.0, s2 = 0.0;
    for (double v : values) {
      s1 += v;
      s2 += v * v;
    }
    const double n = static_cast<double>(values.size());
    const Params p = fit_from_moments(s1 / n, s2 / n);
    std::ostringstream out;
    if (io.format == "json") {
      out << "{\"theta\": " << fmt(p.theta()) << ", \"beta\": " << fmt(p.beta())
          << ", \"n\": " << values.size() << "}\n";
    } else {
      out << "theta,beta,n\n" << fmt(p.theta()) << ',' << fmt(p.beta()) << ','
          << values.size() << '\n';
    }
    emit(io.output, out.str());
    return kOk;
  }
};

// ---------------------------------------------------------------- hill

std::vector<std::size_t> parse_k_grid(const std::string& grid) {
  // a:b or a:b:step
  std::vector<long long> parts;
  std::stringstream ss(grid);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("invalid --k-grid '" + grid + "': expected a:b or a:b:step");
    }
  }
  if (parts.size() < 2 || parts.size() > 3) {
    throw UsageError("invalid --k-grid '" + grid + "': expected a:b or a:b:step");
  }
  const long long step = parts.size() == 3 ? parts[2] : 1;
  if (parts[0] < 1 || parts[1] < parts[0] || step < 1) {
    throw UsageError("invalid --k-grid '" + grid + "': need 1 <= a <= b, step >= 1");
  }
  std::vector<std::size_t> ks;
  for (long long k = parts[0]; k <= parts[1]; k += step) ks.push_back(static_cast<std::size_t>(k));
  return ks;
}

struct HillCmd {
  OutputFlags io;
  std::string input;
  std::vector<std::size_t> ks;
  std::string k_grid;
  double level = 0.95;

  void attach(CLI::App* app) {
    io.attach(app);
    add(app, "-i,--input", "input", input, "CSV of observations (default: stdin)");
    add(app, "--k", "k", ks, "number of upper spacings (repeatable)");
    add(app, "--k-grid", "k-grid", k_grid, "range a:b or a:b:step");
    add(app, "--level", "level", level, "confidence level")->capture_default_str();
  }

  int run() const {
    if (!(level > 0.0 && level < 1.0)) throw UsageError("invalid --level: must lie in (0, 1)");
    const SortedSample sample =
        SortedSample::from_unsorted(read_input(input), IngestedOrigin{input_name(input)});
    if (sample.size() < 3) throw PreconditionError("hill needs at least three observations");
    std::vector<std::size_t> grid = ks;
    if (!k_grid.empty()) {
      const auto more = parse_k_grid(k_grid);
      grid.insert(grid.end(), more.begin(), more.end());
    }
    if (grid.empty()) grid.push_back(default_hill_k(sample.size()));
    for (std::size_t k : grid) {
      if (k < 1 || k + 1 > sample.size()) {
        throw UsageError("invalid --k " + std::to_string(k) + ": must lie in [1, " +
                         std::to_string(sample.size() - 1) + "]");
      }
    }
    const double z = std::sqrt(2.0) * boost::math::erfc_inv(1.0 - level);
    std::ostringstream out;
    if (io.format == "json") out << "[\n";
    bool first = true;
    if (io.format == "csv") out << "k,hill,ci_low,ci_high\n";
    for (std::size_t k : grid) {
      const double h = hill(sample, k);
      const double half = z * h / std::sqrt(static_cast<double>(k));
      if (io.format == "json") {
        out << (first ? "" : ",\n") << "  {\"k\": " << k << ", \"hill\": " << fmt(h)
            << ", \"ci_low\": " << fmt(h - half) << ", \"ci_high\": " << fmt(h + half)
            << "}";
      } else {
        out << k << ',' << fmt(h) << ',' << fmt(h - half) << ',' << fmt(h + half) << '\n';
      }
      first = false;
    }
    if (io.format == "json") out << "\n]\n";
    emit(io.output, out.str());
    return kOk;
  }
};

// ---------------------------------------------------------------- dhill

struct DhillCmd {
  OutputFlags io;
  std::string input;
  std::string f_spec = "identity";
  std::size_t k = 0;
  double s = 1.0;
  std::optional<double> gamma;

  void attach(CLI::App* app) {
    io.attach(app);
    add(app, "-i,--input", "input", input, "CSV of observations (default: stdin)");
    add(app, "--f", "f", f_spec, "identity | pow:<a> | log1p | table:<path>")
        ->capture_default_str();
    add(app, "--k", "k", k, "number of upper spacings")->required();
    add(app, "--s", "s", s, "power index (>= 1)")->capture_default_str();
    add(app, "--gamma", "gamma", gamma, "reference index for standardized values");
  }

  int run() const {
    WeightFunction f = WeightFunction::identity();
    try {
      f = WeightFunction::parse(f_spec);
    } catch (const ParseError&) {
      throw;
    } catch (const DomainError& e) {
      throw UsageError(std::string("invalid --f: ") + e.what());
    }
    if (!(s >= 1.0)) throw UsageError("invalid --s: must be >= 1");
    if (gamma && !(*gamma > 0.0)) throw UsageError("invalid --gamma: must be > 0");
    const SortedSample sample =
        SortedSample::from_unsorted(read_input(input), IngestedOrigin{input_name(input)});
    if (sample.size() < 3) throw PreconditionError("dhill needs at least three observations");
    if (k < 2 || k + 1 > sample.size()) {
      throw UsageError("invalid --k " + std::to_string(k) + ": must lie in [2, " +
                       std::to_string(sample.size() - 1) + "]");
    }
    try {
      f.require_covers(k);
    } catch (const DomainError& e) {
      throw UsageError(std::string("invalid --f: ") + e.what());
    }
    const TailStatistics ts = dh_statistic(sample, f, k, s);
    std::ostringstream out;
    if (io.format == "json") {
      out << "{\"k\": " << ts.k << ", \"s\": " << fmt(ts.s) << ", \"f\": \""
          << f.describe() << "\", \"hill\": " << fmt(ts.hill)
          << ", \"weighted_sum\": " << fmt(ts.weighted_sum)
          << ", \"centering\": " << fmt(ts.centering) << ", \"scale\": " << fmt(ts.scale)
          << ", \"max_weight_ratio\": " << fmt(ts.max_weight_ratio)
          << ", \"estimate\": " << fmt(ts.estimate);
      if (gamma) {
        const auto z = standardize_dh(ts, *gamma);
        out << ", \"z_sum\": " << fmt(z.z_sum) << ", \"z_estimate\": " << fmt(z.z_estimate);
      }
      out << "}\n";
    } else {
      out << "k,s,hill,weighted_sum,centering,scale,max_weight_ratio,estimate";
      if (gamma) out << ",z_sum,z_estimate";
      out << '\n'
          << ts.k << ',' << fmt(ts.s) << ',' << fmt(ts.hill) << ',' << fmt(ts.weighted_sum)
          << ',' << fmt(ts.centering) << ',' << fmt(ts.scale) << ','
          << fmt(ts.max_weight_ratio) << ',' << fmt(ts.estimate);
      if (gamma) {
        const auto z = standardize_dh(ts, *gamma);
        out << ',' << fmt(z.z_sum) << ',' << fmt(z.z_estimate);
      }
      out << '\n';
    }
    emit(io.output, out.str());
    return kOk;
  }
};

// ---------------------------------------------------------------- records

struct RecordsCmd {
  ModelFlags model;
  OutputFlags io;
  std::string input;
  unsigned simulate = 0;
  std::size_t reps = 1;
  std::uint64_t seed = 0;

  void attach(CLI::App* app) {
    model.attach(app);
    io.attach(app, false);
    add(app, "-i,--input", "input", input, "CSV stream in arrival order (default: stdin)");
    add(app, "--simulate", "simulate", simulate,
        "draw the n-th record value instead of reading a stream");
    add(app, "--reps", "reps", reps, "number of simulated records")->capture_default_str();
    add(app, "--seed", "seed", seed, "master seed")->capture_default_str();
  }

  int run() const {
    std::ostringstream out;
    if (simulate > 0) {
      const Params p = model.params();
      if (reps < 1) throw UsageError("invalid --reps: must be >= 1");
      out << "rep,value,standardized\n";
      for (std::size_t i = 0; i < reps; ++i) {
        const double x = simulate_record(simulate, p, SeedSpec{seed, i});
        out << i << ',' << fmt(x) << ',' << fmt(standardized_record(x, simulate, p)) << '\n';
      }
    } else {
      const std::vector<double> stream = read_input(input);
      if (stream.empty()) throw PreconditionError("record extraction needs a nonempty stream");
      const RecordSequence rec = extract_records(stream);
      out << "index,value\n";
      for (std::size_t i = 0; i < rec.values.size(); ++i) {
        out << rec.indices[i] << ',' << fmt(rec.values[i]) << '\n';
      }
    }
    emit(io.output, out.str());
    return kOk;
  }
};

// ---------------------------------------------------------------- verify

struct VerifyCmd {
  ModelFlags model;
  std::string output;
  std::string csv_path;
  std::string kind;
  std::optional<std::size_t> n;
  std::optional<std::size_t> k;
  double s = 1.0;
  std::string f_spec = "identity";
  std::optional<std::size_t> reps;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  bool reproducible = false;
  bool no_rerun = false;
  std::optional<double> ks_threshold;
  std::optional<double> mean_threshold;
  std::optional<double> var_threshold;
  std::optional<double> k1_bound;
  std::optional<double> bn_bound;
  std::optional<double> ratio_bound;

  void attach(CLI::App* app) {
    model.attach(app);
    add(app, "--kind", "kind", kind,
        "max_gumbel | hill_clt | dh_clt | record_clt | sampler_gof | "
        "quantile_error_order | all")
        ->required()
        ->check(CLI::IsMember({"max_gumbel", "hill_clt", "dh_clt", "record_clt",
                               "sampler_gof", "quantile_error_order", "all"}));
    add(app, "-o,--output", "output", output, "JSON report path (default: stdout)");
    add(app, "--csv", "csv", csv_path, "CSV summary path");
    add(app, "--n", "n", n, "sample size (record index for record_clt)");
    add(app, "--k", "k", k, "number of upper spacings");
    add(app, "--s", "s", s, "power index (dh_clt)")->capture_default_str();
    add(app, "--f", "f", f_spec, "weight function (dh_clt)")->capture_default_str();
    add(app, "--reps", "reps", reps, "replications");
    add(app, "--seed", "seed", seed, "master seed")->capture_default_str();
    add(app, "--workers", "workers", workers, "worker threads (0 = all cores)");
    app->add_flag("--reproducible", reproducible, "write runtime_ms as 0")
        ->envname(env_name("reproducible"));
    app->add_flag("--no-rerun", no_rerun, "disable the automatic re-run")
        ->envname(env_name("no-rerun"));
    add(app, "--ks-threshold", "ks-threshold", ks_threshold, "KS pass threshold");
    add(app, "--mean-threshold", "mean-threshold", mean_threshold, "|mean| window");
    add(app, "--var-threshold", "var-threshold", var_threshold, "|var - 1| window");
    add(app, "--k1-bound", "k1-bound", k1_bound, "bound on k^{3/4}/log n");
    add(app, "--bn-bound", "bn-bound", bn_bound, "bound on the max weight ratio");
    add(app, "--ratio-bound", "ratio-bound", ratio_bound,
        "bound on the variance ratio (dh_clt) or error ratio (quantile_error_order)");
  }

  HarnessConfig config(ExperimentKind kind) const {
    HarnessConfig cfg;
    cfg.workers = workers;
    cfg.record_timing = !reproducible;
    cfg.allow_rerun = !no_rerun;
    PassCriteria* crit = nullptr;
    switch (kind) {
      case ExperimentKind::max_gumbel:
        crit = &cfg.max_gumbel;
        break;
      case ExperimentKind::hill_clt:
        crit = &cfg.hill;
        break;
      case ExperimentKind::dh_clt:
        crit = &cfg.dh;
        break;
      case ExperimentKind::record_clt:
        crit = &cfg.record;
        break;
      default:
        break;
    }
    if (crit) {
      if (ks_threshold) crit->ks = *ks_threshold;
      if (mean_threshold) crit->mean_abs = *mean_threshold;
      if (var_threshold) crit->var_dev = *var_threshold;
    }
    if (k1_bound) cfg.k1_bound = *k1_bound;
    if (bn_bound) cfg.dh_max_weight_bound = *bn_bound;
    if (ratio_bound) {
      cfg.dh_variance_ratio_bound = *ratio_bound;
      cfg.quantile_ratio_bound = *ratio_bound;
    }
    return cfg;
  }

  Experiment experiment() const {
    Experiment e;
    e.kind = parse_experiment_kind(kind);
    e.params = model.params();
    e.seed = seed;
    e.n = n.value_or(e.kind == ExperimentKind::record_clt ? 400 : 100000);
    e.k = k;
    e.s = s;
    e.reps = reps.value_or(1000);
    try {
      e.f = WeightFunction::parse(f_spec);
    } catch (const DomainError& ex) {
      throw UsageError(std::string("invalid --f: ") + ex.what());
    }
    return e;
  }

  int run() const {
    std::vector<McReport> reports;
    if (kind == "all") {
      HarnessConfig cfg;
      cfg.workers = workers;
      cfg.record_timing = !reproducible;
      cfg.allow_rerun = !no_rerun;
      reports = run_suite(default_suite(seed), cfg);
      emit(output, to_json(reports) + "\n");
    } else {
      const Experiment e = experiment();
      try {
        reports.push_back(run_experiment(e, config(e.kind)));
      } catch (const ConditionRefusedError& refused) {
        nlohmann::ordered_json j;
        j["refused"] = true;
        j["kind"] = kind;
        j["reason"] = refused.what();
        j["diagnostics"] = refused.diagnostics();
        std::cerr << "refused: " << refused.what() << '\n';
        emit(output, j.dump(2) + "\n");
        return kRefused;
      }
      emit(output, to_json(reports.front()) + "\n");
    }
    if (!csv_path.empty()) emit(csv_path, csv_summary(reports));
    for (const auto& r : reports) {
      if (!r.passed) return kVerifyFailed;
    }
    return kOk;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-Lindley distribution, tail-index estimation and limit-theorem checks"};
  app.require_subcommand(1);

  EvalCmd eval_cmd;
  SampleCmd sample_cmd;
  FitCmd fit_cmd;
  HillCmd hill_cmd;
  DhillCmd dhill_cmd;
  RecordsCmd records_cmd;
  VerifyCmd verify_cmd;

  auto* eval = app.add_subcommand("eval", "evaluate pdf, cdf, survival, quantile, moments");
  eval_cmd.attach(eval);
  auto* sample = app.add_subcommand("sample", "draw a Pseudo-Lindley sample");
  sample_cmd.attach(sample);
  auto* fit = app.add_subcommand("fit", "method-of-moments fit of (theta, beta)");
  fit_cmd.attach(fit);
  auto* hill_app = app.add_subcommand("hill", "Hill estimator with plug-in normal intervals");
  hill_cmd.attach(hill_app);
  auto* dhill = app.add_subcommand("dhill", "double-indexed functional Hill statistic");
  dhill_cmd.attach(dhill);
  auto* records = app.add_subcommand("records", "extract or simulate upper records");
  records_cmd.attach(records);
  auto* verify = app.add_subcommand("verify", "run Monte Carlo limit-theorem checks");
  verify_cmd.attach(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (eval->parsed()) return eval_cmd.run();
    if (sample->parsed()) return sample_cmd.run();
    if (fit->parsed()) return fit_cmd.run();
    if (hill_app->parsed()) return hill_cmd.run();
    if (dhill->parsed()) return dhill_cmd.run();
    if (records->parsed()) return records_cmd.run();
    if (verify->parsed()) return verify_cmd.run();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const WriteError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kWriteError;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParseError;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRefused;
  } catch (const FitInfeasibleError& e) {
    std::cerr << "error: " << e.what() << " (m1 = " << e.first_moment()
              << ", m2 = " << e.second_moment() << ")\n";
    return kRefused;
  } catch (const ConditionRefusedError& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return kRefused;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const plevt::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParseError;
  }
  return kUsage;
}
