#include <json.hpp>
#include <sstream>

#include "plevt/error.hpp"
#include "plevt/harness.hpp"
#include "plevt/io.hpp"

namespace plevt {

namespace {

using nlohmann::ordered_json;

ordered_json to_object(const McReport& r) {
  ordered_json j;
  j["kind"] = to_string(r.kind);
  j["reps"] = r.reps;
  j["n"] = r.n;
  j["k"] = r.k;
  j["empirical_mean"] = r.empirical_mean;
  j["empirical_var"] = r.empirical_var;
  j["ks_distance"] = r.ks_distance;
  j["reference"] = to_string(r.reference);
  j["threshold"] = r.threshold;
  j["passed"] = r.passed;
  j["runtime_ms"] = r.runtime_ms;
  j["seed"] = r.seed;
  j["rerun"] = r.rerun;
  ordered_json diag = ordered_json::object();
  for (const auto& [key, value] : r.diagnostics) diag[key] = value;
  j["diagnostics"] = std::move(diag);
  return j;
}

McReport from_object(const ordered_json& j) {
  try {
    McReport r;
    r.kind = parse_experiment_kind(j.at("kind").get<std::string>());
    r.reps = j.at("reps").get<std::size_t>();
    r.n = j.at("n").get<std::size_t>();
    r.k = j.at("k").get<std::size_t>();
    r.empirical_mean = j.at("empirical_mean").get<double>();
    r.empirical_var = j.at("empirical_var").get<double>();
    r.ks_distance = j.at("ks_distance").get<double>();
    r.reference = parse_reference_law(j.at("reference").get<std::string>());
    r.threshold = j.at("threshold").get<double>();
    r.passed = j.at("passed").get<bool>();
    r.runtime_ms = j.at("runtime_ms").get<std::int64_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.rerun = j.at("rerun").get<bool>();
    for (const auto& [key, value] : j.at("diagnostics").items()) {
      r.diagnostics[key] = value.get<double>();
    }
    return r;
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("malformed report: ") + ex.what(), 0);
  }
}

ordered_json parse(const std::string& text) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& ex) {
    throw ParseError(std::string("invalid JSON: ") + ex.what(), 0);
  }
}

}  // namespace

std::string to_json(const McReport& r, int indent) {
  return to_object(r).dump(indent);
}

std::string to_json(const std::vector<McReport>& rs, int indent) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : rs) arr.push_back(to_object(r));
  return arr.dump(indent);
}

McReport report_from_json(const std::string& text) { return from_object(parse(text)); }

std::vector<McReport> reports_from_json(const std::string& text) {
  const ordered_json arr = parse(text);
  if (!arr.is_array()) throw ParseError("expected a JSON array of reports", 0);
  std::vector<McReport> out;
  for (const auto& j : arr) out.push_back(from_object(j));
  return out;
}

std::string csv_summary(const std::vector<McReport>& rs) {
  std::ostringstream out;
  out << "kind,n,k,reps,mean,var,ks,passed\n";
  for (const auto& r : rs) {
    out << to_string(r.kind) << ',' << r.n << ',' << r.k << ',' << r.reps << ','
        << format_double(r.empirical_mean) << ',' << format_double(r.empirical_var)
        << ',' << format_double(r.ks_distance) << ',' << (r.passed ? "true" : "false")
        << '\n';
  }
  return out.str();
}

}  // namespace plevt
