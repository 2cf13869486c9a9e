#include <doctest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "plevt/harness.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "plevt_cli_tests";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// args are passed through the shell; env is a prefix like "PLEVT_SEED=3".
Run run(const std::string& args, const std::string& env = "") {
  const fs::path err = scratch() / "stderr.txt";
  const std::string cmd =
      env + (env.empty() ? "" : " ") + std::string(PLEVT_CLI_PATH) + " " + args + " 2>" + err.string();
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err);
  return r;
}

fs::path write_file(const std::string& name, const std::string& body) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << body;
  return p;
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(run("--help").code == 0);
  CHECK(run("sample --help").code == 0);
  CHECK(run("").code == 2);
  CHECK(run("sample -n 5 --seed 1 --bogus").code == 2);
  CHECK(run("frobnicate").code == 2);
}

TEST_CASE("eval") {
  const Run r = run("eval --fn pdf --theta 1 --beta 2 --x 0 1");
  CHECK(r.code == 0);
  CHECK(r.out == "0.5\n0.36787944117144233\n");
  CHECK(run("eval --fn moment --n 1").out == "1.5\n");
  const Run bad = run("eval --fn pdf --theta -1 --x 1");
  CHECK(bad.code == 2);
  CHECK(bad.err.find("--theta") != std::string::npos);
  CHECK(run("eval --fn quantile --u 1.5").code == 2);
  CHECK(run("eval --fn quantile --u 0.5").code == 0);
}

TEST_CASE("sample") {
  const Run a = run("sample -n 50 --seed 7");
  CHECK(a.code == 0);
  CHECK(count_lines(a.out) == 50);
  CHECK(run("sample -n 50 --seed 7").out == a.out);
  CHECK(run("sample -n 50", "PLEVT_SEED=7").out == a.out);
  CHECK(run("sample -n 50 --seed 7", "PLEVT_SEED=8").out == a.out);
  CHECK(run("sample -n 50 --seed 8").out != a.out);

  const Run nos = run("sample -n 3");
  CHECK(nos.code == 0);
  CHECK(nos.err.find("warning") != std::string::npos);

  CHECK(run("sample -n 0 --seed 1").code == 2);
  CHECK(run("sample -n 5 --seed 1 --beta 1").code == 2);

  const Run sorted = run("sample -n 50 --seed 7 --sorted");
  std::istringstream in(sorted.out);
  double prev = -1, x = 0;
  while (in >> x) {
    CHECK(x >= prev);
    prev = x;
  }

  const fs::path out = scratch() / "sample.csv";
  CHECK(run("sample -n 20 --seed 7 -o " + out.string()).code == 0);
  CHECK(count_lines(slurp(out)) == 20);
  CHECK(run("sample -n 20 --seed 7 -o /nonexistent/dir/x.csv").code == 3);
}

TEST_CASE("fit") {
  const fs::path data = scratch() / "fit.csv";
  CHECK(run("sample -n 200000 --seed 3 --theta 2 --beta 3 -o " + data.string()).code == 0);
  const Run r = run("fit -i " + data.string());
  CHECK(r.code == 0);
  CHECK(r.out.rfind("theta,beta,n\n", 0) == 0);
  std::istringstream in(r.out.substr(r.out.find('\n') + 1));
  double theta = 0, beta = 0;
  char comma = 0;
  in >> theta >> comma >> beta;
  CHECK(theta == doctest::Approx(2.0).epsilon(0.05));
  CHECK(beta == doctest::Approx(3.0).epsilon(0.3));

  const Run j = run("fit --format json < " + data.string());
  CHECK(j.code == 0);
  CHECK(j.out.find("\"theta\"") != std::string::npos);

  CHECK(run("fit -i " + write_file("const.csv", "2\n2\n2\n").string()).code == 5);
  CHECK(run("fit -i " + write_file("bad.csv", "x\n1\noops\n").string()).code == 4);
}

TEST_CASE("hill") {
  const fs::path five = write_file("five.csv", "x\n0.1\n0.5\n1.2\n2.0\n3.5\n");
  const Run r = run("hill -i " + five.string() + " --k 3");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("k,hill,ci_low,ci_high\n3,1.7333333333333", 0) == 0);
  CHECK(run("hill -i " + five.string() + " --k 5").code == 2);
  CHECK(run("hill -i " + five.string() + " --k-grid 1:4").out.size() > 0);
  CHECK(count_lines(run("hill -i " + five.string() + " --k-grid 1:4").out) == 5);
  CHECK(run("hill -i " + five.string() + " --k-grid 4:1").code == 2);
  CHECK(run("hill -i " + write_file("two.csv", "1\n2\n").string()).code == 5);
  const Run bad = run("hill -i " + write_file("bad2.csv", "1\n2\nthree\n4\n").string() + " --k 1");
  CHECK(bad.code == 4);
  CHECK(bad.err.find("line 3") != std::string::npos);
  CHECK(run("hill -i /nonexistent/x.csv --k 1").code == 4);
}

TEST_CASE("dhill") {
  const fs::path five = write_file("five.csv", "x\n0.1\n0.5\n1.2\n2.0\n3.5\n");
  const Run r = run("dhill -i " + five.string() + " --k 2 --s 2");
  CHECK(r.code == 0);
  CHECK(r.out.find("\n2,2,") != std::string::npos);
  CHECK(r.out.find(",3.53") != std::string::npos);
  CHECK(run("dhill -i " + five.string() + " --k 2 --s 0.5").code == 2);
  CHECK(run("dhill -i " + five.string() + " --k 2 --f cubic").code == 2);
  CHECK(run("dhill -i " + five.string() + " --k 3 --gamma 1 --format json").out.find("z_sum") !=
        std::string::npos);
}

TEST_CASE("records") {
  const Run r = run("records -i " + write_file("stream.csv", "3\n1\n4\n1\n5\n").string());
  CHECK(r.code == 0);
  CHECK(r.out == "index,value\n1,3\n3,4\n5,5\n");
  const Run sim = run("records --simulate 5 --reps 4 --seed 2");
  CHECK(sim.code == 0);
  CHECK(count_lines(sim.out) == 5);
}

TEST_CASE("verify") {
  const Run ok = run("verify --kind sampler_gof --n 20000 --seed 4 --reproducible");
  CHECK(ok.code == 0);
  const plevt::McReport rep = plevt::report_from_json(ok.out);
  CHECK(rep.passed);
  CHECK(rep.runtime_ms == 0);
  CHECK(run("verify --kind sampler_gof --n 20000 --seed 4 --reproducible --workers 3").out == ok.out);

  const Run fail = run("verify --kind record_clt --n 1 --reps 200 --no-rerun --reproducible");
  CHECK(fail.code == 1);

  const Run refused = run("verify --kind dh_clt --f pow:0.5 --k 50 --reps 100");
  CHECK(refused.code == 5);
  CHECK(refused.out.find("max_weight_ratio") != std::string::npos);
  CHECK(run("verify --kind dh_clt --f pow:0.5 --k 50 --reps 100 --bn-bound 0.6 --n 20000")
            .code != 5);

  const fs::path csv = scratch() / "summary.csv";
  const fs::path js = scratch() / "report.json";
  const Run thr = run("verify --kind hill_clt --n 5000 --reps 100 --ks-threshold 1 "
                      "--mean-threshold 10 --var-threshold 10 --reproducible -o " +
                      js.string() + " --csv " + csv.string());
  CHECK(thr.code == 0);
  CHECK(plevt::report_from_json(slurp(js)).threshold == 1.0);
  CHECK(slurp(csv).rfind("kind,n,k,reps,mean,var,ks,passed\nhill_clt,5000,", 0) == 0);
  CHECK(run("verify --kind nope").code == 2);
  CHECK(run("verify --kind hill_clt --reps 10").code == 2);
}

TEST_CASE("sample piped into fit") {
  const std::string cli = PLEVT_CLI_PATH;
  const Run r = run("sample -n 100000 --theta 1 --beta 2 --seed 5 | " + cli + " fit");
  CHECK(r.code == 0);
  std::istringstream in(r.out.substr(r.out.find('\n') + 1));
  double theta = 0;
  in >> theta;
  // bootstrap-free SE of theta-hat at n = 1e5 is about 0.012 here
  CHECK(std::abs(theta - 1.0) <= 3 * 0.012);
}

TEST_CASE("hill intervals cover gamma") {
  const std::string cli = PLEVT_CLI_PATH;
  int covered = 0;
  for (int seed = 0; seed < 100; ++seed) {
    const Run r = run("sample -n 100000 --theta 2 --beta 2 --seed " + std::to_string(seed) +
                      " | " + cli + " hill");
    REQUIRE(r.code == 0);
    std::istringstream in(r.out.substr(r.out.find('\n') + 1));
    double k = 0, h = 0, lo = 0, hi = 0;
    char c = 0;
    in >> k >> c >> h >> c >> lo >> c >> hi;
    covered += lo <= 0.5 && 0.5 <= hi;
  }
  CHECK(covered >= 90);
}

TEST_CASE("verify reductions and refusals") {
  const std::string common = " --n 20000 --k 12 --reps 200 --seed 3 --reproducible";
  const plevt::McReport h = plevt::report_from_json(run("verify --kind hill_clt" + common).out);
  const plevt::McReport d =
      plevt::report_from_json(run("verify --kind dh_clt --f identity --s 1" + common).out);
  CHECK(d.empirical_mean == doctest::Approx(h.empirical_mean).epsilon(1e-12));
  CHECK(d.empirical_var == doctest::Approx(h.empirical_var).epsilon(1e-12));
  CHECK(d.ks_distance == doctest::Approx(h.ks_distance).epsilon(1e-12));
  CHECK(run("verify --kind hill_clt --k 5000 --n 10000").code == 5);
}
