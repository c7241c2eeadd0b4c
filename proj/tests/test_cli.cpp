#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "fhs/constants.hpp"
#include "fhs/field.hpp"
#include "fhs/functionals.hpp"
#include "json.hpp"

// End-to-end tests that drive the installed binary exactly the way a user
// would: shell out, then inspect exit codes and on-disk artifacts.

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct RunResult {
  int exit = -1;
  std::string out;
  std::string err;
};

fs::path scratch_root() {
  static fs::path root = [] {
    fs::path p = fs::temp_directory_path() / "fhs_cli_tests";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return root;
}

fs::path fresh_dir(const std::string& name) {
  fs::path p = scratch_root() / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

RunResult run_cli(const std::string& args, const fs::path& workdir) {
  const fs::path out = workdir / "stdout.txt";
  const fs::path err = workdir / "stderr.txt";
  std::string cmd = std::string("cd \"") + workdir.string() + "\" && \"" + FHS_CLI_PATH + "\" " +
                    args + " > \"" + out.string() + "\" 2> \"" + err.string() + "\"";
  int status = std::system(cmd.c_str());
  RunResult r;
  r.exit = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_file(out);
  r.err = read_file(err);
  return r;
}

json load_report(const fs::path& dir) {
  auto j = json::parse(read_file(dir / "report.json"));
  REQUIRE(j.at("report_version").get<int>() == 1);
  return j;
}

// gamma_H.csv -> alpha -> value
std::map<double, double> parse_gamma_csv(const fs::path& p) {
  std::ifstream f(p);
  REQUIRE(f.good());
  std::string line;
  REQUIRE(std::getline(f, line));
  REQUIRE(line == "alpha,gamma_H");
  std::map<double, double> rows;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    REQUIRE(comma != std::string::npos);
    rows[std::stod(line.substr(0, comma))] = std::stod(line.substr(comma + 1));
  }
  return rows;
}

}  // namespace

TEST_CASE("hardy-constant table hits the known values", "[cli]") {
  auto dir = fresh_dir("hardy_constant");
  auto r = run_cli("hardy-constant --n 3 --alphas 0.5,1.0,1.5,1.99 --output run", dir);
  CAPTURE(r.err);
  REQUIRE(r.exit == 0);

  auto rows = parse_gamma_csv(dir / "run" / "gamma_H.csv");
  REQUIRE(rows.size() == 4);
  // alpha -> 2 limit is (n-2)^2/4 = 1/4 in n=3
  REQUIRE(std::abs(rows.at(1.99) - 0.25) < 1e-2);
  REQUIRE(rows.at(1.0) == Catch::Approx(2.0 / std::acos(-1.0)).epsilon(1e-12));

  auto rep = load_report(dir / "run");
  REQUIRE(rep.at("command") == "hardy-constant");
  REQUIRE(rep.at("result").at("table").size() == 4);
  REQUIRE(fs::exists(dir / "run" / "SCHEMA.md"));
  REQUIRE(read_file(dir / "run" / "SCHEMA.md").find("report_version") != std::string::npos);
}

TEST_CASE("quotient is stable under grid refinement", "[cli]") {
  auto dir = fresh_dir("quotient_refine");
  const std::string common = "quotient --profile bubble --n 1 --alpha 0.5 --s 0 --gamma 0 --L 10 ";
  auto r1 = run_cli(common + "--N 256 --output coarse", dir);
  auto r2 = run_cli(common + "--N 512 --output fine", dir);
  REQUIRE(r1.exit == 0);
  REQUIRE(r2.exit == 0);

  const double qc =
      load_report(dir / "coarse").at("result").at("quotient").at("quotient").get<double>();
  const double qf =
      load_report(dir / "fine").at("result").at("quotient").at("quotient").get<double>();
  REQUIRE(qc > 0.0);
  REQUIRE(std::abs(qc - qf) / std::abs(qf) < 1e-3);
}

TEST_CASE("validation failures exit 2 and name every offender", "[cli]") {
  auto dir = fresh_dir("validation");

  SECTION("violated hypothesis is spelled out") {
    auto r = run_cli("quotient --profile bubble --n 1 --alpha 0.5 --s 0.7 --gamma 0 --output x", dir);
    REQUIRE(r.exit == 2);
    REQUIRE(r.err.find("0 <= s < alpha") != std::string::npos);
  }

  SECTION("unknown keys are all listed") {
    std::ofstream(dir / "bad.json")
        << R"({"problem":{"n":1,"alpha":0.5,"s":0,"gamma":0},"grud":{"N":128},"solver":{"profle":"bubble"}})";
    auto r = run_cli("quotient --config bad.json --output x", dir);
    REQUIRE(r.exit == 2);
    REQUIRE(r.err.find("unknown key \"grud\"") != std::string::npos);
    REQUIRE(r.err.find("unknown key \"solver.profle\"") != std::string::npos);
  }

  SECTION("unparseable flags exit 2") {
    auto r = run_cli("quotient --N banana --output x", dir);
    REQUIRE(r.exit == 2);
  }

  SECTION("nothing is written on validation failure") {
    auto r = run_cli("quotient --profile bubble --n 1 --alpha 0.5 --s 0.7 --gamma 0 --output gone", dir);
    REQUIRE(r.exit == 2);
    REQUIRE(!fs::exists(dir / "gone" / "report.json"));
  }
}

TEST_CASE("identical config and seed give byte-identical reports", "[cli]") {
  auto dir = fresh_dir("determinism");
  const std::string cmd =
      "minimize --n 1 --alpha 0.5 --s 0.25 --gamma 0.1 --N 128 --L 10 "
      "--profile random-smooth --seed 42 --max-iters 80 --output run";
  auto r1 = run_cli(cmd, dir);
  REQUIRE(r1.exit == 0);
  const std::string first = read_file(dir / "run" / "report.json");
  const std::string first_hist = read_file(dir / "run" / "history.csv");

  auto r2 = run_cli(cmd, dir);
  REQUIRE(r2.exit == 0);
  REQUIRE(read_file(dir / "run" / "report.json") == first);
  REQUIRE(read_file(dir / "run" / "history.csv") == first_hist);

  // different seed, different field
  auto r3 = run_cli(
      "minimize --n 1 --alpha 0.5 --s 0.25 --gamma 0.1 --N 128 --L 10 "
      "--profile random-smooth --seed 43 --max-iters 80 --output other",
      dir);
  REQUIRE(r3.exit == 0);
  REQUIRE(read_file(dir / "other" / "report.json") != first);
}

TEST_CASE("minimize artifacts round-trip through the field format", "[cli]") {
  auto dir = fresh_dir("artifacts");
  auto r = run_cli(
      "minimize --n 1 --alpha 0.5 --s 0.25 --gamma 0 --N 128 --L 10 "
      "--profile windowed-bubble --max-iters 200 --output run",
      dir);
  CAPTURE(r.err);
  REQUIRE(r.exit == 0);

  auto rep = load_report(dir / "run");
  REQUIRE(rep.at("result").at("converged").get<bool>());
  const double reported = rep.at("result").at("quotient").at("quotient").get<double>();

  // the stored field must reproduce the reported quotient exactly
  auto u = fhs::Field::load_fxv((dir / "run" / "minimizer.fxv").string());
  REQUIRE(u.grid().n == 1);
  REQUIRE(u.grid().N == 128);
  REQUIRE(u.grid().L == Catch::Approx(10.0).epsilon(1e-15));
  fhs::ProblemParams p{1, 0.5, 0.25, 0.0};
  const auto q = fhs::quotient_evaluate(u, p);
  REQUIRE(q.quotient == Catch::Approx(reported).epsilon(1e-12));

  const std::string hist = read_file(dir / "run" / "history.csv");
  REQUIRE(hist.rfind("iter,value,residual,boundary_mass", 0) == 0);

  // resolved config embeds everything needed to reproduce the run
  const auto& cfg = rep.at("config");
  REQUIRE(cfg.at("grid").at("N").get<int>() == 128);
  REQUIRE(cfg.at("solver").contains("support_frac"));
}

TEST_CASE("flags override the config file", "[cli]") {
  auto dir = fresh_dir("overrides");
  std::ofstream(dir / "base.json") << R"({
    "problem": {"n": 1, "alpha": 0.5, "s": 0.0, "gamma": 0.0},
    "grid": {"N": 128, "L": 10.0},
    "solver": {"profile": "gaussian", "support_frac": 0.5, "max_iters": 60},
    "output": "from_file"
  })";

  auto r = run_cli("minimize --config base.json --N 256 --gamma 0.05 --output from_flags", dir);
  CAPTURE(r.err);
  REQUIRE(r.exit == 0);
  REQUIRE(!fs::exists(dir / "from_file"));
  auto rep = load_report(dir / "from_flags");
  REQUIRE(rep.at("config").at("grid").at("N").get<int>() == 256);
  REQUIRE(rep.at("config").at("problem").at("gamma").get<double>() == Catch::Approx(0.05));
  // untouched keys survive from the file
  REQUIRE(rep.at("config").at("grid").at("L").get<double>() == Catch::Approx(10.0));
  REQUIRE(rep.at("config").at("solver").at("support_frac").get<double>() == Catch::Approx(0.5));

  // a solver key that the subcommand does not understand is an error
  auto rbad = run_cli("quotient --config base.json --output x", dir);
  REQUIRE(rbad.exit == 2);
  REQUIRE(rbad.err.find("solver.support_frac") != std::string::npos);
}

TEST_CASE("solver support window is configurable end to end", "[cli]") {
  auto dir = fresh_dir("support_window");
  auto r = run_cli(
      "minimize --n 1 --alpha 0.5 --s 0.25 --gamma 0 --N 128 --L 10 "
      "--profile windowed-bubble --max-iters 150 --support-frac 0.6 --output run",
      dir);
  REQUIRE(r.exit == 0);
  auto rep = load_report(dir / "run");
  REQUIRE(rep.at("config").at("solver").at("support_frac").get<double>() == Catch::Approx(0.6));

  // a window this small leaves no admissible mass in the profile
  auto r2 = run_cli(
      "minimize --n 1 --alpha 0.5 --s 0.25 --gamma 0 --N 128 --L 10 "
      "--profile windowed-bubble --support-frac 0.0001 --output tiny",
      dir);
  REQUIRE(r2.exit == 2);
}

TEST_CASE("mountain pass run emits threshold data", "[cli]") {
  auto dir = fresh_dir("mountain_pass");
  auto r = run_cli(
      "mountain-pass --n 1 --alpha 0.5 --s 0.25 --gamma 0.05 --N 128 --L 10 "
      "--profile windowed-bubble --max-iters 150 --output run",
      dir);
  CAPTURE(r.err);
  REQUIRE(r.exit == 0);
  auto res = load_report(dir / "run").at("result");
  REQUIRE(res.at("constants_estimated").get<bool>());
  const double c_est = res.at("c_est").get<double>();
  const double c_star = res.at("c_star").get<double>();
  REQUIRE(c_est > 0.0);
  REQUIRE(c_est < c_star);
  REQUIRE(fs::exists(dir / "run" / "maximizer.fxv"));
  REQUIRE(fs::exists(dir / "run" / "history.csv"));
}

TEST_CASE("sweep fans out and aggregates", "[cli]") {
  auto dir = fresh_dir("sweep");
  auto r = run_cli(
      "sweep --command quotient --n 1 --alpha 0.5 --s 0 --gamma 0 --N 128 --L 10 "
      "--profile gaussian --axis problem.gamma=0,0.05 --axis grid.N=128,256 --output run",
      dir);
  CAPTURE(r.err);
  REQUIRE(r.exit == 0);

  auto summary = json::parse(read_file(dir / "run" / "summary.json"));
  const auto& result = summary.at("result");
  REQUIRE(result.at("command") == "quotient");
  REQUIRE(result.at("failures").get<int>() == 0);
  const auto& entries = result.at("entries");
  REQUIRE(entries.size() == 4);
  for (const auto& e : entries) {
    REQUIRE(e.at("exit").get<int>() == 0);
    const fs::path sub = dir / e.at("output").get<std::string>();
    REQUIRE(fs::exists(sub / "report.json"));
    // override really landed in the entry's resolved config
    auto erep = load_report(sub);
    REQUIRE(erep.at("config").at("problem").at("gamma").get<double>() ==
            Catch::Approx(e.at("overrides").at("problem.gamma").get<double>()).margin(1e-15));
  }

  SECTION("an invalid axis value surfaces as exit 2") {
    auto rbad = run_cli(
        "sweep --command quotient --n 1 --alpha 0.5 --s 0 --gamma 0 --N 128 --L 10 "
        "--profile gaussian --axis problem.s=0,0.7 --output bad",
        dir);
    REQUIRE(rbad.exit == 2);
    auto bad = json::parse(read_file(dir / "bad" / "summary.json"));
    int failed = bad.at("result").at("failures").get<int>();
    REQUIRE(failed == 1);
  }
}
