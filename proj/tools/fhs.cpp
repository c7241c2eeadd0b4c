// Command-line front end: single runs and Cartesian sweeps, JSON reports +
// CSV tables per SCHEMA.md in each output directory.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "fhs/config.hpp"
#include "fhs/constants.hpp"
#include "fhs/extension.hpp"
#include "fhs/field.hpp"
#include "fhs/fracops.hpp"
#include "fhs/functionals.hpp"
#include "fhs/grid.hpp"
#include "fhs/profiles.hpp"
#include "fhs/report_json.hpp"
#include "fhs/solvers.hpp"

namespace fs = std::filesystem;
using fhs::ordered_json;

namespace {

constexpr const char* kSchemaMd = R"MD(# Output schema

Every run directory contains `report.json` plus command-specific CSV tables.
All files are written atomically (temp file + rename).

## report.json

```
{
  "report_version": 1,
  "command": "<subcommand>",
  "config": { ... },        // fully resolved: problem, grid, solver, output, seed
  "result": { ... }         // command-specific payload
}
```

Identical config + seed produce byte-identical reports (fixed summation
orders, seeded RNG, no timestamps).

## Exit codes

- 0: success (solvers: converged)
- 2: validation error (schema violation, violated hypothesis, unrepresentable
     request); the message lists every offending key / hypothesis
- 3: solver non-convergence or path collapse
- 1: I/O or internal error

## CSV tables

- `gamma_H.csv`: `alpha,gamma_H` (hardy-constant)
- `history.csv`: `iter,value,residual,boundary_mass` (minimize: value =
  quotient; mountain-pass: value = peak energy; residual = Sobolev-gradient
  norm; boundary_mass = squared-mass fraction with |x|_inf > L/2)
- `scan.csv`: `delta,quotient` (translate-scan)

## Field files (*.fxv)

Little-endian binary: magic `FXV1`, uint32 n, uint32 N, float64 L, then N^n
float64 values in row-major node order on the staggered grid
x_j = -L + (j + 1/2) * 2L/N per axis.

## sweep

`summary.json` at the sweep root lists every entry (override values, output
directory, exit code, and the entry's `result` payload when available).
Entries live in `entry_<index>/` and are complete run directories themselves.
)MD";

void emit_schema(const fs::path& dir) { fhs::write_text_atomic(dir / "SCHEMA.md", kSchemaMd); }

void save_field_atomic(const fhs::Field& f, const fs::path& path) {
  fs::path tmp = path;
  tmp += ".tmp";
  f.save_fxv(tmp.string());
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw fhs::io_error("rename failed: " + path.string());
}

ordered_json load_config_file(const std::string& path) {
  if (path.empty()) return ordered_json::object();
  std::ifstream f(path);
  if (!f) throw fhs::validation_error("config: cannot open file \"" + path + "\"");
  return ordered_json::parse(f);
}

fs::path prepare_output(const fhs::RunConfig& cfg) {
  fs::path dir(cfg.output);
  fs::create_directories(dir);
  emit_schema(dir);
  return dir;
}

double solver_num(const fhs::RunConfig& cfg, const char* key) {
  return cfg.solver.at(key).get<double>();
}

int solver_int(const fhs::RunConfig& cfg, const char* key) {
  return cfg.solver.at(key).get<int>();
}

fhs::Field profile_field(const fhs::SpectralGrid& g, const fhs::RunConfig& cfg) {
  return fhs::make_profile(g, cfg.solver.at("profile").get<std::string>(), cfg.problem, cfg.seed,
                           solver_num(cfg, "window_scale"));
}

fhs::MinimizerConfig minimizer_config(const fhs::RunConfig& cfg) {
  fhs::MinimizerConfig mc;
  mc.step = solver_num(cfg, "step");
  mc.max_iters = solver_int(cfg, "max_iters");
  mc.tol = solver_num(cfg, "tol");
  mc.symmetrize_every = solver_int(cfg, "symmetrize_every");
  mc.renormalize = cfg.solver.at("renormalize").get<bool>();
  mc.support_frac = solver_num(cfg, "support_frac");
  return mc;
}

int run_hardy_constant(const ordered_json& raw, std::ostream& out) {
  auto cfg = fhs::parse_config(raw, "hardy-constant");
  const auto alphas = cfg.solver.at("alphas").get<std::vector<double>>();
  ordered_json table = ordered_json::array();
  std::string csv = "alpha,gamma_H\n";
  std::ostringstream row;
  row.precision(17);
  for (double a : alphas) {
    const double gh = fhs::constants::gamma_H(cfg.problem.n, a);
    table.push_back(ordered_json{{"alpha", a}, {"gamma_H", gh}});
    row.str("");
    row << a << "," << gh << "\n";
    csv += row.str();
  }
  const fs::path dir = prepare_output(cfg);
  fhs::write_text_atomic(dir / "gamma_H.csv", csv);
  ordered_json rep = fhs::report_envelope("hardy-constant", cfg.resolved);
  rep["result"] = ordered_json{{"n", cfg.problem.n}, {"table", table}};
  fhs::write_json_atomic(dir / "report.json", rep);
  out << "hardy-constant: n=" << cfg.problem.n << ", " << alphas.size() << " rows -> "
      << (dir / "gamma_H.csv").string() << "\n";
  return 0;
}

int run_quotient(const ordered_json& raw, std::ostream& out) {
  auto cfg = fhs::parse_config(raw, "quotient");
  const auto g = fhs::make_grid(cfg.problem.n, cfg.N, cfg.L);
  const fhs::Field u = profile_field(g, cfg);
  fhs::FunctionalContext ctx(g, cfg.problem);
  const auto qr = fhs::quotient_evaluate(u, ctx);
  const auto er = fhs::energy_evaluate(u, ctx);
  const fs::path dir = prepare_output(cfg);
  save_field_atomic(u, dir / "field.fxv");
  ordered_json rep = fhs::report_envelope("quotient", cfg.resolved);
  rep["result"] = ordered_json{{"quotient", fhs::to_json(qr)},
                               {"energy", fhs::to_json(er)},
                               {"gamma_H", cfg.problem.gamma_H()}};
  fhs::write_json_atomic(dir / "report.json", rep);
  out << "quotient = " << qr.quotient << " (spectral=" << qr.spectral << ", hardy=" << qr.hardy
      << ", hs=" << qr.hs_term << ")\n";
  return 0;
}

int run_minimize(const ordered_json& raw, std::ostream& out) {
  auto cfg = fhs::parse_config(raw, "minimize");
  const auto g = fhs::make_grid(cfg.problem.n, cfg.N, cfg.L);
  const fhs::Field init = profile_field(g, cfg);
  const auto res = fhs::minimize_quotient(init, cfg.problem, minimizer_config(cfg));
  const fs::path dir = prepare_output(cfg);
  save_field_atomic(res.field, dir / "minimizer.fxv");
  fhs::write_text_atomic(dir / "history.csv", fhs::history_csv(res.history));
  ordered_json rep = fhs::report_envelope("minimize", cfg.resolved);
  rep["result"] = ordered_json{{"quotient", fhs::to_json(res.report)},
                               {"converged", res.converged},
                               {"iters", res.iters},
                               {"boundary_mass", res.boundary_mass}};
  fhs::write_json_atomic(dir / "report.json", rep);
  out << "minimize: quotient=" << res.report.quotient << " converged=" << res.converged
      << " iters=" << res.iters << " boundary_mass=" << res.boundary_mass << "\n";
  return res.converged ? 0 : 3;
}

int run_translate_scan(const ordered_json& raw, std::ostream& out) {
  auto cfg = fhs::parse_config(raw, "translate-scan");
  const auto g = fhs::make_grid(cfg.problem.n, cfg.N, cfg.L);
  const fhs::Field bubble = profile_field(g, cfg);
  const auto deltas = cfg.solver.at("deltas").get<std::vector<double>>();
  const auto rows = fhs::translate_scan(bubble, cfg.problem, deltas);
  const fs::path dir = prepare_output(cfg);
  fhs::write_text_atomic(dir / "scan.csv", fhs::scan_csv(rows));
  ordered_json table = ordered_json::array();
  for (const auto& r : rows)
    table.push_back(ordered_json{{"delta", r.delta}, {"quotient", r.quotient}});
  ordered_json rep = fhs::report_envelope("translate-scan", cfg.resolved);
  rep["result"] = ordered_json{{"table", table}};
  fhs::write_json_atomic(dir / "report.json", rep);
  out << "translate-scan: " << rows.size() << " offsets, I(0)=" << rows.front().quotient
      << ", I(max)=" << rows.back().quotient << "\n";
  return 0;
}

int run_mountain_pass(const ordered_json& raw, std::ostream& out) {
  auto cfg = fhs::parse_config(raw, "mountain-pass");
  const auto g = fhs::make_grid(cfg.problem.n, cfg.N, cfg.L);
  const fhs::Field seed = profile_field(g, cfg);

  double S0 = solver_num(cfg, "S0");
  double Ss = solver_num(cfg, "Ss");
  bool estimated = false;
  if (!(S0 > 0.0) || !(Ss > 0.0)) {
    // Estimate the two best constants on this grid by quotient minimization
    // from a windowed bubble.
    estimated = true;
    fhs::MinimizerConfig est;
    est.max_iters = 400;
    est.tol = 1e-7;
    est.support_frac = solver_num(cfg, "support_frac");
    if (!(S0 > 0.0)) {
      fhs::ProblemParams p0 = cfg.problem;
      p0.s = 0.0;
      const auto m0 = fhs::minimize_quotient(
          fhs::make_profile(g, "windowed-bubble", p0, cfg.seed, 0.0), p0, est);
      S0 = m0.report.quotient;
    }
    if (!(Ss > 0.0)) {
      const auto ms = fhs::minimize_quotient(
          fhs::make_profile(g, "windowed-bubble", cfg.problem, cfg.seed, 0.0), cfg.problem, est);
      Ss = ms.report.quotient;
    }
  }

  fhs::MountainPassConfig mpc;
  mpc.step = solver_num(cfg, "step");
  mpc.max_iters = solver_int(cfg, "max_iters");
  mpc.tol = solver_num(cfg, "tol");
  mpc.path_points = solver_int(cfg, "path_points");
  mpc.support_frac = solver_num(cfg, "support_frac");
  const auto rep = fhs::mountain_pass(seed, cfg.problem, S0, Ss, mpc);

  const fs::path dir = prepare_output(cfg);
  save_field_atomic(rep.maximizer.value(), dir / "maximizer.fxv");
  fhs::write_text_atomic(dir / "history.csv", fhs::history_csv(rep.history));
  ordered_json j = fhs::report_envelope("mountain-pass", cfg.resolved);
  ordered_json result = fhs::to_json(rep);
  result["S0"] = S0;
  result["Ss"] = Ss;
  result["constants_estimated"] = estimated;
  j["result"] = result;
  fhs::write_json_atomic(dir / "report.json", j);
  out << "mountain-pass: c_est=" << rep.c_est << " c_star=" << rep.c_star
      << " converged=" << rep.converged << " ps_residual_rel=" << rep.ps_residual_rel << "\n";
  return rep.converged ? 0 : 3;
}

int run_extension_check(const ordered_json& raw, std::ostream& out) {
  auto cfg = fhs::parse_config(raw, "extension-check");
  const auto g = fhs::make_grid(cfg.problem.n, cfg.N, cfg.L);
  const fhs::Field u = profile_field(g, cfg);
  double Y = solver_num(cfg, "Y");
  if (!(Y > 0.0)) Y = fhs::default_strip_height(g);
  const int M = solver_int(cfg, "M");
  const auto w = fhs::extend(u, cfg.problem.alpha, Y, M);
  const double energy = fhs::extension_energy(w);
  const double snorm = fhs::seminorm_sq(u, cfg.problem.alpha);
  const double gap = std::abs(energy - snorm) / std::max(snorm, 1e-300);
  const double defect = fhs::trace_defect(w, u);
  const fs::path dir = prepare_output(cfg);
  ordered_json rep = fhs::report_envelope("extension-check", cfg.resolved);
  rep["result"] = ordered_json{{"Y", Y},
                               {"M", M},
                               {"extension_energy", energy},
                               {"seminorm_sq", snorm},
                               {"isometry_rel_gap", gap},
                               {"trace_defect", defect},
                               {"trace_defect_rel", defect / std::max(energy, 1e-300)},
                               {"strip_warning", w.strip_warning}};
  fhs::write_json_atomic(dir / "report.json", rep);
  out << "extension-check: isometry_rel_gap=" << gap << " trace_defect=" << defect << "\n";
  return 0;
}

int run_known_command(const std::string& cmd, const ordered_json& raw, std::ostream& out) {
  if (cmd == "hardy-constant") return run_hardy_constant(raw, out);
  if (cmd == "quotient") return run_quotient(raw, out);
  if (cmd == "minimize") return run_minimize(raw, out);
  if (cmd == "translate-scan") return run_translate_scan(raw, out);
  if (cmd == "mountain-pass") return run_mountain_pass(raw, out);
  if (cmd == "extension-check") return run_extension_check(raw, out);
  throw fhs::validation_error("config: unknown command \"" + cmd + "\"");
}

// Runs one command, mapping exceptions to exit codes; error text goes to
// `err` so sweep workers can capture it instead of interleaving stderr.
int guarded_run(const std::string& cmd, const ordered_json& raw, std::ostream& out,
                std::string* err) {
  try {
    return run_known_command(cmd, raw, out);
  } catch (const fhs::validation_error& e) {
    *err = e.what();
    return 2;
  } catch (const fhs::support_error& e) {
    *err = e.what();
    return 2;
  } catch (const fhs::path_collapse_error& e) {
    *err = e.what();
    return 3;
  } catch (const nlohmann::json::exception& e) {
    *err = std::string("config: ") + e.what();
    return 2;
  } catch (const std::exception& e) {
    *err = e.what();
    return 1;
  }
}

void set_dotted(ordered_json& j, const std::string& dotted, const ordered_json& v) {
  ordered_json* cur = &j;
  std::size_t start = 0;
  while (true) {
    const auto dot = dotted.find('.', start);
    const std::string key =
        dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw fhs::validation_error("sweep: bad axis key \"" + dotted + "\"");
    if (dot == std::string::npos) {
      (*cur)[key] = v;
      return;
    }
    cur = &((*cur)[key]);
    start = dot + 1;
  }
}

ordered_json parse_axis_value(const std::string& token) {
  try {
    return ordered_json::parse(token);
  } catch (const nlohmann::json::exception&) {
    return ordered_json(token);  // bare string (e.g. profile names)
  }
}

struct Axis {
  std::string path;
  std::vector<ordered_json> values;
};

Axis parse_axis(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 >= spec.size())
    throw fhs::validation_error("sweep: axis must look like key.path=v1,v2 (got \"" + spec + "\")");
  Axis ax;
  ax.path = spec.substr(0, eq);
  std::string rest = spec.substr(eq + 1);
  std::size_t start = 0;
  while (start <= rest.size()) {
    const auto comma = rest.find(',', start);
    const std::string tok =
        rest.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (tok.empty()) throw fhs::validation_error("sweep: empty value in axis \"" + spec + "\"");
    ax.values.push_back(parse_axis_value(tok));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return ax;
}

int run_sweep(const std::string& inner, const ordered_json& base,
              const std::vector<std::string>& axis_specs, int jobs, std::ostream& out) {
  if (!fhs::known_commands().count(inner))
    throw fhs::validation_error("sweep: unknown command \"" + inner + "\"");
  if (axis_specs.empty()) throw fhs::validation_error("sweep: at least one --axis required");
  std::vector<Axis> axes;
  axes.reserve(axis_specs.size());
  for (const auto& s : axis_specs) axes.push_back(parse_axis(s));

  std::size_t total = 1;
  for (const auto& ax : axes) total *= ax.values.size();
  const std::string root = base.contains("output") && base.at("output").is_string()
                               ? base.at("output").get<std::string>()
                               : std::string("fhs_out");

  struct Entry {
    ordered_json raw;
    ordered_json overrides;
    std::string dir;
  };
  std::vector<Entry> entries;
  entries.reserve(total);
  int width = 3;
  for (std::size_t t = total; t >= 1000; t /= 10) ++width;
  for (std::size_t i = 0; i < total; ++i) {
    Entry e;
    e.raw = base;
    e.overrides = ordered_json::object();
    std::size_t rem = i;
    for (std::size_t a = axes.size(); a-- > 0;) {
      const auto& ax = axes[a];
      const auto& v = ax.values[rem % ax.values.size()];
      rem /= ax.values.size();
      set_dotted(e.raw, ax.path, v);
      e.overrides[ax.path] = v;
    }
    std::ostringstream name;
    name << "entry_" << std::setw(width) << std::setfill('0') << i;
    e.dir = (fs::path(root) / name.str()).string();
    e.raw["output"] = e.dir;
    entries.push_back(std::move(e));
  }

  struct Outcome {
    int exit = 0;
    std::string error;
  };
  std::vector<Outcome> outcomes(entries.size());
  std::atomic<std::size_t> next{0};
  if (jobs <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    jobs = static_cast<int>(std::min<std::size_t>(hw ? hw : 1, 8));
  }
  jobs = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(jobs), entries.size()));
  auto worker = [&] {
    std::size_t i;
    while ((i = next.fetch_add(1)) < entries.size()) {
      std::ostringstream sink;
      outcomes[i].exit = guarded_run(inner, entries[i].raw, sink, &outcomes[i].error);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(jobs));
  for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  fs::create_directories(root);
  emit_schema(root);
  ordered_json axes_json = ordered_json::object();
  for (const auto& ax : axes) {
    ordered_json vals = ordered_json::array();
    for (const auto& v : ax.values) vals.push_back(v);
    axes_json[ax.path] = vals;
  }
  ordered_json rows = ordered_json::array();
  int failures = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    ordered_json row{{"index", i},
                     {"overrides", entries[i].overrides},
                     {"output", entries[i].dir},
                     {"exit", outcomes[i].exit}};
    if (!outcomes[i].error.empty()) row["error"] = outcomes[i].error;
    const fs::path repfile = fs::path(entries[i].dir) / "report.json";
    if (fs::exists(repfile)) {
      std::ifstream f(repfile);
      ordered_json rep = ordered_json::parse(f, nullptr, false);
      if (!rep.is_discarded() && rep.contains("result")) row["result"] = rep["result"];
    }
    if (outcomes[i].exit != 0) ++failures;
    rows.push_back(std::move(row));
  }
  ordered_json summary = fhs::report_envelope("sweep", base);
  summary["result"] =
      ordered_json{{"command", inner}, {"axes", axes_json}, {"entries", rows}, {"failures", failures}};
  fhs::write_json_atomic(fs::path(root) / "summary.json", summary);
  out << "sweep: " << entries.size() << " entries, " << failures << " failures -> "
      << (fs::path(root) / "summary.json").string() << "\n";
  if (failures == 0) return 0;
  for (const auto& o : outcomes)
    if (o.exit == 2) return 2;
  return 3;
}

// Per-subcommand flag storage; flags override the config file.
struct Flags {
  std::string config_path;
  int n = 0;
  double alpha = 0, s = 0, gamma = 0;
  int N = 0;
  double L = 0;
  long long seed = 0;
  std::string output;
  std::string profile;
  double window_scale = 0;
  double step = 0, tol = 0, support_frac = 0;
  int max_iters = 0, symmetrize_every = 0, path_points = 0, M = 0;
  bool renormalize = true;
  double Y = 0, S0 = 0, Ss = 0;
  std::vector<double> alphas, deltas;
  std::map<std::string, CLI::Option*> opt;

  bool given(const char* name) const {
    auto it = opt.find(name);
    return it != opt.end() && it->second->count() > 0;
  }

  ordered_json to_raw() const {
    ordered_json raw = load_config_file(config_path);
    if (given("n")) raw["problem"]["n"] = n;
    if (given("alpha")) raw["problem"]["alpha"] = alpha;
    if (given("s")) raw["problem"]["s"] = s;
    if (given("gamma")) raw["problem"]["gamma"] = gamma;
    if (given("N")) raw["grid"]["N"] = N;
    if (given("L")) raw["grid"]["L"] = L;
    if (given("seed")) raw["seed"] = seed;
    if (given("output")) raw["output"] = output;
    if (given("profile")) raw["solver"]["profile"] = profile;
    if (given("window_scale")) raw["solver"]["window_scale"] = window_scale;
    if (given("step")) raw["solver"]["step"] = step;
    if (given("tol")) raw["solver"]["tol"] = tol;
    if (given("max_iters")) raw["solver"]["max_iters"] = max_iters;
    if (given("symmetrize_every")) raw["solver"]["symmetrize_every"] = symmetrize_every;
    if (given("support_frac")) raw["solver"]["support_frac"] = support_frac;
    if (given("path_points")) raw["solver"]["path_points"] = path_points;
    if (given("M")) raw["solver"]["M"] = M;
    if (given("renormalize")) raw["solver"]["renormalize"] = renormalize;
    if (given("Y")) raw["solver"]["Y"] = Y;
    if (given("S0")) raw["solver"]["S0"] = S0;
    if (given("Ss")) raw["solver"]["Ss"] = Ss;
    if (given("alphas")) raw["solver"]["alphas"] = alphas;
    if (given("deltas")) raw["solver"]["deltas"] = deltas;
    return raw;
  }
};

void add_common_flags(CLI::App* cmd, Flags& f) {
  f.opt["config"] = cmd->add_option("--config", f.config_path, "JSON config file");
  f.opt["n"] = cmd->add_option("--n", f.n, "dimension (1, 2, or 3)");
  f.opt["alpha"] = cmd->add_option("--alpha", f.alpha, "operator order, 0 < alpha < 2");
  f.opt["s"] = cmd->add_option("--s", f.s, "Hardy-Sobolev parameter, 0 <= s < alpha");
  f.opt["gamma"] = cmd->add_option("--gamma", f.gamma, "Hardy coupling, gamma < gamma_H");
  f.opt["N"] = cmd->add_option("--N", f.N, "points per axis (power of two)");
  f.opt["L"] = cmd->add_option("--L", f.L, "box half-length");
  f.opt["seed"] = cmd->add_option("--seed", f.seed, "RNG seed");
  f.opt["output"] = cmd->add_option("--output", f.output, "output directory");
}

void add_profile_flags(CLI::App* cmd, Flags& f) {
  f.opt["profile"] =
      cmd->add_option("--profile", f.profile, "bubble|gaussian|random-smooth|windowed-bubble");
  f.opt["window_scale"] =
      cmd->add_option("--window-scale", f.window_scale, "windowed-bubble length scale");
}

void add_minimizer_flags(CLI::App* cmd, Flags& f) {
  f.opt["step"] = cmd->add_option("--step", f.step, "initial gradient step");
  f.opt["max_iters"] = cmd->add_option("--max-iters", f.max_iters, "iteration cap");
  f.opt["tol"] = cmd->add_option("--tol", f.tol, "stop tolerance");
  f.opt["symmetrize_every"] =
      cmd->add_option("--symmetrize-every", f.symmetrize_every, "symmetrization cadence (0 off)");
  f.opt["renormalize"] =
      cmd->add_option("--renormalize", f.renormalize, "keep hs_term = 1 along the flow");
  f.opt["support_frac"] = cmd->add_option("--support-frac", f.support_frac,
                                          "iterate support window as a fraction of L");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fractional Hardy-Sobolev quotients, extremals, and mountain-pass levels"};
  app.require_subcommand(1);

  Flags fh, fq, fm, ft, fp, fe, fw;

  auto* c_hardy = app.add_subcommand("hardy-constant", "tabulate gamma_H(n, alpha) over alpha");
  add_common_flags(c_hardy, fh);
  fh.opt["alphas"] = c_hardy->add_option("--alphas", fh.alphas, "comma-separated alpha values")
                         ->delimiter(',');

  auto* c_quot = app.add_subcommand("quotient", "evaluate the quotient of a named profile");
  add_common_flags(c_quot, fq);
  add_profile_flags(c_quot, fq);

  auto* c_min = app.add_subcommand("minimize", "projected gradient descent on the quotient");
  add_common_flags(c_min, fm);
  add_profile_flags(c_min, fm);
  add_minimizer_flags(c_min, fm);

  auto* c_scan = app.add_subcommand("translate-scan", "quotient of the bubble vs. offset (s = 0)");
  add_common_flags(c_scan, ft);
  add_profile_flags(c_scan, ft);
  ft.opt["deltas"] =
      c_scan->add_option("--deltas", ft.deltas, "comma-separated offsets")->delimiter(',');

  auto* c_mp = app.add_subcommand("mountain-pass", "numerical mountain pass below the threshold");
  add_common_flags(c_mp, fp);
  add_profile_flags(c_mp, fp);
  fp.opt["step"] = c_mp->add_option("--step", fp.step, "initial deformation step");
  fp.opt["max_iters"] = c_mp->add_option("--max-iters", fp.max_iters, "iteration cap");
  fp.opt["tol"] = c_mp->add_option("--tol", fp.tol, "residual tolerance");
  fp.opt["path_points"] = c_mp->add_option("--path-points", fp.path_points, "path discretization");
  fp.opt["support_frac"] = c_mp->add_option("--support-frac", fp.support_frac,
                                            "iterate support window as a fraction of L");
  fp.opt["S0"] = c_mp->add_option("--S0", fp.S0, "best constant at s=0 (0 = estimate)");
  fp.opt["Ss"] = c_mp->add_option("--Ss", fp.Ss, "best constant at s (0 = estimate)");

  auto* c_ext = app.add_subcommand("extension-check", "harmonic-extension energy vs. seminorm");
  add_common_flags(c_ext, fe);
  add_profile_flags(c_ext, fe);
  fe.opt["Y"] = c_ext->add_option("--Y", fe.Y, "strip height (0 = auto)");
  fe.opt["M"] = c_ext->add_option("--M", fe.M, "extension slices");

  auto* c_sweep = app.add_subcommand("sweep", "Cartesian parameter grid over a subcommand");
  add_common_flags(c_sweep, fw);
  add_profile_flags(c_sweep, fw);
  add_minimizer_flags(c_sweep, fw);
  std::string sweep_cmd;
  std::vector<std::string> axis_specs;
  int jobs = 0;
  c_sweep->add_option("--command", sweep_cmd, "subcommand to sweep")->required();
  c_sweep->add_option("--axis", axis_specs, "dotted.path=v1,v2,... (repeatable)");
  c_sweep->add_option("--jobs", jobs, "worker threads (0 = auto)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  std::string cmd;
  const Flags* flags = nullptr;
  if (app.got_subcommand(c_hardy)) cmd = "hardy-constant", flags = &fh;
  else if (app.got_subcommand(c_quot)) cmd = "quotient", flags = &fq;
  else if (app.got_subcommand(c_min)) cmd = "minimize", flags = &fm;
  else if (app.got_subcommand(c_scan)) cmd = "translate-scan", flags = &ft;
  else if (app.got_subcommand(c_mp)) cmd = "mountain-pass", flags = &fp;
  else if (app.got_subcommand(c_ext)) cmd = "extension-check", flags = &fe;
  else if (app.got_subcommand(c_sweep)) cmd = "sweep", flags = &fw;

  std::string err;
  int code = 1;
  if (cmd == "sweep") {
    try {
      code = run_sweep(sweep_cmd, fw.to_raw(), axis_specs, jobs, std::cout);
    } catch (const fhs::validation_error& e) {
      err = e.what();
      code = 2;
    } catch (const nlohmann::json::exception& e) {
      err = std::string("config: ") + e.what();
      code = 2;
    } catch (const std::exception& e) {
      err = e.what();
      code = 1;
    }
  } else {
    code = guarded_run(cmd, flags->to_raw(), std::cout, &err);
  }
  if (!err.empty()) std::cerr << "error: " << err << "\n";
  return code;
}
