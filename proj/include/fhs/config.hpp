#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "fhs/errors.hpp"
#include "fhs/grid.hpp"
#include "fhs/params.hpp"
#include "fhs/profiles.hpp"

namespace fhs {

using ordered_json = nlohmann::ordered_json;

// Fully resolved run configuration. `resolved` is the defaults-applied JSON
// embedded verbatim into every report.
struct RunConfig {
  ProblemParams problem;
  int N = 128;
  double L = 10.0;
  long long seed = 0;
  std::string output = "fhs_out";
  ordered_json solver;
  ordered_json resolved;
};

namespace detail {

// Allowed "solver" keys per command, with their defaults.
inline const std::map<std::string, ordered_json>& solver_defaults() {
  static const std::map<std::string, ordered_json> table = {
      {"hardy-constant", ordered_json{{"alphas", ordered_json::array({0.5, 1.0, 1.5, 1.99})}}},
      {"quotient", ordered_json{{"profile", "bubble"}, {"window_scale", 0.0}}},
      {"minimize", ordered_json{{"profile", "random-smooth"},
                                {"window_scale", 0.0},
                                {"step", 0.5},
                                {"max_iters", 500},
                                {"tol", 1e-8},
                                {"symmetrize_every", 10},
                                {"renormalize", true},
                                {"support_frac", 0.75}}},
      {"translate-scan", ordered_json{{"profile", "windowed-bubble"},
                                      {"window_scale", 0.0},
                                      {"deltas", ordered_json::array({0.0, 2.0, 5.0, 10.0})}}},
      {"mountain-pass", ordered_json{{"profile", "windowed-bubble"},
                                     {"window_scale", 0.0},
                                     {"step", 0.5},
                                     {"max_iters", 300},
                                     {"tol", 1e-6},
                                     {"path_points", 33},
                                     {"S0", 0.0},
                                     {"Ss", 0.0},
                                     {"support_frac", 0.75}}},
      {"extension-check", ordered_json{{"profile", "gaussian"},
                                       {"window_scale", 0.0},
                                       {"Y", 0.0},
                                       {"M", 128}}},
  };
  return table;
}

struct SchemaErrors {
  std::vector<std::string> items;
  void add(const std::string& s) { items.push_back(s); }
  void raise_if_any() const {
    if (items.empty()) return;
    std::string msg = "config:";
    for (const auto& s : items) msg += " [" + s + "]";
    throw validation_error(msg);
  }
};

inline bool want_number(const ordered_json& v) { return v.is_number(); }
inline bool want_integer(const ordered_json& v) { return v.is_number_integer(); }

inline void check_keys(const ordered_json& obj, const std::set<std::string>& allowed,
                       const std::string& prefix, SchemaErrors& errs) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) errs.add("unknown key \"" + prefix + it.key() + "\"");
  }
}

}  // namespace detail

inline const std::set<std::string>& known_commands() {
  static const std::set<std::string> cmds = {"hardy-constant", "quotient",        "minimize",
                                             "translate-scan", "mountain-pass",   "extension-check"};
  return cmds;
}

// Validates the raw config against the schema for `command`, collecting every
// offending key and violated hypothesis into one message, and returns the
// defaults-applied configuration.
inline RunConfig parse_config(const ordered_json& raw, const std::string& command) {
  if (!known_commands().count(command))
    throw validation_error("config: unknown command \"" + command + "\"");
  detail::SchemaErrors errs;
  if (!raw.is_object()) {
    errs.add("top level must be an object");
    errs.raise_if_any();
  }
  detail::check_keys(raw, {"problem", "grid", "solver", "output", "seed"}, "", errs);

  RunConfig cfg;

  if (raw.contains("problem")) {
    const auto& p = raw.at("problem");
    if (!p.is_object()) {
      errs.add("\"problem\" must be an object");
    } else {
      detail::check_keys(p, {"n", "alpha", "s", "gamma"}, "problem.", errs);
      if (p.contains("n")) {
        if (detail::want_integer(p["n"])) cfg.problem.n = p["n"].get<int>();
        else errs.add("\"problem.n\" must be an integer");
      }
      const std::pair<const char*, double*> real_fields[] = {
          {"alpha", &cfg.problem.alpha}, {"s", &cfg.problem.s}, {"gamma", &cfg.problem.gamma}};
      for (auto [key, dst] : real_fields) {
        if (p.contains(key)) {
          if (detail::want_number(p[key])) *dst = p[key].get<double>();
          else errs.add(std::string("\"problem.") + key + "\" must be a number");
        }
      }
    }
  }

  if (raw.contains("grid")) {
    const auto& g = raw.at("grid");
    if (!g.is_object()) {
      errs.add("\"grid\" must be an object");
    } else {
      detail::check_keys(g, {"N", "L"}, "grid.", errs);
      if (g.contains("N")) {
        if (detail::want_integer(g["N"])) cfg.N = g["N"].get<int>();
        else errs.add("\"grid.N\" must be an integer");
      }
      if (g.contains("L")) {
        if (detail::want_number(g["L"])) cfg.L = g["L"].get<double>();
        else errs.add("\"grid.L\" must be a number");
      }
    }
  }

  if (raw.contains("output")) {
    if (raw["output"].is_string()) cfg.output = raw["output"].get<std::string>();
    else errs.add("\"output\" must be a string");
  }
  if (raw.contains("seed")) {
    if (detail::want_integer(raw["seed"])) cfg.seed = raw["seed"].get<long long>();
    else errs.add("\"seed\" must be an integer");
  }

  cfg.solver = detail::solver_defaults().at(command);
  if (raw.contains("solver")) {
    const auto& s = raw.at("solver");
    if (!s.is_object()) {
      errs.add("\"solver\" must be an object");
    } else {
      std::set<std::string> allowed;
      for (auto it = cfg.solver.begin(); it != cfg.solver.end(); ++it) allowed.insert(it.key());
      detail::check_keys(s, allowed, "solver.", errs);
      for (auto it = s.begin(); it != s.end(); ++it) {
        if (!allowed.count(it.key())) continue;
        const auto& dflt = cfg.solver[it.key()];
        const auto& v = it.value();
        bool ok = true;
        if (dflt.is_string()) ok = v.is_string();
        else if (dflt.is_boolean()) ok = v.is_boolean();
        else if (dflt.is_array()) ok = v.is_array();
        else if (dflt.is_number_integer()) ok = detail::want_integer(v);
        else ok = detail::want_number(v);
        if (!ok) {
          errs.add("\"solver." + it.key() + "\" has the wrong type");
          continue;
        }
        if (v.is_array()) {
          for (const auto& e : v)
            if (!e.is_number()) {
              ok = false;
              errs.add("\"solver." + it.key() + "\" must contain only numbers");
              break;
            }
        }
        if (ok) cfg.solver[it.key()] = v;
      }
    }
  }

  // Hypotheses on the validated shapes.
  for (const auto& h : cfg.problem.violations()) errs.add(h);
  if (cfg.N < 8 || (cfg.N & (cfg.N - 1)) != 0) errs.add("N power of two, N >= 8");
  if (!(cfg.L > 0.0)) errs.add("L > 0");
  errs.raise_if_any();

  cfg.resolved = ordered_json{{"problem",
                               {{"n", cfg.problem.n},
                                {"alpha", cfg.problem.alpha},
                                {"s", cfg.problem.s},
                                {"gamma", cfg.problem.gamma}}},
                              {"grid", {{"N", cfg.N}, {"L", cfg.L}}},
                              {"solver", cfg.solver},
                              {"output", cfg.output},
                              {"seed", cfg.seed}};
  return cfg;
}

// Named reproducible initializers.
inline Field make_profile(const SpectralGrid& g, const std::string& name, const ProblemParams& p,
                          long long seed, double window_scale) {
  if (name == "bubble") return profiles::bubble(g, p.alpha);
  if (name == "gaussian") return profiles::gaussian(g);
  if (name == "random-smooth")
    return profiles::random_smooth(g, static_cast<std::uint64_t>(seed));
  if (name == "windowed-bubble") {
    const double w = window_scale > 0.0 ? window_scale : 0.36 * g.L;
    return profiles::windowed_bubble(g, p.alpha, w);
  }
  throw validation_error("profile must be one of: bubble, gaussian, random-smooth, windowed-bubble");
}

}  // namespace fhs
