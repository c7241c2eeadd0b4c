#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "fhs/extension.hpp"
#include "fhs/functionals.hpp"
#include "fhs/grid.hpp"
#include "fhs/params.hpp"
#include "fhs/solvers.hpp"

namespace fhs {

using ordered_json = nlohmann::ordered_json;

// All artifact writes go through a temp file + rename so a crashed run never
// leaves a truncated report behind.
inline void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw io_error("cannot open for write: " + tmp.string());
    f << text;
    f.flush();
    if (!f) throw io_error("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw io_error("rename failed: " + path.string() + " (" + ec.message() + ")");
}

inline void write_json_atomic(const std::filesystem::path& path, const ordered_json& j) {
  write_text_atomic(path, j.dump(2) + "\n");
}

inline ordered_json to_json(const ProblemParams& p) {
  return ordered_json{{"n", p.n}, {"alpha", p.alpha}, {"s", p.s}, {"gamma", p.gamma}};
}

inline ordered_json to_json(const SpectralGrid& g) {
  return ordered_json{{"n", g.n}, {"N", g.N}, {"L", g.L}, {"h", g.h()},
                      {"nodes", static_cast<std::uint64_t>(g.size())}};
}

inline ordered_json to_json(const QuotientReport& r) {
  return ordered_json{{"spectral", r.spectral},
                      {"hardy", r.hardy},
                      {"hs_term", r.hs_term},
                      {"sob_term", r.sob_term},
                      {"quotient", r.quotient}};
}

inline ordered_json to_json(const EnergyReport& r) {
  return ordered_json{{"half_norm", r.half_norm},
                      {"sob_piece", r.sob_piece},
                      {"hs_piece", r.hs_piece},
                      {"energy", r.energy},
                      {"nehari_residual", r.nehari_residual}};
}

inline ordered_json to_json(const ConcentrationReport& r) {
  ordered_json levy = ordered_json::array();
  for (const auto& row : r.levy) levy.push_back(ordered_json{{"r", row.r}, {"Q", row.Q}});
  return ordered_json{
      {"delta", r.delta}, {"theta", r.theta}, {"zeta", r.zeta}, {"mu", r.mu}, {"levy", levy}};
}

inline ordered_json to_json(const MountainPassReport& r) {
  return ordered_json{{"c_est", r.c_est},
                      {"c_star", r.c_star},
                      {"ps_residual", r.ps_residual},
                      {"ps_residual_rel", r.ps_residual_rel},
                      {"nehari_residual", r.nehari_residual},
                      {"theta", r.theta},
                      {"zeta", r.zeta},
                      {"mu", r.mu},
                      {"delta", r.delta},
                      {"rho", r.rho},
                      {"R", r.R},
                      {"t0", r.t0},
                      {"path_points", static_cast<std::uint64_t>(r.path.size())},
                      {"converged", r.converged},
                      {"iters", r.iters}};
}

namespace detail {

inline std::string csv_num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace detail

inline std::string history_csv(const std::vector<HistoryRow>& rows) {
  std::string out = "iter,value,residual,boundary_mass\n";
  for (const auto& r : rows)
    out += std::to_string(r.iter) + "," + detail::csv_num(r.value) + "," +
           detail::csv_num(r.residual) + "," + detail::csv_num(r.boundary_mass) + "\n";
  return out;
}

inline std::string scan_csv(const std::vector<TranslateScanRow>& rows) {
  std::string out = "delta,quotient\n";
  for (const auto& r : rows)
    out += detail::csv_num(r.delta) + "," + detail::csv_num(r.quotient) + "\n";
  return out;
}

inline std::string levy_csv(const std::vector<LevyRow>& rows) {
  std::string out = "r,Q\n";
  for (const auto& r : rows) out += detail::csv_num(r.r) + "," + detail::csv_num(r.Q) + "\n";
  return out;
}

// Common wrapper: every report names its command and embeds the fully
// resolved config so runs are reproducible from the report alone.
inline ordered_json report_envelope(const std::string& command, const ordered_json& resolved) {
  ordered_json j;
  j["report_version"] = 1;
  j["command"] = command;
  j["config"] = resolved;
  return j;
}

}  // namespace fhs
