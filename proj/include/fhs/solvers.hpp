#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "fhs/errors.hpp"
#include "fhs/field.hpp"
#include "fhs/fracops.hpp"
#include "fhs/functionals.hpp"

namespace fhs {

struct MinimizerConfig {
  double step = 0.5;        // initial Sobolev-gradient step
  int max_iters = 500;
  double tol = 1e-8;        // relative quotient-decrease stop threshold
  int symmetrize_every = 10;  // cadence; 0 disables
  bool renormalize = true;  // project to hs_term = 1 each step
  double support_frac = 0.75;  // iterates are pinned to zero where |x|_inf > frac * L

  void validate() const {
    if (!(step > 0.0)) throw validation_error("MinimizerConfig: step > 0");
    if (!(tol > 0.0)) throw validation_error("MinimizerConfig: tol > 0");
    if (max_iters < 1) throw validation_error("MinimizerConfig: max_iters >= 1");
    if (symmetrize_every < 0) throw validation_error("MinimizerConfig: symmetrize_every >= 0");
    if (!(support_frac > 0.0 && support_frac <= 1.0))
      throw validation_error("MinimizerConfig: 0 < support_frac <= 1");
  }
};

struct HistoryRow {
  int iter = 0;
  double value = 0.0;          // quotient (minimize) or peak energy (mountain pass)
  double residual = 0.0;       // Sobolev-gradient norm
  double boundary_mass = 0.0;  // squared-mass fraction with |x|_inf > L/2
};

struct MinimizeResult {
  Field field;
  QuotientReport report;
  std::vector<HistoryRow> history;
  bool converged = false;
  int iters = 0;
  double boundary_mass = 0.0;
};

namespace detail {

// Support-window gauge: on the periodic box the seminorm kernel (constants)
// would drive any unconstrained quotient descent toward flat fields, which
// have no continuum counterpart. Pinning the iterates to zero outside
// |x|_inf <= frac * L restores the decay condition of the continuum class
// while leaving bubble-shaped fields (large box mean at moderate L)
// admissible.
inline std::vector<double> window_masked(const SpectralGrid& g, std::vector<double> v,
                                         double frac) {
  const double cut = frac * g.L * (1.0 + 1e-12);
  for (std::size_t j = 0; j < v.size(); ++j) {
    const auto x = g.node(j);
    for (int a = 0; a < g.n; ++a) {
      if (std::abs(x[a]) > cut) {
        v[j] = 0.0;
        break;
      }
    }
  }
  return v;
}

inline Field scaled(const Field& u, double t) {
  std::vector<double> v = u.values();
  for (double& x : v) x *= t;
  return Field(u.grid(), std::move(v));
}

inline Field hs_normalized(const Field& u, const FunctionalContext& c) {
  const double hs = hs_term(u, c);
  if (!(hs > 1e-300)) throw validation_error("hs normalization: hs_term vanishes");
  return scaled(u, std::pow(hs, -1.0 / c.ex.two_star_s));
}

// d/du of Q = T(u) / hs(u)^{2/p}:
//   hs^{-2/p} [ 2((-Delta)^{alpha/2} - gamma |x|^{-alpha}) u
//               - (2T/hs) |x|^{-s} |u|^{p-2} u ].
inline std::vector<double> raw_quotient_derivative(const Field& u, const FunctionalContext& c,
                                                   const QuotientReport& r) {
  const auto Au = frac_laplacian(u, c.params.alpha / 2.0);
  const auto& v = u.values();
  const auto& av = Au.values();
  const double twisted = r.spectral - c.params.gamma * r.hardy;
  const double pref = std::pow(r.hs_term, -2.0 / c.ex.two_star_s);
  const double tq = 2.0 * twisted / r.hs_term;
  const double q2 = c.ex.two_star_s - 1.0;
  std::vector<double> raw(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double sgn = v[j] < 0.0 ? -1.0 : 1.0;
    raw[j] = pref * (2.0 * (av[j] - c.params.gamma * c.w_alpha.weights[j] * v[j]) -
                     tq * c.w_s.weights[j] * sgn * std::pow(std::abs(v[j]), q2));
  }
  return raw;
}

// Preconditioned direction restricted to the support window, plus the
// residual sqrt(<P raw, M^{-1} P raw>_h) of the windowed problem (raw must
// already be masked). Masking the direction after the pairing keeps the
// descent property: <raw, P M^{-1} P raw> = <P raw, M^{-1} P raw> >= 0. For
// frac < 1 the box constant is not a window field, so the zero-mode
// projection inside the inverse metric costs no stationarity information.
inline std::pair<Field, double> precondition(const SpectralGrid& g, const std::vector<double>& raw,
                                             double alpha, double frac) {
  Field dir = apply_inverse_metric(g, raw, alpha);
  const auto& dv = dir.values();
  double pair = 0.0;
  for (std::size_t j = 0; j < raw.size(); ++j) pair += raw[j] * dv[j];
  pair *= g.cell_volume();
  Field masked(g, window_masked(g, dir.values(), frac));
  return {std::move(masked), std::sqrt(std::max(0.0, pair))};
}

inline double boundary_mass_of(const Field& u) {
  return 1.0 - boxed_mass_fraction(u, 0.5 * u.grid().L);
}

}  // namespace detail

// Projected Sobolev-gradient descent on the quotient over the sphere
// hs_term = 1 in the support-window gauge, with backtracking line search
// (descent is monotone by construction) and optional symmetrized restarts
// for gamma >= 0. Without an accepted step twice in a row the iterate is
// stationary to line-search resolution and the run stops. When
// symmetrization is active the returned candidate is the symmetrized
// representative (nonnegative, radially non-increasing); its quotient never
// exceeds the internal iterate's.
inline MinimizeResult minimize_quotient(const Field& init, const ProblemParams& p,
                                        const MinimizerConfig& cfg) {
  cfg.validate();
  const auto& g = init.grid();
  FunctionalContext ctx(g, p);
  const double w = cfg.support_frac;

  Field u(g, detail::window_masked(g, init.values(), w));
  if (!(hs_term(u, ctx) > 1e-300))
    throw validation_error("minimize_quotient: degenerate init (hs_term vanishes in the window)");
  if (cfg.renormalize) u = detail::hs_normalized(u, ctx);
  QuotientReport rep = quotient_evaluate(u, ctx);

  const bool sym_active = cfg.symmetrize_every > 0 && p.gamma >= 0.0;
  std::vector<HistoryRow> history;
  bool converged = false;
  auto [dir, res] = detail::precondition(
      g, detail::window_masked(g, detail::raw_quotient_derivative(u, ctx, rep), w), p.alpha, w);
  history.push_back({0, rep.quotient, res, detail::boundary_mass_of(u)});

  double tau = cfg.step;
  int stall = 0;
  int iter = 0;
  for (iter = 1; iter <= cfg.max_iters; ++iter) {
    bool moved = false;
    double reldec = 0.0;
    double t = tau;
    const auto& dv = dir.values();
    for (int k = 0; k < 50; ++k) {
      std::vector<double> cv = u.values();
      for (std::size_t j = 0; j < cv.size(); ++j) cv[j] -= t * dv[j];
      Field cand(g, std::move(cv));  // u and dir are window fields, so cand is too
      QuotientReport crep;
      bool admissible = true;
      try {
        if (cfg.renormalize) cand = detail::hs_normalized(cand, ctx);
        crep = quotient_evaluate(cand, ctx);
      } catch (const validation_error&) {
        admissible = false;
      }
      if (admissible && crep.quotient < rep.quotient) {
        reldec = (rep.quotient - crep.quotient) / std::max(std::abs(rep.quotient), 1e-300);
        u = std::move(cand);
        rep = crep;
        tau = std::min(t * 1.3, 1e6);
        moved = true;
        break;
      }
      t *= 0.5;
    }
    stall = moved ? 0 : stall + 1;

    if (sym_active && iter % cfg.symmetrize_every == 0) {
      // For n >= 2 the rearranged ball can poke out of the window corner-wise;
      // re-masking keeps the candidate admissible and it competes on quotient.
      Field sym(g, detail::window_masked(g, schwarz_rearrange(u).values(), w));
      bool admissible = true;
      QuotientReport srep;
      try {
        if (cfg.renormalize) sym = detail::hs_normalized(sym, ctx);
        srep = quotient_evaluate(sym, ctx);
      } catch (const validation_error&) {
        admissible = false;
      }
      if (admissible && srep.quotient <= rep.quotient) {
        if (srep.quotient < rep.quotient) stall = 0;
        u = std::move(sym);
        rep = srep;
        moved = true;
      }
    }

    if (moved) {
      auto pre = detail::precondition(
          g, detail::window_masked(g, detail::raw_quotient_derivative(u, ctx, rep), w), p.alpha, w);
      dir = std::move(pre.first);
      res = pre.second;
    }
    history.push_back({iter, rep.quotient, res, detail::boundary_mass_of(u)});

    if (stall == 0 && reldec < cfg.tol && reldec > 0.0) {
      converged = true;
      break;
    }
    if (stall >= 2) {  // no descent direction at line-search resolution
      converged = true;
      break;
    }
  }
  const int iters = std::min(iter, cfg.max_iters);

  Field final_field = u;
  QuotientReport final_rep = rep;
  if (sym_active) {
    // Representative with the structure of the continuum extremal.
    try {
      Field sym(g, detail::window_masked(g, schwarz_rearrange(u).values(), w));
      if (cfg.renormalize) sym = detail::hs_normalized(sym, ctx);
      QuotientReport srep = quotient_evaluate(sym, ctx);
      if (srep.quotient <= rep.quotient * (1.0 + 1e-9) + 1e-18) {
        final_field = std::move(sym);
        final_rep = srep;
      }
    } catch (const validation_error&) {
      // keep the internal iterate
    }
  }
  const double bmass = detail::boundary_mass_of(final_field);
  // s = 0 with gamma < 0 has no continuum minimizer; the minimizing sequence
  // escapes toward infinity and any stall here is a truncation artifact. When
  // the run shows outward drift, refuse to report convergence and let the
  // boundary-mass diagnostic tell the story.
  if (p.s == 0.0 && p.gamma < 0.0 && !history.empty() &&
      bmass > history.front().boundary_mass + 0.01) {
    converged = false;
  }
  return MinimizeResult{std::move(final_field), final_rep, std::move(history), converged, iters,
                        bmass};
}

struct TranslateScanRow {
  double delta = 0.0;
  double quotient = 0.0;
};

// Quotient of the bubble translated by delta along the first axis. Only
// meaningful at s = 0 where the continuum quotient depends on the offset
// solely through the Hardy term.
inline std::vector<TranslateScanRow> translate_scan(const Field& bubble, const ProblemParams& p,
                                                    const std::vector<double>& deltas) {
  if (p.s != 0.0) throw validation_error("translate_scan: requires s = 0");
  FunctionalContext ctx(bubble.grid(), p);
  std::vector<TranslateScanRow> rows;
  rows.reserve(deltas.size());
  for (double d : deltas) {
    std::vector<double> shift(static_cast<std::size_t>(p.n), 0.0);
    shift[0] = d;
    Field t = translate(bubble, shift);
    rows.push_back({d, quotient_evaluate(t, ctx).quotient});
  }
  return rows;
}

struct LevyRow {
  double r = 0.0;
  double Q = 0.0;
};

struct ConcentrationReport {
  double delta = 0.0;
  double theta = 0.0;  // int_{B_delta} |u|^{2*}
  double zeta = 0.0;   // int_{B_delta} |x|^{-s} |u|^{2*_s}
  double mu = 0.0;     // int_{B_delta} (|(-Delta)^{alpha/4} u|^2 - gamma |x|^{-alpha} u^2)
  std::vector<LevyRow> levy;
};

// Ball-restricted concentration diagnostics plus the Levy table Q(r) of the
// Hardy-Sobolev density.
inline ConcentrationReport concentration(const Field& u, const ProblemParams& p, double delta,
                                         std::vector<double> radii) {
  p.validate();
  const auto& g = u.grid();
  const double corner = g.L * std::sqrt(static_cast<double>(g.n));
  if (!(delta > 0.0)) throw validation_error("concentration: delta > 0");
  if (delta > corner * 1.01) throw validation_error("concentration: delta exceeds the box");
  FunctionalContext ctx(g, p);
  const Field A4 = frac_laplacian(u, p.alpha / 4.0);

  ConcentrationReport rep;
  rep.delta = delta;
  const auto& v = u.values();
  const auto& av = A4.values();
  const double hn = g.cell_volume();
  const double d2 = delta * delta;
  std::vector<std::pair<double, double>> hs_density;  // (radius, node hs mass)
  hs_density.reserve(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double r2 = g.radius_sq(j);
    const double m = std::abs(v[j]);
    const double dens_hs = ctx.w_s.weights[j] * std::pow(m, ctx.ex.two_star_s) * hn;
    hs_density.emplace_back(std::sqrt(r2), dens_hs);
    if (r2 <= d2) {
      rep.theta += std::pow(m, ctx.ex.two_star) * hn;
      rep.zeta += dens_hs;
      rep.mu += (av[j] * av[j] - p.gamma * ctx.w_alpha.weights[j] * v[j] * v[j]) * hn;
    }
  }

  std::sort(hs_density.begin(), hs_density.end());
  std::sort(radii.begin(), radii.end());
  rep.levy.reserve(radii.size());
  double acc = 0.0;
  std::size_t pos = 0;
  for (double r : radii) {
    if (!(r >= 0.0)) throw validation_error("concentration: radii >= 0");
    while (pos < hs_density.size() && hs_density[pos].first <= r) acc += hs_density[pos++].second;
    rep.levy.push_back({r, acc});
  }
  return rep;
}

// Radius where the Levy table crosses half its final value (piecewise-linear
// inversion; unique for strictly positive densities).
inline double median_radius(const ConcentrationReport& rep) {
  if (rep.levy.empty()) throw validation_error("median_radius: empty levy table");
  const double half = 0.5 * rep.levy.back().Q;
  if (!(half > 0.0)) throw validation_error("median_radius: zero hs mass");
  double r0 = 0.0, q0 = 0.0;
  for (const auto& row : rep.levy) {
    if (row.Q >= half) {
      if (row.Q == q0) return row.r;
      return r0 + (row.r - r0) * (half - q0) / (row.Q - q0);
    }
    r0 = row.r;
    q0 = row.Q;
  }
  return rep.levy.back().r;
}

struct MountainPassConfig {
  int path_points = 33;
  int max_iters = 300;
  double tol = 1e-6;  // relative Sobolev-gradient residual at the maximizer
  double step = 0.5;
  double support_frac = 0.75;  // same window gauge as the minimizer

  void validate() const {
    if (path_points < 3) throw validation_error("MountainPassConfig: path_points >= 3");
    if (max_iters < 1) throw validation_error("MountainPassConfig: max_iters >= 1");
    if (!(tol > 0.0)) throw validation_error("MountainPassConfig: tol > 0");
    if (!(step > 0.0)) throw validation_error("MountainPassConfig: step > 0");
    if (!(support_frac > 0.0 && support_frac <= 1.0))
      throw validation_error("MountainPassConfig: 0 < support_frac <= 1");
  }
};

struct MountainPassReport {
  std::vector<Field> path;        // sigma discretized from 0 to t0 * direction
  std::optional<Field> maximizer; // the deformed path maximizer itself
  double c_est = 0.0;             // energy at the path maximizer
  double c_star = 0.0;
  double ps_residual = 0.0;      // Sobolev-gradient norm at the maximizer
  double ps_residual_rel = 0.0;  // ps_residual / twisted norm of the maximizer
  double nehari_residual = 0.0;  // energy identity defect at the maximizer
  double theta = 0.0;
  double zeta = 0.0;
  double mu = 0.0;
  double delta = 0.0;  // concentration ball radius (median of the Levy table)
  double rho = 0.0;    // barrier height on the initial ray
  double R = 0.0;      // twisted norm where the barrier is attained
  double t0 = 0.0;
  bool converged = false;
  int iters = 0;
  std::vector<HistoryRow> history;
};

namespace detail {

struct RayData {
  double T = 0.0;  // twisted norm^2 of the direction
  double sob = 0.0;
  double hs = 0.0;
};

inline RayData ray_data(const Field& u, const FunctionalContext& c) {
  return {twisted_norm_sq(u, c), sob_term(u, c), hs_term(u, c)};
}

inline double psi_on_ray(const RayData& r, const Exponents& ex, double t) {
  return 0.5 * t * t * r.T - std::pow(t, ex.two_star) * r.sob / ex.two_star -
         std::pow(t, ex.two_star_s) * r.hs / ex.two_star_s;
}

// Unique t > 0 with <Psi'(t u), u> = 0, by bisection on
// f(t) = T - t^{2*-2} sob - t^{p-2} hs (strictly decreasing from T > 0).
inline double ray_peak(const RayData& r, const Exponents& ex) {
  if (!(r.T > 0.0)) throw path_collapse_error("mountain_pass: direction has non-positive norm");
  if (!(r.sob + r.hs > 0.0)) throw path_collapse_error("mountain_pass: degenerate direction");
  auto f = [&](double t) {
    return r.T - std::pow(t, ex.two_star - 2.0) * r.sob - std::pow(t, ex.two_star_s - 2.0) * r.hs;
  };
  double hi = 1.0;
  int guard = 0;
  while (f(hi) > 0.0 && guard++ < 200) hi *= 2.0;
  double lo = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline double ray_t0(const RayData& r, const Exponents& ex, double start) {
  double t = std::max(start, 1.0);
  int guard = 0;
  while (psi_on_ray(r, ex, t) >= 0.0 && guard++ < 200) t *= 2.0;
  if (psi_on_ray(r, ex, t) >= 0.0) throw path_collapse_error("mountain_pass: no negative-energy endpoint");
  return t;
}

}  // namespace detail

// Numerical mountain pass on the ray-path family: the path is the segment
// sigma(t) = t * t0 * u through the current direction u; its maximizer is the
// Nehari point of the ray (closed form in the three ray invariants), and each
// iteration deforms the maximizer by a backtracked Sobolev-gradient descent
// step, which re-aims the whole path. Converged runs have ps_residual_rel
// below tol and 0 < c_est < c_star.
inline MountainPassReport mountain_pass(const Field& seed, const ProblemParams& p, double S0,
                                        double Ss, const MountainPassConfig& cfg) {
  cfg.validate();
  p.validate();
  if (!(p.s > 0.0)) throw validation_error("mountain_pass: requires 0 < s < alpha");
  if (!(p.gamma >= 0.0)) throw validation_error("mountain_pass: requires 0 <= gamma < gamma_H");
  const auto& g = seed.grid();
  FunctionalContext ctx(g, p);
  const Exponents& ex = ctx.ex;
  const double wfrac = cfg.support_frac;

  Field u(g, detail::window_masked(g, seed.values(), wfrac));
  {
    const double T = twisted_norm_sq(u, ctx);
    if (!(T > 1e-300)) throw validation_error("mountain_pass: degenerate seed");
    u = detail::scaled(u, 1.0 / std::sqrt(T));
  }

  MountainPassReport rep;
  detail::RayData ray = detail::ray_data(u, ctx);
  double tpeak = detail::ray_peak(ray, ex);
  double c_cur = detail::psi_on_ray(ray, ex, tpeak);
  if (!(c_cur > 0.0)) throw path_collapse_error("mountain_pass: no positive barrier on the seed ray");
  rep.rho = c_cur;
  rep.R = tpeak * std::sqrt(ray.T);
  rep.c_star = c_star(p, S0, Ss);

  Field w = detail::scaled(u, tpeak);  // current path maximizer
  double tau = cfg.step;
  double res = 0.0, relres = 0.0;
  int iter = 0;
  for (iter = 0; iter < cfg.max_iters; ++iter) {
    auto raw = detail::window_masked(g, raw_energy_derivative(w, ctx), wfrac);
    auto pre = detail::precondition(g, raw, p.alpha, wfrac);
    res = pre.second;
    const double Tw = tpeak * tpeak * ray.T;
    relres = res / std::sqrt(Tw);
    rep.history.push_back({iter, c_cur, res, detail::boundary_mass_of(w)});
    if (relres < cfg.tol) break;

    bool moved = false;
    double t = tau;
    const auto& dv = pre.first.values();
    for (int k = 0; k < 40; ++k) {
      std::vector<double> cv = w.values();
      for (std::size_t j = 0; j < cv.size(); ++j) cv[j] -= t * dv[j];
      Field cand(g, std::move(cv));  // window fields stay window fields
      try {
        const double Tc = twisted_norm_sq(cand, ctx);
        if (Tc > 1e-300) {
          Field dirc = detail::scaled(cand, 1.0 / std::sqrt(Tc));
          detail::RayData rayc = detail::ray_data(dirc, ctx);
          const double tc = detail::ray_peak(rayc, ex);
          const double cc = detail::psi_on_ray(rayc, ex, tc);
          if (cc > 0.0 && cc < c_cur) {
            u = std::move(dirc);
            ray = rayc;
            tpeak = tc;
            c_cur = cc;
            w = detail::scaled(u, tpeak);
            tau = std::min(t * 1.2, 1e6);
            moved = true;
            break;
          }
        }
      } catch (const path_collapse_error&) {
        // candidate ray lost its barrier; shorten the step
      }
      t *= 0.5;
    }
    if (!moved) break;  // stationary to line-search resolution
  }

  {
    auto raw = detail::window_masked(g, raw_energy_derivative(w, ctx), wfrac);
    res = detail::precondition(g, raw, p.alpha, wfrac).second;
    relres = res / (tpeak * std::sqrt(ray.T));
  }
  rep.c_est = c_cur;
  rep.maximizer = w;
  rep.ps_residual = res;
  rep.ps_residual_rel = relres;
  rep.nehari_residual = energy_evaluate(w, ctx).nehari_residual;
  rep.iters = iter;
  rep.converged = relres < cfg.tol && rep.c_est > 0.0 && rep.c_est < rep.c_star;

  rep.t0 = detail::ray_t0(ray, ex, 1.0);
  rep.path.reserve(static_cast<std::size_t>(cfg.path_points));
  for (int i = 0; i < cfg.path_points; ++i) {
    const double ti = rep.t0 * static_cast<double>(i) / static_cast<double>(cfg.path_points - 1);
    rep.path.push_back(detail::scaled(u, ti));
  }

  {
    const double corner = g.L * std::sqrt(static_cast<double>(g.n));
    std::vector<double> radii(64);
    for (std::size_t k = 0; k < radii.size(); ++k)
      radii[k] = corner * static_cast<double>(k + 1) / static_cast<double>(radii.size());
    ConcentrationReport full = concentration(w, p, corner, radii);
    rep.delta = median_radius(full);
    ConcentrationReport at_median = concentration(w, p, rep.delta, std::move(radii));
    rep.theta = at_median.theta;
    rep.zeta = at_median.zeta;
    rep.mu = at_median.mu;
  }
  return rep;
}

}  // namespace fhs
