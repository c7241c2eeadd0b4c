#pragma once

#include <cmath>
#include <vector>

#include "fhs/errors.hpp"
#include "fhs/field.hpp"
#include "fhs/fracops.hpp"
#include "fhs/params.hpp"
#include "fhs/quadrature.hpp"

namespace fhs {

// Weight rules and exponents for one (grid, params) pairing, reusable across
// many functional evaluations.
struct FunctionalContext {
  ProblemParams params;
  Exponents ex;
  SingularWeightRule w_alpha;  // |x|^{-alpha}
  SingularWeightRule w_s;      // |x|^{-s}

  FunctionalContext(const SpectralGrid& g, const ProblemParams& p)
      : params(p), ex(p), w_alpha(singular_weight(g, p.alpha)), w_s(singular_weight(g, p.s)) {
    p.validate();
  }
};

inline double hardy_term(const Field& u, const FunctionalContext& c) {
  return weighted_power_integral(u, c.w_alpha, 2.0);
}

inline double hs_term(const Field& u, const FunctionalContext& c) {
  return weighted_power_integral(u, c.w_s, c.ex.two_star_s);
}

inline double sob_term(const Field& u, const FunctionalContext& c) {
  const auto& v = u.values();
  double s = 0.0;
  for (double x : v) s += std::pow(std::abs(x), c.ex.two_star);
  return s * u.grid().cell_volume();
}

// seminorm^2 - gamma * Hardy term; the squared twisted norm.
inline double twisted_norm_sq(const Field& u, const FunctionalContext& c) {
  return seminorm_sq(u, c.params.alpha) - c.params.gamma * hardy_term(u, c);
}

inline double twisted_norm_sq(const Field& u, const ProblemParams& p) {
  return twisted_norm_sq(u, FunctionalContext(u.grid(), p));
}

struct QuotientReport {
  double spectral = 0.0;
  double hardy = 0.0;
  double hs_term = 0.0;
  double sob_term = 0.0;
  double quotient = 0.0;
};

inline QuotientReport quotient_evaluate(const Field& u, const FunctionalContext& c) {
  QuotientReport r;
  r.spectral = seminorm_sq(u, c.params.alpha);
  r.hardy = hardy_term(u, c);
  r.hs_term = hs_term(u, c);
  r.sob_term = sob_term(u, c);
  if (!(r.hs_term > 1e-300)) throw validation_error("quotient_evaluate: hs_term vanishes");
  const double twisted = r.spectral - c.params.gamma * r.hardy;
  if (twisted < -1e-10 * r.spectral)
    throw validation_error("quotient_evaluate: twisted norm not positive (norm equivalence fails)");
  r.quotient = twisted / std::pow(r.hs_term, 2.0 / c.ex.two_star_s);
  return r;
}

inline QuotientReport quotient_evaluate(const Field& u, const ProblemParams& p) {
  return quotient_evaluate(u, FunctionalContext(u.grid(), p));
}

struct EnergyReport {
  double half_norm = 0.0;
  double sob_piece = 0.0;
  double hs_piece = 0.0;
  double energy = 0.0;
  double nehari_residual = 0.0;
};

inline EnergyReport energy_evaluate(const Field& u, const FunctionalContext& c) {
  EnergyReport r;
  const double twisted = twisted_norm_sq(u, c);
  const double sob = sob_term(u, c);
  const double hs = hs_term(u, c);
  r.half_norm = 0.5 * twisted;
  r.sob_piece = sob / c.ex.two_star;
  r.hs_piece = hs / c.ex.two_star_s;
  r.energy = r.half_norm - r.sob_piece - r.hs_piece;
  const double pairing = twisted - sob - hs;  // <Psi'(u), u>
  r.nehari_residual =
      std::abs(r.energy - 0.5 * pairing - c.ex.alpha_over_2n * sob - c.ex.as_over_2ns * hs);
  return r;
}

inline EnergyReport energy_evaluate(const Field& u, const ProblemParams& p) {
  return energy_evaluate(u, FunctionalContext(u.grid(), p));
}

// Pointwise Psi'(u): (-Delta)^{alpha/2} u - gamma |x|^{-alpha} u
//                    - |u|^{2*-2} u - |x|^{-s} |u|^{2*_s - 2} u.
// |u|^{p-2} u is evaluated as sign(u) |u|^{p-1}.
inline std::vector<double> raw_energy_derivative(const Field& u, const FunctionalContext& c) {
  const auto Au = frac_laplacian(u, c.params.alpha / 2.0);
  const auto& v = u.values();
  const auto& av = Au.values();
  std::vector<double> raw(v.size());
  const double q1 = c.ex.two_star - 1.0, q2 = c.ex.two_star_s - 1.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double sgn = v[j] < 0.0 ? -1.0 : 1.0;
    const double m = std::abs(v[j]);
    raw[j] = av[j] - c.params.gamma * c.w_alpha.weights[j] * v[j] -
             sgn * std::pow(m, q1) - c.w_s.weights[j] * sgn * std::pow(m, q2);
  }
  return raw;
}

// Sobolev-metric gradient: divide the raw derivative by eps + |2 pi xi|^alpha
// with eps = (pi/L)^alpha, zero mode projected out. <Psi'(u), g> >= 0 with
// equality iff the projected raw derivative vanishes.
inline Field apply_inverse_metric(const SpectralGrid& g, const std::vector<double>& raw,
                                  double alpha) {
  const double pi = 3.14159265358979323846;
  const double eps = std::pow(pi / g.L, alpha);
  auto c = detail::analyze(g, raw);
  for (std::size_t f = 0; f < c.size(); ++f) {
    const double m2 = g.freq_mag_sq(f);
    if (m2 == 0.0) {
      c[f] = 0.0;
      continue;
    }
    c[f] /= (eps + std::pow(m2, alpha / 2.0));
  }
  return Field::from_coeffs(g, std::move(c));
}

inline Field energy_gradient(const Field& u, const FunctionalContext& c) {
  return apply_inverse_metric(u.grid(), raw_energy_derivative(u, c), c.params.alpha);
}

inline Field energy_gradient(const Field& u, const ProblemParams& p) {
  return energy_gradient(u, FunctionalContext(u.grid(), p));
}

// Threshold c* = min{ (alpha/2n) S0^{n/alpha},
//                     ((alpha-s)/(2(n-s))) Ss^{(n-s)/(alpha-s)} }.
inline double c_star(const ProblemParams& p, double S0, double Ss) {
  if (!(S0 > 0.0 && Ss > 0.0)) throw validation_error("c_star: S0, Ss > 0");
  const Exponents ex(p);
  const double b0 = ex.alpha_over_2n * std::pow(S0, p.n / p.alpha);
  const double bs = ex.as_over_2ns * std::pow(Ss, (p.n - p.s) / (p.alpha - p.s));
  return std::min(b0, bs);
}

}  // namespace fhs
