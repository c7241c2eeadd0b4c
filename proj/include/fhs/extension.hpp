#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "fhs/constants.hpp"
#include "fhs/errors.hpp"
#include "fhs/field.hpp"
#include "fhs/fracops.hpp"
#include "fhs/grid.hpp"

namespace fhs {

// Normalized extension profile phi(t) = t^nu K_nu(t) / (2^{nu-1} Gamma(nu)),
// nu = alpha/2: the decaying solution of phi'' + ((1-alpha)/t) phi' = phi
// with phi(0) = 1. At alpha = 1 this is exactly e^{-t}.
inline double extension_profile(double t, double alpha) {
  const double nu = alpha / 2.0;
  if (t <= 0.0) return 1.0;
  if (t > 690.0) return 0.0;  // K_nu underflows; profile is e^{-t} small
  return std::pow(t, nu) * boost::math::cyl_bessel_k(nu, t) /
         (std::pow(2.0, nu - 1.0) * boost::math::tgamma(nu));
}

// Samples of the alpha-harmonic extension on a half-space strip. Values are
// stored slice-major: values[m * N^n + j] = w(x_j, y_m), y ascending.
struct ExtensionField {
  SpectralGrid base;
  double alpha = 1.0;
  double k_alpha = 1.0;
  double Y = 1.0;
  std::vector<double> ynodes;
  std::vector<double> values;
  bool strip_warning = false;  // set when 2 pi |xi_max| Y < 5
};

// Geometric mesh graded toward y = 0 with ratio 1.05; y_M = Y.
inline std::vector<double> extension_mesh(double Y, int M, double ratio = 1.05) {
  std::vector<double> y(static_cast<std::size_t>(M));
  for (int m = 0; m < M; ++m) y[static_cast<std::size_t>(m)] = Y * std::pow(ratio, m + 1 - M);
  return y;
}

inline double default_strip_height(const SpectralGrid& g) {
  // 2 pi xi_min Y = 8 for the smallest nonzero frequency.
  const double pi = 3.14159265358979323846;
  return 8.0 * g.L / pi;
}

namespace detail {

// Profile tables are shared across calls: the Bessel evaluations depend only
// on (grid, alpha, Y, M), not on the boundary data.
inline const std::vector<double>& profile_table(const SpectralGrid& g, double alpha, double Y,
                                                int M) {
  using Key = std::tuple<int, int, double, double, double, int>;
  static std::mutex mu;
  static std::map<Key, std::vector<double>> cache;
  const Key key{g.n, g.N, g.L, alpha, Y, M};
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  const auto y = extension_mesh(Y, M);
  std::vector<double> table(g.size() * static_cast<std::size_t>(M));
  std::map<double, std::size_t> seen;  // kappa -> first flat index
  for (std::size_t f = 0; f < g.size(); ++f) {
    const double kappa = std::sqrt(g.freq_mag_sq(f));
    auto hit = seen.find(kappa);
    if (hit != seen.end()) {
      for (int m = 0; m < M; ++m)
        table[f * static_cast<std::size_t>(M) + m] = table[hit->second * static_cast<std::size_t>(M) + m];
      continue;
    }
    for (int m = 0; m < M; ++m)
      table[f * static_cast<std::size_t>(M) + m] =
          extension_profile(kappa * y[static_cast<std::size_t>(m)], alpha);
    seen.emplace(kappa, f);
  }
  return cache.emplace(key, std::move(table)).first->second;
}

}  // namespace detail

inline ExtensionField extend(const Field& u, double alpha, double Y, int M) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw validation_error("extend: 0 < alpha < 2");
  if (!(Y > 0.0)) throw validation_error("extend: Y > 0");
  if (M < 16) throw validation_error("extend: M >= 16");

  const auto& g = u.grid();
  ExtensionField w;
  w.base = g;
  w.alpha = alpha;
  w.k_alpha = constants::k_alpha(alpha);
  w.Y = Y;
  w.ynodes = extension_mesh(Y, M);
  const double pi = 3.14159265358979323846;
  const double kappa_max = pi * g.N / (2.0 * g.L) * std::sqrt(static_cast<double>(g.n));
  w.strip_warning = kappa_max * Y < 5.0;

  const auto& table = detail::profile_table(g, alpha, Y, M);
  const auto& c = u.coeffs();
  const std::size_t total = g.size();
  w.values.resize(total * static_cast<std::size_t>(M));
  std::vector<std::complex<double>> slice(total);
  for (int m = 0; m < M; ++m) {
    for (std::size_t f = 0; f < total; ++f)
      slice[f] = c[f] * table[f * static_cast<std::size_t>(M) + m];
    auto vals = detail::synthesize(g, slice);
    for (std::size_t j = 0; j < total; ++j) w.values[static_cast<std::size_t>(m) * total + j] = vals[j];
  }
  return w;
}

namespace detail {

// Exact weighted energy of the two-point segment reconstructions:
// a + b y^alpha while kappa y <= 1, linear once kappa y > 1, and a decaying
// exponential tail beyond Y. Integrals are closed-form monomials; the tail
// uses the upper incomplete gamma.
struct LineQuad {
  double kappa, alpha;

  double I0(double a, double b) const {
    return (std::pow(b, 2.0 - alpha) - std::pow(a, 2.0 - alpha)) / (2.0 - alpha);
  }
  double I1(double a, double b) const {
    return (std::pow(b, 3.0 - alpha) - std::pow(a, 3.0 - alpha)) / (3.0 - alpha);
  }
  double I2(double a, double b) const {
    return (std::pow(b, 4.0 - alpha) - std::pow(a, 4.0 - alpha)) / (4.0 - alpha);
  }

  double linear_seg(double a, double b, double ga, double gb) const {
    const double d = (gb - ga) / (b - a);
    const double c = ga - d * a;
    return d * d * I0(a, b) +
           kappa * kappa * (c * c * I0(a, b) + 2.0 * c * d * I1(a, b) + d * d * I2(a, b));
  }

  double power_seg(double a, double b, double ga, double gb) const {
    const double pa = std::pow(a, alpha), pb = std::pow(b, alpha);
    const double B = (gb - ga) / (pb - pa);
    const double A = ga - B * pa;
    const double dterm = B * B * alpha * (pb - pa);
    const double mterm =
        kappa * kappa *
        (A * A * I0(a, b) + A * B * (b * b - a * a) +
         B * B * (std::pow(b, 2.0 + alpha) - std::pow(a, 2.0 + alpha)) / (2.0 + alpha));
    return dterm + mterm;
  }

  double tail(double Y, double gY) const {
    if (gY == 0.0 || kappa == 0.0) return 0.0;
    const double x = 2.0 * kappa * Y;
    const double pre = 2.0 * kappa * kappa * std::pow(2.0 * kappa, alpha - 2.0) * gY * gY;
    if (x <= 300.0)
      return pre * std::exp(x) * boost::math::tgamma(2.0 - alpha, x);
    // e^x Gamma(2-alpha, x) ~ x^{1-alpha} (1 + (1-alpha)/x + (1-alpha)(-alpha)/x^2)
    const double a1 = 1.0 - alpha;
    return pre * std::pow(x, a1) * (1.0 + a1 / x + a1 * (a1 - 1.0) / (x * x));
  }

  // Full half-line energy of the samples g over mesh y (ascending, back = Y),
  // including the extrapolated first segment and the exponential tail.
  double line_energy(const std::vector<double>& y, const double* g, int M, double g0) const {
    double E = power_seg(0.0, y[0], g0, g[0]);
    for (int m = 0; m + 1 < M; ++m) {
      const double a = y[static_cast<std::size_t>(m)], b = y[static_cast<std::size_t>(m) + 1];
      E += (kappa * b > 1.0) ? linear_seg(a, b, g[m], g[m + 1])
                             : power_seg(a, b, g[m], g[m + 1]);
    }
    E += tail(y[static_cast<std::size_t>(M) - 1], g[M - 1]);
    return E;
  }
};

// Boundary value extrapolated in y^alpha coordinates from the two smallest
// nodes; equals the first interpolant's value at y = 0.
inline double trace_extrapolate(double y1, double y2, double g1, double g2, double alpha) {
  const double p1 = std::pow(y1, alpha), p2 = std::pow(y2, alpha);
  return (g1 * p2 - g2 * p1) / (p2 - p1);
}

}  // namespace detail

// k_alpha times the weighted Dirichlet energy of the strip samples: spectral
// horizontal gradient, per-mode vertical quadrature on the graded mesh.
// Works for arbitrary (non-harmonic) sample sets.
inline double extension_energy(const ExtensionField& w) {
  const auto& g = w.base;
  const std::size_t total = g.size();
  const int M = static_cast<int>(w.ynodes.size());

  // Mode amplitudes per slice.
  std::vector<std::complex<double>> modes(total * static_cast<std::size_t>(M));
  {
    std::vector<double> slice(total);
    for (int m = 0; m < M; ++m) {
      for (std::size_t j = 0; j < total; ++j) slice[j] = w.values[static_cast<std::size_t>(m) * total + j];
      auto c = detail::analyze(g, slice);
      for (std::size_t f = 0; f < total; ++f) modes[f * static_cast<std::size_t>(M) + m] = c[f];
    }
  }

  const double inv_vol = std::pow(2.0 * g.L, -g.n);
  std::vector<double> re(static_cast<std::size_t>(M)), im(static_cast<std::size_t>(M));
  double E = 0.0;
  for (std::size_t f = 0; f < total; ++f) {
    const double kappa = std::sqrt(g.freq_mag_sq(f));
    for (int m = 0; m < M; ++m) {
      const auto z = modes[f * static_cast<std::size_t>(M) + m];
      re[static_cast<std::size_t>(m)] = z.real();
      im[static_cast<std::size_t>(m)] = z.imag();
    }
    detail::LineQuad q{kappa, w.alpha};
    const double g0r = detail::trace_extrapolate(w.ynodes[0], w.ynodes[1], re[0], re[1], w.alpha);
    const double g0i = detail::trace_extrapolate(w.ynodes[0], w.ynodes[1], im[0], im[1], w.alpha);
    E += q.line_energy(w.ynodes, re.data(), M, g0r);
    E += q.line_energy(w.ynodes, im.data(), M, g0i);
  }
  return w.k_alpha * E * inv_vol;
}

// Boundary field recovered by per-mode extrapolation toward y = 0.
inline Field trace_field(const ExtensionField& w) {
  const auto& g = w.base;
  const std::size_t total = g.size();
  const int M = static_cast<int>(w.ynodes.size());
  std::vector<double> s1(total), s2(total);
  for (std::size_t j = 0; j < total; ++j) {
    s1[j] = w.values[j];
    s2[j] = w.values[total + j];
  }
  auto c1 = detail::analyze(g, s1);
  auto c2 = detail::analyze(g, s2);
  (void)M;
  std::vector<std::complex<double>> c0(total);
  const double p1 = std::pow(w.ynodes[0], w.alpha), p2 = std::pow(w.ynodes[1], w.alpha);
  for (std::size_t f = 0; f < total; ++f) c0[f] = (c1[f] * p2 - c2[f] * p1) / (p2 - p1);
  return Field::from_coeffs(g, std::move(c0));
}

// extension_energy(w) - seminorm_sq(trace(w)). Nonnegative for admissible
// sample sets; near zero when w = extend(u).
inline double trace_defect(const ExtensionField& w, const Field& u) {
  if (!(u.grid() == w.base)) throw grid_mismatch_error("trace_defect: incompatible grids");
  return extension_energy(w) - seminorm_sq(trace_field(w), w.alpha);
}

// Per-mode profile table as CSV (kappa, y, amplitude magnitude).
inline std::string extension_profiles_csv(const ExtensionField& w) {
  const auto& g = w.base;
  const std::size_t total = g.size();
  const int M = static_cast<int>(w.ynodes.size());
  std::vector<double> slice(total);
  std::vector<std::vector<std::complex<double>>> mode_cols(static_cast<std::size_t>(M));
  for (int m = 0; m < M; ++m) {
    for (std::size_t j = 0; j < total; ++j) slice[j] = w.values[static_cast<std::size_t>(m) * total + j];
    mode_cols[static_cast<std::size_t>(m)] = detail::analyze(g, slice);
  }
  std::ostringstream os;
  os.precision(17);
  os << "kappa,y,magnitude\n";
  for (std::size_t f = 0; f < total; ++f) {
    const double kappa = std::sqrt(g.freq_mag_sq(f));
    for (int m = 0; m < M; ++m)
      os << kappa << "," << w.ynodes[static_cast<std::size_t>(m)] << ","
         << std::abs(mode_cols[static_cast<std::size_t>(m)][f]) << "\n";
  }
  return os.str();
}

}  // namespace fhs
