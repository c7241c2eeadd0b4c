#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "fhs/field.hpp"
#include "fhs/grid.hpp"

namespace fhs::profiles {

// Aubin-Talenti type trial profile (1 + |x|^2)^{-(n-alpha)/2}.
inline Field bubble(const SpectralGrid& g, double alpha) {
  std::vector<double> v(g.size());
  const double e = (g.n - alpha) / 2.0;
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = std::pow(1.0 + g.radius_sq(j), -e);
  return Field(g, std::move(v));
}

inline Field gaussian(const SpectralGrid& g) {
  std::vector<double> v(g.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = std::exp(-g.radius_sq(j));
  return Field(g, std::move(v));
}

// Bubble damped by a smooth compactly-concentrated window; tames the fat
// |x|^{-(n-alpha)} tail so translates stay representable.
inline Field windowed_bubble(const SpectralGrid& g, double alpha, double window_scale) {
  std::vector<double> v(g.size());
  const double e = (g.n - alpha) / 2.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double r2 = g.radius_sq(j);
    const double w = std::exp(-std::pow(r2 / (window_scale * window_scale), 3.0));
    v[j] = std::pow(1.0 + r2, -e) * w;
  }
  return Field(g, std::move(v));
}

// Seeded band-limited noise under a Gaussian envelope, mean-zero.
// Box-Muller on mt19937_64 keeps the draw fully specified.
inline Field random_smooth(const SpectralGrid& g, std::uint64_t seed, double cutoff_frac = 0.125) {
  std::mt19937_64 eng(seed);
  auto uniform = [&eng]() {
    return (static_cast<double>(eng() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
  };
  const double pi = 3.14159265358979323846;
  const std::size_t total = g.size();
  std::vector<double> noise(total);
  for (std::size_t j = 0; j < total; j += 2) {
    const double u1 = uniform(), u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    noise[j] = r * std::cos(2.0 * pi * u2);
    if (j + 1 < total) noise[j + 1] = r * std::sin(2.0 * pi * u2);
  }

  auto coeffs = detail::analyze(g, noise);
  const double nyq = pi * g.N / (2.0 * g.L);  // |2 pi xi| at the band edge
  const double cut = cutoff_frac * nyq;
  for (std::size_t f = 0; f < total; ++f) {
    if (std::sqrt(g.freq_mag_sq(f)) > cut) coeffs[f] = 0.0;
  }
  auto v = detail::synthesize(g, coeffs);

  const double env = g.L / 4.0;
  for (std::size_t j = 0; j < total; ++j) v[j] *= std::exp(-g.radius_sq(j) / (2.0 * env * env));
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(total);
  for (double& x : v) x -= mean;
  return Field(g, std::move(v));
}

}  // namespace fhs::profiles
