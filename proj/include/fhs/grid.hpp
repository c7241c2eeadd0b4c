#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>

#include "fhs/errors.hpp"

namespace fhs {

// Truncated periodic box [-L, L)^n with half-cell staggered nodes
// x_j = -L + (j + 1/2) h, h = 2L/N, so no node sits at the origin.
// Frequencies live on xi_k = k/(2L), k in {-N/2, ..., N/2 - 1} per axis,
// stored in FFT bin order (bin b maps to k = b < N/2 ? b : b - N).
struct SpectralGrid {
  int n = 1;
  int N = 8;
  double L = 1.0;

  double h() const { return 2.0 * L / N; }
  double cell_volume() const { return std::pow(h(), n); }

  std::size_t size() const {
    std::size_t s = 1;
    for (int a = 0; a < n; ++a) s *= static_cast<std::size_t>(N);
    return s;
  }

  // Flat row-major index -> per-axis indices.
  std::array<int, 3> unflatten(std::size_t flat) const {
    std::array<int, 3> j{0, 0, 0};
    for (int a = n - 1; a >= 0; --a) {
      j[a] = static_cast<int>(flat % static_cast<std::size_t>(N));
      flat /= static_cast<std::size_t>(N);
    }
    return j;
  }

  double axis_coord(int j) const { return -L + (j + 0.5) * h(); }

  std::array<double, 3> node(std::size_t flat) const {
    auto j = unflatten(flat);
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (int a = 0; a < n; ++a) x[a] = axis_coord(j[a]);
    return x;
  }

  double radius_sq(std::size_t flat) const {
    auto x = node(flat);
    double r2 = 0.0;
    for (int a = 0; a < n; ++a) r2 += x[a] * x[a];
    return r2;
  }

  double radius(std::size_t flat) const { return std::sqrt(radius_sq(flat)); }

  int signed_k(int bin) const { return bin < N / 2 ? bin : bin - N; }

  // |2 pi xi|^2 for the frequency bin.
  double freq_mag_sq(std::size_t flat) const {
    auto b = unflatten(flat);
    double s = 0.0;
    const double pi = 3.14159265358979323846;
    for (int a = 0; a < n; ++a) {
      const double xi = signed_k(b[a]) / (2.0 * L);
      s += (2.0 * pi * xi) * (2.0 * pi * xi);
    }
    return s;
  }

  // Node reflected through the origin (exact on the staggered lattice).
  std::size_t reflect(std::size_t flat) const {
    auto j = unflatten(flat);
    std::size_t out = 0;
    for (int a = 0; a < n; ++a) out = out * static_cast<std::size_t>(N) + static_cast<std::size_t>(N - 1 - j[a]);
    return out;
  }

  bool operator==(const SpectralGrid& o) const { return n == o.n && N == o.N && L == o.L; }
};

inline SpectralGrid make_grid(int n, int N, double L) {
  if (n < 1 || n > 3) throw validation_error("make_grid: n in {1, 2, 3}");
  if (N < 8 || (N & (N - 1)) != 0) throw validation_error("make_grid: N a power of two >= 8");
  if (!(L > 0.0)) throw validation_error("make_grid: L > 0");
  return SpectralGrid{n, N, L};
}

}  // namespace fhs
