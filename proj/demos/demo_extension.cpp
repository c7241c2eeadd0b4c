// Weighted Dirichlet energy of the harmonic extension vs. the fractional
// seminorm of the trace: the two agree up to the slice quadrature error.

#include <cstdio>

#include "fhs/extension.hpp"
#include "fhs/fracops.hpp"
#include "fhs/grid.hpp"
#include "fhs/profiles.hpp"

int main() {
  const auto g = fhs::make_grid(1, 256, 10.0);
  const auto u = fhs::profiles::gaussian(g);
  const double Y = fhs::default_strip_height(g);

  std::printf("%6s %6s %16s %16s %12s %14s\n", "alpha", "M", "k*E(ext)", "|u|_{a/2}^2",
              "rel gap", "trace defect");
  for (double alpha : {0.5, 1.0, 1.5}) {
    const double snorm = fhs::seminorm_sq(u, alpha);
    for (int M : {64, 128, 256}) {
      const auto w = fhs::extend(u, alpha, Y, M);
      const double e = fhs::extension_energy(w);
      const double defect = fhs::trace_defect(w, u);
      std::printf("%6.2f %6d %16.10f %16.10f %12.3e %14.3e\n", alpha, M, e, snorm,
                  std::abs(e - snorm) / snorm, defect);
    }
  }
  return 0;
}
