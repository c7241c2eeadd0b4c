// Quotient of the analytic bubble vs. the Hardy coupling, then a short
// minimization from band-limited noise to show the estimate dropping below
// the trial value.

#include <cstdio>

#include "fhs/functionals.hpp"
#include "fhs/grid.hpp"
#include "fhs/profiles.hpp"
#include "fhs/solvers.hpp"

int main() {
  const auto g = fhs::make_grid(1, 512, 20.0);
  fhs::ProblemParams p;
  p.n = 1;
  p.alpha = 0.5;
  p.s = 0.0;
  const double gh = p.gamma_H();
  std::printf("n=%d alpha=%.2f  gamma_H=%.12f\n", p.n, p.alpha, gh);

  const auto bubble = fhs::profiles::windowed_bubble(g, p.alpha, 0.36 * g.L);
  std::printf("\n%10s %14s\n", "gamma/gh", "Q(bubble)");
  for (double f : {0.0, 0.25, 0.5, 0.75}) {
    p.gamma = f * gh;
    const auto r = fhs::quotient_evaluate(bubble, p);
    std::printf("%10.2f %14.8f\n", f, r.quotient);
  }

  p.gamma = 0.0;
  fhs::MinimizerConfig cfg;
  cfg.max_iters = 200;
  cfg.tol = 1e-7;
  const auto noise = fhs::profiles::random_smooth(g, 7);
  const auto res = fhs::minimize_quotient(noise, p, cfg);
  const auto trial = fhs::quotient_evaluate(bubble, p);
  std::printf("\nminimize from noise: Q=%.8f after %d iters (converged=%d)\n",
              res.report.quotient, res.iters, res.converged ? 1 : 0);
  std::printf("bubble trial value:  Q=%.8f\n", trial.quotient);
  return 0;
}
