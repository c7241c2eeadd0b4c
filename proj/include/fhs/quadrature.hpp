#pragma once

#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fhs/errors.hpp"
#include "fhs/field.hpp"
#include "fhs/grid.hpp"

namespace fhs {

// Node weights for integrals against |x|^{-a}. The 2^n cells touching the
// origin corner always get the exact cell average, which keeps the quadrature
// consistent despite the integrable singularity. In 1-D every cell uses the
// closed-form average (the lattice sum of node values alone converges only
// like h^{1-a} there); in 2-D/3-D node values away from the origin already
// give order 2-a and stay as they are.
struct SingularWeightRule {
  double exponent = 0.0;
  std::vector<double> weights;
};

namespace detail {

// Mean of |x|^{-a} over a cell [0,h]^n adjacent to the origin equals
// h^{-a} I_n(a) with the dimensionless factors below.
inline double origin_factor(int n, double a) {
  if (a == 0.0) return 1.0;
  using boost::math::quadrature::gauss_kronrod;
  if (n == 1) return 1.0 / (1.0 - a);
  if (n == 2) {
    auto f = [a](double t) { return std::pow(std::cos(t), a - 2.0); };
    const double pi4 = 0.25 * 3.14159265358979323846;
    double q = gauss_kronrod<double, 61>::integrate(f, 0.0, pi4, 12, 1e-13);
    return 2.0 / (2.0 - a) * q;
  }
  auto inner = [a](double v) {
    auto f = [a, v](double u) { return std::pow(1.0 + u * u + v * v, -a / 2.0); };
    return gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 12, 1e-13);
  };
  double q = gauss_kronrod<double, 61>::integrate(inner, 0.0, 1.0, 12, 1e-13);
  return 3.0 / (3.0 - a) * q;
}

}  // namespace detail

inline SingularWeightRule singular_weight(const SpectralGrid& g, double a) {
  if (!(a >= 0.0)) throw validation_error("singular_weight: a >= 0");
  if (!(a < static_cast<double>(g.n))) throw validation_error("singular_weight: a < n");
  SingularWeightRule rule;
  rule.exponent = a;
  rule.weights.assign(g.size(), 1.0);
  if (a == 0.0) return rule;

  const double h = g.h();
  const double origin_w = std::pow(h, -a) * detail::origin_factor(g.n, a);
  const double half = h / 2.0;
  if (g.n == 1) {
    for (std::size_t j = 0; j < rule.weights.size(); ++j) {
      const double lo = std::abs(g.axis_coord(static_cast<int>(j))) - half;
      rule.weights[j] = lo < 1e-12 * h
                            ? origin_w
                            : (std::pow(lo + h, 1.0 - a) - std::pow(lo, 1.0 - a)) / ((1.0 - a) * h);
    }
    return rule;
  }
  for (std::size_t j = 0; j < rule.weights.size(); ++j) {
    auto x = g.node(j);
    bool origin_cell = true;
    for (int ax = 0; ax < g.n; ++ax) {
      if (std::abs(std::abs(x[ax]) - half) > 1e-12 * h) {
        origin_cell = false;
        break;
      }
    }
    rule.weights[j] = origin_cell ? origin_w : std::pow(g.radius(j), -a);
  }
  return rule;
}

// h^n sum w_j |u_j|^p, the quadrature of  int |u|^p |x|^{-a} dx.
inline double weighted_power_integral(const Field& u, const SingularWeightRule& rule, double p) {
  const auto& v = u.values();
  double s = 0.0;
  if (p == 2.0) {
    for (std::size_t j = 0; j < v.size(); ++j) s += rule.weights[j] * v[j] * v[j];
  } else {
    for (std::size_t j = 0; j < v.size(); ++j) s += rule.weights[j] * std::pow(std::abs(v[j]), p);
  }
  return s * u.grid().cell_volume();
}

}  // namespace fhs
