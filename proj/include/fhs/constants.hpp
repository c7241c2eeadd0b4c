#pragma once

#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

#include "fhs/errors.hpp"

namespace fhs::constants {

// Sharp fractional Hardy constant gamma_H = 2^alpha Gamma^2((n+alpha)/4) / Gamma^2((n-alpha)/4).
inline double gamma_H(int n, double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw validation_error("gamma_H: 0 < alpha < 2");
  if (!(static_cast<double>(n) > alpha)) throw validation_error("gamma_H: n > alpha");
  const double gp = boost::math::tgamma((n + alpha) / 4.0);
  const double gm = boost::math::tgamma((n - alpha) / 4.0);
  return std::pow(2.0, alpha) * (gp / gm) * (gp / gm);
}

// Extension normalization k_alpha = Gamma(alpha/2) / (2^{1-alpha} Gamma(1 - alpha/2)).
inline double k_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw validation_error("k_alpha: 0 < alpha < 2");
  return boost::math::tgamma(alpha / 2.0) /
         (std::pow(2.0, 1.0 - alpha) * boost::math::tgamma(1.0 - alpha / 2.0));
}

}  // namespace fhs::constants
