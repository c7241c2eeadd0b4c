#pragma once

#include <string>
#include <vector>

#include "fhs/constants.hpp"
#include "fhs/errors.hpp"

namespace fhs {

// Problem quadruple (n, alpha, s, gamma).
struct ProblemParams {
  int n = 1;
  double alpha = 0.5;
  double s = 0.0;
  double gamma = 0.0;

  // Collects every violated hypothesis; empty means valid.
  std::vector<std::string> violations() const {
    std::vector<std::string> v;
    if (n < 1 || n > 3) v.push_back("n in {1, 2, 3}");
    if (!(alpha > 0.0 && alpha < 2.0)) v.push_back("0 < alpha < 2");
    if (!(static_cast<double>(n) > alpha)) v.push_back("n > alpha");
    if (!(s >= 0.0 && s < alpha)) v.push_back("0 <= s < alpha");
    if (n >= 1 && n <= 3 && alpha > 0.0 && alpha < 2.0 && static_cast<double>(n) > alpha) {
      if (!(gamma < constants::gamma_H(n, alpha))) v.push_back("gamma < gamma_H(n, alpha)");
    }
    return v;
  }

  void validate() const {
    auto v = violations();
    if (v.empty()) return;
    std::string msg = "invalid problem parameters:";
    for (const auto& h : v) msg += " [" + h + "]";
    throw validation_error(msg);
  }

  double gamma_H() const { return constants::gamma_H(n, alpha); }
};

// Critical exponents and the coefficients they induce in the energy identity.
struct Exponents {
  double two_star;       // 2n/(n - alpha)
  double two_star_s;     // 2(n - s)/(n - alpha)
  double alpha_over_2n;  // 1/2 - 1/two_star
  double as_over_2ns;    // 1/2 - 1/two_star_s

  explicit Exponents(const ProblemParams& p)
      : two_star(2.0 * p.n / (p.n - p.alpha)),
        two_star_s(2.0 * (p.n - p.s) / (p.n - p.alpha)),
        alpha_over_2n(p.alpha / (2.0 * p.n)),
        as_over_2ns((p.alpha - p.s) / (2.0 * (p.n - p.s))) {}
};

}  // namespace fhs
