#pragma once

// Closed-form reference values used as independent oracles in the tests.

#include <cmath>
#include <numbers>
#include <ridgekit/multi_index.hpp>

namespace ridgekit::oracle {

// Integral of x^alpha over B^m via Gamma functions (zero when any exponent is odd).
inline double ball_moment(const multi_index& alpha) {
  double num = 1.0;
  for (auto a : alpha.entries()) {
    if (a % 2) {
      return 0.0;
    }
    num *= std::tgamma(0.5 * (a + 1));
  }
  double m = static_cast<double>(alpha.size());
  return num / std::tgamma(0.5 * (alpha.order() + m) + 1.0);
}

// Integral of xi^alpha over S^{m-1} in R^m.
inline double sphere_moment(const multi_index& alpha) {
  double num = 2.0;
  for (auto a : alpha.entries()) {
    if (a % 2) {
      return 0.0;
    }
    num *= std::tgamma(0.5 * (a + 1));
  }
  double m = static_cast<double>(alpha.size());
  return num / std::tgamma(0.5 * (alpha.order() + m));
}

}  // namespace ridgekit::oracle
