#pragma once

#include <cmath>
#include <functional>
#include <string>

namespace ridgekit {

// C-infinity step: 0 for t <= 0, 1 for t >= 1, built from exp(-1/t).
inline double smooth_step(double t) {
  if (t <= 0.0) {
    return 0.0;
  }
  if (t >= 1.0) {
    return 1.0;
  }
  double a = std::exp(-1.0 / t);
  double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

// Even cutoff eta with eta = 1 on [-1, 1] and eta = 0 for |x| >= 2.
struct cutoff_function {
  std::string name;
  std::function<double(double)> eval;

  double operator()(double x) const { return eval(x); }
};

inline cutoff_function smooth_step_cutoff() {
  return {"smooth_step_exp", [](double x) { return 1.0 - smooth_step(std::abs(x) - 1.0); }};
}

// Piecewise-linear variant, useful only to probe sensitivity to eta.
inline cutoff_function linear_cutoff() {
  return {"linear", [](double x) {
            double t = std::abs(x) - 1.0;
            return t <= 0.0 ? 1.0 : (t >= 1.0 ? 0.0 : 1.0 - t);
          }};
}

}  // namespace ridgekit
