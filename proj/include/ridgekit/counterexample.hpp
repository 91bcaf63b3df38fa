#pragma once

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <ridgekit/error.hpp>
#include <ridgekit/quadrature.hpp>

namespace ridgekit {

// P_n(x) = psi_n(x_1) x_1^{-1/3} on B^d, psi_n the linear ramp from 0 at 1/n
// to 1 at 2/n. Integrals reduce to one dimension through the slice volume
// V_{d-1} (1 - t^2)^{(d-1)/2}.
struct counterexample_report {
  int n = 0;
  int d = 0;
  double l2_squared = 0.0;
  double l1 = 0.0;
  double sup = 0.0;
  double ratio = 0.0;
  // 6 2^{d-1} / ((n/2)^{1/3} theta(d)).
  double upper_bound = 0.0;
};

inline double counterexample_profile(int n, double t) {
  if (t <= 1.0 / n) {
    return 0.0;
  }
  double ramp = std::min(1.0, n * t - 1.0);
  return ramp * std::cbrt(1.0 / t);
}

inline int counterexample_min_n(int d) { return static_cast<int>(std::ceil(4.0 * std::sqrt(static_cast<double>(d)))); }

// theta(d) = (2/sqrt d)^{d-1} int_{1/(2 sqrt d)}^{1/sqrt d} t^{-1/3} dt.
inline double counterexample_theta(int d) {
  double rd = std::sqrt(static_cast<double>(d));
  double integral = 1.5 * (std::pow(1.0 / rd, 2.0 / 3.0) - std::pow(0.5 / rd, 2.0 / 3.0));
  return std::pow(2.0 / rd, d - 1) * integral;
}

inline counterexample_report counterexample_stats(int n, int d) {
  if (d < 1) {
    throw precondition_error("counterexample: need d >= 1");
  }
  if (n < counterexample_min_n(d)) {
    throw precondition_error("counterexample: n = " + std::to_string(n) + " below ceil(4 sqrt d) = " +
                             std::to_string(counterexample_min_n(d)));
  }
  double slice = ball_volume(d - 1);
  auto weight = [&](double t) { return d == 1 ? 1.0 : slice * std::pow(std::max(0.0, 1.0 - t * t), 0.5 * (d - 1)); };
  boost::math::quadrature::tanh_sinh<double> integrator;
  auto integrate = [&](auto&& g) {
    double lo = 1.0 / n;
    double mid = 2.0 / n;
    return integrator.integrate(g, lo, mid) + integrator.integrate(g, mid, 1.0);
  };
  counterexample_report rep;
  rep.n = n;
  rep.d = d;
  rep.l1 = integrate([&](double t) { return counterexample_profile(n, t) * weight(t); });
  rep.l2_squared = integrate([&](double t) {
    double v = counterexample_profile(n, t);
    return v * v * weight(t);
  });
  // The ramp times t^{-1/3} increases on [1/n, 2/n], t^{-1/3} decreases after.
  rep.sup = counterexample_profile(n, 2.0 / n);
  rep.ratio = 2.0 * rep.l2_squared / (rep.sup * rep.l1);
  rep.upper_bound = 6.0 * std::pow(2.0, d - 1) / (std::cbrt(n / 2.0) * counterexample_theta(d));
  return rep;
}

inline double counterexample_ratio(int n, int d) { return counterexample_stats(n, d).ratio; }

}  // namespace ridgekit
