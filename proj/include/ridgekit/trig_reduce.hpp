#pragma once

#include <cmath>
#include <cstddef>
#include <ridgekit/error.hpp>
#include <vector>

namespace ridgekit {

// cos(phi)^a sin(phi)^b = sum_{h=0}^{a+b} (cos_coeff[h] cos(h phi) + sin_coeff[h] sin(h phi)).
struct trig_expansion {
  std::vector<double> cos_coeff;
  std::vector<double> sin_coeff;

  double eval(double phi) const {
    double sum = 0.0;
    for (std::size_t h = 0; h < cos_coeff.size(); h++) {
      double hp = static_cast<double>(h) * phi;
      sum += cos_coeff[h] * std::cos(hp) + sin_coeff[h] * std::sin(hp);
    }
    return sum;
  }
};

namespace detail {

// Multiply by cos(phi) or sin(phi) using the product-to-sum rules; a
// negative frequency folds back as cos(-x) = cos x, sin(-x) = -sin x.
inline trig_expansion times_trig(const trig_expansion& in, bool by_sine) {
  std::size_t n = in.cos_coeff.size();
  trig_expansion out{std::vector<double>(n + 1, 0.0), std::vector<double>(n + 1, 0.0)};
  auto add = [&](long h, double c_cos, double c_sin) {
    if (h < 0) {
      h = -h;
      c_sin = -c_sin;
    }
    out.cos_coeff[static_cast<std::size_t>(h)] += c_cos;
    out.sin_coeff[static_cast<std::size_t>(h)] += c_sin;
  };
  for (std::size_t i = 0; i < n; i++) {
    long h = static_cast<long>(i);
    double c = in.cos_coeff[i];
    double s = in.sin_coeff[i];
    if (!by_sine) {
      // cos(hx) cos x = (cos((h+1)x) + cos((h-1)x))/2, same pattern for sin(hx).
      add(h + 1, c / 2, s / 2);
      add(h - 1, c / 2, s / 2);
    } else {
      // cos(hx) sin x = (sin((h+1)x) - sin((h-1)x))/2
      // sin(hx) sin x = (cos((h-1)x) - cos((h+1)x))/2
      add(h + 1, -s / 2, c / 2);
      add(h - 1, s / 2, -c / 2);
    }
  }
  out.sin_coeff[0] = 0.0;
  return out;
}

}  // namespace detail

inline trig_expansion trig_reduce(int a, int b) {
  if (a < 0 || b < 0) {
    throw precondition_error("trig_reduce: exponents must be non-negative");
  }
  trig_expansion e{{1.0}, {0.0}};
  for (int i = 0; i < a; i++) {
    e = detail::times_trig(e, false);
  }
  for (int i = 0; i < b; i++) {
    e = detail::times_trig(e, true);
  }
  return e;
}

}  // namespace ridgekit
