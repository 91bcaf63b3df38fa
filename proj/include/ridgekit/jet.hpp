#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ridgekit {

// Truncated Taylor series c_0 + c_1 h + ... + c_n h^n around a point.
// The j-th derivative there is j! c_j.
class jet {
 public:
  explicit jet(std::size_t order, double value = 0.0) : c_(order + 1, 0.0) { c_[0] = value; }

  // The independent variable t at t0, scaled by slope.
  static jet variable(std::size_t order, double t0, double slope = 1.0) {
    jet j(order, t0);
    if (order >= 1) {
      j.c_[1] = slope;
    }
    return j;
  }

  std::size_t order() const { return c_.size() - 1; }
  double operator[](std::size_t k) const { return c_[k]; }
  double& operator[](std::size_t k) { return c_[k]; }

  double derivative(std::size_t k) const { return std::tgamma(static_cast<double>(k) + 1.0) * c_[k]; }

  friend jet operator+(jet a, const jet& b) {
    for (std::size_t k = 0; k < a.c_.size(); k++) {
      a.c_[k] += b.c_[k];
    }
    return a;
  }

  friend jet operator-(jet a, const jet& b) {
    for (std::size_t k = 0; k < a.c_.size(); k++) {
      a.c_[k] -= b.c_[k];
    }
    return a;
  }

  friend jet operator-(double s, jet a) {
    for (auto& c : a.c_) {
      c = -c;
    }
    a.c_[0] += s;
    return a;
  }

  friend jet operator*(const jet& a, const jet& b) {
    jet r(a.order());
    for (std::size_t k = 0; k < a.c_.size(); k++) {
      double sum = 0.0;
      for (std::size_t j = 0; j <= k; j++) {
        sum += a.c_[j] * b.c_[k - j];
      }
      r.c_[k] = sum;
    }
    return r;
  }

  // q = a / b from b q = a.
  friend jet operator/(const jet& a, const jet& b) {
    if (b.c_[0] == 0.0) {
      throw std::domain_error("jet division by zero");
    }
    jet q(a.order());
    for (std::size_t k = 0; k < a.c_.size(); k++) {
      double sum = a.c_[k];
      for (std::size_t j = 1; j <= k; j++) {
        sum -= b.c_[j] * q.c_[k - j];
      }
      q.c_[k] = sum / b.c_[0];
    }
    return q;
  }

  // e = exp(u) from e' = u' e.
  friend jet exp(const jet& u) {
    jet e(u.order());
    e.c_[0] = std::exp(u.c_[0]);
    for (std::size_t k = 1; k < u.c_.size(); k++) {
      double sum = 0.0;
      for (std::size_t j = 1; j <= k; j++) {
        sum += static_cast<double>(j) * u.c_[j] * e.c_[k - j];
      }
      e.c_[k] = sum / static_cast<double>(k);
    }
    return e;
  }

 private:
  std::vector<double> c_;
};

namespace detail {

// exp(-1/u) for u > 0, zero otherwise, as a jet.
inline jet flat_exp(const jet& u) {
  if (u[0] <= 0.0) {
    return jet(u.order());
  }
  jet one(u.order(), 1.0);
  jet neg = jet(u.order()) - one / u;
  return exp(neg);
}

}  // namespace detail

// Taylor jet of smooth_step at the point carried by u.
inline jet smooth_step_jet(const jet& u) {
  if (u[0] <= 0.0) {
    return jet(u.order());
  }
  if (u[0] >= 1.0) {
    return jet(u.order(), 1.0);
  }
  jet a = detail::flat_exp(u);
  jet b = detail::flat_exp(1.0 - u);
  return a / (a + b);
}

}  // namespace ridgekit
