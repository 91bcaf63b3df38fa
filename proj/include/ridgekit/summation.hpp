#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <span>

namespace ridgekit {

namespace detail {

inline constexpr std::size_t pairwise_block = 128;

}  // namespace detail

// Pairwise (cascade) summation; blocks below the threshold are summed
// sequentially, so the result depends only on the input order.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= detail::pairwise_block) {
    double s = 0.0;
    for (auto x : v) {
      s += x;
    }
    return s;
  }
  auto half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

// Pairwise dot product of two equally sized vectors.
inline double pairwise_dot(const double* a, const double* b, std::size_t n) {
  if (n <= detail::pairwise_block) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; i++) {
      s += a[i] * b[i];
    }
    return s;
  }
  auto half = n / 2;
  return pairwise_dot(a, b, half) + pairwise_dot(a + half, b + half, n - half);
}

inline double pairwise_dot(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return pairwise_dot(a.data(), b.data(), static_cast<std::size_t>(a.size()));
}

}  // namespace ridgekit
