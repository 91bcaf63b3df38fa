#pragma once

#include <algorithm>
#include <cstdint>
#include <ridgekit/error.hpp>
#include <ridgekit/rational.hpp>

namespace ridgekit {

inline big_int binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) {
    return 0;
  }
  k = std::min(k, n - k);
  big_int r = 1;
  for (int i = 1; i <= k; i++) {
    r = r * (n - k + i) / i;
  }
  return r;
}

inline std::uint64_t binomial_u64(int n, int k) { return binomial(n, k).convert_to<std::uint64_t>(); }

inline big_int factorial(int n) {
  big_int f = 1;
  for (int i = 2; i <= n; i++) {
    f *= i;
  }
  return f;
}

// Dimension of the homogeneous polynomials of degree s in m variables.
inline std::uint64_t dim_homogeneous(int m, int s) {
  if (m < 1 || s < 0) {
    throw precondition_error("dim_homogeneous requires m >= 1 and s >= 0");
  }
  return binomial_u64(s + m - 1, m - 1);
}

// Dimension of polynomials in z in C^d of degree s in z and t in conj(z).
inline std::uint64_t dim_complex_bihomogeneous(int d, int s, int t) {
  if (d < 1 || s < 0 || t < 0) {
    throw precondition_error("dim_complex_bihomogeneous requires d >= 1 and s, t >= 0");
  }
  return dim_homogeneous(d, s) * dim_homogeneous(d, t);
}

// Dimension of all polynomials of degree <= s in d variables.
inline std::uint64_t dim_polynomials(int d, int s) { return s < 0 ? 0 : binomial_u64(s + d, d); }

}  // namespace ridgekit
