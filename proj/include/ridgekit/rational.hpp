#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <complex>
#include <ostream>
#include <string>

namespace ridgekit {

using big_int = boost::multiprecision::cpp_int;
using rational = boost::multiprecision::cpp_rational;

inline double to_double(double x) { return x; }
inline double to_double(const rational& x) { return x.convert_to<double>(); }

// Exact Gaussian rational a + b i.
struct gaussian_rational {
  rational re;
  rational im;

  gaussian_rational() = default;
  gaussian_rational(int re) : re(re) {}  // NOLINT(google-explicit-constructor)
  gaussian_rational(rational re, rational im = 0) : re(std::move(re)), im(std::move(im)) {}  // NOLINT

  gaussian_rational& operator+=(const gaussian_rational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  gaussian_rational& operator-=(const gaussian_rational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  gaussian_rational& operator*=(const gaussian_rational& o) {
    rational r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }

  friend gaussian_rational operator+(gaussian_rational a, const gaussian_rational& b) { return a += b; }
  friend gaussian_rational operator-(gaussian_rational a, const gaussian_rational& b) { return a -= b; }
  friend gaussian_rational operator*(gaussian_rational a, const gaussian_rational& b) { return a *= b; }
  friend gaussian_rational operator-(const gaussian_rational& a) { return {-a.re, -a.im}; }
  friend bool operator==(const gaussian_rational& a, const gaussian_rational& b) {
    return a.re == b.re && a.im == b.im;
  }

  friend gaussian_rational conj(const gaussian_rational& a) { return {a.re, -a.im}; }

  friend std::ostream& operator<<(std::ostream& os, const gaussian_rational& a) {
    return os << '(' << a.re << ',' << a.im << ')';
  }
};

inline std::complex<double> to_complex(const std::complex<double>& z) { return z; }
inline std::complex<double> to_complex(const gaussian_rational& z) {
  return {to_double(z.re), to_double(z.im)};
}

// Coefficient pruning policy: exact types keep anything nonzero, doubles drop
// magnitudes below 1e-300.
template <class T>
struct coefficient_traits;

template <>
struct coefficient_traits<double> {
  static bool negligible(double c) { return std::abs(c) < 1e-300; }
};

template <>
struct coefficient_traits<rational> {
  static bool negligible(const rational& c) { return c == 0; }
};

template <>
struct coefficient_traits<std::complex<double>> {
  static bool negligible(const std::complex<double>& c) {
    return std::abs(c.real()) < 1e-300 && std::abs(c.imag()) < 1e-300;
  }
};

template <>
struct coefficient_traits<gaussian_rational> {
  static bool negligible(const gaussian_rational& c) { return c.re == 0 && c.im == 0; }
};

}  // namespace ridgekit
