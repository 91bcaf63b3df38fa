#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <ridgekit/cutoff.hpp>
#include <ridgekit/dictionary.hpp>
#include <ridgekit/error.hpp>
#include <ridgekit/parallel.hpp>
#include <ridgekit/ridge_complex.hpp>
#include <ridgekit/ridge_real.hpp>
#include <span>
#include <sstream>
#include <vector>

namespace ridgekit {

// The point offset + 3 * cell * e_1 with an exact (arbitrarily large) cell.
struct cell_point {
  big_int cell = 0;
  Eigen::VectorXd offset;

  // Moves whole multiples of 3 from offset_1 into the cell.
  cell_point normalized() const {
    cell_point out = *this;
    double k = std::round(offset(0) / 3.0);
    if (k != 0.0) {
      out.offset(0) -= 3.0 * k;
      out.cell += big_int(static_cast<long long>(k));
    }
    return out;
  }
};

namespace detail {

// 1 on the unit ball, 0 beyond radius 1.4; cells sit 3 apart so the blends of
// neighbouring cells never overlap.
inline double cell_blend(double radius) { return 1.0 - smooth_step((radius - 1.0) / 0.4); }

}  // namespace detail

// tau(y + 3m e_1) = u_m(y) on the unit ball around every cell m >= 1; the
// cells m <= 0 evaluate to 0 and the gaps carry smooth-step blends.
inline double tau_eval(const polynomial_dictionary& dict, const cell_point& x) {
  if (x.offset.size() != static_cast<Eigen::Index>(dict.variables())) {
    throw dimension_error("tau_eval: point has wrong dimension");
  }
  auto p = x.normalized();
  if (p.cell <= 0) {
    return 0.0;
  }
  double radius = p.offset.norm();
  double w = radius <= 1.0 ? 1.0 : detail::cell_blend(radius);
  if (w == 0.0) {
    return 0.0;
  }
  auto u = dict.numeric(p.cell);
  return w * u->eval(std::span<const double>(p.offset.data(), static_cast<std::size_t>(p.offset.size())));
}

inline double tau_eval(const polynomial_dictionary& dict, std::span<const double> x) {
  cell_point p;
  p.offset = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
  return tau_eval(dict, p);
}

struct complex_cell_point {
  big_int cell = 0;
  std::complex<double> offset;

  complex_cell_point normalized() const {
    complex_cell_point out = *this;
    double k = std::round(offset.real() / 3.0);
    if (k != 0.0) {
      out.offset -= 3.0 * k;
      out.cell += big_int(static_cast<long long>(k));
    }
    return out;
  }
};

// phi(z + 3m) = u_m(z) for |z| <= 1, m >= 1.
inline std::complex<double> phi_eval(const complex_polynomial_dictionary& dict, const complex_cell_point& z) {
  auto p = z.normalized();
  if (p.cell <= 0) {
    return 0.0;
  }
  double radius = std::abs(p.offset);
  double w = radius <= 1.0 ? 1.0 : detail::cell_blend(radius);
  if (w == 0.0) {
    return 0.0;
  }
  auto u = dict.numeric(p.cell);
  return w * u->eval(std::span<const std::complex<double>>(&p.offset, 1));
}

inline std::complex<double> phi_eval(const complex_polynomial_dictionary& dict, std::complex<double> z) {
  return phi_eval(dict, complex_cell_point{0, z});
}

// Unit c * tau(A x + b) with b = offset + 3 cell e_1.
struct gtn_unit {
  Eigen::MatrixXd A;
  big_int cell = 0;
  Eigen::VectorXd offset;
  double c = 0.0;
};

struct gt_network {
  int ell = 0;
  int d = 0;
  std::vector<gtn_unit> units;
  polynomial_dictionary dictionary{1};

  double eval(std::span<const double> x) const {
    if (x.size() != static_cast<std::size_t>(d)) {
      throw dimension_error("network_eval: point has wrong dimension");
    }
    Eigen::Map<const Eigen::VectorXd> xv(x.data(), d);
    double sum = 0.0;
    for (const auto& u : units) {
      if (u.c == 0.0) {
        continue;
      }
      cell_point p{u.cell, u.A * xv + u.offset};
      sum += u.c * tau_eval(dictionary, p);
    }
    return sum;
  }
};

inline double network_eval(const gt_network& net, std::span<const double> x) { return net.eval(x); }

struct cvnn_unit {
  Eigen::VectorXcd alpha;
  big_int cell = 0;
  std::complex<double> offset;
  std::complex<double> gamma;
};

struct cv_network {
  int d = 0;
  std::vector<cvnn_unit> units;
  complex_polynomial_dictionary dictionary;

  std::complex<double> eval(std::span<const std::complex<double>> z) const {
    if (z.size() != static_cast<std::size_t>(d)) {
      throw dimension_error("network_eval: point has wrong dimension");
    }
    std::complex<double> sum = 0.0;
    for (const auto& u : units) {
      if (u.gamma == 0.0) {
        continue;
      }
      std::complex<double> w = u.offset;
      for (int j = 0; j < d; j++) {
        w += u.alpha(j) * z[static_cast<std::size_t>(j)];
      }
      sum += u.gamma * phi_eval(dictionary, complex_cell_point{u.cell, w});
    }
    return sum;
  }
};

inline std::complex<double> network_eval(const cv_network& net, std::span<const std::complex<double>> z) {
  return net.eval(z);
}

struct network_options {
  // Search denominators 2^j for j = 0..max_bits.
  int max_bits = 48;
};

namespace detail {

inline rational dyadic_round(double c, int bits) {
  // Scaling by a power of two is exact, and so is the rounded integer.
  double scaled = std::round(std::ldexp(c, bits));
  if (!std::isfinite(scaled)) {
    throw numeric_error("dyadic rounding of non-finite coefficient " + std::to_string(c));
  }
  return rational(big_int(scaled), big_int(1) << bits);
}

// Smallest j whose 2^-j rounding moves the coefficients by at most delta in
// total (a sup bound on the unit ball, where every monomial is at most 1).
inline std::pair<rational_polynomial, double> round_profile(const polynomial& p, double delta, int max_bits) {
  for (int bits = 0; bits <= max_bits; bits++) {
    rational_polynomial q(p.dim());
    double moved = 0.0;
    for (const auto& [k, c] : p.terms()) {
      auto r = dyadic_round(c, bits);
      moved += std::abs(c - static_cast<double>(r));
      q.add_term(k, r);
    }
    if (moved <= delta) {
      return {q, moved};
    }
  }
  std::ostringstream os;
  os << "gtn: tolerance " << delta << " not reached with denominators up to 2^" << max_bits
     << "; allow a finer denominator grid (max_bits)";
  throw precondition_error(os.str());
}

inline std::pair<gaussian_polynomial, double> round_profile(const complex_polynomial& p, double delta, int max_bits) {
  for (int bits = 0; bits <= max_bits; bits++) {
    gaussian_polynomial q(1);
    double moved = 0.0;
    for (const auto& [key, c] : p.terms()) {
      auto re = dyadic_round(c.real(), bits);
      auto im = dyadic_round(c.imag(), bits);
      moved += std::abs(c.real() - static_cast<double>(re)) + std::abs(c.imag() - static_cast<double>(im));
      q.add_term(key.k, key.l, gaussian_rational(re, im));
    }
    if (moved <= delta) {
      return {q, moved};
    }
  }
  std::ostringstream os;
  os << "cvnn: tolerance " << delta << " not reached with denominators up to 2^" << max_bits
     << "; allow a finer denominator grid (max_bits)";
  throw precondition_error(os.str());
}

}  // namespace detail

struct gtn_build {
  gt_network network;
  // Certified sum over units of sup_{B^ell} |P_k - u_{m_k}|.
  double bound = 0.0;
  std::vector<double> unit_bounds;
};

// Blocks with operator norm above 1 are first replaced through the compact
// SVD (orthonormal rows, adjusted profile); then every profile is rounded to
// a dyadic grid fine enough for delta and replaced by its dictionary entry.
inline gtn_build gtn_from_decomposition(const ridge_decomposition& decomp, double delta,
                                        const network_options& opts = {}) {
  if (!(delta >= 0.0)) {
    throw precondition_error("gtn_from_decomposition: tolerance must be non-negative");
  }
  gtn_build out;
  out.network.ell = decomp.ell;
  out.network.d = decomp.d;
  out.network.dictionary = polynomial_dictionary(static_cast<std::size_t>(decomp.ell));
  const auto& dict = out.network.dictionary;
  out.network.units.resize(decomp.blocks.size());
  out.unit_bounds.resize(decomp.blocks.size());
  parallel_for(decomp.blocks.size(), [&](std::size_t k) {
    const auto& block = decomp.blocks[k];
    Eigen::MatrixXd a = block.A;
    polynomial p = block.P;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    if (svd.singularValues().size() > 0 && svd.singularValues()(0) > 1.0 + 1e-12) {
      std::tie(a, p) = orthonormalize_rows(a, p);
    }
    auto [q, moved] = detail::round_profile(p, delta, opts.max_bits);
    gtn_unit unit;
    unit.A = a;
    unit.offset = Eigen::VectorXd::Zero(decomp.ell);
    if (q.is_zero()) {
      unit.cell = 1;
      unit.c = 0.0;
    } else {
      unit.cell = dict.index_of(q);
      unit.c = 1.0;
    }
    out.network.units[k] = std::move(unit);
    out.unit_bounds[k] = moved;
  });
  for (double b : out.unit_bounds) {
    out.bound += b;
  }
  return out;
}

struct cvnn_build {
  cv_network network;
  double bound = 0.0;
  std::vector<double> unit_bounds;
};

inline cvnn_build cvnn_from_decomposition(const complex_ridge_decomposition& decomp, double delta,
                                          const network_options& opts = {}) {
  if (!(delta >= 0.0)) {
    throw precondition_error("cvnn_from_decomposition: tolerance must be non-negative");
  }
  cvnn_build out;
  out.network.d = decomp.d;
  const auto& dict = out.network.dictionary;
  out.network.units.resize(decomp.profiles.size());
  out.unit_bounds.resize(decomp.profiles.size());
  parallel_for(decomp.profiles.size(), [&](std::size_t j) {
    if (decomp.directions[j].norm() > 1.0 + 1e-12) {
      throw precondition_error("cvnn_from_decomposition: direction norm exceeds 1");
    }
    auto [q, moved] = detail::round_profile(decomp.profiles[j], delta, opts.max_bits);
    cvnn_unit unit;
    unit.alpha = decomp.directions[j];
    unit.offset = 0.0;
    if (q.is_zero()) {
      unit.cell = 1;
      unit.gamma = 0.0;
    } else {
      unit.cell = dict.index_of(q);
      unit.gamma = 1.0;
    }
    out.network.units[j] = std::move(unit);
    out.unit_bounds[j] = moved;
  });
  for (double b : out.unit_bounds) {
    out.bound += b;
  }
  return out;
}

}  // namespace ridgekit
