#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <ridgekit/combinatorics.hpp>
#include <ridgekit/complex_polynomial.hpp>
#include <ridgekit/error.hpp>
#include <ridgekit/polynomial.hpp>
#include <ridgekit/quadrature.hpp>
#include <ridgekit/ridge_real.hpp>
#include <span>
#include <sstream>
#include <type_traits>
#include <vector>

namespace ridgekit {

enum class wirtinger_kind { holomorphic, antiholomorphic };

// Termwise d/dz_j (holomorphic) or d/dconj(z_j) (antiholomorphic); j is 0-based.
template <class C>
complex_bi_polynomial<C> wirtinger_derivative(const complex_bi_polynomial<C>& p, wirtinger_kind kind,
                                              std::size_t j) {
  if (j >= p.dim()) {
    throw precondition_error("wirtinger_derivative: variable index out of range");
  }
  complex_bi_polynomial<C> out(p.dim());
  for (const auto& [key, c] : p.terms()) {
    multi_index k = key.k;
    multi_index l = key.l;
    multi_index& e = kind == wirtinger_kind::holomorphic ? k : l;
    int power = e[j];
    if (power == 0) {
      continue;
    }
    e.set(j, power - 1);
    C factor = c;
    factor *= C(power);
    out.add_term(k, l, factor);
  }
  return out;
}

// The mixed operator d^k dbar^l.
template <class C>
complex_bi_polynomial<C> apply_wirtinger(complex_bi_polynomial<C> p, const multi_index& k, const multi_index& l) {
  if (k.size() != p.dim() || l.size() != p.dim()) {
    throw dimension_error("apply_wirtinger: multi-index length differs from dimension");
  }
  for (std::size_t j = 0; j < p.dim(); j++) {
    for (int r = 0; r < k[j]; r++) {
      p = wirtinger_derivative(p, wirtinger_kind::holomorphic, j);
    }
    for (int r = 0; r < l[j]; r++) {
      p = wirtinger_derivative(p, wirtinger_kind::antiholomorphic, j);
    }
  }
  return p;
}

// d^k dbar^l (z^k' conj(z)^l') against [(k,l) = (k',l')] k! l!, exactly.
inline bool verify_wirtinger_monomial_identity(const multi_index& k, const multi_index& l, const multi_index& k2,
                                               const multi_index& l2) {
  auto d = k.size();
  if (l.size() != d || k2.size() != d || l2.size() != d) {
    throw precondition_error("verify_wirtinger_monomial_identity: multi-index lengths differ");
  }
  if (k.order() != k2.order() || l.order() != l2.order()) {
    throw precondition_error("verify_wirtinger_monomial_identity: orders must agree");
  }
  auto got = apply_wirtinger(gaussian_polynomial::monomial(k2, l2), k, l);
  gaussian_polynomial want(d);
  if (k == k2 && l == l2) {
    want = gaussian_polynomial::constant(d, gaussian_rational(rational(k.factorial() * l.factorial())));
  }
  return got == want;
}

// Expansion of (a^T z)^s conj(a^T z)^t.
template <class C>
complex_bi_polynomial<C> power_expansion(const std::vector<C>& a, int s, int t) {
  using std::conj;
  if (a.empty() || s < 0 || t < 0) {
    throw precondition_error("power_expansion: need a nonempty direction and s, t >= 0");
  }
  auto d = a.size();
  complex_bi_polynomial<C> lin(d);
  complex_bi_polynomial<C> lin_bar(d);
  for (std::size_t j = 0; j < d; j++) {
    lin += complex_bi_polynomial<C>::variable(d, j) * a[j];
    lin_bar += complex_bi_polynomial<C>::variable(d, j, true) * conj(a[j]);
  }
  auto out = complex_bi_polynomial<C>::constant(d, C(1));
  for (int r = 0; r < s; r++) {
    out = out * lin;
  }
  for (int r = 0; r < t; r++) {
    out = out * lin_bar;
  }
  return out;
}

namespace detail {

template <class C>
C monomial_value(const std::vector<C>& a, const multi_index& k, const multi_index& l) {
  using std::conj;
  C v(1);
  for (std::size_t j = 0; j < a.size(); j++) {
    for (int r = 0; r < k[j]; r++) {
      v *= a[j];
    }
    for (int r = 0; r < l[j]; r++) {
      v *= conj(a[j]);
    }
  }
  return v;
}

}  // namespace detail

// d^k dbar^l (a^T z)^s conj(a^T z)^t = s! t! a^k conj(a)^l with s = |k|, t = |l|.
// Exact for gaussian_rational directions, relative 1e-10 for floating ones.
template <class C>
bool verify_power_identity(const std::vector<C>& a, const multi_index& k, const multi_index& l) {
  if (k.size() != a.size() || l.size() != a.size()) {
    throw precondition_error("verify_power_identity: multi-index length differs from direction");
  }
  auto p = power_expansion(a, k.order(), l.order());
  auto got = apply_wirtinger(p, k, l);
  C want = detail::monomial_value(a, k, l);
  if constexpr (std::is_same_v<C, gaussian_rational>) {
    want *= gaussian_rational(rational(factorial(k.order()) * factorial(l.order())));
    return got == gaussian_polynomial::constant(a.size(), want);
  } else {
    want *= C(std::tgamma(k.order() + 1.0) * std::tgamma(l.order() + 1.0));
    if (got.holomorphic_degree() > 0 || got.antiholomorphic_degree() > 0) {
      return false;
    }
    C value = got.coefficient(multi_index(a.size()), multi_index(a.size()));
    return std::abs(value - want) <= 1e-10 * std::max(1.0, std::abs(want));
  }
}

// Polynomial over R^{2d} (first d slots real parts, last d imaginary parts)
// rewritten in z and conj(z).
template <class T>
auto realify(const multi_index_polynomial<T>& f) {
  using C = std::conditional_t<std::is_same_v<T, rational>, gaussian_rational, std::complex<double>>;
  if (f.dim() % 2 != 0) {
    throw dimension_error("realify: ambient dimension " + std::to_string(f.dim()) + " is odd");
  }
  const auto d = f.dim() / 2;
  C half;
  C minus_half_i;
  if constexpr (std::is_same_v<C, gaussian_rational>) {
    half = gaussian_rational(rational(1, 2));
    minus_half_i = gaussian_rational(rational(0), rational(-1, 2));
  } else {
    half = C(0.5, 0.0);
    minus_half_i = C(0.0, -0.5);
  }
  // re[j][e] = ((z_j + conj z_j)/2)^e, im[j][e] = ((z_j - conj z_j)/(2i))^e.
  std::vector<int> max_e(f.dim(), 0);
  for (const auto& [k, c] : f.terms()) {
    for (std::size_t v = 0; v < f.dim(); v++) {
      max_e[v] = std::max(max_e[v], k[v]);
    }
  }
  std::vector<std::vector<complex_bi_polynomial<C>>> powers(f.dim());
  for (std::size_t v = 0; v < f.dim(); v++) {
    auto j = v % d;
    auto z = complex_bi_polynomial<C>::variable(d, j);
    auto zb = complex_bi_polynomial<C>::variable(d, j, true);
    auto base = v < d ? (z + zb) * half : (z - zb) * minus_half_i;
    powers[v].push_back(complex_bi_polynomial<C>::constant(d, C(1)));
    for (int e = 1; e <= max_e[v]; e++) {
      powers[v].push_back(powers[v].back() * base);
    }
  }
  complex_bi_polynomial<C> out(d);
  for (const auto& [k, c] : f.terms()) {
    auto term = complex_bi_polynomial<C>::constant(d, C(c));
    for (std::size_t v = 0; v < f.dim(); v++) {
      if (k[v] != 0) {
        term = term * powers[v][static_cast<std::size_t>(k[v])];
      }
    }
    out += term;
  }
  return out;
}

// Directions alpha_1..alpha_n in C^d, unit norm, whose bidegree (s', t')
// powers span for every s' <= s and t' <= t.
struct complex_direction_set {
  int d = 0;
  int s = 0;
  int t = 0;
  std::vector<Eigen::VectorXcd> vectors;
  // Condition number of the scaled bidegree (s, t) power matrix.
  double condition_number = 0.0;

  std::size_t size() const { return vectors.size(); }
};

namespace detail {

inline std::vector<std::pair<multi_index, multi_index>> bi_indices_of_order(std::size_t d, int s, int t) {
  std::vector<std::pair<multi_index, multi_index>> out;
  for (const auto& k : multi_indices_of_order(d, s)) {
    for (const auto& l : multi_indices_of_order(d, t)) {
      out.emplace_back(k, l);
    }
  }
  return out;
}

// [Re -Im; Im Re].
inline Eigen::MatrixXd realified_matrix(const Eigen::MatrixXcd& m) {
  Eigen::MatrixXd out(2 * m.rows(), 2 * m.cols());
  out << m.real(), -m.imag(), m.imag(), m.real();
  return out;
}

}  // namespace detail

// Entry ((k, l), j) = sqrt(s!/k!) sqrt(t!/l!) alpha_j^k conj(alpha_j)^l, the
// coefficient of z^k conj(z)^l in (alpha_j^T z)^s conj(alpha_j^T z)^t
// rescaled so that column inner products do not depend on the monomial basis.
inline Eigen::MatrixXcd complex_power_matrix(const std::vector<Eigen::VectorXcd>& dirs, int d, int s, int t) {
  auto rows = detail::bi_indices_of_order(static_cast<std::size_t>(d), s, t);
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dirs.size()));
  for (std::size_t r = 0; r < rows.size(); r++) {
    const auto& [k, l] = rows[r];
    double scale = detail::sqrt_multinomial(s, k) * detail::sqrt_multinomial(t, l);
    for (std::size_t i = 0; i < dirs.size(); i++) {
      std::complex<double> v(scale, 0.0);
      for (int j = 0; j < d; j++) {
        v *= std::pow(dirs[i](j), k[j]) * std::pow(std::conj(dirs[i](j)), l[j]);
      }
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = v;
    }
  }
  return out;
}

inline rank_report complex_spanning_rank(const std::vector<Eigen::VectorXcd>& dirs, int d, int s, int t,
                                         double tol = 1e-10) {
  auto m = complex_power_matrix(dirs, d, s, t);
  rank_report rep;
  rep.required = dim_complex_bihomogeneous(d, s, t);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  for (Eigen::Index i = 0; i < sv.size(); i++) {
    if (sv(i) > tol * sv(0)) {
      rep.rank++;
    }
  }
  auto k = std::min<Eigen::Index>(static_cast<Eigen::Index>(rep.required), sv.size());
  rep.condition_number = k > 0 && sv(k - 1) > 0.0 ? sv(0) / sv(k - 1) : std::numeric_limits<double>::infinity();
  return rep;
}

inline complex_direction_set sample_complex_directions(int d, int s, int t, std::size_t n, std::uint64_t seed,
                                                       const ridge_options& opts = {}) {
  if (d < 1 || s < 0 || t < 0) {
    throw precondition_error("sample_complex_directions: need d >= 1 and s, t >= 0");
  }
  auto required = dim_complex_bihomogeneous(d, s, t);
  if (n < required) {
    throw precondition_error("sample_complex_directions: n = " + std::to_string(n) + " below dim " +
                             std::to_string(required));
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int attempt = 0; attempt <= opts.max_retries; attempt++) {
    complex_direction_set dirs;
    dirs.d = d;
    dirs.s = s;
    dirs.t = t;
    for (std::size_t i = 0; i < n; i++) {
      Eigen::VectorXcd a(d);
      double norm = 0.0;
      while (norm < 1e-8) {
        for (int j = 0; j < d; j++) {
          double re = normal(rng);
          double im = normal(rng);
          a(j) = {re, im};
        }
        norm = a.norm();
      }
      dirs.vectors.push_back(a / norm);
    }
    bool ok = true;
    for (int sp = 0; sp <= s && ok; sp++) {
      for (int tp = 0; tp <= t && ok; tp++) {
        auto rep = complex_spanning_rank(dirs.vectors, d, sp, tp, opts.rank_tolerance);
        ok = rep.full();
        if (sp == s && tp == t) {
          dirs.condition_number = rep.condition_number;
        }
      }
    }
    if (ok) {
      return dirs;
    }
  }
  throw error("sample_complex_directions: no spanning set after " + std::to_string(opts.max_retries + 1) +
              " attempts");
}

// z -> sum_j P_j(alpha_j^T z) with univariate profiles in (w, conj w).
struct complex_ridge_decomposition {
  int d = 0;
  std::vector<Eigen::VectorXcd> directions;
  std::vector<complex_polynomial> profiles;
  double residual = 0.0;
  double spanning_condition = 0.0;

  std::complex<double> eval(std::span<const std::complex<double>> z) const {
    if (z.size() != static_cast<std::size_t>(d)) {
      throw dimension_error("complex ridge eval: point has wrong dimension");
    }
    std::complex<double> sum = 0.0;
    for (std::size_t j = 0; j < directions.size(); j++) {
      std::complex<double> w = 0.0;
      for (int v = 0; v < d; v++) {
        w += directions[j](v) * z[static_cast<std::size_t>(v)];
      }
      sum += profiles[j].eval(std::span<const std::complex<double>>(&w, 1));
    }
    return sum;
  }
};

// Points of B^{2d} read as z = x_head + i x_tail.
inline std::vector<std::vector<std::complex<double>>> complex_test_points(int d) {
  auto grid = sup_grid(2 * d);
  std::vector<std::vector<std::complex<double>>> out;
  for (Eigen::Index c = 0; c < grid.cols(); c++) {
    std::vector<std::complex<double>> z(static_cast<std::size_t>(d));
    for (int j = 0; j < d; j++) {
      z[static_cast<std::size_t>(j)] = {grid(j, c), grid(d + j, c)};
    }
    out.push_back(std::move(z));
  }
  return out;
}

inline complex_ridge_decomposition complex_decompose(const complex_polynomial& p, const complex_direction_set& dirs,
                                                     const ridge_options& opts = {}) {
  if (p.dim() != static_cast<std::size_t>(dirs.d)) {
    throw dimension_error("complex_decompose: polynomial dimension differs from directions");
  }
  if (p.holomorphic_degree() > dirs.s || p.antiholomorphic_degree() > dirs.t) {
    throw precondition_error("complex_decompose: polynomial bidegree exceeds certified (" + std::to_string(dirs.s) +
                             ", " + std::to_string(dirs.t) + ")");
  }
  const int d = dirs.d;
  const auto n = static_cast<Eigen::Index>(dirs.size());
  std::map<std::pair<int, int>, std::vector<std::pair<bi_index, std::complex<double>>>> parts;
  for (const auto& [key, c] : p.terms()) {
    parts[{key.k.order(), key.l.order()}].emplace_back(key, c);
  }
  std::vector<complex_polynomial> profiles(static_cast<std::size_t>(n), complex_polynomial(1));
  std::ostringstream ranks;
  for (const auto& [bideg, terms] : parts) {
    auto [s, t] = bideg;
    auto rows = detail::bi_indices_of_order(static_cast<std::size_t>(d), s, t);
    std::map<bi_index, Eigen::Index, bi_index_less> row_of;
    for (std::size_t r = 0; r < rows.size(); r++) {
      row_of[bi_index{rows[r].first, rows[r].second}] = static_cast<Eigen::Index>(r);
    }
    Eigen::MatrixXcd mat = complex_power_matrix(dirs.vectors, d, s, t);
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(mat.rows());
    for (const auto& [key, c] : terms) {
      rhs(row_of.at(key)) = c / (detail::sqrt_multinomial(s, key.k) * detail::sqrt_multinomial(t, key.l));
    }
    Eigen::MatrixXd real_mat = detail::realified_matrix(mat);
    Eigen::VectorXd real_rhs(2 * rhs.size());
    real_rhs << rhs.real(), rhs.imag();
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(real_mat);
    Eigen::VectorXd sol = cod.solve(real_rhs);
    ranks << " (" << s << "," << t << "): rank " << cod.rank() / 2 << "/" << mat.rows();
    multi_index ks{s};
    multi_index ls{t};
    for (Eigen::Index j = 0; j < n; j++) {
      profiles[static_cast<std::size_t>(j)].add_term(ks, ls, {sol(j), sol(n + j)});
    }
  }
  complex_ridge_decomposition out;
  out.d = d;
  out.directions = dirs.vectors;
  out.profiles = std::move(profiles);
  out.spanning_condition = dirs.condition_number;

  double res = 0.0;
  double pn = 0.0;
  for (const auto& z : complex_test_points(d)) {
    std::span<const std::complex<double>> zs(z);
    auto pv = p.eval(zs);
    res = std::max(res, std::abs(pv - out.eval(zs)));
    pn = std::max(pn, std::abs(pv));
  }
  out.residual = res;
  if (!(res < opts.residual_tolerance * (1.0 + pn))) {
    std::ostringstream os;
    os << "complex_decompose: sup-grid residual " << res << " exceeds " << opts.residual_tolerance << " * (1 + "
       << pn << ");" << ranks.str();
    throw decomposition_error(os.str(), res);
  }
  return out;
}

inline complex_ridge_decomposition complex_decompose(const gaussian_polynomial& p, const complex_direction_set& dirs,
                                                     const ridge_options& opts = {}) {
  return complex_decompose(p.to_complex_double(), dirs, opts);
}

}  // namespace ridgekit
