#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <ridgekit/combinatorics.hpp>
#include <ridgekit/error.hpp>
#include <ridgekit/multi_index.hpp>
#include <ridgekit/polynomial.hpp>
#include <ridgekit/quadrature.hpp>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

namespace ridgekit {

struct ridge_options {
  // Numerical rank: singular values above rank_tolerance * largest count.
  double rank_tolerance = 1e-10;
  int max_retries = 32;
  // Decomposition accepted when sup-grid residual < tol * (1 + ||P||_grid).
  double residual_tolerance = 1e-8;
};

// Unit directions a_1..a_n in R^m whose s-th powers span the homogeneous
// polynomials of degree s.
struct direction_set {
  int m = 0;
  int s = 0;
  std::vector<Eigen::VectorXd> vectors;
  // Condition number of the scaled degree-s power matrix.
  double condition_number = 0.0;

  std::size_t size() const { return vectors.size(); }
};

struct rank_report {
  std::size_t rank = 0;
  std::size_t required = 0;
  double condition_number = 0.0;

  bool full() const { return rank == required; }
};

namespace detail {

inline double sqrt_multinomial(int j, const multi_index& alpha) {
  double lg = std::lgamma(j + 1.0);
  for (auto a : alpha.entries()) {
    lg -= std::lgamma(a + 1.0);
  }
  return std::exp(0.5 * lg);
}

inline rank_report numerical_rank(const Eigen::MatrixXd& m, std::size_t required, double tol) {
  rank_report rep;
  rep.required = required;
  if (m.size() == 0) {
    return rep;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  double top = sv(0);
  for (Eigen::Index i = 0; i < sv.size(); i++) {
    if (sv(i) > tol * top) {
      rep.rank++;
    }
  }
  auto k = std::min<Eigen::Index>(static_cast<Eigen::Index>(required), sv.size());
  rep.condition_number = k > 0 && sv(k - 1) > 0.0 ? top / sv(k - 1) : std::numeric_limits<double>::infinity();
  return rep;
}

}  // namespace detail

// Coefficients of (a_i^T x)^j in the monomials x^alpha, |alpha| = j (grlex
// rows), scaled by sqrt(alpha!/j!). Entry (alpha, i) is sqrt(j!/alpha!) a_i^alpha;
// the column Gram matrix is ((a_i^T a_k)^j), the apolar inner product.
inline Eigen::MatrixXd power_matrix(const std::vector<Eigen::VectorXd>& dirs, int m, int j) {
  auto rows = multi_indices_of_order(static_cast<std::size_t>(m), j);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dirs.size()));
  for (std::size_t r = 0; r < rows.size(); r++) {
    double scale = detail::sqrt_multinomial(j, rows[r]);
    for (std::size_t i = 0; i < dirs.size(); i++) {
      double v = scale;
      for (int t = 0; t < m; t++) {
        v *= std::pow(dirs[i](t), rows[r][t]);
      }
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = v;
    }
  }
  return out;
}

inline rank_report spanning_rank(const std::vector<Eigen::VectorXd>& dirs, int m, int j, double tol = 1e-10) {
  return detail::numerical_rank(power_matrix(dirs, m, j), dim_homogeneous(m, j), tol);
}

// Random unit directions, resampled until the powers of every degree j <= s
// have full numerical rank.
inline direction_set sample_spanning_directions(int m, int s, std::size_t n, std::uint64_t seed,
                                                const ridge_options& opts = {}) {
  if (m < 1 || s < 0) {
    throw precondition_error("sample_spanning_directions: need m >= 1 and s >= 0");
  }
  auto required = dim_homogeneous(m, s);
  if (n < required) {
    throw precondition_error("sample_spanning_directions: n = " + std::to_string(n) + " below dim " +
                             std::to_string(required));
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int attempt = 0; attempt <= opts.max_retries; attempt++) {
    direction_set dirs;
    dirs.m = m;
    dirs.s = s;
    for (std::size_t i = 0; i < n; i++) {
      Eigen::VectorXd a(m);
      double norm = 0.0;
      while (norm < 1e-8) {
        for (int t = 0; t < m; t++) {
          a(t) = normal(rng);
        }
        norm = a.norm();
      }
      dirs.vectors.push_back(a / norm);
    }
    bool ok = true;
    for (int j = 0; j <= s && ok; j++) {
      auto rep = spanning_rank(dirs.vectors, m, j, opts.rank_tolerance);
      ok = rep.full();
      if (j == s) {
        dirs.condition_number = rep.condition_number;
      }
    }
    if (ok) {
      return dirs;
    }
  }
  throw error("sample_spanning_directions: no spanning set after " + std::to_string(opts.max_retries + 1) +
              " attempts (rank tolerance " + std::to_string(opts.rank_tolerance) + ")");
}

// A_i = [a_i^T 0; 0 I_{ell-1}] in R^{ell x d}.
inline std::vector<Eigen::MatrixXd> build_block_matrices(const direction_set& dirs, int d, int ell) {
  if (ell < 1 || ell > d || dirs.m != d - ell + 1) {
    throw dimension_error("build_block_matrices: directions live in R^" + std::to_string(dirs.m) + ", need R^" +
                          std::to_string(d - ell + 1));
  }
  std::vector<Eigen::MatrixXd> out;
  for (const auto& a : dirs.vectors) {
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(ell, d);
    block.row(0).head(dirs.m) = a.transpose();
    for (int r = 1; r < ell; r++) {
      block(r, dirs.m + r - 1) = 1.0;
    }
    out.push_back(std::move(block));
  }
  return out;
}

struct ridge_block {
  Eigen::MatrixXd A;
  polynomial P;
};

// x -> sum_k P_k(A_k x).
struct ridge_decomposition {
  int d = 0;
  int ell = 0;
  std::vector<ridge_block> blocks;
  // Sup-grid residual measured when the decomposition was certified.
  double residual = 0.0;
  double spanning_condition = 0.0;

  double eval(std::span<const double> x) const {
    if (x.size() != static_cast<std::size_t>(d)) {
      throw dimension_error("eval_ridge: point has wrong dimension");
    }
    Eigen::Map<const Eigen::VectorXd> xv(x.data(), d);
    double sum = 0.0;
    Eigen::VectorXd y(ell);
    for (const auto& b : blocks) {
      y.noalias() = b.A * xv;
      sum += b.P.eval(std::span<const double>(y.data(), static_cast<std::size_t>(ell)));
    }
    return sum;
  }

  double operator()(std::span<const double> x) const { return eval(x); }
};

inline double eval_ridge(const ridge_decomposition& r, std::span<const double> x) { return r.eval(x); }

// Sup over grid points of |P - R|, and of |P|.
inline std::pair<double, double> ridge_residual(const polynomial& p, const ridge_decomposition& r,
                                                const Eigen::MatrixXd& grid) {
  double res = 0.0;
  double pn = 0.0;
  for (Eigen::Index i = 0; i < grid.cols(); i++) {
    std::span<const double> x(grid.data() + i * grid.rows(), static_cast<std::size_t>(grid.rows()));
    double pv = p.eval(x);
    res = std::max(res, std::abs(pv - r.eval(x)));
    pn = std::max(pn, std::abs(pv));
  }
  return {res, pn};
}

// Writes P(x, y) = sum_beta y^beta P_beta(x) with x the first d-ell+1
// coordinates, expresses every homogeneous part of every P_beta as a
// least-norm combination of the powers (a_i^T x)^j, and assembles
// H_i(t, y) = sum y^beta c_{i,j,beta} t^j.
inline ridge_decomposition decompose(const polynomial& p, const direction_set& dirs, int d, int ell,
                                     const ridge_options& opts = {}) {
  if (p.dim() != static_cast<std::size_t>(d)) {
    throw dimension_error("decompose: polynomial has dimension " + std::to_string(p.dim()));
  }
  if (p.degree() > dirs.s) {
    throw precondition_error("decompose: degree " + std::to_string(p.degree()) + " exceeds direction degree " +
                             std::to_string(dirs.s));
  }
  const int m = d - ell + 1;
  auto mats = build_block_matrices(dirs, d, ell);
  const auto n = static_cast<Eigen::Index>(dirs.size());

  // rhs[j][beta] = coefficients of the degree-j part of P_beta.
  std::map<int, std::map<multi_index, std::map<multi_index, double, grlex_less>, grlex_less>> parts;
  for (const auto& [k, c] : p.terms()) {
    std::vector<int> alpha(k.entries().begin(), k.entries().begin() + m);
    std::vector<int> beta(k.entries().begin() + m, k.entries().end());
    multi_index a(alpha);
    parts[a.order()][multi_index(beta)][a] = c;
  }

  std::vector<polynomial> profiles(static_cast<std::size_t>(n), polynomial(static_cast<std::size_t>(ell)));
  for (const auto& [j, by_beta] : parts) {
    auto rows = multi_indices_of_order(static_cast<std::size_t>(m), j);
    std::map<multi_index, Eigen::Index, grlex_less> row_of;
    for (std::size_t r = 0; r < rows.size(); r++) {
      row_of[rows[r]] = static_cast<Eigen::Index>(r);
    }
    Eigen::MatrixXd mat = power_matrix(dirs.vectors, m, j);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(mat.rows(), static_cast<Eigen::Index>(by_beta.size()));
    std::vector<multi_index> betas;
    for (const auto& [beta, coeffs] : by_beta) {
      auto col = static_cast<Eigen::Index>(betas.size());
      for (const auto& [alpha, c] : coeffs) {
        rhs(row_of.at(alpha), col) = c / detail::sqrt_multinomial(j, alpha);
      }
      betas.push_back(beta);
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(mat);
    Eigen::MatrixXd sol = cod.solve(rhs);
    for (std::size_t b = 0; b < betas.size(); b++) {
      std::vector<int> key{j};
      key.insert(key.end(), betas[b].entries().begin(), betas[b].entries().end());
      multi_index mk(key);
      for (Eigen::Index i = 0; i < n; i++) {
        profiles[static_cast<std::size_t>(i)].add_term(mk, sol(i, static_cast<Eigen::Index>(b)));
      }
    }
  }

  ridge_decomposition out;
  out.d = d;
  out.ell = ell;
  out.spanning_condition = dirs.condition_number;
  for (Eigen::Index i = 0; i < n; i++) {
    out.blocks.push_back({mats[static_cast<std::size_t>(i)], std::move(profiles[static_cast<std::size_t>(i)])});
  }

  auto [res, pn] = ridge_residual(p, out, sup_grid(d));
  out.residual = res;
  if (!(res < opts.residual_tolerance * (1.0 + pn))) {
    std::ostringstream os;
    os << "decompose: sup-grid residual " << res << " exceeds " << opts.residual_tolerance << " * (1 + " << pn
       << "); spanning condition number " << dirs.condition_number;
    throw decomposition_error(os.str(), res);
  }
  return out;
}

// Compact SVD A = U S V^T gives A' = V^T with orthonormal rows and
// P'(x) = P(U S x), so that P(A x) = P'(A' x).
inline std::pair<Eigen::MatrixXd, polynomial> orthonormalize_rows(const Eigen::MatrixXd& a, const polynomial& p) {
  if (p.dim() != static_cast<std::size_t>(a.rows())) {
    throw dimension_error("orthonormalize_rows: profile dimension differs from row count");
  }
  if (a.rows() > a.cols()) {
    throw dimension_error("orthonormalize_rows: need ell <= d");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::MatrixXd us = svd.matrixU() * svd.singularValues().asDiagonal();
  Eigen::MatrixXd a_new = svd.matrixV().transpose();
  return {a_new, compose_linear(p, us, Eigen::VectorXd::Zero(a.rows()))};
}

// Largest s with dim_homogeneous(m, s) <= n (-1 if none).
inline int max_degree_for_budget(int m, std::size_t n) {
  int s = -1;
  while (dim_homogeneous(m, s + 1) <= n) {
    s++;
    if (m == 1 && s > 1000) {
      break;
    }
  }
  return s;
}

}  // namespace ridgekit
