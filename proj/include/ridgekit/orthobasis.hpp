#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstddef>
#include <ridgekit/combinatorics.hpp>
#include <ridgekit/error.hpp>
#include <ridgekit/multi_index.hpp>
#include <ridgekit/polynomial.hpp>
#include <ridgekit/quadrature.hpp>
#include <ridgekit/summation.hpp>
#include <sstream>
#include <span>
#include <vector>

namespace ridgekit {

// Tie-break among equal-degree monomials when orthogonalizing. Both are
// degree-graded; they give different individual P_i but the same spans.
enum class basis_ordering { grlex, grlex_reversed };

namespace detail {

// Monomial coefficients of the orthonormal Legendre polynomials on [-1, 1].
inline std::vector<std::vector<double>> legendre_monomial_coefficients(int n_max) {
  std::vector<std::vector<double>> p(n_max + 1);
  p[0] = {1.0};
  if (n_max >= 1) {
    p[1] = {0.0, 1.0};
  }
  for (int n = 1; n < n_max; n++) {
    p[n + 1].assign(n + 2, 0.0);
    for (int m = 0; m <= n; m++) {
      p[n + 1][m + 1] += (2.0 * n + 1.0) / (n + 1.0) * p[n][m];
    }
    for (int m = 0; m < n; m++) {
      p[n + 1][m] -= static_cast<double>(n) / (n + 1.0) * p[n - 1][m];
    }
  }
  for (int n = 0; n <= n_max; n++) {
    double scale = std::sqrt(0.5 * (2.0 * n + 1.0));
    for (auto& c : p[n]) {
      c *= scale;
    }
  }
  return p;
}

// Orthonormal Legendre values L_0(t), ..., L_n(t).
inline void legendre_values(double t, int n_max, double* out) {
  double p_prev = 1.0;
  double p = t;
  out[0] = std::sqrt(0.5);
  if (n_max >= 1) {
    out[1] = std::sqrt(1.5) * t;
  }
  for (int n = 1; n < n_max; n++) {
    double next = ((2.0 * n + 1.0) * t * p - n * p_prev) / (n + 1.0);
    p_prev = p;
    p = next;
    out[n + 1] = std::sqrt(0.5 * (2.0 * n + 3.0)) * next;
  }
}

}  // namespace detail

// Graded orthonormal basis of P_{s_max}(B^d) under the quadrature inner
// product. Gram-Schmidt runs over tensor Legendre products taken in graded
// order; each product equals its leading monomial plus lower-degree terms, so
// every prefix spans the same space as the corresponding monomial prefix and
// the resulting P_i coincide with Gram-Schmidt on raw monomials, with far
// better conditioning.
class ortho_basis {
 public:
  ortho_basis(int d, int s_max, quadrature_rule rule, basis_ordering ordering = basis_ordering::grlex)
      : d_(d), s_max_(s_max), rule_(std::move(rule)), ordering_(ordering) {
    if (d < 1 || s_max < 0) {
      throw precondition_error("build_basis: need d >= 1 and s_max >= 0");
    }
    if (rule_.domain != domain_kind::ball || rule_.dim != d) {
      throw precondition_error("build_basis: rule must be a ball rule in dimension " + std::to_string(d));
    }
    if (rule_.exactness_degree < 2 * s_max) {
      throw precondition_error("build_basis: rule exactness " + std::to_string(rule_.exactness_degree) +
                               " below 2*s_max = " + std::to_string(2 * s_max));
    }
    exponents_ = multi_indices_up_to(d, s_max);
    if (ordering == basis_ordering::grlex_reversed) {
      std::stable_sort(exponents_.begin(), exponents_.end(), grlex_reversed_less{});
    }
    for (const auto& k : exponents_) {
      degrees_.push_back(k.order());
    }
    legendre_ = detail::legendre_monomial_coefficients(s_max);
    orthonormalize();
  }

  int dim() const { return d_; }
  int max_degree() const { return s_max_; }
  std::size_t size() const { return exponents_.size(); }
  basis_ordering ordering() const { return ordering_; }
  const quadrature_rule& rule() const { return rule_; }
  const std::vector<int>& degrees() const { return degrees_; }
  int degree(std::size_t i) const { return degrees_[i]; }

  // The monomial exponent whose Gram-Schmidt step produced P_i.
  const multi_index& exponent(std::size_t i) const { return exponents_[i]; }

  // |I_s|: number of basis elements of degree <= s.
  std::size_t count_up_to(int s) const {
    if (s > s_max_) {
      throw precondition_error("basis does not cover degree " + std::to_string(s));
    }
    return dim_polynomials(d_, s);
  }

  // |J_s|.
  std::size_t count_of_degree(int s) const { return count_up_to(s) - (s == 0 ? 0 : count_up_to(s - 1)); }

  // Values of P_i at the rule nodes, one column per basis element.
  const Eigen::MatrixXd& node_values() const { return values_; }

  // Lower-triangular coefficients of P_i in the tensor Legendre products.
  const Eigen::MatrixXd& legendre_coefficients() const { return coeffs_; }

  Eigen::VectorXd reference_values(std::span<const double> x) const {
    if (x.size() != static_cast<std::size_t>(d_)) {
      throw dimension_error("basis evaluation point has wrong dimension");
    }
    std::vector<double> table(static_cast<std::size_t>(d_) * (s_max_ + 1));
    for (int v = 0; v < d_; v++) {
      detail::legendre_values(x[v], s_max_, table.data() + v * (s_max_ + 1));
    }
    Eigen::VectorXd out(static_cast<Eigen::Index>(size()));
    for (std::size_t j = 0; j < size(); j++) {
      double prod = 1.0;
      for (int v = 0; v < d_; v++) {
        prod *= table[v * (s_max_ + 1) + exponents_[j][v]];
      }
      out(static_cast<Eigen::Index>(j)) = prod;
    }
    return out;
  }

  double eval(std::size_t i, std::span<const double> x) const {
    auto ref = reference_values(x);
    auto n = static_cast<Eigen::Index>(i + 1);
    return coeffs_.row(static_cast<Eigen::Index>(i)).head(n).dot(ref.head(n));
  }

  // Value of sum_i c_i P_i at x (c covers a prefix of the basis).
  double eval_expansion(const Eigen::VectorXd& c, std::span<const double> x) const {
    auto n = c.size();
    Eigen::VectorXd g = coeffs_.topLeftCorner(n, n).transpose() * c;
    return g.dot(reference_values(x).head(n));
  }

  // Node values of sum_i c_i P_i.
  Eigen::VectorXd expansion_node_values(const Eigen::VectorXd& c) const {
    return values_.leftCols(c.size()) * c;
  }

  // sum_i c_i P_i in monomial form.
  polynomial expand(const Eigen::VectorXd& c) const {
    auto n = c.size();
    if (n > static_cast<Eigen::Index>(size())) {
      throw dimension_error("expansion longer than the basis");
    }
    Eigen::VectorXd g = coeffs_.topLeftCorner(n, n).transpose() * c;
    return legendre_to_monomials(g);
  }

  polynomial polynomial_at(std::size_t i) const {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(i + 1));
    e(static_cast<Eigen::Index>(i)) = 1.0;
    return expand(e);
  }

  // <f, P_i> for i in I_s from precomputed node values of f.
  Eigen::VectorXd project_values(const Eigen::VectorXd& f_values, int s) const {
    auto n = static_cast<Eigen::Index>(count_up_to(s));
    Eigen::VectorXd wf = rule_.weights.cwiseProduct(f_values);
    Eigen::VectorXd c(n);
    for (Eigen::Index i = 0; i < n; i++) {
      c(i) = pairwise_dot(wf.data(), values_.col(i).data(), static_cast<std::size_t>(wf.size()));
    }
    return c;
  }

  // <f, P_i> for i in I_s by quadrature.
  template <class F>
  Eigen::VectorXd project_coefficients(const F& f, int s) const {
    return project_values(sample_at_nodes(f, rule_), s);
  }

 private:
  polynomial legendre_to_monomials(const Eigen::VectorXd& g) const {
    polynomial p(static_cast<std::size_t>(d_));
    multi_index m(static_cast<std::size_t>(d_));
    for (Eigen::Index j = 0; j < g.size(); j++) {
      if (g(j) == 0.0) {
        continue;
      }
      const auto& k = exponents_[static_cast<std::size_t>(j)];
      // Iterate over exponents m <= k with matching parity in every slot.
      std::vector<int> cur(k.entries());
      while (true) {
        double c = g(j);
        for (int v = 0; v < d_; v++) {
          m.set(v, cur[v]);
          c *= legendre_[k[v]][cur[v]];
        }
        p.add_term(m, c);
        int v = 0;
        while (v < d_) {
          cur[v] -= 2;
          if (cur[v] >= 0) {
            break;
          }
          cur[v] = k[v];
          v++;
        }
        if (v == d_) {
          break;
        }
      }
    }
    return p;
  }

  // Modified Gram-Schmidt with one re-orthogonalization pass on sqrt(w)-scaled
  // node values.
  void orthonormalize() {
    const auto n_nodes = static_cast<Eigen::Index>(rule_.size());
    const auto m = static_cast<Eigen::Index>(size());
    Eigen::VectorXd sqrt_w = rule_.weights.cwiseSqrt();

    std::vector<double> table(static_cast<std::size_t>(n_nodes) * d_ * (s_max_ + 1));
    for (Eigen::Index i = 0; i < n_nodes; i++) {
      auto x = rule_.node(static_cast<std::size_t>(i));
      for (int v = 0; v < d_; v++) {
        detail::legendre_values(x[v], s_max_, table.data() + (i * d_ + v) * (s_max_ + 1));
      }
    }

    values_.resize(n_nodes, m);
    coeffs_ = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXd v(n_nodes);
    Eigen::VectorXd c(m);
    for (Eigen::Index i = 0; i < m; i++) {
      const auto& k = exponents_[static_cast<std::size_t>(i)];
      for (Eigen::Index n = 0; n < n_nodes; n++) {
        double prod = sqrt_w(n);
        for (int var = 0; var < d_; var++) {
          prod *= table[(n * d_ + var) * (s_max_ + 1) + k[var]];
        }
        v(n) = prod;
      }
      c.setZero();
      c(i) = 1.0;
      double norm0 = std::sqrt(pairwise_dot(v, v));
      for (int pass = 0; pass < 2; pass++) {
        for (Eigen::Index j = 0; j < i; j++) {
          double r = pairwise_dot(values_.col(j).data(), v.data(), static_cast<std::size_t>(n_nodes));
          v -= r * values_.col(j);
          c.head(j + 1) -= r * coeffs_.row(j).head(j + 1).transpose();
        }
      }
      double norm = std::sqrt(pairwise_dot(v, v));
      if (!(norm >= 1e-12 * norm0)) {
        std::ostringstream os;
        os << "Gram-Schmidt breakdown at monomial exponent " << k << " (relative norm " << norm / norm0
           << "); quadrature rule too coarse or degree too high";
        throw conditioning_error(os.str());
      }
      values_.col(i) = v / norm;
      coeffs_.row(i).head(i + 1) = c.head(i + 1).transpose() / norm;
    }
    for (Eigen::Index j = 0; j < m; j++) {
      values_.col(j).array() /= sqrt_w.array();
    }
  }

  int d_;
  int s_max_;
  quadrature_rule rule_;
  basis_ordering ordering_;
  std::vector<multi_index> exponents_;
  std::vector<int> degrees_;
  std::vector<std::vector<double>> legendre_;
  Eigen::MatrixXd values_;
  Eigen::MatrixXd coeffs_;
};

inline ortho_basis build_basis(int d, int s_max, const quadrature_rule& rule,
                               basis_ordering ordering = basis_ordering::grlex) {
  return ortho_basis(d, s_max, rule, ordering);
}

// Basis together with a default rule of exactness 2*s_max + 2 (or more).
inline ortho_basis build_basis(int d, int s_max, int extra_exactness = 0) {
  return ortho_basis(d, s_max, build_ball_rule(d, 2 * s_max + 2 + extra_exactness));
}

}  // namespace ridgekit
