#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <ridgekit/combinatorics.hpp>
#include <ridgekit/cutoff.hpp>
#include <ridgekit/error.hpp>
#include <ridgekit/orthobasis.hpp>
#include <ridgekit/parallel.hpp>
#include <ridgekit/polynomial.hpp>
#include <ridgekit/quadrature.hpp>
#include <vector>

namespace ridgekit {

inline double binomial_double(int n, int k) { return binomial(n, k).convert_to<double>(); }

// Pr_s f = sum over I_{2s-1} of eta(deg P_i / s) <f, P_i> P_i.
class quasi_projector {
 public:
  quasi_projector(const ortho_basis& basis, int s, cutoff_function eta = smooth_step_cutoff())
      : basis_(&basis), s_(s), eta_(std::move(eta)) {
    if (s < 1) {
      throw precondition_error("quasi_projector needs s >= 1");
    }
    if (basis.max_degree() < 2 * s - 1) {
      throw precondition_error("basis covers degree " + std::to_string(basis.max_degree()) + ", need " +
                               std::to_string(2 * s - 1));
    }
    auto n = basis.count_up_to(2 * s - 1);
    coeffs_.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; i++) {
      coeffs_(static_cast<Eigen::Index>(i)) = eta_(static_cast<double>(basis.degree(i)) / s);
    }
  }

  const ortho_basis& basis() const { return *basis_; }
  int s() const { return s_; }
  const cutoff_function& eta() const { return eta_; }

  // The filter weights a_{i,s} over I_{2s-1}.
  const Eigen::VectorXd& coefficients() const { return coeffs_; }

  // Basis coefficients of Pr_s f from node values of f.
  Eigen::VectorXd apply_values(const Eigen::VectorXd& f_values) const {
    return coeffs_.cwiseProduct(basis_->project_values(f_values, 2 * s_ - 1));
  }

  template <class F>
  Eigen::VectorXd apply_coefficients(const F& f) const {
    return apply_values(sample_at_nodes(f, basis_->rule()));
  }

  template <class F>
  polynomial apply(const F& f) const {
    return basis_->expand(apply_coefficients(f));
  }

 private:
  const ortho_basis* basis_;
  int s_;
  cutoff_function eta_;
  Eigen::VectorXd coeffs_;
};

// Basis coefficients of S_k^sigma from the coefficients <f, P_i>, i in I_k.
inline Eigen::VectorXd cesaro_coefficients(const Eigen::VectorXd& c, int k, int sigma, const ortho_basis& basis) {
  auto n = static_cast<Eigen::Index>(basis.count_up_to(k));
  if (c.size() < n) {
    throw dimension_error("cesaro_coefficients: coefficient vector too short");
  }
  double denom = binomial_double(k + sigma, sigma);
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; i++) {
    int j = basis.degree(static_cast<std::size_t>(i));
    out(i) = binomial_double(k - j + sigma, sigma) / denom * c(i);
  }
  return out;
}

template <class F>
polynomial cesaro_mean(const F& f, int k, int sigma, const ortho_basis& basis) {
  if (k < 0 || sigma < 0) {
    throw precondition_error("cesaro_mean needs k, sigma >= 0");
  }
  return basis.expand(cesaro_coefficients(basis.project_coefficients(f, k), k, sigma, basis));
}

// Delta^{sigma+1} g (k), with (Delta g)(x) = g(x) - g(x+1).
inline double forward_difference(const std::function<double(long)>& g, int sigma, long k) {
  if (sigma < 0) {
    throw precondition_error("forward_difference needs sigma >= 0");
  }
  std::vector<double> v(static_cast<std::size_t>(sigma) + 2);
  for (std::size_t j = 0; j < v.size(); j++) {
    v[j] = g(k + static_cast<long>(j));
  }
  for (int order = 0; order <= sigma; order++) {
    for (std::size_t j = 0; j + 1 < v.size() - order; j++) {
      v[j] = v[j] - v[j + 1];
    }
  }
  return v[0];
}

// Max coefficientwise gap between Pr_s f and the truncated Cesaro-sum form
// sum_{k < 2s} (Delta^{sigma+1} eta*)(k) binom(k+sigma, sigma) S_k^sigma(f),
// eta*(x) = eta(x / s). Terms with k >= 2s vanish identically.
inline double verify_cesaro_identity_values(const quasi_projector& proj, const Eigen::VectorXd& f_values,
                                            int sigma) {
  const auto& basis = proj.basis();
  int s = proj.s();
  Eigen::VectorXd c = basis.project_values(f_values, 2 * s - 1);
  Eigen::VectorXd lhs = proj.coefficients().cwiseProduct(c);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(lhs.size());
  auto eta_star = [&](long x) { return proj.eta()(static_cast<double>(x) / s); };
  for (int k = 0; k < 2 * s; k++) {
    double weight = forward_difference(eta_star, sigma, k) * binomial_double(k + sigma, sigma);
    auto sk = cesaro_coefficients(c, k, sigma, basis);
    rhs.head(sk.size()) += weight * sk;
  }
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

template <class F>
double verify_cesaro_identity(const quasi_projector& proj, const F& f, int sigma) {
  return verify_cesaro_identity_values(proj, sample_at_nodes(f, proj.basis().rule()), sigma);
}

inline int default_cesaro_order(int d) { return d / 2 + 1; }

namespace detail {

// Node values of a random combination of tensor Legendre products of total
// degree <= degree, with standard normal coefficients.
inline Eigen::VectorXd random_polynomial_values(const quadrature_rule& rule, int degree, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  auto ks = multi_indices_up_to(static_cast<std::size_t>(rule.dim), degree);
  std::vector<double> coef(ks.size());
  for (auto& c : coef) {
    c = normal(rng);
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(rule.size()));
  std::vector<double> table(static_cast<std::size_t>(rule.dim) * (degree + 1));
  for (std::size_t n = 0; n < rule.size(); n++) {
    auto x = rule.node(n);
    for (int v = 0; v < rule.dim; v++) {
      legendre_values(x[v], degree, table.data() + v * (degree + 1));
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < ks.size(); j++) {
      double prod = coef[j];
      for (int v = 0; v < rule.dim; v++) {
        prod *= table[v * (degree + 1) + ks[j][v]];
      }
      sum += prod;
    }
    out(static_cast<Eigen::Index>(n)) = sum;
  }
  return out;
}

// Node values of a compactly supported radial bump with random center and width.
inline Eigen::VectorXd random_bump_values(const quadrature_rule& rule, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif;
  Eigen::VectorXd center(rule.dim);
  for (int v = 0; v < rule.dim; v++) {
    center(v) = normal(rng);
  }
  center *= 0.7 * std::pow(unif(rng), 1.0 / rule.dim) / center.norm();
  double width = 0.25 + 0.5 * unif(rng);
  Eigen::VectorXd out(static_cast<Eigen::Index>(rule.size()));
  for (std::size_t n = 0; n < rule.size(); n++) {
    auto x = rule.node(n);
    double r2 = 0.0;
    for (int v = 0; v < rule.dim; v++) {
      r2 += (x[v] - center(v)) * (x[v] - center(v));
    }
    r2 /= width * width;
    out(static_cast<Eigen::Index>(n)) = r2 < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - r2)) : 0.0;
  }
  return out;
}

}  // namespace detail

// Empirical lower estimate of the L^1 operator norm of Pr_s: the max over
// trial functions of ||Pr_s f||_1 / ||f||_1, all norms by the basis rule.
// Even trials are random polynomials of degree <= 4s, odd trials localized
// bumps; trial t draws from its own seeded stream, so the estimate is
// non-decreasing in trial_count.
inline double estimate_l1_operator_norm(const quasi_projector& proj, int trial_count, std::uint64_t seed) {
  if (trial_count < 1) {
    throw precondition_error("estimate_l1_operator_norm needs at least one trial");
  }
  const auto& rule = proj.basis().rule();
  std::vector<double> ratios(static_cast<std::size_t>(trial_count), 0.0);
  parallel_for(ratios.size(), [&](std::size_t t) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(t)};
    std::mt19937_64 rng(seq);
    Eigen::VectorXd f = t % 2 == 0 ? detail::random_polynomial_values(rule, 4 * proj.s(), rng)
                                   : detail::random_bump_values(rule, rng);
    double f_norm = lq_norm_values(f, rule, 1.0);
    if (!(f_norm > 0.0)) {
      return;
    }
    Eigen::VectorXd pf = proj.basis().expansion_node_values(proj.apply_values(f));
    ratios[t] = lq_norm_values(pf, rule, 1.0) / f_norm;
  });
  return *std::max_element(ratios.begin(), ratios.end());
}

}  // namespace ridgekit
