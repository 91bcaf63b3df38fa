#pragma once

#include <Eigen/Eigenvalues>
#include <cmath>
#include <ridgekit/error.hpp>
#include <utility>

namespace ridgekit {

struct gauss_rule_1d {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

// n-point Gauss-Jacobi rule on [-1, 1] for the weight (1-t)^alpha (1+t)^beta,
// by Golub-Welsch on the monic three-term recurrence. Exact for degree 2n-1.
inline gauss_rule_1d gauss_jacobi(int n, double alpha, double beta) {
  if (n < 1) {
    throw precondition_error("gauss_jacobi needs at least one node");
  }
  if (alpha <= -1.0 || beta <= -1.0) {
    throw precondition_error("gauss_jacobi needs alpha, beta > -1");
  }
  const double ab = alpha + beta;
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int k = 0; k < n; k++) {
    double two_k_ab = 2.0 * k + ab;
    if (k == 0) {
      diag(k) = (beta - alpha) / (ab + 2.0);
    } else {
      diag(k) = (beta * beta - alpha * alpha) / (two_k_ab * (two_k_ab + 2.0));
    }
  }
  for (int k = 1; k < n; k++) {
    double b;
    if (k == 1) {
      b = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      double two_k_ab = 2.0 * k + ab;
      b = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) /
          (two_k_ab * two_k_ab * (two_k_ab + 1.0) * (two_k_ab - 1.0));
    }
    sub(k - 1) = std::sqrt(b);
  }

  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                              std::lgamma(beta + 1.0) - std::lgamma(ab + 2.0));

  gauss_rule_1d rule;
  if (n == 1) {
    rule.nodes = diag;
    rule.weights = Eigen::VectorXd::Constant(1, mu0);
    return rule;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  rule.nodes = eig.eigenvalues();
  rule.weights.resize(n);
  for (int i = 0; i < n; i++) {
    double v0 = eig.eigenvectors()(0, i);
    rule.weights(i) = mu0 * v0 * v0;
  }
  return rule;
}

inline gauss_rule_1d gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

// Gauss-Legendre mapped to [lo, hi].
inline gauss_rule_1d gauss_legendre(int n, double lo, double hi) {
  auto rule = gauss_legendre(n);
  double half = 0.5 * (hi - lo);
  double mid = 0.5 * (hi + lo);
  rule.nodes = (rule.nodes.array() * half + mid).matrix();
  rule.weights *= half;
  return rule;
}

}  // namespace ridgekit
