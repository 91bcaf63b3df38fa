#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <ridgekit/error.hpp>
#include <ridgekit/gauss.hpp>
#include <ridgekit/multi_index.hpp>
#include <ridgekit/polynomial.hpp>
#include <ridgekit/quadrature.hpp>
#include <ridgekit/summation.hpp>
#include <ridgekit/trig_reduce.hpp>
#include <span>
#include <vector>

namespace ridgekit {

// q_k = (1 / (k_{ell+1} + ... + k_d + d - ell)) * int_{S^{d-ell-1}} xi^{k''}, with
// the sphere measure taken from the rule (the two-point measure when d - ell = 1).
inline double q_coefficient(const multi_index& k, int d, int ell, const quadrature_rule& sphere_rule) {
  if (ell < 1 || ell >= d || k.size() != static_cast<std::size_t>(d)) {
    throw precondition_error("q_coefficient: need 1 <= ell < d and a length-d multi-index");
  }
  if (sphere_rule.domain != domain_kind::sphere || sphere_rule.dim != d - ell) {
    throw precondition_error("q_coefficient: need a rule on the sphere in R^" + std::to_string(d - ell));
  }
  int tail = 0;
  for (int j = ell; j < d; j++) {
    tail += k[static_cast<std::size_t>(j)];
  }
  if (tail > sphere_rule.exactness_degree) {
    throw precondition_error("q_coefficient: sphere rule exactness below moment degree");
  }
  std::vector<double> vals(sphere_rule.size());
  for (std::size_t i = 0; i < sphere_rule.size(); i++) {
    double v = sphere_rule.weights(static_cast<Eigen::Index>(i));
    for (int j = ell; j < d; j++) {
      v *= std::pow(sphere_rule.nodes(j - ell, static_cast<Eigen::Index>(i)), k[static_cast<std::size_t>(j)]);
    }
    vals[i] = v;
  }
  return pairwise_sum(std::span<const double>(vals)) / (tail + d - ell);
}

// Profile rho on R^ell.
using ridge_profile = std::function<double(std::span<const double>)>;

// Separated form <rho(A .), P> = sum_h b_h(rho) Q_h(sigma; P). The index h
// runs over tuples (kind_k, freq_k), k = 1..ell, kind in {cos, sin} and
// freq in 0..d+s, so there are (2 (d + s + 1))^ell of them.
class expansion_certificate {
 public:
  expansion_certificate(int d, int ell, int s) : d_(d), ell_(ell), s_(s) {
    if (d < 2 || ell < 1 || ell >= d || s < 0) {
      throw precondition_error("expansion_certificate: need 1 <= ell < d and s >= 0");
    }
    freq_count_ = d + s + 1;
    mu_ = 1;
    for (int k = 0; k < ell; k++) {
      mu_ *= static_cast<std::size_t>(2 * freq_count_);
    }
    indices_ = multi_indices_up_to(static_cast<std::size_t>(d), s);
    auto sphere = build_sphere_rule(d - ell - 1, s);
    q_.resize(static_cast<Eigen::Index>(indices_.size()));
    zeta_tilde_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(mu_), static_cast<Eigen::Index>(indices_.size()));
    for (std::size_t c = 0; c < indices_.size(); c++) {
      const auto& k = indices_[c];
      q_(static_cast<Eigen::Index>(c)) = q_coefficient(k, d, ell, sphere);
      // One trig expansion per angle factor.
      std::vector<trig_expansion> factors;
      int prefix = 0;
      for (int f = 0; f + 1 < ell; f++) {
        prefix += k[static_cast<std::size_t>(f)];
        factors.push_back(trig_reduce(k[static_cast<std::size_t>(f + 1)], f + prefix));
      }
      int head = 0;
      for (int j = 0; j < ell; j++) {
        head += k[static_cast<std::size_t>(j)];
      }
      int tail = k.order() - head;
      factors.push_back(trig_reduce(tail + d - ell + 1, ell - 1 + head));
      for (std::size_t h = 0; h < mu_; h++) {
        double z = 1.0;
        for (int f = 0; f < ell && z != 0.0; f++) {
          auto [is_sin, freq] = component(h, f);
          const auto& fac = factors[static_cast<std::size_t>(f)];
          if (static_cast<std::size_t>(freq) >= fac.cos_coeff.size()) {
            z = 0.0;
          } else {
            z *= is_sin ? fac.sin_coeff[static_cast<std::size_t>(freq)] : fac.cos_coeff[static_cast<std::size_t>(freq)];
          }
        }
        zeta_tilde_(static_cast<Eigen::Index>(h), static_cast<Eigen::Index>(c)) = z;
      }
    }
  }

  int dim() const { return d_; }
  int ell() const { return ell_; }
  int degree() const { return s_; }
  std::size_t mu() const { return mu_; }
  const std::vector<multi_index>& indices() const { return indices_; }
  const Eigen::VectorXd& q() const { return q_; }
  const Eigen::MatrixXd& zeta_tilde() const { return zeta_tilde_; }

  // zeta_{h,k} = q_k * zeta~_{h,k}.
  Eigen::MatrixXd zeta() const { return zeta_tilde_ * q_.asDiagonal(); }

  // (is_sin, frequency) of angle factor f in tuple h.
  std::pair<bool, int> component(std::size_t h, int f) const {
    for (int j = 0; j < f; j++) {
      h /= static_cast<std::size_t>(2 * freq_count_);
    }
    auto slot = static_cast<int>(h % static_cast<std::size_t>(2 * freq_count_));
    return {slot >= freq_count_, slot % freq_count_};
  }

  double f_h(std::size_t h, std::span<const double> phi) const {
    double v = 1.0;
    for (int f = 0; f < ell_; f++) {
      auto [is_sin, freq] = component(h, f);
      double arg = freq * phi[static_cast<std::size_t>(f)];
      v *= is_sin ? std::sin(arg) : std::cos(arg);
    }
    return v;
  }

  // Angle-to-ball map: y_1 = prod sin(phi_k), y_j = cos(phi_{j-1}) prod_{k >= j} sin(phi_k);
  // for ell = 1 simply y_1 = sin(phi_1).
  void angles_to_point(std::span<const double> phi, std::span<double> y) const {
    for (int j = 0; j < ell_; j++) {
      double v = j == 0 ? 1.0 : std::cos(phi[static_cast<std::size_t>(j - 1)]);
      for (int k = j; k < ell_; k++) {
        v *= std::sin(phi[static_cast<std::size_t>(k)]);
      }
      y[static_cast<std::size_t>(j)] = v;
    }
  }

  // b_h(rho) for all h. The first angle (ell >= 2) uses the periodic
  // trapezoid rule on [-pi, pi], middle angles Gauss-Legendre on [0, pi], the
  // last angle Gauss-Legendre on [0, pi/2] ([-pi/2, pi/2] when ell = 1).
  Eigen::VectorXd b(const ridge_profile& rho, int angular_points) const {
    if (angular_points < 1) {
      throw precondition_error("expansion_certificate: need at least one angular point");
    }
    std::vector<gauss_rule_1d> axes;
    for (int f = 0; f < ell_; f++) {
      if (ell_ == 1) {
        axes.push_back(gauss_legendre(angular_points, -std::numbers::pi / 2, std::numbers::pi / 2));
      } else if (f == 0) {
        gauss_rule_1d trap;
        trap.nodes.resize(2 * angular_points);
        trap.weights = Eigen::VectorXd::Constant(2 * angular_points, std::numbers::pi / angular_points);
        for (int i = 0; i < 2 * angular_points; i++) {
          trap.nodes(i) = -std::numbers::pi + std::numbers::pi * i / angular_points;
        }
        axes.push_back(trap);
      } else if (f + 1 < ell_) {
        axes.push_back(gauss_legendre(angular_points, 0.0, std::numbers::pi));
      } else {
        axes.push_back(gauss_legendre(angular_points, 0.0, std::numbers::pi / 2));
      }
    }
    // Per axis table of cos/sin(freq * phi) for every node.
    std::vector<Eigen::MatrixXd> tables;
    for (const auto& ax : axes) {
      Eigen::MatrixXd t(2 * freq_count_, static_cast<Eigen::Index>(ax.nodes.size()));
      for (Eigen::Index i = 0; i < ax.nodes.size(); i++) {
        for (int fr = 0; fr < freq_count_; fr++) {
          t(fr, i) = std::cos(fr * ax.nodes(i));
          t(freq_count_ + fr, i) = std::sin(fr * ax.nodes(i));
        }
      }
      tables.push_back(std::move(t));
    }
    // Contract axis by axis: start with the tensor of weighted rho values.
    std::vector<std::size_t> sizes;
    std::size_t total = 1;
    for (const auto& ax : axes) {
      sizes.push_back(static_cast<std::size_t>(ax.nodes.size()));
      total *= static_cast<std::size_t>(ax.nodes.size());
    }
    Eigen::VectorXd values(static_cast<Eigen::Index>(total));
    std::vector<double> phi(static_cast<std::size_t>(ell_));
    std::vector<double> y(static_cast<std::size_t>(ell_));
    for (std::size_t flat = 0; flat < total; flat++) {
      std::size_t rest = flat;
      double w = 1.0;
      for (int f = 0; f < ell_; f++) {
        auto i = static_cast<Eigen::Index>(rest % sizes[static_cast<std::size_t>(f)]);
        rest /= sizes[static_cast<std::size_t>(f)];
        phi[static_cast<std::size_t>(f)] = axes[static_cast<std::size_t>(f)].nodes[i];
        w *= axes[static_cast<std::size_t>(f)].weights[i];
      }
      angles_to_point(phi, y);
      values(static_cast<Eigen::Index>(flat)) = w * rho(y);
    }
    // values is indexed with axis 0 fastest; contracting axis f replaces its
    // node index with a slot index (2 * freq_count_ of them), which lines up
    // with the base-(2 * freq_count_) digits of h.
    Eigen::VectorXd current = values;
    std::vector<std::size_t> shape = sizes;
    for (int f = 0; f < ell_; f++) {
      std::size_t inner = 1;
      for (int g = 0; g < f; g++) {
        inner *= shape[static_cast<std::size_t>(g)];
      }
      std::size_t outer = 1;
      for (int g = f + 1; g < ell_; g++) {
        outer *= shape[static_cast<std::size_t>(g)];
      }
      std::size_t n_in = shape[static_cast<std::size_t>(f)];
      auto n_out = static_cast<std::size_t>(2 * freq_count_);
      Eigen::VectorXd next = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(inner * n_out * outer));
      const auto& tab = tables[static_cast<std::size_t>(f)];
      for (std::size_t o = 0; o < outer; o++) {
        for (std::size_t slot = 0; slot < n_out; slot++) {
          for (std::size_t in = 0; in < inner; in++) {
            double sum = 0.0;
            for (std::size_t node = 0; node < n_in; node++) {
              sum += tab(static_cast<Eigen::Index>(slot), static_cast<Eigen::Index>(node)) *
                     current(static_cast<Eigen::Index>(in + inner * (node + n_in * o)));
            }
            next(static_cast<Eigen::Index>(in + inner * (slot + n_out * o))) = sum;
          }
        }
      }
      current = std::move(next);
      shape[static_cast<std::size_t>(f)] = n_out;
    }
    return current;
  }

  // Q_h(sigma; P) = sum_k zeta_{h,k} P_k(sigma; P) with P(sigma y) = sum_k P_k y^k.
  Eigen::VectorXd q_h(const Eigen::MatrixXd& sigma, const polynomial& p) const {
    if (p.dim() != static_cast<std::size_t>(d_) || p.degree() > s_) {
      throw precondition_error("expansion_certificate: polynomial outside P_s(R^d)");
    }
    auto rotated = compose_linear(p, sigma, Eigen::VectorXd::Zero(d_));
    Eigen::VectorXd pk(static_cast<Eigen::Index>(indices_.size()));
    for (std::size_t c = 0; c < indices_.size(); c++) {
      pk(static_cast<Eigen::Index>(c)) = rotated.coefficient(indices_[c]);
    }
    return zeta() * pk;
  }

 private:
  int d_;
  int ell_;
  int s_;
  int freq_count_;
  std::size_t mu_;
  std::vector<multi_index> indices_;
  Eigen::VectorXd q_;
  Eigen::MatrixXd zeta_tilde_;
};

struct expansion_check {
  double lhs = 0.0;
  double rhs = 0.0;
  double deviation = 0.0;
};

// Left side by ball quadrature of rho(A x) P(x), right side through the
// certificate. resolution drives both the ball rule exactness and the
// angular point count; each angle gets resolution / 2 + 1 points on top of
// the d + s frequencies the functions f_h carry themselves.
inline expansion_check verify_inner_product_expansion(const ridge_profile& rho, const Eigen::MatrixXd& a,
                                                      const Eigen::MatrixXd& sigma, const polynomial& p,
                                                      const expansion_certificate& cert, int resolution) {
  int d = cert.dim();
  int ell = cert.ell();
  if (a.rows() != ell || a.cols() != d || sigma.rows() != d || sigma.cols() != d) {
    throw dimension_error("verify_inner_product_expansion: matrix shapes do not match the certificate");
  }
  Eigen::MatrixXd want = Eigen::MatrixXd::Identity(ell, d);
  if ((a * sigma - want).cwiseAbs().maxCoeff() > 1e-10) {
    throw precondition_error("verify_inner_product_expansion: A sigma differs from I by more than 1e-10");
  }
  auto rule = build_ball_rule(d, resolution + cert.degree());
  std::vector<double> vals(rule.size());
  Eigen::VectorXd y(ell);
  for (std::size_t i = 0; i < rule.size(); i++) {
    auto x = rule.node(i);
    Eigen::Map<const Eigen::VectorXd> xv(x.data(), d);
    y.noalias() = a * xv;
    vals[i] = rule.weights(static_cast<Eigen::Index>(i)) *
              rho(std::span<const double>(y.data(), static_cast<std::size_t>(ell))) * p.eval(x);
  }
  expansion_check out;
  out.lhs = pairwise_sum(std::span<const double>(vals));
  Eigen::VectorXd bh = cert.b(rho, resolution / 2 + 1 + d + cert.degree());
  Eigen::VectorXd qh = cert.q_h(sigma, p);
  out.rhs = pairwise_dot(bh.data(), qh.data(), static_cast<std::size_t>(bh.size()));
  out.deviation = std::abs(out.lhs - out.rhs);
  return out;
}

// Random orthogonal sigma (QR of a Gaussian matrix, signs fixed) and
// A = first ell rows of sigma^T, so that A sigma = I_{ell x d}.
inline std::pair<Eigen::MatrixXd, Eigen::MatrixXd> random_orthogonal_pair(int d, int ell, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(d, d);
  for (Eigen::Index i = 0; i < g.size(); i++) {
    g(i) = normal(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; j++) {
    if (r(j, j) < 0) {
      q.col(j) = -q.col(j);
    }
  }
  Eigen::MatrixXd a = q.transpose().topRows(ell);
  return {a, q};
}

}  // namespace ridgekit
