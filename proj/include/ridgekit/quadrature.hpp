#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <ridgekit/error.hpp>
#include <ridgekit/gauss.hpp>
#include <ridgekit/summation.hpp>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace ridgekit {

enum class domain_kind { ball, sphere };

inline constexpr std::size_t default_node_cap = 10'000'000;

// Nodes are the columns of a dim x size matrix. For the sphere, dim is the
// ambient dimension (S^{dim-1} in R^dim).
struct quadrature_rule {
  domain_kind domain = domain_kind::ball;
  int dim = 0;
  int exactness_degree = 0;
  Eigen::MatrixXd nodes;
  Eigen::VectorXd weights;

  std::size_t size() const { return static_cast<std::size_t>(weights.size()); }

  std::span<const double> node(std::size_t i) const {
    return {nodes.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
};

inline double ball_volume(int d) {
  return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

// Surface measure of the unit sphere in R^m (S^{m-1}); 2 for m = 1.
inline double sphere_area(int m) { return 2.0 * std::pow(std::numbers::pi, 0.5 * m) / std::tgamma(0.5 * m); }

namespace detail {

inline std::size_t sphere_rule_size(int m, int degree) {
  if (m == 1) {
    return 2;
  }
  if (m == 2) {
    return static_cast<std::size_t>(degree + 1);
  }
  return static_cast<std::size_t>(degree / 2 + 1) * sphere_rule_size(m - 1, degree);
}

inline int radial_points(int d, int degree) { return (degree + d - 1) / 2 + 1; }

inline void sphere_rule_into(int m, int degree, Eigen::MatrixXd& nodes, Eigen::VectorXd& weights) {
  if (m == 1) {
    nodes.resize(1, 2);
    nodes << -1.0, 1.0;
    weights = Eigen::VectorXd::Ones(2);
    return;
  }
  if (m == 2) {
    // Equispaced angles integrate trigonometric polynomials of degree < n.
    int n = degree + 1;
    nodes.resize(2, n);
    weights = Eigen::VectorXd::Constant(n, 2.0 * std::numbers::pi / n);
    for (int j = 0; j < n; j++) {
      double th = 2.0 * std::numbers::pi * j / n;
      nodes(0, j) = std::cos(th);
      nodes(1, j) = std::sin(th);
    }
    return;
  }
  // Polar slicing: x = (sqrt(1 - t^2) xi, t) with xi on S^{m-2} and
  // dH = (1 - t^2)^{(m-3)/2} dt dH(xi).
  Eigen::MatrixXd sub_nodes;
  Eigen::VectorXd sub_weights;
  sphere_rule_into(m - 1, degree, sub_nodes, sub_weights);
  double a = 0.5 * (m - 3);
  auto t_rule = gauss_jacobi(degree / 2 + 1, a, a);
  auto nt = t_rule.nodes.size();
  auto ns = sub_weights.size();
  nodes.resize(m, nt * ns);
  weights.resize(nt * ns);
  for (Eigen::Index i = 0; i < nt; i++) {
    double t = t_rule.nodes(i);
    double rho = std::sqrt(std::max(0.0, 1.0 - t * t));
    for (Eigen::Index j = 0; j < ns; j++) {
      auto col = i * ns + j;
      nodes.col(col).head(m - 1) = rho * sub_nodes.col(j);
      nodes(m - 1, col) = t;
      weights(col) = t_rule.weights(i) * sub_weights(j);
    }
  }
}

}  // namespace detail

// Rule on S^{sphere_dim} in R^{sphere_dim+1}, exact for monomials of total
// degree <= exactness_degree.
inline quadrature_rule build_sphere_rule(int sphere_dim, int exactness_degree,
                                         std::size_t node_cap = default_node_cap) {
  int m = sphere_dim + 1;
  if (sphere_dim < 0 || exactness_degree < 0) {
    throw precondition_error("build_sphere_rule: invalid dimension or degree");
  }
  auto count = detail::sphere_rule_size(m, exactness_degree);
  if (count > node_cap) {
    throw resource_error("sphere rule would need " + std::to_string(count) + " nodes (cap " +
                         std::to_string(node_cap) + ")");
  }
  quadrature_rule rule;
  rule.domain = domain_kind::sphere;
  rule.dim = m;
  rule.exactness_degree = exactness_degree;
  detail::sphere_rule_into(m, exactness_degree, rule.nodes, rule.weights);
  return rule;
}

// Rule on B^d: radial Gauss-Legendre on [0, 1] with the r^{d-1} Jacobian in
// the weights, times the sphere rule.
inline quadrature_rule build_ball_rule(int d, int exactness_degree, std::size_t node_cap = default_node_cap) {
  if (d < 1 || exactness_degree < 0) {
    throw precondition_error("build_ball_rule: invalid dimension or degree");
  }
  auto nr = detail::radial_points(d, exactness_degree);
  auto count = static_cast<std::size_t>(nr) * detail::sphere_rule_size(d, exactness_degree);
  if (count > node_cap) {
    throw resource_error("ball rule would need " + std::to_string(count) + " nodes (cap " +
                         std::to_string(node_cap) + ")");
  }
  Eigen::MatrixXd sphere_nodes;
  Eigen::VectorXd sphere_weights;
  detail::sphere_rule_into(d, exactness_degree, sphere_nodes, sphere_weights);
  auto radial = gauss_legendre(nr, 0.0, 1.0);

  quadrature_rule rule;
  rule.domain = domain_kind::ball;
  rule.dim = d;
  rule.exactness_degree = exactness_degree;
  auto ns = sphere_weights.size();
  rule.nodes.resize(d, nr * ns);
  rule.weights.resize(nr * ns);
  for (int i = 0; i < nr; i++) {
    double r = radial.nodes(i);
    double wr = radial.weights(i) * std::pow(r, d - 1);
    for (Eigen::Index j = 0; j < ns; j++) {
      auto col = i * ns + j;
      rule.nodes.col(col) = r * sphere_nodes.col(j);
      rule.weights(col) = wr * sphere_weights(j);
    }
  }
  return rule;
}

// Stable hex digest of a rule's contents (FNV-1a over the raw doubles).
inline std::string rule_digest(const quadrature_rule& rule) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const double* p, std::size_t n) {
    const auto* bytes = reinterpret_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n * sizeof(double); i++) {
      h ^= bytes[i];
      h *= 1099511628211ull;
    }
  };
  mix(rule.nodes.data(), static_cast<std::size_t>(rule.nodes.size()));
  mix(rule.weights.data(), static_cast<std::size_t>(rule.weights.size()));
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

namespace detail {

inline std::string describe_node(const quadrature_rule& rule, std::size_t i) {
  std::ostringstream os;
  os << "node " << i << " (";
  auto x = rule.node(i);
  for (std::size_t j = 0; j < x.size(); j++) {
    os << (j ? ", " : "") << x[j];
  }
  os << ')';
  return os.str();
}

}  // namespace detail

// Values of f at every node, failing on non-finite output.
template <class F>
Eigen::VectorXd sample_at_nodes(const F& f, const quadrature_rule& rule) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(rule.size()));
  for (std::size_t i = 0; i < rule.size(); i++) {
    double y = f(rule.node(i));
    if (!std::isfinite(y)) {
      throw numeric_error("non-finite function value at " + detail::describe_node(rule, i));
    }
    v(static_cast<Eigen::Index>(i)) = y;
  }
  return v;
}

// sum_i w_i f(x_i) g(x_i) with pairwise summation.
template <class F, class G>
double inner_product(const F& f, const G& g, const quadrature_rule& rule) {
  auto fv = sample_at_nodes(f, rule);
  auto gv = sample_at_nodes(g, rule);
  Eigen::VectorXd terms = rule.weights.cwiseProduct(fv).cwiseProduct(gv);
  return pairwise_sum({terms.data(), static_cast<std::size_t>(terms.size())});
}

inline double integrate_values(const Eigen::VectorXd& values, const quadrature_rule& rule) {
  Eigen::VectorXd terms = rule.weights.cwiseProduct(values);
  return pairwise_sum({terms.data(), static_cast<std::size_t>(terms.size())});
}

template <class F>
double integrate(const F& f, const quadrature_rule& rule) {
  return integrate_values(sample_at_nodes(f, rule), rule);
}

// Weighted discrete L^q norm of node values; q = infinity takes the max over
// the nodes, which only approximates the essential supremum.
inline double lq_norm_values(const Eigen::VectorXd& values, const quadrature_rule& rule, double q) {
  if (!(q >= 1.0)) {
    throw precondition_error("lq_norm needs q >= 1");
  }
  if (std::isinf(q)) {
    return values.size() ? values.cwiseAbs().maxCoeff() : 0.0;
  }
  Eigen::VectorXd terms(values.size());
  for (Eigen::Index i = 0; i < values.size(); i++) {
    terms(i) = rule.weights(i) * std::pow(std::abs(values(i)), q);
  }
  return std::pow(pairwise_sum({terms.data(), static_cast<std::size_t>(terms.size())}), 1.0 / q);
}

template <class F>
double lq_norm(const F& f, const quadrature_rule& rule, double q) {
  return lq_norm_values(sample_at_nodes(f, rule), rule, q);
}

// Cartesian grid of [-1, 1]^d with per_axis points per axis, kept inside the
// closed unit ball. Columns are points.
inline Eigen::MatrixXd dense_ball_grid(int d, int per_axis) {
  if (d < 1 || per_axis < 2) {
    throw precondition_error("dense_ball_grid: need d >= 1 and per_axis >= 2");
  }
  std::vector<double> coords;
  std::vector<int> idx(d, 0);
  std::vector<double> x(d);
  while (true) {
    double r2 = 0.0;
    for (int j = 0; j < d; j++) {
      x[j] = -1.0 + 2.0 * idx[j] / (per_axis - 1);
      r2 += x[j] * x[j];
    }
    if (r2 <= 1.0 + 1e-14) {
      coords.insert(coords.end(), x.begin(), x.end());
    }
    int j = 0;
    while (j < d && ++idx[j] == per_axis) {
      idx[j++] = 0;
    }
    if (j == d) {
      break;
    }
  }
  return Eigen::Map<Eigen::MatrixXd>(coords.data(), d, static_cast<Eigen::Index>(coords.size()) / d);
}

// Seeded cloud of points distributed uniformly in B^d (for dimensions where
// a Cartesian grid is too sparse).
inline Eigen::MatrixXd ball_point_cloud(int d, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif;
  Eigen::MatrixXd pts(d, count);
  for (int i = 0; i < count; i++) {
    Eigen::VectorXd g(d);
    for (int j = 0; j < d; j++) {
      g(j) = normal(rng);
    }
    double r = std::pow(unif(rng), 1.0 / d);
    pts.col(i) = r * g / g.norm();
  }
  return pts;
}

// Default point set for sup-norm surrogates in B^d: roughly target points,
// Cartesian for d <= 4, a seeded cloud plus the origin beyond.
inline Eigen::MatrixXd sup_grid(int d, int target = 2000) {
  if (d <= 4) {
    double frac = ball_volume(d) / std::pow(2.0, d);
    int per_axis = std::max(3, static_cast<int>(std::ceil(std::pow(target / frac, 1.0 / d))));
    return dense_ball_grid(d, per_axis);
  }
  Eigen::MatrixXd cloud = ball_point_cloud(d, target, 0x5eedull + static_cast<std::uint64_t>(d));
  cloud.col(0).setZero();
  return cloud;
}

template <class F>
double sup_on_grid(const F& f, const Eigen::MatrixXd& grid) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < grid.cols(); i++) {
    std::span<const double> x(grid.data() + i * grid.rows(), static_cast<std::size_t>(grid.rows()));
    double y = f(x);
    if (!std::isfinite(y)) {
      throw numeric_error("non-finite function value on sup grid");
    }
    m = std::max(m, std::abs(y));
  }
  return m;
}

}  // namespace ridgekit
