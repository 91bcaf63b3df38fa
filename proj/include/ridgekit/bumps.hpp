#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <ridgekit/cutoff.hpp>
#include <ridgekit/error.hpp>
#include <ridgekit/jet.hpp>
#include <ridgekit/multi_index.hpp>
#include <span>
#include <vector>

namespace ridgekit {

// 1-D plateau g on R: 1 for |t| <= half_width/2, 0 for |t| >= half_width,
// smooth in between. The product over coordinates with half_width = 1/sqrt(d)
// is 1 on the half cube and vanishes off the cube [-1/sqrt(d), 1/sqrt(d)]^d.
class plateau {
 public:
  explicit plateau(double half_width) : a_(half_width) {
    if (!(half_width > 0.0)) {
      throw precondition_error("plateau: half width must be positive");
    }
  }

  double half_width() const { return a_; }

  double operator()(double t) const { return 1.0 - smooth_step((std::abs(t) - a_ / 2) / (a_ / 2)); }

  // g, g', ..., g^(order) at t.
  std::vector<double> derivatives(double t, std::size_t order) const {
    double sign = t < 0.0 ? -1.0 : 1.0;
    auto u = jet::variable(order, (std::abs(t) - a_ / 2) / (a_ / 2), 2.0 / a_);
    jet g = 1.0 - smooth_step_jet(u);
    std::vector<double> out(order + 1);
    double flip = 1.0;
    for (std::size_t k = 0; k <= order; k++) {
      out[k] = flip * g.derivative(k);
      flip *= sign;
    }
    return out;
  }

  // Grid estimate of sup |g^(j)| for j = 0..order over the transition band.
  std::vector<double> derivative_sups(std::size_t order, std::size_t samples = 20000) const {
    std::vector<double> sup(order + 1, 0.0);
    sup[0] = 1.0;
    for (std::size_t i = 0; i <= samples; i++) {
      double t = a_ / 2 + a_ / 2 * static_cast<double>(i) / static_cast<double>(samples);
      auto d = derivatives(t, order);
      for (std::size_t k = 1; k <= order; k++) {
        sup[k] = std::max(sup[k], std::abs(d[k]));
      }
    }
    return sup;
  }

 private:
  double a_;
};

// Hard inputs f_eps(x) = (2 theta)^{-r} sum_i eps_i omega(2 theta (x - xi_i))
// built on the half-integer lattice of spacing 1/(sqrt(d) theta).
struct bump_family {
  int d = 0;
  int r = 0;
  int m = 0;
  int theta = 0;
  std::vector<Eigen::VectorXd> points;
  std::vector<std::vector<int>> cells;
  // omega = prod g / normalization.
  double normalization = 1.0;
  double safety = 1.0;
  std::vector<double> derivative_sups;
  std::map<std::vector<int>, int> cell_index;

  double plateau_half_width() const { return 1.0 / std::sqrt(static_cast<double>(d)); }

  double omega(std::span<const double> y) const {
    plateau g(plateau_half_width());
    double v = 1.0;
    for (double t : y) {
      v *= g(t);
      if (v == 0.0) {
        return 0.0;
      }
    }
    return v / normalization;
  }

  double omega_partial(const multi_index& k, std::span<const double> y) const {
    plateau g(plateau_half_width());
    double v = 1.0;
    for (std::size_t j = 0; j < y.size(); j++) {
      v *= g.derivatives(y[j], static_cast<std::size_t>(k[j]))[static_cast<std::size_t>(k[j])];
    }
    return v / normalization;
  }

  double peak() const { return 1.0 / normalization; }

  // Index of the lattice point whose cell holds x, or -1.
  int owner(std::span<const double> x) const {
    double scale = std::sqrt(static_cast<double>(d)) * theta;
    std::vector<int> cell(static_cast<std::size_t>(d));
    for (int j = 0; j < d; j++) {
      cell[static_cast<std::size_t>(j)] = static_cast<int>(std::floor(x[static_cast<std::size_t>(j)] * scale));
    }
    auto it = cell_index.find(cell);
    return it == cell_index.end() ? -1 : it->second;
  }
};

namespace detail {

inline long ipow(long b, int e) {
  long r = 1;
  for (int i = 0; i < e; i++) {
    r *= b;
  }
  return r;
}

}  // namespace detail

// theta is the smallest integer with (2 theta)^d >= m; the lattice points are
// the first m in lexicographic scan order, permuted first when a shuffle
// seed is given. omega is divided by safety * max_{|k| <= r} prod_j sup|g^(k_j)|.
inline bump_family make_bump_family(int d, int r, int m, std::optional<std::uint64_t> shuffle_seed = std::nullopt,
                                    double safety = 1.01) {
  if (d < 1 || r < 0 || m < 1) {
    throw precondition_error("make_bump_family: need d >= 1, r >= 0, m >= 1");
  }
  if (safety < 1.0) {
    throw precondition_error("make_bump_family: safety factor below 1");
  }
  int theta = 1;
  while (detail::ipow(2L * theta, d) < m) {
    theta++;
  }
  if (detail::ipow(theta, d) > m) {
    throw error("make_bump_family: no admissible lattice scale for m = " + std::to_string(m));
  }
  bump_family fam;
  fam.d = d;
  fam.r = r;
  fam.m = m;
  fam.theta = theta;
  fam.safety = safety;

  std::vector<std::vector<int>> all;
  std::vector<int> idx(static_cast<std::size_t>(d), -theta);
  while (true) {
    all.push_back(idx);
    int j = d - 1;
    while (j >= 0 && idx[static_cast<std::size_t>(j)] == theta - 1) {
      idx[static_cast<std::size_t>(j)] = -theta;
      j--;
    }
    if (j < 0) {
      break;
    }
    idx[static_cast<std::size_t>(j)]++;
  }
  if (shuffle_seed) {
    std::mt19937_64 rng(*shuffle_seed);
    std::shuffle(all.begin(), all.end(), rng);
  }
  double scale = std::sqrt(static_cast<double>(d)) * theta;
  for (int i = 0; i < m; i++) {
    const auto& cell = all[static_cast<std::size_t>(i)];
    Eigen::VectorXd xi(d);
    for (int j = 0; j < d; j++) {
      xi(j) = (cell[static_cast<std::size_t>(j)] + 0.5) / scale;
    }
    fam.points.push_back(xi);
    fam.cells.push_back(cell);
    fam.cell_index[cell] = i;
  }

  plateau g(fam.plateau_half_width());
  fam.derivative_sups = g.derivative_sups(static_cast<std::size_t>(r));
  double worst = 1.0;
  for (const auto& k : multi_indices_up_to(static_cast<std::size_t>(d), r)) {
    double v = 1.0;
    for (int j = 0; j < d; j++) {
      v *= fam.derivative_sups[static_cast<std::size_t>(k[j])];
    }
    worst = std::max(worst, v);
  }
  fam.normalization = safety * worst;
  return fam;
}

inline double eval_f_eps(const bump_family& fam, std::span<const int> eps, std::span<const double> x) {
  if (eps.size() != static_cast<std::size_t>(fam.m)) {
    throw dimension_error("eval_f_eps: sign vector has length " + std::to_string(eps.size()) + ", need " +
                          std::to_string(fam.m));
  }
  if (x.size() != static_cast<std::size_t>(fam.d)) {
    throw dimension_error("eval_f_eps: point has wrong dimension");
  }
  int i = fam.owner(x);
  if (i < 0) {
    return 0.0;
  }
  double two_theta = 2.0 * fam.theta;
  std::vector<double> y(x.size());
  for (std::size_t j = 0; j < x.size(); j++) {
    y[j] = two_theta * (x[j] - fam.points[static_cast<std::size_t>(i)](static_cast<Eigen::Index>(j)));
  }
  return eps[static_cast<std::size_t>(i)] * std::pow(two_theta, -fam.r) * fam.omega(y);
}

// partial^k f_eps(x) from exact plateau derivatives; supports are disjoint,
// so only the owning bump contributes.
inline double eval_f_eps_partial(const bump_family& fam, std::span<const int> eps, const multi_index& k,
                                 std::span<const double> x) {
  if (eps.size() != static_cast<std::size_t>(fam.m) || x.size() != static_cast<std::size_t>(fam.d) ||
      k.size() != x.size()) {
    throw dimension_error("eval_f_eps_partial: sizes do not match the family");
  }
  int i = fam.owner(x);
  if (i < 0) {
    return 0.0;
  }
  double two_theta = 2.0 * fam.theta;
  std::vector<double> y(x.size());
  for (std::size_t j = 0; j < x.size(); j++) {
    y[j] = two_theta * (x[j] - fam.points[static_cast<std::size_t>(i)](static_cast<Eigen::Index>(j)));
  }
  return eps[static_cast<std::size_t>(i)] * std::pow(two_theta, k.order() - fam.r) * fam.omega_partial(k, y);
}

// Random sign vector for the family.
inline std::vector<int> random_signs(int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<int> eps(static_cast<std::size_t>(m));
  for (auto& e : eps) {
    e = (rng() & 1U) != 0U ? 1 : -1;
  }
  return eps;
}

}  // namespace ridgekit
