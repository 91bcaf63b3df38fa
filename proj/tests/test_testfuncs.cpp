#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <ridgekit/testfuncs.hpp>

#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace ridgekit;

namespace {

constexpr double pi = std::numbers::pi;

// Exact <rho(A .), P> for polynomial rho through ball moments.
double exact_pairing(const polynomial& rho, const Eigen::MatrixXd& a, const polynomial& p) {
  auto prod = compose_linear(rho, a, Eigen::VectorXd::Zero(a.rows())) * p;
  double sum = 0.0;
  for (const auto& [k, c] : prod.terms()) {
    sum += c * oracle::ball_moment(k);
  }
  return sum;
}

ridge_profile as_profile(const polynomial& rho) {
  return [rho](std::span<const double> y) { return rho.eval(y); };
}

}  // namespace

TEST(jet, derivatives_of_composite) {
  // h(t) = exp(t^2) / (1 + t) at t = 0.3 against closed forms.
  double t0 = 0.3;
  auto t = jet::variable(3, t0);
  jet one(3, 1.0);
  auto h = exp(t * t) / (one + t);
  double e = std::exp(t0 * t0);
  double u = 1.0 + t0;
  double h0 = e / u;
  double h1 = e * (2 * t0 / u - 1 / (u * u));
  // Second derivative via the product rule on e * (2t/u - 1/u^2).
  double g = 2 * t0 / u - 1 / (u * u);
  double g1 = 2 / u - 2 * t0 / (u * u) + 2 / (u * u * u);
  double h2 = e * (2 * t0 * g + g1);
  EXPECT_NEAR(h.derivative(0), h0, 1e-14);
  EXPECT_NEAR(h.derivative(1), h1, 1e-13);
  EXPECT_NEAR(h.derivative(2), h2, 1e-12);
}

TEST(jet, smooth_step_matches_differences) {
  for (double u0 : {0.2, 0.5, 0.77}) {
    auto j = smooth_step_jet(jet::variable(2, u0));
    double h = 1e-5;
    double fd1 = (smooth_step(u0 + h) - smooth_step(u0 - h)) / (2 * h);
    double fd2 = (smooth_step(u0 + h) - 2 * smooth_step(u0) + smooth_step(u0 - h)) / (h * h);
    EXPECT_NEAR(j.derivative(0), smooth_step(u0), 1e-15);
    EXPECT_NEAR(j.derivative(1), fd1, 1e-8);
    EXPECT_NEAR(j.derivative(2), fd2, 1e-4);
  }
  EXPECT_EQ(smooth_step_jet(jet::variable(3, -0.1)).derivative(2), 0.0);
  EXPECT_EQ(smooth_step_jet(jet::variable(3, 1.2))[0], 1.0);
}

TEST(trig_reduce, examples) {
  auto sq = trig_reduce(2, 0);
  EXPECT_NEAR(sq.cos_coeff[0], 0.5, 1e-15);
  EXPECT_NEAR(sq.cos_coeff[2], 0.5, 1e-15);
  EXPECT_NEAR(sq.cos_coeff[1], 0.0, 1e-15);
  auto s1 = trig_reduce(0, 1);
  EXPECT_NEAR(s1.sin_coeff[1], 1.0, 1e-15);
  EXPECT_NEAR(s1.cos_coeff[1], 0.0, 1e-15);
  auto cs = trig_reduce(1, 1);
  ASSERT_EQ(cs.cos_coeff.size(), 3u);
  for (int h = 0; h <= 2; h++) {
    EXPECT_NEAR(cs.cos_coeff[h], 0.0, 1e-15);
    EXPECT_NEAR(cs.sin_coeff[h], h == 2 ? 0.5 : 0.0, 1e-15);
  }
  EXPECT_THROW(trig_reduce(-1, 0), precondition_error);
}

TEST(trig_reduce, identity_on_grid) {
  for (int a = 0; a <= 10; a++) {
    for (int b = 0; a + b <= 10; b++) {
      auto e = trig_reduce(a, b);
      ASSERT_EQ(e.cos_coeff.size(), static_cast<std::size_t>(a + b + 1));
      double worst = 0.0;
      for (int i = 0; i < 10000; i++) {
        double phi = -pi + 2 * pi * i / 10000.0;
        double want = std::pow(std::cos(phi), a) * std::pow(std::sin(phi), b);
        worst = std::max(worst, std::abs(want - e.eval(phi)));
      }
      EXPECT_LT(worst, 1e-10) << "a=" << a << " b=" << b;
    }
  }
}

TEST(q_coefficient, examples) {
  auto circle = build_sphere_rule(1, 6);
  EXPECT_NEAR(q_coefficient(multi_index{0, 0, 0}, 3, 1, circle), pi, 1e-14);
  EXPECT_NEAR(q_coefficient(multi_index{2, 1, 2}, 3, 1, circle), 0.0, 1e-15);
  EXPECT_NEAR(q_coefficient(multi_index{1, 0, 3}, 3, 1, circle), 0.0, 1e-15);
  auto two_points = build_sphere_rule(0, 6);
  EXPECT_NEAR(q_coefficient(multi_index{0, 0}, 2, 1, two_points), 2.0, 1e-15);
  EXPECT_NEAR(q_coefficient(multi_index{0, 3}, 2, 1, two_points), 0.0, 1e-15);
  EXPECT_NEAR(q_coefficient(multi_index{1, 2}, 2, 1, two_points), 2.0 / 3.0, 1e-15);
  EXPECT_THROW(q_coefficient(multi_index{0, 0}, 2, 2, two_points), precondition_error);
}

TEST(q_coefficient, sphere_moment_oracle) {
  for (int d = 3; d <= 5; d++) {
    for (int ell = 1; ell + 1 < d; ell++) {
      auto rule = build_sphere_rule(d - ell - 1, 6);
      for (const auto& k : multi_indices_up_to(static_cast<std::size_t>(d), 6)) {
        std::vector<int> tail(k.entries().begin() + ell, k.entries().end());
        multi_index kt(tail);
        double want = oracle::sphere_moment(kt) / (kt.order() + d - ell);
        EXPECT_NEAR(q_coefficient(k, d, ell, rule), want, 1e-13);
      }
    }
  }
}

TEST(expansion, certificate_shape) {
  expansion_certificate cert(3, 2, 2);
  EXPECT_EQ(cert.mu(), 4u * 36u);
  EXPECT_EQ(cert.indices().size(), 10u);
  expansion_certificate one(3, 1, 4);
  EXPECT_EQ(one.mu(), 2u * 8u);
  EXPECT_THROW(expansion_certificate(3, 3, 1), precondition_error);
}

TEST(expansion, zero_profile) {
  expansion_certificate cert(3, 1, 2);
  auto [a, sigma] = random_orthogonal_pair(3, 1, 4);
  std::mt19937_64 rng(1);
  auto p = test_support::random_polynomial(3, 2, rng);
  auto res = verify_inner_product_expansion([](std::span<const double>) { return 0.0; }, a, sigma, p, cert, 8);
  EXPECT_EQ(res.lhs, 0.0);
  EXPECT_EQ(res.rhs, 0.0);
}

TEST(expansion, constant_profile_gives_volume) {
  for (int d = 2; d <= 4; d++) {
    for (int ell = 1; ell < d; ell++) {
      expansion_certificate cert(d, ell, 1);
      auto [a, sigma] = random_orthogonal_pair(d, ell, 10 + d + ell);
      auto res = verify_inner_product_expansion([](std::span<const double>) { return 1.0; }, a, sigma,
                                                polynomial::constant(static_cast<std::size_t>(d), 1.0), cert, 12);
      EXPECT_NEAR(res.lhs, ball_volume(d), 1e-12);
      EXPECT_NEAR(res.rhs, ball_volume(d), 1e-10) << "d=" << d << " ell=" << ell;
    }
  }
}

TEST(expansion, quadratic_profile_in_three_dimensions) {
  expansion_certificate cert(3, 1, 2);
  polynomial rho(1);
  rho.add_term(multi_index{2}, 1.0);
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 5; trial++) {
    auto [a, sigma] = random_orthogonal_pair(3, 1, 100 + trial);
    auto p = test_support::random_polynomial(3, 2, rng);
    auto res = verify_inner_product_expansion(as_profile(rho), a, sigma, p, cert, 16);
    EXPECT_LT(res.deviation, 1e-6);
    EXPECT_NEAR(res.lhs, exact_pairing(rho, a, p), 1e-12);
  }
}

TEST(expansion, polynomial_profiles_all_shapes) {
  std::mt19937_64 rng(33);
  for (int d = 2; d <= 4; d++) {
    for (int ell = 1; ell < d; ell++) {
      int s = 2;
      expansion_certificate cert(d, ell, s);
      auto rho = test_support::random_polynomial(static_cast<std::size_t>(ell), 2, rng);
      auto p = test_support::random_polynomial(static_cast<std::size_t>(d), s, rng);
      auto [a, sigma] = random_orthogonal_pair(d, ell, 7 * d + ell);
      auto res = verify_inner_product_expansion(as_profile(rho), a, sigma, p, cert, 24);
      double exact = exact_pairing(rho, a, p);
      EXPECT_NEAR(res.rhs, exact, 1e-8) << "d=" << d << " ell=" << ell;
      EXPECT_LT(res.deviation, 1e-8);
    }
  }
}

TEST(expansion, refinement_consistency) {
  ridge_profile rho = [](std::span<const double> y) {
    double v = 0.0;
    for (double t : y) {
      v += t;
    }
    return std::exp(v) / (1.0 + y[0] * y[0]);
  };
  std::mt19937_64 rng(8);
  for (auto [d, ell] : {std::pair{3, 1}, std::pair{3, 2}, std::pair{4, 2}}) {
    expansion_certificate cert(d, ell, 2);
    auto [a, sigma] = random_orthogonal_pair(d, ell, 5);
    auto p = test_support::random_polynomial(static_cast<std::size_t>(d), 2, rng);
    double coarse = verify_inner_product_expansion(rho, a, sigma, p, cert, 4).deviation;
    double fine = verify_inner_product_expansion(rho, a, sigma, p, cert, 40).deviation;
    EXPECT_LT(fine, coarse) << "d=" << d << " ell=" << ell;
    EXPECT_LT(fine, 1e-8);
  }
}

TEST(expansion, rejects_mismatched_pair) {
  expansion_certificate cert(3, 1, 1);
  auto [a, sigma] = random_orthogonal_pair(3, 1, 4);
  Eigen::MatrixXd wrong = -a;
  EXPECT_THROW(verify_inner_product_expansion([](std::span<const double>) { return 1.0; }, wrong, sigma,
                                              polynomial::constant(3, 1.0), cert, 4),
               precondition_error);
}

TEST(bumps, one_dimensional_lattice) {
  auto fam = make_bump_family(1, 2, 2);
  EXPECT_EQ(fam.theta, 1);
  ASSERT_EQ(fam.points.size(), 2u);
  EXPECT_DOUBLE_EQ(fam.points[0](0), -0.5);
  EXPECT_DOUBLE_EQ(fam.points[1](0), 0.5);
}

TEST(bumps, scale_sandwich) {
  for (int d = 1; d <= 4; d++) {
    for (int m = 1; m <= 300; m += 7) {
      auto fam = make_bump_family(d, 1, m);
      double root = std::pow(static_cast<double>(m), 1.0 / d);
      EXPECT_LE(root / 2, fam.theta + 1e-12);
      EXPECT_LE(fam.theta, root + 1e-12);
      EXPECT_LE(m, static_cast<int>(std::pow(2 * fam.theta, d) + 0.5));
    }
  }
}

TEST(bumps, full_lattice_and_distinct_points) {
  auto fam = make_bump_family(2, 1, 16);
  EXPECT_EQ(fam.theta, 2);
  std::set<std::vector<int>> seen(fam.cells.begin(), fam.cells.end());
  EXPECT_EQ(seen.size(), 16u);
  for (const auto& xi : fam.points) {
    EXPECT_LE(xi.norm(), 1.0);
  }
  auto shuffled = make_bump_family(2, 1, 5, 99);
  auto again = make_bump_family(2, 1, 5, 99);
  EXPECT_EQ(shuffled.cells, again.cells);
}

TEST(bumps, omega_support_and_plateau) {
  auto fam = make_bump_family(2, 2, 4);
  std::vector<double> origin{0.0, 0.0};
  EXPECT_GT(fam.omega(origin), 0.0);
  EXPECT_EQ(fam.omega(origin), fam.peak());
  double a = 1.0 / std::sqrt(2.0);
  std::vector<double> inside{0.49 * a, -0.49 * a};
  EXPECT_EQ(fam.omega(inside), fam.peak());
  std::vector<double> edge{a, 0.0};
  EXPECT_EQ(fam.omega(edge), 0.0);
  std::vector<double> out{0.0, 1.2 * a};
  EXPECT_EQ(fam.omega(out), 0.0);
}

TEST(bumps, f_eps_examples) {
  auto fam = make_bump_family(2, 2, 6);
  auto eps = random_signs(6, 3);
  for (int i = 0; i < 6; i++) {
    std::vector<double> x{fam.points[i](0), fam.points[i](1)};
    double want = eps[i] * std::pow(2.0 * fam.theta, -2) * fam.peak();
    EXPECT_DOUBLE_EQ(eval_f_eps(fam, eps, x), want);
  }
  std::vector<double> far{0.9, 0.0};
  EXPECT_EQ(eval_f_eps(fam, eps, far), 0.0);
  std::vector<int> neg(eps.size());
  for (std::size_t i = 0; i < eps.size(); i++) {
    neg[i] = -eps[i];
  }
  auto cloud = ball_point_cloud(2, 500, 4);
  for (Eigen::Index c = 0; c < cloud.cols(); c++) {
    std::span<const double> x(cloud.data() + 2 * c, 2);
    EXPECT_EQ(eval_f_eps(fam, neg, x), -eval_f_eps(fam, eps, x));
  }
  std::vector<int> short_eps{1, 1};
  EXPECT_THROW(eval_f_eps(fam, short_eps, far), dimension_error);
}

TEST(bumps, disjoint_supports) {
  auto fam = make_bump_family(2, 1, 9);
  auto eps = random_signs(9, 1);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> unif(-0.5, 0.5);
  double cell = 1.0 / (std::sqrt(2.0) * fam.theta);
  for (int i = 0; i < 9; i++) {
    auto other = eps;
    for (int j = 0; j < 9; j++) {
      if (j != i) {
        other[j] = -other[j];
      }
    }
    for (int t = 0; t < 50; t++) {
      std::vector<double> x{fam.points[i](0) + cell * unif(rng), fam.points[i](1) + cell * unif(rng)};
      EXPECT_EQ(eval_f_eps(fam, eps, x), eval_f_eps(fam, other, x));
    }
  }
}

TEST(bumps, sobolev_bound_by_differences) {
  // Central difference stencils of matching order on a dense grid.
  for (auto [d, r, m] : {std::tuple{1, 3, 3}, std::tuple{2, 2, 5}}) {
    auto fam = make_bump_family(d, r, m);
    // Largest attainable |partial^k f_eps|: (2 theta)^{|k| - r} prod sup|g^(k_j)| / normalization.
    double predicted = 0.0;
    for (const auto& k : multi_indices_up_to(static_cast<std::size_t>(d), r)) {
      double v = std::pow(2.0 * fam.theta, k.order() - r) / fam.normalization;
      for (int j = 0; j < d; j++) {
        v *= fam.derivative_sups[static_cast<std::size_t>(k[j])];
      }
      predicted = std::max(predicted, v);
    }
    std::vector<int> eps(static_cast<std::size_t>(m), 1);
    auto f = [&](const std::vector<double>& x) { return eval_f_eps(fam, eps, x); };
    double h = 2e-3;
    int per_axis = d == 1 ? 4000 : 120;
    double worst = 0.0;
    for (const auto& k : multi_indices_up_to(static_cast<std::size_t>(d), r)) {
      // Tensor central differences: weights of order k_j per axis.
      std::vector<std::vector<std::pair<int, double>>> stencils;
      for (int j = 0; j < d; j++) {
        int kj = k[j];
        std::vector<std::pair<int, double>> st;
        for (int i = 0; i <= kj; i++) {
          double c = std::tgamma(kj + 1.0) / (std::tgamma(i + 1.0) * std::tgamma(kj - i + 1.0));
          st.emplace_back(2 * i - kj, ((kj - i) % 2 == 0 ? c : -c) / std::pow(h, kj));
        }
        stencils.push_back(st);
      }
      std::vector<int> pos(static_cast<std::size_t>(d), 0);
      std::vector<double> x(static_cast<std::size_t>(d));
      std::vector<double> base(static_cast<std::size_t>(d));
      std::size_t total = 1;
      for (int j = 0; j < d; j++) {
        total *= static_cast<std::size_t>(per_axis);
      }
      for (std::size_t flat = 0; flat < total; flat++) {
        std::size_t rest = flat;
        double rr = 0.0;
        for (int j = 0; j < d; j++) {
          base[j] = -0.9 + 1.8 * static_cast<double>(rest % per_axis) / (per_axis - 1);
          rest /= static_cast<std::size_t>(per_axis);
          rr += base[j] * base[j];
        }
        if (rr > 0.81) {
          continue;
        }
        double sum = 0.0;
        std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
        while (true) {
          double w = 1.0;
          for (int j = 0; j < d; j++) {
            x[j] = base[j] + stencils[j][idx[j]].first * h / 2.0;
            w *= stencils[j][idx[j]].second;
          }
          sum += w * f(x);
          int j = 0;
          while (j < d && ++idx[j] == stencils[j].size()) {
            idx[j] = 0;
            j++;
          }
          if (j == d) {
            break;
          }
        }
        worst = std::max(worst, std::abs(sum));
      }
    }
    EXPECT_LE(worst, 1.0 + 1e-6) << "d=" << d << " r=" << r;
    EXPECT_NEAR(worst, predicted, 0.05 * predicted);
  }
}

TEST(bumps, exact_partials_bounded) {
  auto fam = make_bump_family(2, 3, 4);
  auto cloud = dense_ball_grid(2, 61);
  double worst = 0.0;
  for (const auto& k : multi_indices_up_to(2, 3)) {
    for (Eigen::Index c = 0; c < cloud.cols(); c++) {
      std::span<const double> y(cloud.data() + 2 * c, 2);
      worst = std::max(worst, std::abs(fam.omega_partial(k, y)));
    }
  }
  EXPECT_LE(worst, 1.0);
  EXPECT_GT(fam.normalization, 1.0);
}

TEST(counterexample, one_dimensional_closed_form) {
  for (int n : {4, 10, 100}) {
    auto rep = counterexample_stats(n, 1);
    double lo = 1.0 / n;
    double mid = 2.0 / n;
    // int (n t - 1) t^{-1/3} over [1/n, 2/n] plus int t^{-1/3} over [2/n, 1].
    auto ramp = [&](double t) { return n * 0.6 * std::pow(t, 5.0 / 3.0) - 1.5 * std::pow(t, 2.0 / 3.0); };
    double l1 = ramp(mid) - ramp(lo) + 1.5 * (1.0 - std::pow(mid, 2.0 / 3.0));
    EXPECT_NEAR(rep.l1, l1, 1e-10);
    // Squares: (n t - 1)^2 t^{-2/3} and t^{-2/3}.
    auto sq = [&](double t) {
      return n * n * (3.0 / 7.0) * std::pow(t, 7.0 / 3.0) - 2 * n * 0.75 * std::pow(t, 4.0 / 3.0) + 3 * std::cbrt(t);
    };
    double l2 = sq(mid) - sq(lo) + 3 * (1.0 - std::cbrt(mid));
    EXPECT_NEAR(rep.l2_squared, l2, 1e-10);
  }
}

TEST(counterexample, sup_and_bound) {
  for (int d = 1; d <= 4; d++) {
    for (int n : {counterexample_min_n(d), 64, 1000}) {
      auto rep = counterexample_stats(n, d);
      EXPECT_GT(rep.ratio, 0.0);
      EXPECT_GE(rep.sup, std::cbrt(n / 2.0) * (1 - 1e-15));
      EXPECT_LE(rep.ratio, rep.upper_bound);
      // Sampled profile never exceeds the reported sup.
      for (int i = 1; i <= 2000; i++) {
        EXPECT_LE(counterexample_profile(n, i / 2000.0), rep.sup * (1 + 1e-15));
      }
    }
  }
  EXPECT_THROW(counterexample_stats(5, 4), precondition_error);
}

TEST(counterexample, ratio_decreases) {
  double prev = std::numeric_limits<double>::infinity();
  for (int n : {16, 64, 256, 1024}) {
    double r = counterexample_ratio(n, 2);
    EXPECT_LT(r, prev);
    prev = r;
  }
}
