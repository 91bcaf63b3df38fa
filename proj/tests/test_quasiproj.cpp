#include <gtest/gtest.h>

#include <random>
#include <ridgekit/quasiproj.hpp>

#include "test_helpers.hpp"

using namespace ridgekit;

TEST(cutoff, support_properties) {
  auto eta = smooth_step_cutoff();
  for (double x = -3.0; x <= 3.0; x += 1e-3) {
    double v = eta(x);
    if (std::abs(x) <= 1.0) {
      EXPECT_EQ(v, 1.0);
    }
    if (std::abs(x) >= 2.0) {
      EXPECT_EQ(v, 0.0);
    }
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    if (x > 1.0 && x < 2.0) {
      EXPECT_LE(eta(x + 1e-3), v);
    }
    EXPECT_EQ(eta(-x), v);
  }
}

TEST(quasi_projector, filter_weights) {
  auto basis = build_basis(2, 9);
  for (int s = 1; s <= 5; s++) {
    quasi_projector proj(basis, s);
    for (Eigen::Index i = 0; i < proj.coefficients().size(); i++) {
      if (basis.degree(static_cast<std::size_t>(i)) <= s) {
        EXPECT_EQ(proj.coefficients()(i), 1.0);
      }
    }
    EXPECT_EQ(static_cast<std::size_t>(proj.coefficients().size()), basis.count_up_to(2 * s - 1));
  }
  EXPECT_THROW(quasi_projector(basis, 6), precondition_error);
}

TEST(quasi_projector, fixed_point_on_polynomials) {
  std::mt19937_64 rng(11);
  for (int d = 1; d <= 3; d++) {
    auto basis = build_basis(d, 11);
    for (int s = 1; s <= 6; s++) {
      quasi_projector proj(basis, s);
      for (int trial = 0; trial < 3; trial++) {
        auto p = test_support::random_polynomial(d, s, rng);
        auto pr = proj.apply(p);
        EXPECT_LE(pr.degree(), 2 * s - 1);
        auto diff = sample_at_nodes(pr - p, basis.rule());
        double rel = lq_norm_values(diff, basis.rule(), 2.0) / lq_norm(p, basis.rule(), 2.0);
        EXPECT_LT(rel, 1e-8) << "d=" << d << " s=" << s;
      }
    }
  }
}

TEST(quasi_projector, zero_and_cutoff_examples) {
  auto basis = build_basis(2, 7);
  quasi_projector proj(basis, 2);
  EXPECT_TRUE(proj.apply([](std::span<const double>) { return 0.0; }).is_zero());
  // A basis element of degree 2s lies outside I_{2s-1}.
  auto idx = basis.count_up_to(3);
  ASSERT_EQ(basis.degree(idx), 4);
  auto c = proj.apply_coefficients([&](std::span<const double> x) { return basis.eval(idx, x); });
  EXPECT_LT(c.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(quasi_projector, linearity) {
  std::mt19937_64 rng(12);
  auto basis = build_basis(2, 9);
  quasi_projector proj(basis, 4);
  auto f = [](std::span<const double> x) { return std::exp(x[0]) * std::cos(2.0 * x[1]); };
  auto g = [](std::span<const double> x) { return 1.0 / (2.0 + x[0] + x[1]); };
  double a = 1.7;
  double b = -0.3;
  auto combo = proj.apply_coefficients([&](std::span<const double> x) { return a * f(x) + b * g(x); });
  Eigen::VectorXd sep = a * proj.apply_coefficients(f) + b * proj.apply_coefficients(g);
  EXPECT_LT((combo - sep).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(quasi_projector, invariant_under_basis_ordering) {
  std::mt19937_64 rng(13);
  for (int d = 2; d <= 3; d++) {
    auto rule = build_ball_rule(d, 2 * 7 + 2);
    ortho_basis a(d, 7, rule, basis_ordering::grlex);
    ortho_basis b(d, 7, rule, basis_ordering::grlex_reversed);
    auto f = [](std::span<const double> x) { return std::exp(x[0] - 0.5 * x[1]) + x[x.size() - 1] * x[0]; };
    for (int s = 1; s <= 4; s++) {
      auto pa = quasi_projector(a, s).apply(f);
      auto pb = quasi_projector(b, s).apply(f);
      auto diff = pa - pb;
      for (const auto& [k, c] : diff.terms()) {
        EXPECT_LT(std::abs(c), 1e-9) << "d=" << d << " s=" << s << " k=" << k;
      }
    }
  }
}

TEST(forward_difference, examples) {
  auto constant = [](long) { return 4.2; };
  for (int sigma = 0; sigma <= 3; sigma++) {
    EXPECT_EQ(forward_difference(constant, sigma, 5), 0.0);
  }
  EXPECT_EQ(forward_difference([](long x) { return static_cast<double>(x); }, 0, 0), -1.0);
  for (long k = -3; k <= 3; k++) {
    EXPECT_EQ(forward_difference([](long x) { return static_cast<double>(x * x); }, 1, k), 2.0);
  }
  EXPECT_THROW(forward_difference(constant, -1, 0), precondition_error);
}

TEST(cesaro_mean, examples) {
  auto basis = build_basis(2, 5);
  auto f = [](std::span<const double> x) { return std::sin(x[0] + 2.0 * x[1]) + x[0] * x[0]; };
  // sigma = 0, k = 0 is the degree-0 projection.
  auto s00 = cesaro_mean(f, 0, 0, basis);
  auto c = basis.project_coefficients(f, 0);
  EXPECT_NEAR(s00.coefficient(multi_index{0, 0}), c(0) * basis.polynomial_at(0).coefficient(multi_index{0, 0}),
              1e-14);
  // S_k^sigma(P_0) = P_0.
  auto p0 = basis.polynomial_at(0);
  for (int k = 0; k <= 4; k++) {
    for (int sigma = 0; sigma <= 2; sigma++) {
      auto sk = cesaro_mean(p0, k, sigma, basis);
      EXPECT_LT(std::abs(sk.coefficient(multi_index{0, 0}) - p0.coefficient(multi_index{0, 0})), 1e-13);
    }
  }
  // sigma = 0 gives the partial sums of the graded projections.
  auto ck = basis.project_coefficients(f, 4);
  auto s40 = cesaro_coefficients(ck, 4, 0, basis);
  EXPECT_LT((s40 - ck).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(cesaro_identity, examples_and_property) {
  std::mt19937_64 rng(14);
  for (int d = 1; d <= 2; d++) {
    auto basis = build_basis(d, 7);
    quasi_projector p1(basis, 1);
    EXPECT_EQ(verify_cesaro_identity(p1, [](std::span<const double>) { return 0.0; }, 1), 0.0);
    auto p0 = [&](std::span<const double> x) { return basis.eval(0, x); };
    EXPECT_LT(verify_cesaro_identity(p1, p0, 0), 1e-15);
    for (int s = 1; s <= 4; s++) {
      quasi_projector proj(basis, s);
      for (int sigma = 0; sigma <= 2; sigma++) {
        auto f = test_support::random_polynomial(d, 2 * s - 1, rng);
        EXPECT_LT(verify_cesaro_identity(proj, f, sigma), 1e-8) << "d=" << d << " s=" << s;
      }
    }
  }
}

TEST(l1_norm_estimate, examples) {
  auto basis = build_basis(2, 7, 20);
  quasi_projector proj(basis, 3);
  EXPECT_THROW(estimate_l1_operator_norm(proj, 0, 1), precondition_error);
  double small = estimate_l1_operator_norm(proj, 4, 99);
  double large = estimate_l1_operator_norm(proj, 12, 99);
  EXPECT_GE(large, small);
  EXPECT_GE(small, 0.5);
  // A polynomial fixed by Pr_s has ratio one.
  auto p = polynomial::variable(2, 0) * polynomial::variable(2, 1) + polynomial::constant(2, 3.0);
  auto fv = sample_at_nodes(p, basis.rule());
  auto pv = basis.expansion_node_values(proj.apply_values(fv));
  EXPECT_NEAR(lq_norm_values(pv, basis.rule(), 1.0) / lq_norm_values(fv, basis.rule(), 1.0), 1.0, 1e-10);
}
