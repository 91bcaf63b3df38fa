#include <gtest/gtest.h>

#include <Eigen/Core>
#include <boost/multiprecision/eigen.hpp>
#include <random>
#include <ridgekit/combinatorics.hpp>
#include <ridgekit/complex_polynomial.hpp>
#include <ridgekit/polynomial.hpp>

#include "test_helpers.hpp"

using namespace ridgekit;

namespace {

polynomial x(std::size_t dim, std::size_t j) { return polynomial::variable(dim, j); }

}  // namespace

TEST(multi_index, order_and_factorial) {
  multi_index k{3, 0, 2};
  EXPECT_EQ(k.order(), 5);
  EXPECT_EQ(k.factorial(), big_int(12));
  EXPECT_EQ(multi_index{20}.factorial(), big_int("2432902008176640000"));
  EXPECT_THROW(multi_index({1, -1}), precondition_error);
}

TEST(multi_index, grlex_enumeration) {
  auto ks = multi_indices_up_to(2, 2);
  std::vector<multi_index> expected{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  EXPECT_EQ(ks, expected);
  grlex_less less;
  for (std::size_t i = 1; i < ks.size(); i++) {
    EXPECT_TRUE(less(ks[i - 1], ks[i]));
  }
}

TEST(polynomial, eval_examples) {
  std::vector<double> pt{0.3, -7.0};
  EXPECT_EQ(polynomial::constant(2, 1.0).eval(pt), 1.0);
  auto p = x(2, 0) * x(2, 1);
  EXPECT_EQ(p.eval(std::vector<double>{2.0, 3.0}), 6.0);
  auto q = x(2, 0) * x(2, 0) + 2.0 * x(2, 1);
  EXPECT_EQ(q.eval(std::vector<double>{1.0, 1.0}), 3.0);
  EXPECT_THROW(q.eval(std::vector<double>{1.0}), dimension_error);
}

TEST(polynomial, eval_matches_term_by_term_oracle) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int trial = 0; trial < 20; trial++) {
    auto p = test_support::random_polynomial(3, 5, rng);
    std::vector<double> pt{unif(rng), unif(rng), unif(rng)};
    double ref = 0.0;
    for (const auto& [k, c] : p.terms()) {
      double t = c;
      for (std::size_t v = 0; v < 3; v++) {
        t *= std::pow(pt[v], k[v]);
      }
      ref += t;
    }
    EXPECT_NEAR(p.eval(pt), ref, 1e-13);
  }
}

TEST(polynomial, ring_examples) {
  EXPECT_EQ(x(1, 0) * x(1, 0), polynomial::monomial(multi_index{2}));
  auto p = x(2, 0) + 3.5 * x(2, 1);
  auto zero = p + (-1.0) * p;
  EXPECT_TRUE(zero.is_zero());
  EXPECT_EQ(zero.terms().size(), 0u);
  EXPECT_EQ(zero.degree(), polynomial::zero_degree);

  auto s = x(2, 0) + x(2, 1);
  polynomial expected(2);
  expected.add_term({2, 0}, 1.0);
  expected.add_term({1, 1}, 2.0);
  expected.add_term({0, 2}, 1.0);
  EXPECT_EQ(s * s, expected);
  EXPECT_EQ((s * s).degree(), 2);
  EXPECT_THROW(x(2, 0) + x(3, 0), dimension_error);
}

TEST(polynomial, ring_axioms_exact_in_rational_mode) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; trial++) {
    auto a = test_support::random_rational_polynomial(2, 3, rng);
    auto b = test_support::random_rational_polynomial(2, 2, rng);
    auto c = test_support::random_rational_polynomial(2, 3, rng);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ((a * b).degree(), a.degree() + b.degree());
  }
}

TEST(polynomial, ring_axioms_float_mode) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int trial = 0; trial < 10; trial++) {
    auto a = test_support::random_polynomial(3, 3, rng);
    auto b = test_support::random_polynomial(3, 2, rng);
    auto c = test_support::random_polynomial(3, 2, rng);
    auto lhs = (a * b) * c;
    auto rhs = a * (b * c);
    auto lhs2 = a * (b + c);
    auto rhs2 = a * b + a * c;
    for (int i = 0; i < 5; i++) {
      std::vector<double> pt{unif(rng), unif(rng), unif(rng)};
      EXPECT_NEAR(lhs.eval(pt), rhs.eval(pt), 1e-12 * (1.0 + std::abs(rhs.eval(pt))));
      EXPECT_NEAR(lhs2.eval(pt), rhs2.eval(pt), 1e-12 * (1.0 + std::abs(rhs2.eval(pt))));
    }
  }
}

TEST(compose_linear, examples) {
  auto t = polynomial::variable(1, 0);
  Eigen::MatrixXd a(1, 2);
  a << 1.0, 0.0;
  EXPECT_EQ(compose_linear(t, a, Eigen::VectorXd::Zero(1)), x(2, 0));

  a << 1.0, 1.0;
  auto sq = compose_linear(t * t, a, Eigen::VectorXd::Zero(1));
  auto s = x(2, 0) + x(2, 1);
  EXPECT_EQ(sq, s * s);

  Eigen::VectorXd b(1);
  b << 2.5;
  auto c = compose_linear(t, Eigen::MatrixXd::Zero(1, 3), b);
  EXPECT_EQ(c, polynomial::constant(3, 2.5));
  EXPECT_THROW(compose_linear(t, Eigen::MatrixXd::Zero(2, 3), Eigen::VectorXd::Zero(2)), dimension_error);
}

TEST(compose_linear, commutes_with_eval) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int trial = 0; trial < 30; trial++) {
    int ell = 1 + trial % 3;
    int d = 2 + trial % 3;
    auto p = test_support::random_polynomial(ell, 4, rng);
    Eigen::MatrixXd a(ell, d);
    Eigen::VectorXd b(ell);
    for (int i = 0; i < ell; i++) {
      b(i) = unif(rng);
      for (int j = 0; j < d; j++) {
        a(i, j) = unif(rng);
      }
    }
    auto composed = compose_linear(p, a, b);
    EXPECT_LE(composed.degree(), p.degree());
    Eigen::VectorXd pt(d);
    for (int j = 0; j < d; j++) {
      pt(j) = unif(rng);
    }
    Eigen::VectorXd y = a * pt + b;
    double ref = p.eval(std::span<const double>(y.data(), ell));
    double got = composed.eval(std::span<const double>(pt.data(), d));
    EXPECT_NEAR(got, ref, 1e-10 * (1.0 + std::abs(ref)));
  }
}

TEST(compose_linear, exact_in_rational_mode) {
  using rmat = Eigen::Matrix<rational, Eigen::Dynamic, Eigen::Dynamic>;
  using rvec = Eigen::Matrix<rational, Eigen::Dynamic, 1>;
  std::mt19937_64 rng(5);
  auto p = test_support::random_rational_polynomial(2, 3, rng);
  rmat a(2, 3);
  rvec b(2);
  for (int i = 0; i < 2; i++) {
    b(i) = test_support::random_rational(rng);
    for (int j = 0; j < 3; j++) {
      a(i, j) = test_support::random_rational(rng);
    }
  }
  auto composed = compose_linear(p, a, b);
  std::vector<rational> pt{rational(1, 3), rational(-2, 5), rational(7, 4)};
  std::vector<rational> y(2);
  for (int i = 0; i < 2; i++) {
    y[i] = b(i);
    for (int j = 0; j < 3; j++) {
      y[i] += a(i, j) * pt[j];
    }
  }
  EXPECT_EQ(composed.eval(pt), p.eval(y));
}

TEST(dimensions, homogeneous_examples) {
  EXPECT_EQ(dim_homogeneous(1, 5), 1u);
  EXPECT_EQ(dim_homogeneous(2, 3), 4u);
  EXPECT_EQ(dim_homogeneous(3, 2), 6u);
  EXPECT_EQ(dim_complex_bihomogeneous(1, 4, 7), 1u);
  EXPECT_EQ(dim_complex_bihomogeneous(2, 1, 1), 4u);
  EXPECT_EQ(dim_complex_bihomogeneous(2, 2, 2), 9u);
}

TEST(dimensions, homogeneous_matches_enumeration) {
  for (int m = 1; m <= 6; m++) {
    for (int s = 0; s <= 8; s++) {
      // Brute force: count exponent vectors in [0, s]^m with the right sum.
      std::size_t count = 0;
      std::vector<int> e(m, 0);
      while (true) {
        int sum = 0;
        for (auto v : e) {
          sum += v;
        }
        count += sum == s;
        int j = 0;
        while (j < m && ++e[j] > s) {
          e[j++] = 0;
        }
        if (j == m) {
          break;
        }
      }
      EXPECT_EQ(dim_homogeneous(m, s), count) << "m=" << m << " s=" << s;
    }
  }
}

TEST(complex_polynomial, degrees_and_eval) {
  auto z = complex_polynomial::variable(1, 0);
  auto zb = complex_polynomial::variable(1, 0, true);
  auto p = z * zb * zb + std::complex<double>(0.0, 2.0) * z;
  EXPECT_EQ(p.holomorphic_degree(), 1);
  EXPECT_EQ(p.antiholomorphic_degree(), 2);
  EXPECT_TRUE(p.in_degree(2));
  EXPECT_FALSE(p.in_degree(1));
  std::complex<double> w(0.3, -0.4);
  auto expected = w * std::conj(w) * std::conj(w) + std::complex<double>(0.0, 2.0) * w;
  auto got = p.eval(std::vector<std::complex<double>>{w});
  EXPECT_NEAR(std::abs(got - expected), 0.0, 1e-15);
  auto conj_p = p.conjugate();
  EXPECT_NEAR(std::abs(conj_p.eval(std::vector<std::complex<double>>{w}) - std::conj(expected)), 0.0, 1e-15);
}
