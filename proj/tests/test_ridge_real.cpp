#include <gtest/gtest.h>

#include <random>
#include <ridgekit/ridge_real.hpp>

#include "test_helpers.hpp"

using namespace ridgekit;

namespace {

double grid_gap(const polynomial& p, const ridge_decomposition& r) {
  return ridge_residual(p, r, sup_grid(r.d)).first;
}

}  // namespace

TEST(directions, one_dimensional_is_sign) {
  for (int s = 0; s <= 6; s++) {
    auto dirs = sample_spanning_directions(1, s, 1, 100 + s);
    ASSERT_EQ(dirs.size(), 1u);
    EXPECT_EQ(std::abs(dirs.vectors[0](0)), 1.0);
  }
}

TEST(directions, unit_vectors_and_counts) {
  auto dirs = sample_spanning_directions(3, 4, dim_homogeneous(3, 4), 5);
  EXPECT_EQ(dirs.size(), 15u);
  for (const auto& a : dirs.vectors) {
    EXPECT_NEAR(a.norm(), 1.0, 1e-14);
  }
  EXPECT_GT(dirs.condition_number, 1.0);
  EXPECT_TRUE(std::isfinite(dirs.condition_number));
}

TEST(directions, linear_span_in_plane) {
  auto dirs = sample_spanning_directions(2, 1, 2, 3);
  double det = dirs.vectors[0](0) * dirs.vectors[1](1) - dirs.vectors[0](1) * dirs.vectors[1](0);
  EXPECT_GT(std::abs(det), 1e-10);
}

TEST(directions, quadratic_rank_oracle) {
  auto dirs = sample_spanning_directions(2, 2, 3, 17);
  // Unscaled coefficients of (a1 x + a2 y)^2 in x^2, xy, y^2.
  Eigen::Matrix3d c;
  for (int i = 0; i < 3; i++) {
    double a1 = dirs.vectors[i](0);
    double a2 = dirs.vectors[i](1);
    c(0, i) = a1 * a1;
    c(1, i) = 2 * a1 * a2;
    c(2, i) = a2 * a2;
  }
  EXPECT_GT(std::abs(c.determinant()), 1e-8);
  EXPECT_EQ(spanning_rank(dirs.vectors, 2, 2).rank, 3u);
}

TEST(directions, precondition_on_count) {
  EXPECT_THROW(sample_spanning_directions(2, 3, 3, 1), precondition_error);
  EXPECT_THROW(sample_spanning_directions(0, 3, 3, 1), precondition_error);
}

TEST(directions, retry_budget_exhausted) {
  ridge_options opts;
  opts.rank_tolerance = 2.0;  // no singular value can pass
  opts.max_retries = 2;
  EXPECT_THROW(sample_spanning_directions(2, 2, 3, 1, opts), error);
}

TEST(directions, minimality_probe) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> normal;
  for (int m = 2; m <= 4; m++) {
    for (int s = 1; s <= 5; s++) {
      auto need = dim_homogeneous(m, s);
      std::vector<Eigen::VectorXd> dirs;
      for (std::size_t i = 0; i + 1 < need; i++) {
        Eigen::VectorXd a(m);
        for (int t = 0; t < m; t++) {
          a(t) = normal(rng);
        }
        dirs.push_back(a.normalized());
      }
      auto rep = spanning_rank(dirs, m, s);
      EXPECT_LT(rep.rank, rep.required) << "m=" << m << " s=" << s;
    }
  }
}

TEST(directions, fixed_seed_is_bit_identical) {
  auto a = sample_spanning_directions(3, 3, 10, 99);
  auto b = sample_spanning_directions(3, 3, 10, 99);
  for (std::size_t i = 0; i < a.size(); i++) {
    EXPECT_TRUE((a.vectors[i].array() == b.vectors[i].array()).all());
  }
  EXPECT_EQ(a.condition_number, b.condition_number);
}

TEST(block_matrices, examples) {
  direction_set dirs;
  dirs.m = 2;
  dirs.s = 1;
  dirs.vectors = {Eigen::Vector2d(1.0, 0.0)};
  auto blocks = build_block_matrices(dirs, 3, 2);
  Eigen::MatrixXd want(2, 3);
  want << 1, 0, 0, 0, 0, 1;
  EXPECT_EQ(blocks[0], want);

  dirs.vectors = {Eigen::Vector2d(0.0, 1.0)};
  blocks = build_block_matrices(dirs, 2, 1);
  Eigen::MatrixXd row(1, 2);
  row << 0, 1;
  EXPECT_EQ(blocks[0], row);

  EXPECT_THROW(build_block_matrices(dirs, 3, 1), dimension_error);
  EXPECT_THROW(build_block_matrices(dirs, 2, 3), dimension_error);
}

TEST(block_matrices, single_row_when_ell_is_one) {
  auto dirs = sample_spanning_directions(4, 2, 10, 4);
  for (const auto& b : build_block_matrices(dirs, 4, 1)) {
    EXPECT_EQ(b.rows(), 1);
    EXPECT_EQ(b.cols(), 4);
  }
}

TEST(decompose, constant_polynomial) {
  auto dirs = sample_spanning_directions(2, 2, 3, 8);
  auto p = polynomial::constant(2, 3.5);
  auto r = decompose(p, dirs, 2, 1);
  // Least-norm: the constant spreads evenly over the blocks.
  double sum = 0.0;
  for (const auto& b : r.blocks) {
    EXPECT_LE(b.P.degree(), 0);
    sum += b.P.coefficient(multi_index{0});
    EXPECT_NEAR(b.P.coefficient(multi_index{0}), 3.5 / 3.0, 1e-14);
  }
  EXPECT_NEAR(sum, 3.5, 1e-14);
  EXPECT_LT(r.residual, 1e-13);
}

TEST(decompose, product_of_coordinates) {
  auto dirs = sample_spanning_directions(2, 2, 3, 12);
  polynomial p(2);
  p.add_term(multi_index{1, 1}, 1.0);
  auto r = decompose(p, dirs, 2, 1);
  EXPECT_LT(grid_gap(p, r), 1e-10);
  EXPECT_EQ(r.blocks.size(), 3u);
}

TEST(decompose, membership_is_exact) {
  // Q(A_1 x) with A_1 one of the block matrices.
  auto dirs = sample_spanning_directions(2, 3, dim_homogeneous(2, 3), 31);
  auto mats = build_block_matrices(dirs, 3, 2);
  std::mt19937_64 rng(2);
  auto q = test_support::random_polynomial(2, 3, rng);
  auto p = compose_linear(q, mats[0], Eigen::VectorXd::Zero(2));
  auto r = decompose(p, dirs, 3, 2);
  EXPECT_LT(grid_gap(p, r), 1e-12);
}

TEST(decompose, exactness_property) {
  std::mt19937_64 rng(1234);
  for (int d = 2; d <= 4; d++) {
    for (int ell = 1; ell < d; ell++) {
      for (int s = 1; s <= 5; s++) {
        int m = d - ell + 1;
        auto dirs = sample_spanning_directions(m, s, dim_homogeneous(m, s), 1000 * d + 10 * ell + s);
        for (int trial = 0; trial < 50; trial++) {
          auto p = test_support::random_polynomial(d, s, rng);
          auto r = decompose(p, dirs, d, ell);
          EXPECT_LT(r.residual, 1e-8) << "d=" << d << " ell=" << ell << " s=" << s;
        }
      }
    }
  }
}

TEST(decompose, ell_equal_to_dimension) {
  auto dirs = sample_spanning_directions(1, 3, 1, 4);
  std::mt19937_64 rng(8);
  auto p = test_support::random_polynomial(2, 3, rng);
  auto r = decompose(p, dirs, 2, 2);
  EXPECT_LT(r.residual, 1e-12);
}

TEST(decompose, preconditions) {
  auto dirs = sample_spanning_directions(2, 2, 3, 8);
  std::mt19937_64 rng(8);
  EXPECT_THROW(decompose(test_support::random_polynomial(2, 3, rng), dirs, 2, 1), precondition_error);
  EXPECT_THROW(decompose(test_support::random_polynomial(3, 2, rng), dirs, 2, 1), dimension_error);
  EXPECT_THROW(decompose(test_support::random_polynomial(3, 2, rng), dirs, 3, 1), dimension_error);
}

TEST(decompose, residual_failure_reports_value) {
  // A zero tolerance forces the error path.
  auto dirs = sample_spanning_directions(2, 2, 3, 8);
  ridge_options opts;
  opts.residual_tolerance = 0.0;
  std::mt19937_64 rng(3);
  auto p = test_support::random_polynomial(2, 2, rng);
  try {
    decompose(p, dirs, 2, 1, opts);
    FAIL() << "expected decomposition_error";
  } catch (const decomposition_error& e) {
    EXPECT_GE(e.residual(), 0.0);
    EXPECT_NE(std::string(e.what()).find("residual"), std::string::npos);
  }
}

TEST(decompose, fixed_seed_is_bit_identical) {
  std::mt19937_64 rng(6);
  auto p = test_support::random_polynomial(3, 3, rng);
  auto a = decompose(p, sample_spanning_directions(2, 3, 4, 77), 3, 2);
  auto b = decompose(p, sample_spanning_directions(2, 3, 4, 77), 3, 2);
  ASSERT_EQ(a.blocks.size(), b.blocks.size());
  for (std::size_t i = 0; i < a.blocks.size(); i++) {
    EXPECT_EQ(a.blocks[i].A, b.blocks[i].A);
    EXPECT_TRUE(a.blocks[i].P == b.blocks[i].P);
  }
  EXPECT_EQ(a.residual, b.residual);
}

TEST(decompose, degree_for_budget) {
  EXPECT_EQ(max_degree_for_budget(2, 3), 2);
  EXPECT_EQ(max_degree_for_budget(2, 4), 3);
  EXPECT_EQ(max_degree_for_budget(3, 9), 2);
  EXPECT_EQ(max_degree_for_budget(3, 10), 3);
  EXPECT_EQ(max_degree_for_budget(4, 0), -1);
}

TEST(orthonormalize, value_invariance) {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 5; trial++) {
    Eigen::MatrixXd a(2, 4);
    for (Eigen::Index i = 0; i < a.size(); i++) {
      a(i) = normal(rng);
    }
    auto p = test_support::random_polynomial(2, 4, rng);
    auto [a2, p2] = orthonormalize_rows(a, p);
    EXPECT_LT((a2 * a2.transpose() - Eigen::MatrixXd::Identity(2, 2)).norm(), 1e-13);
    auto cloud = ball_point_cloud(4, 1000, 5 + trial);
    double worst = 0.0;
    for (Eigen::Index c = 0; c < cloud.cols(); c++) {
      Eigen::VectorXd x = cloud.col(c);
      Eigen::VectorXd y1 = a * x;
      Eigen::VectorXd y2 = a2 * x;
      worst = std::max(worst, std::abs(p.eval(std::span<const double>(y1.data(), 2)) -
                                       p2.eval(std::span<const double>(y2.data(), 2))));
    }
    EXPECT_LT(worst, 1e-10);
  }
}

TEST(orthonormalize, already_orthonormal) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 3);
  a(0, 0) = 1.0;
  a(1, 2) = 1.0;
  std::mt19937_64 rng(4);
  auto p = test_support::random_polynomial(2, 3, rng);
  auto [a2, p2] = orthonormalize_rows(a, p);
  // Same row space.
  EXPECT_LT((a2.transpose() * a2 - a.transpose() * a).norm(), 1e-14);
}

TEST(orthonormalize, scaled_identity_block) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 3);
  a(0, 0) = 2.0;
  a(1, 1) = 2.0;
  polynomial p(2);
  p.add_term(multi_index{1, 0}, 1.0);
  p.add_term(multi_index{0, 2}, 1.0);
  auto [a2, p2] = orthonormalize_rows(a, p);
  for (Eigen::Index r = 0; r < 2; r++) {
    EXPECT_NEAR(a2.row(r).norm(), 1.0, 1e-15);
  }
  // By hand: U S = 2 * (signed permutation), so the x-coefficient becomes
  // +-2 and the y^2 coefficient becomes 4.
  double lin = 0.0;
  double quad = 0.0;
  for (const auto& [k, c] : p2.terms()) {
    if (k.order() == 1) {
      lin = std::max(lin, std::abs(c));
    } else if (k.order() == 2) {
      quad = std::max(quad, std::abs(c));
    }
  }
  EXPECT_NEAR(lin, 2.0, 1e-14);
  EXPECT_NEAR(quad, 4.0, 1e-14);
}

TEST(orthonormalize, zero_matrix_gives_constant) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 3);
  std::mt19937_64 rng(9);
  auto p = test_support::random_polynomial(2, 3, rng);
  auto [a2, p2] = orthonormalize_rows(a, p);
  EXPECT_LE(p2.degree(), 0);
  EXPECT_NEAR(p2.coefficient(multi_index{0, 0}), p.coefficient(multi_index{0, 0}), 1e-15);
}
