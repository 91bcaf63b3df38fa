#pragma once

#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bumps.hpp"
#include "counterexample.hpp"
#include "expansion.hpp"
#include "io.hpp"
#include "networks.hpp"
#include "pipeline.hpp"
#include "quasiproj.hpp"
#include "ridge_complex.hpp"
#include "ridge_real.hpp"
#include "trig_reduce.hpp"

namespace ridgekit {

// One numeric claim: value compared against limit. Details carry per-case
// numbers for the JSON report.
struct check_result {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool pass = false;
  std::string relation = "<";
  json details = json::object();
  double seconds = 0.0;
};

inline json to_json(const check_result& c) {
  return {{"name", c.name},
          {"value", c.value},
          {"limit", c.limit},
          {"relation", c.relation},
          {"pass", c.pass},
          {"seconds", c.seconds},
          {"details", c.details}};
}

// Trial counts: full reproduces the acceptance sizes, quick is a smoke run.
struct verify_scale {
  bool full = true;
  int trials(int full_count, int quick_count) const { return full ? full_count : quick_count; }
};

namespace detail {

template <class Body>
check_result timed_check(const std::string& name, Body&& body) {
  auto start = std::chrono::steady_clock::now();
  check_result out = body();
  out.name = name;
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

inline polynomial random_unit_polynomial(std::size_t dim, int degree, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  polynomial p(dim);
  for (const auto& k : multi_indices_up_to(dim, degree)) {
    p.add_term(k, unif(rng));
  }
  return p;
}

inline complex_polynomial random_complex_polynomial(std::size_t dim, int s, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  complex_polynomial p(dim);
  for (const auto& k : multi_indices_up_to(dim, s)) {
    for (const auto& l : multi_indices_up_to(dim, s)) {
      p.add_term(k, l, {unif(rng), unif(rng)});
    }
  }
  return p;
}

inline gaussian_rational random_gaussian_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, 9);
  return {rational(num(rng), den(rng)), rational(num(rng), den(rng))};
}

}  // namespace detail

// Pr_s P = P: relative L^2 residual over d in 1..3, s in 1..6.
inline check_result check_projector_fixed_point(const verify_scale& scale) {
  return detail::timed_check("quasi-projection fixes P_s", [&] {
    check_result out;
    out.limit = 1e-8;
    int trials = scale.trials(20, 3);
    for (int d = 1; d <= 3; d++) {
      auto basis = build_basis(d, 11);
      const auto& rule = basis.rule();
      for (int s = 1; s <= 6; s++) {
        quasi_projector proj(basis, s);
        std::mt19937_64 rng(1000u * d + s);
        double worst = 0.0;
        for (int t = 0; t < trials; t++) {
          Eigen::VectorXd p = detail::random_polynomial_values(rule, s, rng);
          Eigen::VectorXd pr = basis.expansion_node_values(proj.apply_values(p));
          worst = std::max(worst, lq_norm_values(pr - p, rule, 2.0) / lq_norm_values(p, rule, 2.0));
        }
        out.details["d" + std::to_string(d) + "_s" + std::to_string(s)] = worst;
        out.value = std::max(out.value, worst);
      }
    }
    out.pass = out.value < out.limit;
    return out;
  });
}

// Pr_s against its Cesaro-sum representation.
inline check_result check_cesaro_identity(const verify_scale& scale) {
  return detail::timed_check("Cesaro forward-difference identity", [&] {
    check_result out;
    out.limit = 1e-8;
    int trials = scale.trials(20, 3);
    for (int d = 1; d <= 2; d++) {
      auto basis = build_basis(d, 7);
      const auto& rule = basis.rule();
      for (int s = 1; s <= 4; s++) {
        quasi_projector proj(basis, s);
        for (int sigma = 0; sigma <= 2; sigma++) {
          std::mt19937_64 rng(7000u + 100u * d + 10u * s + sigma);
          double worst = 0.0;
          for (int t = 0; t < trials; t++) {
            Eigen::VectorXd f = t % 2 == 0 ? detail::random_polynomial_values(rule, 4 * s, rng)
                                           : detail::random_bump_values(rule, rng);
            worst = std::max(worst, verify_cesaro_identity_values(proj, f, sigma));
          }
          out.details["d" + std::to_string(d) + "_s" + std::to_string(s) + "_sigma" + std::to_string(sigma)] =
              worst;
          out.value = std::max(out.value, worst);
        }
      }
    }
    out.pass = out.value < out.limit;
    return out;
  });
}

// L^1 operator-norm estimates for s = 1..8 in d = 2 stay within a factor 10.
inline check_result check_l1_flatness(const verify_scale& scale) {
  return detail::timed_check("L1 operator norm flat in s", [&] {
    check_result out;
    out.limit = 10.0;
    out.relation = "<=";
    auto basis = build_basis(2, 15, 4);
    int trials = scale.trials(24, 6);
    std::vector<double> norms;
    for (int s = 1; s <= 8; s++) {
      norms.push_back(estimate_l1_operator_norm(quasi_projector(basis, s), trials, 31));
      out.details["s" + std::to_string(s)] = norms.back();
    }
    double lo = *std::min_element(norms.begin(), norms.end());
    double hi = *std::max_element(norms.begin(), norms.end());
    out.value = hi / lo;
    out.pass = out.value <= out.limit;
    return out;
  });
}

// Real ridge exactness with n = dim_homogeneous(d - ell + 1, s), and rank
// deficiency with one direction fewer.
inline check_result check_real_ridge(const verify_scale& scale) {
  return detail::timed_check("real ridge decomposition exact", [&] {
    check_result out;
    out.limit = 1e-8;
    int trials = scale.trials(50, 3);
    bool rank_drops = true;
    for (int d = 2; d <= 4; d++) {
      for (int ell = 1; ell < d; ell++) {
        int m = d - ell + 1;
        for (int s = 1; s <= 5; s++) {
          auto n = dim_homogeneous(m, s);
          std::mt19937_64 rng(500u * d + 50u * ell + s);
          double worst = 0.0;
          for (int t = 0; t < trials; t++) {
            auto dirs = sample_spanning_directions(m, s, n, rng());
            auto p = detail::random_unit_polynomial(static_cast<std::size_t>(d), s, rng);
            worst = std::max(worst, decompose(p, dirs, d, ell).residual);
            if (t == 0) {
              auto fewer = dirs.vectors;
              fewer.pop_back();
              auto rank = spanning_rank(fewer, m, s);
              rank_drops = rank_drops && !rank.full();
            }
          }
          out.details["d" + std::to_string(d) + "_l" + std::to_string(ell) + "_s" + std::to_string(s)] = worst;
          out.value = std::max(out.value, worst);
        }
      }
    }
    out.details["rank_fails_with_n_minus_1"] = rank_drops;
    out.pass = out.value < out.limit && rank_drops;
    return out;
  });
}

inline check_result check_complex_ridge(const verify_scale& scale) {
  return detail::timed_check("complex ridge decomposition exact", [&] {
    check_result out;
    out.limit = 1e-8;
    int trials = scale.trials(20, 3);
    for (int d = 2; d <= 3; d++) {
      for (int s = 0; s <= 3; s++) {
        auto n = dim_complex_bihomogeneous(d, s, s);
        std::mt19937_64 rng(900u * d + s);
        double worst = 0.0;
        for (int t = 0; t < trials; t++) {
          auto dirs = sample_complex_directions(d, s, s, n, rng());
          auto p = detail::random_complex_polynomial(static_cast<std::size_t>(d), s, rng);
          worst = std::max(worst, complex_decompose(p, dirs).residual);
        }
        out.details["d" + std::to_string(d) + "_s" + std::to_string(s)] = worst;
        out.value = std::max(out.value, worst);
      }
    }
    out.pass = out.value < out.limit;
    return out;
  });
}

// Exact rational checks; value counts the failures.
inline check_result check_wirtinger(const verify_scale& scale) {
  return detail::timed_check("Wirtinger identities exact", [&] {
    check_result out;
    out.relation = "==";
    std::size_t monomial_cases = 0;
    std::size_t failures = 0;
    for (std::size_t d = 1; d <= 3; d++) {
      for (int s = 0; s <= 4; s++) {
        for (int t = 0; s + t <= 4; t++) {
          auto ks = multi_indices_of_order(d, s);
          auto ls = multi_indices_of_order(d, t);
          for (const auto& k : ks) {
            for (const auto& l : ls) {
              for (const auto& k2 : ks) {
                for (const auto& l2 : ls) {
                  failures += verify_wirtinger_monomial_identity(k, l, k2, l2) ? 0 : 1;
                  monomial_cases++;
                }
              }
            }
          }
        }
      }
    }
    std::mt19937_64 rng(17);
    int directions = scale.trials(100, 10);
    std::size_t power_cases = 0;
    for (int trial = 0; trial < directions; trial++) {
      std::size_t d = 1 + static_cast<std::size_t>(trial % 3);
      std::vector<gaussian_rational> a;
      for (std::size_t j = 0; j < d; j++) {
        a.push_back(detail::random_gaussian_rational(rng));
      }
      for (int s = 0; s <= 3; s++) {
        for (int t = 0; t <= 3; t++) {
          auto ks = multi_indices_of_order(d, s);
          auto ls = multi_indices_of_order(d, t);
          const auto& k = ks[rng() % ks.size()];
          const auto& l = ls[rng() % ls.size()];
          failures += verify_power_identity(a, k, l) ? 0 : 1;
          power_cases++;
        }
      }
    }
    out.details["monomial_cases"] = monomial_cases;
    out.details["power_cases"] = power_cases;
    out.value = static_cast<double>(failures);
    out.pass = failures == 0;
    return out;
  });
}

inline check_result check_trig_reduction(const verify_scale& scale) {
  return detail::timed_check("trig power reduction", [&] {
    check_result out;
    out.limit = 1e-10;
    int points = scale.trials(10000, 1000);
    for (int a = 0; a <= 10; a++) {
      for (int b = 0; a + b <= 10; b++) {
        auto e = trig_reduce(a, b);
        for (int i = 0; i < points; i++) {
          double phi = -std::numbers::pi + 2.0 * std::numbers::pi * i / points;
          double want = std::pow(std::cos(phi), a) * std::pow(std::sin(phi), b);
          out.value = std::max(out.value, std::abs(e.eval(phi) - want));
        }
      }
    }
    out.pass = out.value < out.limit;
    return out;
  });
}

// Inner-product expansion for d = 3 with a degree-6 polynomial profile. The
// coarse level under-integrates; for ell = 1 the angular factor is not
// polynomial, so the fine level needs resolution 40 to reach rounding.
inline check_result check_inner_product_expansion(const verify_scale& scale) {
  return detail::timed_check("inner-product expansion", [&] {
    check_result out;
    out.limit = 1e-6;
    int triples = scale.trials(10, 2);
    const int d = 3;
    const int coarse_resolution = 2;
    const int fine_resolution = 40;
    bool refinement_helps = true;
    for (int ell = 1; ell <= 2; ell++) {
      std::mt19937_64 rng(40u + ell);
      auto rho_poly = detail::random_unit_polynomial(static_cast<std::size_t>(ell), 6, rng);
      ridge_profile rho = [rho_poly](std::span<const double> y) { return rho_poly.eval(y); };
      for (int s = 1; s <= 3; s++) {
        expansion_certificate cert(d, ell, s);
        double worst = 0.0;
        for (int t = 0; t < triples; t++) {
          auto [a, sigma] = random_orthogonal_pair(d, ell, rng());
          auto p = detail::random_unit_polynomial(d, s, rng);
          double coarse = verify_inner_product_expansion(rho, a, sigma, p, cert, coarse_resolution).deviation;
          double fine = verify_inner_product_expansion(rho, a, sigma, p, cert, fine_resolution).deviation;
          refinement_helps = refinement_helps && fine < coarse;
          worst = std::max(worst, fine);
        }
        out.details["l" + std::to_string(ell) + "_s" + std::to_string(s)] = worst;
        out.value = std::max(out.value, worst);
      }
    }
    out.details["refinement_decreases_deviation"] = refinement_helps;
    out.pass = out.value < out.limit && refinement_helps;
    return out;
  });
}

// Ratio strictly decreasing along n = 16, 64, 256, 1024 in d = 2, and the sup
// reaches (n/2)^{1/3}.
inline check_result check_counterexample(const verify_scale&) {
  return detail::timed_check("counterexample ratio decreasing", [&] {
    check_result out;
    out.relation = "< ratio(n=16), every step decreasing:";
    double previous = std::numeric_limits<double>::infinity();
    bool decreasing = true;
    bool sup_bound = true;
    for (int n : {16, 64, 256, 1024}) {
      auto rep = counterexample_stats(n, 2);
      decreasing = decreasing && rep.ratio < previous;
      sup_bound = sup_bound && rep.sup >= std::cbrt(n / 2.0);
      previous = rep.ratio;
      out.details["n" + std::to_string(n)] = {{"ratio", rep.ratio}, {"sup", rep.sup}};
      if (n == 16) {
        out.limit = rep.ratio;
      }
      out.value = rep.ratio;
    }
    out.details["strictly_decreasing"] = decreasing;
    out.details["sup_at_least_cube_root"] = sup_bound;
    out.pass = decreasing && sup_bound;
    return out;
  });
}

// Exact partial derivatives of f_eps sampled on dense grids.
inline check_result check_bump_sobolev(const verify_scale& scale) {
  return detail::timed_check("bump family in the Sobolev ball", [&] {
    check_result out;
    out.limit = 1.0 + 1e-6;
    out.relation = "<=";
    for (int d = 1; d <= 2; d++) {
      auto grid = d == 1 ? dense_ball_grid(1, scale.trials(20001, 2001)) : dense_ball_grid(2, scale.trials(301, 61));
      for (int r = 1; r <= 3; r++) {
        for (int m : {1, 3, 7, 16}) {
          auto fam = make_bump_family(d, r, m);
          auto eps = random_signs(m, 100u * d + 10u * r + m);
          double worst = 0.0;
          for (const auto& k : multi_indices_up_to(static_cast<std::size_t>(d), r)) {
            for (Eigen::Index c = 0; c < grid.cols(); c++) {
              std::span<const double> x(grid.data() + d * c, static_cast<std::size_t>(d));
              worst = std::max(worst, std::abs(eval_f_eps_partial(fam, eps, k, x)));
            }
          }
          out.details["d" + std::to_string(d) + "_r" + std::to_string(r) + "_m" + std::to_string(m)] = worst;
          out.value = std::max(out.value, worst);
        }
      }
    }
    out.pass = out.value <= out.limit;
    return out;
  });
}

// Networks built with delta = 1e-6 against their ridge sums on 1000 points;
// value is the worst ratio of deviation to n * delta.
inline check_result check_network_emulation(const verify_scale& scale) {
  return detail::timed_check("network emulation", [&] {
    check_result out;
    out.limit = 1.0;
    out.relation = "<=";
    const double delta = 1e-6;
    int trials = scale.trials(4, 1);
    bool cells_exact = true;
    std::mt19937_64 rng(77);
    for (int ell = 1; ell <= 2; ell++) {
      int d = 3;
      int s = 3;
      int m = d - ell + 1;
      auto grid = ball_point_cloud(d, 1000, 11u + ell);
      for (int t = 0; t < trials; t++) {
        auto dirs = sample_spanning_directions(m, s, dim_homogeneous(m, s), rng());
        auto decomp = decompose(detail::random_unit_polynomial(d, s, rng), dirs, d, ell);
        auto built = gtn_from_decomposition(decomp, delta);
        double n = static_cast<double>(decomp.blocks.size());
        double worst = 0.0;
        for (Eigen::Index c = 0; c < grid.cols(); c++) {
          std::span<const double> x(grid.data() + d * c, static_cast<std::size_t>(d));
          worst = std::max(worst, std::abs(built.network.eval(x) - decomp.eval(x)));
        }
        out.value = std::max(out.value, worst / (n * delta));
        // Every dictionary index the network uses is exact inside its cell.
        for (const auto& u : built.network.units) {
          auto exact = built.network.dictionary.polynomial_at(u.cell).cast<double>();
          auto cloud = ball_point_cloud(ell, 20, 5);
          for (Eigen::Index c = 0; c < cloud.cols(); c++) {
            std::span<const double> y(cloud.data() + ell * c, static_cast<std::size_t>(ell));
            cells_exact = cells_exact && tau_eval(built.network.dictionary, cell_point{u.cell, cloud.col(c)}) ==
                                             exact.eval(y);
          }
        }
      }
    }
    {
      int d = 2;
      auto grid = ball_point_cloud(2 * d, 1000, 19);
      for (int t = 0; t < trials; t++) {
        auto dirs = sample_complex_directions(d, 2, 2, dim_complex_bihomogeneous(d, 2, 2), rng());
        auto decomp = complex_decompose(detail::random_complex_polynomial(d, 2, rng), dirs);
        auto built = cvnn_from_decomposition(decomp, delta);
        double n = static_cast<double>(decomp.directions.size());
        double worst = 0.0;
        for (Eigen::Index c = 0; c < grid.cols(); c++) {
          std::vector<std::complex<double>> z{{grid(0, c), grid(2, c)}, {grid(1, c), grid(3, c)}};
          worst = std::max(worst, std::abs(built.network.eval(z) - decomp.eval(z)));
        }
        out.value = std::max(out.value, worst / (n * delta));
        for (const auto& u : built.network.units) {
          auto exact = built.network.dictionary.polynomial_at(u.cell).to_complex_double();
          for (std::complex<double> w : {std::complex<double>(0.3, -0.2), std::complex<double>(-0.6, 0.7)}) {
            std::vector<std::complex<double>> wv{w};
            cells_exact = cells_exact && phi_eval(built.network.dictionary, complex_cell_point{u.cell, w}) ==
                                             exact.eval(std::span<const std::complex<double>>(wv));
          }
        }
      }
    }
    out.details["cells_exact"] = cells_exact;
    out.pass = out.value <= out.limit && cells_exact;
    return out;
  });
}

// Rate ordering in d = 3: slope with ell = 2 below the slope with ell = 1, and
// both error sequences non-increasing. The target is a Runge-type bump
// centred off the origin.
inline check_result check_rate_ordering(const verify_scale& scale) {
  return detail::timed_check("rate ordering in ell", [&] {
    check_result out;
    out.relation = "slope(ell=2) < slope(ell=1)";
    experiment_config cfg;
    cfg.d = 3;
    cfg.target.name = "runge";
    cfg.target.scale = 4.0;
    cfg.target.center = {0.3, -0.2, 0.1};
    cfg.n_list = scale.full ? std::vector<std::size_t>{4, 8, 16, 32, 64} : std::vector<std::size_t>{4, 8, 16};
    std::map<int, double> slopes;
    bool monotone = true;
    for (int ell = 1; ell <= 2; ell++) {
      cfg.ell = ell;
      auto report = rate_sweep(cfg);
      slopes[ell] = report.slope.value_or(0.0);
      json rows = json::array();
      for (std::size_t i = 0; i < report.rows.size(); i++) {
        rows.push_back({{"n", report.rows[i].n}, {"s", report.rows[i].s}, {"error", report.rows[i].error_lq}});
        if (i > 0) {
          monotone = monotone && report.rows[i].error_lq <= report.rows[i - 1].error_lq;
        }
      }
      out.details["ell" + std::to_string(ell)] = {{"slope", slopes[ell]}, {"rows", rows}};
    }
    out.details["monotone"] = monotone;
    out.value = slopes[2];
    out.limit = slopes[1];
    out.pass = slopes[2] < slopes[1] && monotone;
    return out;
  });
}

struct suite_entry {
  std::string name;
  std::vector<std::function<check_result(const verify_scale&)>> checks;
};

inline const std::vector<suite_entry>& verification_suites() {
  static const std::vector<suite_entry> suites{
      {"projector", {check_projector_fixed_point, check_cesaro_identity, check_l1_flatness}},
      {"ridge", {check_real_ridge}},
      {"complex", {check_complex_ridge}},
      {"wirtinger", {check_wirtinger}},
      {"trig", {check_trig_reduction}},
      {"expansion", {check_inner_product_expansion}},
      {"counterexample", {check_counterexample}},
      {"bumps", {check_bump_sobolev}},
      {"networks", {check_network_emulation}},
      {"rates", {check_rate_ordering}},
  };
  return suites;
}

// Runs one suite (or "all") and reports every check; pass iff all pass.
inline json run_suite(const std::string& name, const verify_scale& scale) {
  json checks = json::array();
  bool pass = true;
  bool found = false;
  for (const auto& suite : verification_suites()) {
    if (name != "all" && suite.name != name) {
      continue;
    }
    found = true;
    for (const auto& check : suite.checks) {
      auto res = check(scale);
      pass = pass && res.pass;
      auto j = to_json(res);
      j["suite"] = suite.name;
      checks.push_back(j);
    }
  }
  if (!found) {
    std::string names;
    for (const auto& suite : verification_suites()) {
      names += " " + suite.name;
    }
    throw precondition_error("unknown suite '" + name + "'; available: all" + names);
  }
  return {{"suite", name}, {"full", scale.full}, {"pass", pass}, {"checks", checks}};
}

}  // namespace ridgekit
