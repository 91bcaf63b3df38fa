#pragma once

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "bumps.hpp"
#include "combinatorics.hpp"
#include "error.hpp"
#include "networks.hpp"
#include "orthobasis.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "ridge_real.hpp"

namespace ridgekit {

using target_function = std::function<double(std::span<const double>)>;

// Named targets. Parameters a given name does not use are ignored.
struct target_options {
  // gaussian: exp(-scale |x - center|^2)
  // runge:    1 / (1 + scale |x - center|^2)
  // bump:     f_eps of a bump family with bump_count bumps and regularity order
  std::string name = "runge";
  double scale = 4.0;
  std::vector<double> center;
  int bump_count = 4;
  int order = 2;
  std::uint64_t seed = 7;
};

struct experiment_config {
  int d = 3;
  int ell = 1;
  // Regularity label of the target; only enters the reference slope.
  double r = 2.0;
  double q = 2.0;
  std::vector<std::size_t> n_list{4, 8, 16, 32, 64};
  target_options target;
  std::uint64_t seed = 1;
  // Error rule exactness is 2 * (largest fitted degree) + 2 + extra_exactness.
  int extra_exactness = 2;
  // Fitted degrees never exceed this, whatever the budget.
  int max_degree = 16;
  // Dictionary tolerance per unit when building the network.
  double delta = 1e-10;
  bool build_network = true;
  // Wall-clock seconds go into the CSV only when set, so default output is
  // byte-for-byte reproducible.
  bool timing = false;
  std::string csv_path;
  std::string json_path;

  void validate() const {
    if (ell < 1 || ell >= d) {
      throw precondition_error("config: need 1 <= ell < d (got d=" + std::to_string(d) +
                               ", ell=" + std::to_string(ell) + ")");
    }
    if (!(q >= 1.0)) {
      throw precondition_error("config: q must lie in [1, inf]");
    }
    if (n_list.empty()) {
      throw precondition_error("config: n-list is empty");
    }
    for (std::size_t i = 1; i < n_list.size(); i++) {
      if (n_list[i] <= n_list[i - 1]) {
        throw precondition_error("config: n-list must be strictly increasing");
      }
    }
    if (max_degree < 1) {
      throw precondition_error("config: max_degree must be positive");
    }
    if (!(delta >= 0.0)) {
      throw precondition_error("config: delta must be non-negative");
    }
    if (!target.center.empty() && target.center.size() != static_cast<std::size_t>(d)) {
      throw dimension_error("config: target center has " + std::to_string(target.center.size()) +
                            " entries, expected " + std::to_string(d));
    }
  }
};

inline target_function make_target(const target_options& target, int d) {
  std::vector<double> center = target.center.empty() ? std::vector<double>(d, 0.0) : target.center;
  auto dist2 = [center](std::span<const double> x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); i++) {
      acc += (x[i] - center[i]) * (x[i] - center[i]);
    }
    return acc;
  };
  double scale = target.scale;
  if (target.name == "gaussian") {
    return [dist2, scale](std::span<const double> x) { return std::exp(-scale * dist2(x)); };
  }
  if (target.name == "runge") {
    return [dist2, scale](std::span<const double> x) { return 1.0 / (1.0 + scale * dist2(x)); };
  }
  if (target.name == "bump") {
    auto fam = std::make_shared<bump_family>(make_bump_family(d, target.order, target.bump_count));
    auto eps = std::make_shared<std::vector<int>>(random_signs(target.bump_count, target.seed));
    return [fam, eps](std::span<const double> x) { return eval_f_eps(*fam, *eps, x); };
  }
  throw precondition_error("unknown target '" + target.name + "' (expected gaussian, runge or bump)");
}

// Discrete L^2 projection onto P_s: sum over I_s of <f, P_i> P_i.
inline polynomial fit_polynomial(const target_function& f, int s, const ortho_basis& basis) {
  if (s < 0 || s > basis.max_degree()) {
    throw precondition_error("fit_polynomial: degree " + std::to_string(s) + " outside the basis (max " +
                             std::to_string(basis.max_degree()) + ")");
  }
  return basis.expand(basis.project_coefficients(f, s));
}

// Degree actually fitted for a unit budget n.
inline int budget_degree(int d, int ell, std::size_t n, int max_degree) {
  int m = d - ell + 1;
  int s = max_degree_for_budget(m, n);
  if (s < 1) {
    throw precondition_error("approximate_by_ridge: n = " + std::to_string(n) + " below dim_homogeneous(" +
                             std::to_string(m) + ", 1) = " + std::to_string(m));
  }
  return std::min(s, max_degree);
}

// Shared state for every sweep point: the target, its node values and a
// basis large enough for the biggest fitted degree.
class pipeline_context {
 public:
  explicit pipeline_context(experiment_config cfg)
      : cfg_(std::move(cfg)),
        f_(make_target(cfg_.target, cfg_.d)),
        basis_(build_basis(cfg_.d, top_degree(cfg_), cfg_.extra_exactness)),
        f_values_(sample_at_nodes(f_, basis_.rule())) {}

  pipeline_context(experiment_config cfg, target_function f)
      : cfg_(std::move(cfg)),
        f_(std::move(f)),
        basis_(build_basis(cfg_.d, top_degree(cfg_), cfg_.extra_exactness)),
        f_values_(sample_at_nodes(f_, basis_.rule())) {}

  const experiment_config& config() const { return cfg_; }
  const target_function& target() const { return f_; }
  const ortho_basis& basis() const { return basis_; }
  const Eigen::VectorXd& target_values() const { return f_values_; }

 private:
  static int top_degree(const experiment_config& cfg) {
    cfg.validate();
    return budget_degree(cfg.d, cfg.ell, cfg.n_list.back(), cfg.max_degree);
  }

  experiment_config cfg_;
  target_function f_;
  ortho_basis basis_;
  Eigen::VectorXd f_values_;
};

struct approximation_result {
  std::size_t n = 0;
  int s = 0;
  std::size_t units = 0;
  polynomial fit{1};
  ridge_decomposition decomposition;
  std::optional<gtn_build> network;
  // L^q errors on the error rule.
  double fit_error = 0.0;
  double ridge_error = 0.0;
  double total_error = 0.0;
  // Sup-grid residual certified by the decomposition.
  double residual = 0.0;
  double network_bound = 0.0;
  double spanning_condition = 0.0;
  double seconds = 0.0;
};

// One pipeline run: fit, decompose with dim_homogeneous(d-ell+1, s) <= n
// ridge blocks, emulate by a network, measure. Throws error if the measured
// total exceeds fit error + ridge error + ||1||_q * certified network bound.
inline approximation_result approximate_by_ridge(const pipeline_context& ctx, std::size_t n) {
  const auto& cfg = ctx.config();
  auto start = std::chrono::steady_clock::now();
  approximation_result out;
  out.n = n;
  out.s = budget_degree(cfg.d, cfg.ell, n, cfg.max_degree);
  if (out.s > ctx.basis().max_degree()) {
    throw precondition_error("approximate_by_ridge: n = " + std::to_string(n) + " exceeds the context budget");
  }
  int m = cfg.d - cfg.ell + 1;
  const auto& rule = ctx.basis().rule();

  Eigen::VectorXd coeffs = ctx.basis().project_values(ctx.target_values(), out.s);
  out.fit = ctx.basis().expand(coeffs);
  Eigen::VectorXd fit_values = ctx.basis().expansion_node_values(coeffs);
  out.fit_error = lq_norm_values(ctx.target_values() - fit_values, rule, cfg.q);

  // Seeded by degree, so budgets that share s share the network.
  auto dirs = sample_spanning_directions(m, out.s, dim_homogeneous(m, out.s),
                                         cfg.seed * 0x9e3779b97f4a7c15ull + static_cast<std::uint64_t>(out.s));
  out.decomposition = decompose(out.fit, dirs, cfg.d, cfg.ell);
  out.units = out.decomposition.blocks.size();
  out.residual = out.decomposition.residual;
  out.spanning_condition = out.decomposition.spanning_condition;

  Eigen::VectorXd ridge_values(static_cast<Eigen::Index>(rule.size()));
  Eigen::VectorXd model_values(ridge_values.size());
  if (cfg.build_network) {
    out.network = gtn_from_decomposition(out.decomposition, cfg.delta);
    out.network_bound = out.network->bound;
  }
  for (std::size_t i = 0; i < rule.size(); i++) {
    auto x = rule.node(i);
    auto idx = static_cast<Eigen::Index>(i);
    ridge_values(idx) = out.decomposition.eval(x);
    model_values(idx) = out.network ? out.network->network.eval(x) : ridge_values(idx);
  }
  out.ridge_error = lq_norm_values(fit_values - ridge_values, rule, cfg.q);
  out.total_error = lq_norm_values(ctx.target_values() - model_values, rule, cfg.q);

  double unit_norm = std::isinf(cfg.q) ? 1.0 : std::pow(rule.weights.sum(), 1.0 / cfg.q);
  double budget = out.fit_error + out.ridge_error + unit_norm * out.network_bound;
  double slack = 1e-12 * (1.0 + lq_norm_values(ctx.target_values(), rule, cfg.q));
  if (!(out.total_error <= budget + slack)) {
    std::ostringstream msg;
    msg << "pipeline error budget violated at n=" << n << ": total " << out.total_error << " > fit "
        << out.fit_error << " + ridge " << out.ridge_error << " + network " << unit_norm * out.network_bound;
    throw error(msg.str());
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

inline approximation_result approximate_by_ridge(const target_function& f, std::size_t n,
                                                 const experiment_config& cfg) {
  experiment_config one = cfg;
  one.n_list = {n};
  return approximate_by_ridge(pipeline_context(one, f), n);
}

struct rate_row {
  std::size_t n = 0;
  int s = 0;
  std::size_t units = 0;
  double error_lq = 0.0;
  double fit_error = 0.0;
  double ridge_error = 0.0;
  double residual = 0.0;
  double network_bound = 0.0;
  double spanning_condition = 0.0;
  double seconds = 0.0;
};

struct rate_report {
  experiment_config config;
  std::vector<rate_row> rows;
  // Least-squares slope of log(error) against log(n) over rows with positive
  // error; empty when fewer than two such rows exist.
  std::optional<double> slope;
  double reference_slope = 0.0;
};

inline std::optional<double> loglog_slope(const std::vector<rate_row>& rows) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& row : rows) {
    if (row.error_lq > 0.0) {
      xs.push_back(std::log(static_cast<double>(row.n)));
      ys.push_back(std::log(row.error_lq));
    }
  }
  if (xs.size() < 2) {
    return std::nullopt;
  }
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); i++) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); i++) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

// Sweep points run in parallel; every point is seeded on its own.
inline rate_report rate_sweep(const experiment_config& cfg) {
  pipeline_context ctx(cfg);
  rate_report report;
  report.config = cfg;
  report.rows.resize(cfg.n_list.size());
  parallel_for(cfg.n_list.size(), [&](std::size_t i) {
    auto res = approximate_by_ridge(ctx, cfg.n_list[i]);
    report.rows[i] = {res.n,           res.s,         res.units,    res.total_error,
                      res.fit_error,   res.ridge_error, res.residual, res.network_bound,
                      res.spanning_condition, cfg.timing ? res.seconds : 0.0};
  });
  report.slope = loglog_slope(report.rows);
  report.reference_slope = -cfg.r / static_cast<double>(cfg.d - cfg.ell);
  return report;
}

inline void write_rate_csv(const rate_report& report, std::ostream& os) {
  os << "n,s,error_lq,residual,seconds\n";
  char buf[160];
  for (const auto& row : report.rows) {
    std::snprintf(buf, sizeof buf, "%zu,%d,%.17g,%.17g,%.17g\n", row.n, row.s, row.error_lq, row.residual,
                  row.seconds);
    os << buf;
  }
}

}  // namespace ridgekit
