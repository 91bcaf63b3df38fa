// ridgekit command line: basis, decompose, verify, rate-sweep, counterexample.
// Exit status: 0 when every assertion of the command holds, 1 when a check
// fails, 2 on usage or input errors.

#include <CLI11.hpp>
#include <iostream>
#include <limits>
#include <ridgekit/io.hpp>
#include <ridgekit/verify.hpp>
#include <string>
#include <vector>

using namespace ridgekit;

namespace {

void emit(const json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    write_text_file(out, j.dump(2) + "\n");
  }
}

// Fills options of sub that were not given on the command line from a JSON
// object keyed by long option name (without dashes).
void apply_json_options(CLI::App* sub, const std::string& path, const std::set<std::string>& skip = {}) {
  if (path.empty()) {
    return;
  }
  auto cfg = read_json_file(path);
  if (!cfg.is_object()) {
    throw io_error(path + ": expected a JSON object");
  }
  for (const auto& [key, value] : cfg.items()) {
    if (skip.count(key)) {
      continue;
    }
    CLI::Option* opt = nullptr;
    try {
      opt = sub->get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      throw io_error(path + ": unknown option '" + key + "' for " + sub->get_name());
    }
    if (opt->count() > 0) {
      continue;
    }
    auto as_text = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    if (value.is_array()) {
      std::vector<std::string> items;
      for (const auto& v : value) {
        items.push_back(as_text(v));
      }
      opt->add_result(items);
    } else {
      opt->add_result(as_text(value));
    }
    opt->run_callback();
  }
}

double parse_q(const std::string& text) {
  if (text == "inf" || text == "infinity") {
    return std::numeric_limits<double>::infinity();
  }
  std::size_t used = 0;
  double q = std::stod(text, &used);
  if (used != text.size()) {
    throw precondition_error("q must be a number or inf, got '" + text + "'");
  }
  return q;
}

bool is_complex_polynomial(const json& j) {
  for (const auto& t : j.at("terms")) {
    if (t.contains("l")) {
      return true;
    }
  }
  return false;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ridge decompositions, shallow network emulation and rate experiments on the unit ball."};
  app.require_subcommand(1);

  // basis
  auto* basis_cmd = app.add_subcommand("basis", "Orthonormal polynomial basis of P_s(B^d) and its quadrature rule.");
  std::string basis_config;
  int basis_d = 2;
  int basis_s = 4;
  int basis_extra = 0;
  bool basis_polys = false;
  bool basis_rule = false;
  std::string basis_out;
  basis_cmd->add_option("--config", basis_config, "JSON object of option values");
  basis_cmd->add_option("--d", basis_d, "Dimension")->check(CLI::PositiveNumber);
  basis_cmd->add_option("--s", basis_s, "Maximal degree")->check(CLI::NonNegativeNumber);
  basis_cmd->add_option("--extra-exactness", basis_extra, "Extra quadrature exactness above 2s + 2");
  basis_cmd->add_flag("--polynomials", basis_polys, "Include monomial forms of the basis elements");
  basis_cmd->add_flag("--rule", basis_rule, "Include quadrature nodes and weights");
  basis_cmd->add_option("--out", basis_out, "Output file (stdout if omitted)");

  // decompose
  auto* dec_cmd = app.add_subcommand("decompose", "Ridge decomposition of a polynomial given as JSON.");
  std::string dec_config;
  std::string dec_input;
  int dec_ell = 1;
  std::uint64_t dec_seed = 1;
  double dec_delta = -1.0;
  std::string dec_out;
  dec_cmd->add_option("--config", dec_config, "JSON object of option values");
  dec_cmd->add_option("--input", dec_input, "Polynomial JSON ({dim, terms}; terms with l are complex)");
  dec_cmd->add_option("--ell", dec_ell, "Ridge dimension (real input)")->check(CLI::PositiveNumber);
  dec_cmd->add_option("--seed", dec_seed, "Direction seed");
  dec_cmd->add_option("--delta", dec_delta, "Also build the network with this dictionary tolerance");
  dec_cmd->add_option("--out", dec_out, "Output file (stdout if omitted)");

  // verify
  auto* ver_cmd = app.add_subcommand("verify", "Run verification suites; exit 0 iff all checks pass.");
  std::string ver_config;
  std::string ver_suite = "all";
  bool ver_quick = false;
  bool ver_details = false;
  std::string ver_out;
  ver_cmd->add_option("--config", ver_config, "JSON object of option values");
  ver_cmd->add_option("--suite", ver_suite,
                      "all, projector, ridge, complex, wirtinger, trig, expansion, counterexample, bumps, "
                      "networks or rates");
  ver_cmd->add_flag("--quick", ver_quick, "Smaller trial counts");
  ver_cmd->add_flag("--details", ver_details, "Keep per-case numbers in the report");
  ver_cmd->add_option("--out", ver_out, "Output file (stdout if omitted)");

  // rate-sweep
  auto* rate_cmd = app.add_subcommand("rate-sweep", "Approximation error against the unit budget n.");
  std::string rate_config;
  experiment_config cfg;
  std::string q_text = "2";
  rate_cmd->add_option("--config", rate_config, "Experiment config JSON");
  auto* o_d = rate_cmd->add_option("--d", cfg.d, "Dimension");
  auto* o_ell = rate_cmd->add_option("--ell", cfg.ell, "Ridge dimension");
  auto* o_r = rate_cmd->add_option("--r", cfg.r, "Regularity label for the reference slope");
  auto* o_q = rate_cmd->add_option("--q", q_text, "Error norm exponent (number or inf)");
  auto* o_n = rate_cmd->add_option("--n", cfg.n_list, "Increasing unit budgets");
  auto* o_target = rate_cmd->add_option("--target", cfg.target.name, "gaussian, runge or bump");
  auto* o_scale = rate_cmd->add_option("--scale", cfg.target.scale, "Target scale");
  auto* o_center = rate_cmd->add_option("--center", cfg.target.center, "Target center");
  auto* o_seed = rate_cmd->add_option("--seed", cfg.seed, "Direction seed");
  auto* o_maxdeg = rate_cmd->add_option("--max-degree", cfg.max_degree, "Cap on the fitted degree");
  auto* o_delta = rate_cmd->add_option("--delta", cfg.delta, "Dictionary tolerance per unit");
  auto* o_csv = rate_cmd->add_option("--csv", cfg.csv_path, "CSV output (stdout if neither file is set)");
  auto* o_json = rate_cmd->add_option("--json", cfg.json_path, "JSON report output");
  bool timing = false;
  bool no_network = false;
  auto* o_timing = rate_cmd->add_flag("--timing", timing, "Record wall-clock seconds in the CSV");
  auto* o_nonet = rate_cmd->add_flag("--no-network", no_network, "Stop at the ridge sum");

  // counterexample
  auto* cex_cmd = app.add_subcommand("counterexample", "Norm ratios of the counterexample family P_n.");
  std::string cex_config;
  int cex_d = 2;
  std::vector<int> cex_n{16, 64, 256, 1024};
  std::string cex_out;
  cex_cmd->add_option("--config", cex_config, "JSON object of option values");
  cex_cmd->add_option("--d", cex_d, "Dimension")->check(CLI::PositiveNumber);
  cex_cmd->add_option("--n", cex_n, "Increasing values of n");
  cex_cmd->add_option("--out", cex_out, "Output file (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (basis_cmd->parsed()) {
      apply_json_options(basis_cmd, basis_config);
      auto basis = build_basis(basis_d, basis_s, basis_extra);
      auto j = to_json(basis, basis_polys);
      if (basis_rule) {
        j["rule"] = to_json(basis.rule());
      }
      emit(j, basis_out);
      return 0;
    }

    if (dec_cmd->parsed()) {
      apply_json_options(dec_cmd, dec_config);
      if (dec_input.empty()) {
        throw precondition_error("decompose needs --input");
      }
      auto pj = read_json_file(dec_input);
      json out;
      if (is_complex_polynomial(pj)) {
        auto p = complex_polynomial_from_json<std::complex<double>>(pj);
        int d = static_cast<int>(p.dim());
        int s = std::max(0, p.holomorphic_degree());
        int t = std::max(0, p.antiholomorphic_degree());
        auto dirs = sample_complex_directions(d, s, t, dim_complex_bihomogeneous(d, s, t), dec_seed);
        auto decomp = complex_decompose(p, dirs);
        out["decomposition"] = to_json(decomp);
        if (dec_delta >= 0.0) {
          auto built = cvnn_from_decomposition(decomp, dec_delta);
          out["network"] = to_json(built.network);
          out["network_bound"] = built.bound;
        }
      } else {
        auto p = polynomial_from_json<double>(pj);
        int d = static_cast<int>(p.dim());
        int m = d - dec_ell + 1;
        if (m < 1) {
          throw precondition_error("decompose: need ell <= d");
        }
        int s = std::max(0, p.degree());
        auto dirs = sample_spanning_directions(m, s, dim_homogeneous(m, s), dec_seed);
        auto decomp = decompose(p, dirs, d, dec_ell);
        out["decomposition"] = to_json(decomp);
        if (dec_delta >= 0.0) {
          auto built = gtn_from_decomposition(decomp, dec_delta);
          out["network"] = to_json(built.network);
          out["network_bound"] = built.bound;
        }
      }
      emit(out, dec_out);
      return 0;
    }

    if (ver_cmd->parsed()) {
      apply_json_options(ver_cmd, ver_config);
      auto report = run_suite(ver_suite, verify_scale{!ver_quick});
      for (const auto& c : report["checks"]) {
        std::cerr << (c["pass"].get<bool>() ? "PASS " : "FAIL ") << c["suite"].get<std::string>() << ": "
                  << c["name"].get<std::string>() << " (value " << c["value"].get<double>() << ")\n";
      }
      if (!ver_details) {
        for (auto& c : report["checks"]) {
          c.erase("details");
        }
      }
      emit(report, ver_out);
      return report["pass"].get<bool>() ? 0 : 1;
    }

    if (rate_cmd->parsed()) {
      experiment_config base = rate_config.empty() ? experiment_config{} : config_from_json(read_json_file(rate_config));
      // Explicit flags override the config file.
      experiment_config run = base;
      if (o_d->count()) run.d = cfg.d;
      if (o_ell->count()) run.ell = cfg.ell;
      if (o_r->count()) run.r = cfg.r;
      if (o_q->count()) run.q = parse_q(q_text);
      if (o_n->count()) run.n_list = cfg.n_list;
      if (o_target->count()) run.target.name = cfg.target.name;
      if (o_scale->count()) run.target.scale = cfg.target.scale;
      if (o_center->count()) run.target.center = cfg.target.center;
      if (o_seed->count()) run.seed = cfg.seed;
      if (o_maxdeg->count()) run.max_degree = cfg.max_degree;
      if (o_delta->count()) run.delta = cfg.delta;
      if (o_csv->count()) run.csv_path = cfg.csv_path;
      if (o_json->count()) run.json_path = cfg.json_path;
      if (o_timing->count()) run.timing = timing;
      if (o_nonet->count()) run.build_network = !no_network;
      run.validate();
      auto report = rate_sweep(run);
      write_rate_outputs(report);
      if (run.csv_path.empty() && run.json_path.empty()) {
        write_rate_csv(report, std::cout);
      }
      return 0;
    }

    if (cex_cmd->parsed()) {
      apply_json_options(cex_cmd, cex_config);
      json rows = json::array();
      bool decreasing = true;
      bool bounded = true;
      double previous = std::numeric_limits<double>::infinity();
      for (int n : cex_n) {
        auto rep = counterexample_stats(n, cex_d);
        decreasing = decreasing && rep.ratio < previous;
        bounded = bounded && rep.sup >= std::cbrt(n / 2.0) && rep.ratio <= rep.upper_bound;
        previous = rep.ratio;
        rows.push_back({{"n", n},
                        {"l2_squared", rep.l2_squared},
                        {"l1", rep.l1},
                        {"sup", rep.sup},
                        {"ratio", rep.ratio},
                        {"upper_bound", rep.upper_bound}});
      }
      json out = {{"d", cex_d}, {"rows", rows}, {"ratio_decreasing", decreasing}, {"bounds_hold", bounded}};
      emit(out, cex_out);
      return decreasing && bounded ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "ridgekit: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
