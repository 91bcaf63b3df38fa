#pragma once

#include <cmath>
#include <complex>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <set>
#include <string>

#include "complex_polynomial.hpp"
#include "error.hpp"
#include "networks.hpp"
#include "orthobasis.hpp"
#include "pipeline.hpp"
#include "polynomial.hpp"
#include "quadrature.hpp"
#include "ridge_complex.hpp"
#include "ridge_real.hpp"

namespace ridgekit {

using json = nlohmann::json;

class io_error : public error {
 public:
  using error::error;
};

namespace detail {

inline json to_json_value(double c) { return c; }
inline json to_json_value(const rational& c) { return c.str(); }
inline json to_json_value(const std::complex<double>& c) { return {{"re", c.real()}, {"im", c.imag()}}; }
inline json to_json_value(const gaussian_rational& c) { return {{"re", c.re.str()}, {"im", c.im.str()}}; }

template <class T>
T from_json_value(const json& j);

template <>
inline double from_json_value<double>(const json& j) {
  return j.get<double>();
}

template <>
inline rational from_json_value<rational>(const json& j) {
  if (j.is_number_integer()) {
    return rational(j.get<long long>());
  }
  try {
    return rational(j.get<std::string>());
  } catch (const std::exception& e) {
    throw io_error("malformed rational coefficient " + j.dump() + ": " + e.what());
  }
}

template <>
inline std::complex<double> from_json_value<std::complex<double>>(const json& j) {
  return {j.at("re").get<double>(), j.at("im").get<double>()};
}

template <>
inline gaussian_rational from_json_value<gaussian_rational>(const json& j) {
  return {from_json_value<rational>(j.at("re")), from_json_value<rational>(j.at("im"))};
}

inline json matrix_rows(const Eigen::MatrixXd& a) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < a.rows(); i++) {
    json row = json::array();
    for (Eigen::Index j = 0; j < a.cols(); j++) {
      row.push_back(a(i, j));
    }
    rows.push_back(row);
  }
  return rows;
}

inline Eigen::MatrixXd matrix_from_rows(const json& rows) {
  auto n = static_cast<Eigen::Index>(rows.size());
  auto m = n ? static_cast<Eigen::Index>(rows.at(0).size()) : 0;
  Eigen::MatrixXd a(n, m);
  for (Eigen::Index i = 0; i < n; i++) {
    if (static_cast<Eigen::Index>(rows.at(i).size()) != m) {
      throw io_error("ragged matrix rows");
    }
    for (Eigen::Index j = 0; j < m; j++) {
      a(i, j) = rows.at(i).at(j).get<double>();
    }
  }
  return a;
}

inline json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

inline Eigen::VectorXd vector_from_json(const json& j) {
  auto v = j.get<std::vector<double>>();
  return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline json complex_vector_json(const Eigen::VectorXcd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); i++) {
    out.push_back(to_json_value(v(i)));
  }
  return out;
}

inline Eigen::VectorXcd complex_vector_from_json(const json& j) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); i++) {
    v(i) = from_json_value<std::complex<double>>(j.at(static_cast<std::size_t>(i)));
  }
  return v;
}

inline big_int big_int_from_json(const json& j) {
  if (j.is_number_integer()) {
    return big_int(j.get<long long>());
  }
  try {
    return big_int(j.get<std::string>());
  } catch (const std::exception& e) {
    throw io_error("malformed integer " + j.dump() + ": " + e.what());
  }
}

}  // namespace detail

// {"dim": d, "terms": [{"k": [...], "c": coeff}]}; rational coefficients are
// "p/q" strings.
template <class T>
json to_json(const multi_index_polynomial<T>& p) {
  json terms = json::array();
  for (const auto& [k, c] : p.terms()) {
    terms.push_back({{"k", k.entries()}, {"c", detail::to_json_value(c)}});
  }
  return {{"dim", p.dim()}, {"terms", terms}};
}

template <class T>
multi_index_polynomial<T> polynomial_from_json(const json& j) {
  multi_index_polynomial<T> p(j.at("dim").get<std::size_t>());
  for (const auto& t : j.at("terms")) {
    p.add_term(multi_index(t.at("k").get<std::vector<int>>()), detail::from_json_value<T>(t.at("c")));
  }
  return p;
}

template <class C>
json to_json(const complex_bi_polynomial<C>& p) {
  json terms = json::array();
  for (const auto& [key, c] : p.terms()) {
    terms.push_back({{"k", key.k.entries()}, {"l", key.l.entries()}, {"c", detail::to_json_value(c)}});
  }
  return {{"dim", p.dim()}, {"terms", terms}};
}

template <class C>
complex_bi_polynomial<C> complex_polynomial_from_json(const json& j) {
  complex_bi_polynomial<C> p(j.at("dim").get<std::size_t>());
  for (const auto& t : j.at("terms")) {
    p.add_term(multi_index(t.at("k").get<std::vector<int>>()), multi_index(t.at("l").get<std::vector<int>>()),
               detail::from_json_value<C>(t.at("c")));
  }
  return p;
}

inline json to_json(const quadrature_rule& rule) {
  json nodes = json::array();
  for (std::size_t i = 0; i < rule.size(); i++) {
    auto x = rule.node(i);
    nodes.push_back(std::vector<double>(x.begin(), x.end()));
  }
  return {{"domain", rule.domain == domain_kind::ball ? "ball" : "sphere"},
          {"dim", rule.dim},
          {"exactness", rule.exactness_degree},
          {"digest", rule_digest(rule)},
          {"nodes", nodes},
          {"weights", detail::vector_json(rule.weights)}};
}

// Basis summary; monomial forms of the elements only on request.
inline json to_json(const ortho_basis& basis, bool with_polynomials) {
  json out = {{"d", basis.dim()},
              {"max_degree", basis.max_degree()},
              {"size", basis.size()},
              {"rule_exactness", basis.rule().exactness_degree},
              {"rule_nodes", basis.rule().size()},
              {"rule_digest", rule_digest(basis.rule())}};
  if (with_polynomials) {
    json elements = json::array();
    for (std::size_t i = 0; i < basis.size(); i++) {
      elements.push_back({{"degree", basis.degree(i)}, {"polynomial", to_json(basis.polynomial_at(i))}});
    }
    out["elements"] = elements;
  }
  return out;
}

inline json to_json(const ridge_decomposition& r) {
  json blocks = json::array();
  for (const auto& b : r.blocks) {
    blocks.push_back({{"A", detail::matrix_rows(b.A)}, {"P", to_json(b.P)}});
  }
  return {{"d", r.d},
          {"ell", r.ell},
          {"residual", r.residual},
          {"spanning_condition", r.spanning_condition},
          {"blocks", blocks}};
}

inline ridge_decomposition decomposition_from_json(const json& j) {
  ridge_decomposition r;
  r.d = j.at("d").get<int>();
  r.ell = j.at("ell").get<int>();
  r.residual = j.value("residual", 0.0);
  r.spanning_condition = j.value("spanning_condition", 0.0);
  for (const auto& b : j.at("blocks")) {
    auto a = detail::matrix_from_rows(b.at("A"));
    if (a.rows() != r.ell || a.cols() != r.d) {
      throw io_error("decomposition block matrix has shape " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()));
    }
    r.blocks.push_back({a, polynomial_from_json<double>(b.at("P"))});
  }
  return r;
}

inline json to_json(const complex_ridge_decomposition& r) {
  json blocks = json::array();
  for (std::size_t k = 0; k < r.directions.size(); k++) {
    blocks.push_back({{"alpha", detail::complex_vector_json(r.directions[k])}, {"P", to_json(r.profiles[k])}});
  }
  return {{"d", r.d}, {"residual", r.residual}, {"spanning_condition", r.spanning_condition}, {"blocks", blocks}};
}

inline complex_ridge_decomposition complex_decomposition_from_json(const json& j) {
  complex_ridge_decomposition r;
  r.d = j.at("d").get<int>();
  r.residual = j.value("residual", 0.0);
  r.spanning_condition = j.value("spanning_condition", 0.0);
  for (const auto& b : j.at("blocks")) {
    r.directions.push_back(detail::complex_vector_from_json(b.at("alpha")));
    r.profiles.push_back(complex_polynomial_from_json<std::complex<double>>(b.at("P")));
  }
  return r;
}

// Biases are {cell, offset}: the exact integer cell as a decimal string and the
// in-cell offset. The dictionary index of a unit equals its cell.
inline json to_json(const gt_network& net) {
  json units = json::array();
  for (const auto& u : net.units) {
    units.push_back({{"A", detail::matrix_rows(u.A)},
                     {"b", {{"cell", u.cell.str()}, {"offset", detail::vector_json(u.offset)}}},
                     {"c", u.c},
                     {"dict_index", u.cell.str()}});
  }
  return {{"type", "gtn"}, {"ell", net.ell}, {"d", net.d}, {"units", units}};
}

inline gt_network gtn_from_json(const json& j) {
  if (j.at("type") != "gtn") {
    throw io_error("expected a network of type gtn");
  }
  gt_network net;
  net.ell = j.at("ell").get<int>();
  net.d = j.at("d").get<int>();
  net.dictionary = polynomial_dictionary(static_cast<std::size_t>(net.ell));
  for (const auto& u : j.at("units")) {
    net.units.push_back({detail::matrix_from_rows(u.at("A")), detail::big_int_from_json(u.at("b").at("cell")),
                         detail::vector_from_json(u.at("b").at("offset")), u.at("c").get<double>()});
  }
  return net;
}

inline json to_json(const cv_network& net) {
  json units = json::array();
  for (const auto& u : net.units) {
    units.push_back({{"alpha", detail::complex_vector_json(u.alpha)},
                     {"beta", {{"cell", u.cell.str()}, {"offset", detail::to_json_value(u.offset)}}},
                     {"gamma", detail::to_json_value(u.gamma)},
                     {"dict_index", u.cell.str()}});
  }
  return {{"type", "cvnn"}, {"d", net.d}, {"units", units}};
}

inline cv_network cvnn_from_json(const json& j) {
  if (j.at("type") != "cvnn") {
    throw io_error("expected a network of type cvnn");
  }
  cv_network net;
  net.d = j.at("d").get<int>();
  for (const auto& u : j.at("units")) {
    net.units.push_back({detail::complex_vector_from_json(u.at("alpha")),
                         detail::big_int_from_json(u.at("beta").at("cell")),
                         detail::from_json_value<std::complex<double>>(u.at("beta").at("offset")),
                         detail::from_json_value<std::complex<double>>(u.at("gamma"))});
  }
  return net;
}

// q may be a number or the string "inf".
inline json q_to_json(double q) { return std::isinf(q) ? json("inf") : json(q); }

inline double q_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") {
      return std::numeric_limits<double>::infinity();
    }
    throw io_error("q must be a number or \"inf\", got " + j.dump());
  }
  return j.get<double>();
}

inline json to_json(const experiment_config& cfg) {
  return {{"d", cfg.d},
          {"ell", cfg.ell},
          {"r", cfg.r},
          {"q", q_to_json(cfg.q)},
          {"n_list", cfg.n_list},
          {"target",
           {{"name", cfg.target.name},
            {"scale", cfg.target.scale},
            {"center", cfg.target.center},
            {"bump_count", cfg.target.bump_count},
            {"order", cfg.target.order},
            {"seed", cfg.target.seed}}},
          {"seed", cfg.seed},
          {"extra_exactness", cfg.extra_exactness},
          {"max_degree", cfg.max_degree},
          {"delta", cfg.delta},
          {"build_network", cfg.build_network},
          {"timing", cfg.timing},
          {"csv", cfg.csv_path},
          {"json", cfg.json_path}};
}

namespace detail {

inline void reject_unknown_keys(const json& j, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) {
      throw io_error("unknown key '" + key + "' in " + where);
    }
  }
}

}  // namespace detail

// Missing keys keep their defaults; unknown keys are an error.
inline experiment_config config_from_json(const json& j) {
  detail::reject_unknown_keys(j,
                              {"d", "ell", "r", "q", "n_list", "target", "seed", "extra_exactness", "max_degree",
                               "delta", "build_network", "timing", "csv", "json"},
                              "config");
  experiment_config cfg;
  try {
    cfg.d = j.value("d", cfg.d);
    cfg.ell = j.value("ell", cfg.ell);
    cfg.r = j.value("r", cfg.r);
    if (j.contains("q")) {
      cfg.q = q_from_json(j.at("q"));
    }
    if (j.contains("n_list")) {
      cfg.n_list = j.at("n_list").get<std::vector<std::size_t>>();
    }
    if (j.contains("target")) {
      const auto& t = j.at("target");
      detail::reject_unknown_keys(t, {"name", "scale", "center", "bump_count", "order", "seed"}, "target");
      cfg.target.name = t.value("name", cfg.target.name);
      cfg.target.scale = t.value("scale", cfg.target.scale);
      if (t.contains("center")) {
        cfg.target.center = t.at("center").get<std::vector<double>>();
      }
      cfg.target.bump_count = t.value("bump_count", cfg.target.bump_count);
      cfg.target.order = t.value("order", cfg.target.order);
      cfg.target.seed = t.value("seed", cfg.target.seed);
    }
    cfg.seed = j.value("seed", cfg.seed);
    cfg.extra_exactness = j.value("extra_exactness", cfg.extra_exactness);
    cfg.max_degree = j.value("max_degree", cfg.max_degree);
    cfg.delta = j.value("delta", cfg.delta);
    cfg.build_network = j.value("build_network", cfg.build_network);
    cfg.timing = j.value("timing", cfg.timing);
    cfg.csv_path = j.value("csv", cfg.csv_path);
    cfg.json_path = j.value("json", cfg.json_path);
  } catch (const json::exception& e) {
    throw io_error(std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

inline json to_json(const rate_report& report) {
  json rows = json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"n", row.n},
                    {"s", row.s},
                    {"units", row.units},
                    {"error_lq", row.error_lq},
                    {"fit_error", row.fit_error},
                    {"ridge_error", row.ridge_error},
                    {"residual", row.residual},
                    {"network_bound", row.network_bound},
                    {"spanning_condition", row.spanning_condition},
                    {"seconds", row.seconds}});
  }
  return {{"config", to_json(report.config)},
          {"rows", rows},
          {"slope", report.slope ? json(*report.slope) : json(nullptr)},
          {"reference_slope", report.reference_slope}};
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw io_error("cannot open " + path + " for reading");
  }
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw io_error("cannot parse " + path + ": " + e.what());
  }
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw io_error("cannot open " + path + " for writing");
  }
  return out;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  auto out = open_output(path);
  out << text;
  if (!out) {
    throw io_error("write failed for " + path);
  }
}

// Writes the CSV and JSON files named in the report's config (either may be
// empty). Files are written one after the other.
inline void write_rate_outputs(const rate_report& report) {
  if (!report.config.csv_path.empty()) {
    std::ostringstream csv;
    write_rate_csv(report, csv);
    write_text_file(report.config.csv_path, csv.str());
  }
  if (!report.config.json_path.empty()) {
    write_text_file(report.config.json_path, to_json(report).dump(2) + "\n");
  }
}

}  // namespace ridgekit
