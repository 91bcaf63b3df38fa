#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <ridgekit/error.hpp>
#include <ridgekit/multi_index.hpp>
#include <ridgekit/rational.hpp>
#include <span>
#include <utility>
#include <vector>

namespace ridgekit {

// Real polynomial in dim variables, stored as a grlex-sorted map from
// exponents to coefficients. T is double or rational.
template <class T>
class multi_index_polynomial {
 public:
  using coefficient_type = T;
  using term_map = std::map<multi_index, T, grlex_less>;

  // Degree reported for the zero polynomial.
  static constexpr int zero_degree = std::numeric_limits<int>::min();

  explicit multi_index_polynomial(std::size_t dim = 1) : dim_(dim) {
    if (dim == 0) {
      throw dimension_error("polynomial dimension must be positive");
    }
  }

  static multi_index_polynomial constant(std::size_t dim, const T& c) {
    multi_index_polynomial p(dim);
    p.add_term(multi_index(dim), c);
    return p;
  }

  static multi_index_polynomial monomial(const multi_index& k, const T& c = T(1)) {
    multi_index_polynomial p(k.size());
    p.add_term(k, c);
    return p;
  }

  // The coordinate function x_j (0-based).
  static multi_index_polynomial variable(std::size_t dim, std::size_t j) {
    multi_index k(dim);
    k.set(j, 1);
    return monomial(k);
  }

  std::size_t dim() const { return dim_; }
  const term_map& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  int degree() const { return terms_.empty() ? zero_degree : terms_.rbegin()->first.order(); }

  T coefficient(const multi_index& k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? T(0) : it->second;
  }

  void add_term(const multi_index& k, const T& c) {
    if (k.size() != dim_) {
      throw dimension_error("multi-index length does not match polynomial dimension");
    }
    if (coefficient_traits<T>::negligible(c)) {
      return;
    }
    auto [it, inserted] = terms_.try_emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (coefficient_traits<T>::negligible(it->second)) {
        terms_.erase(it);
      }
    }
  }

  // Terms of exact total degree j.
  multi_index_polynomial homogeneous_part(int j) const {
    multi_index_polynomial p(dim_);
    for (const auto& [k, c] : terms_) {
      if (k.order() == j) {
        p.terms_.emplace(k, c);
      }
    }
    return p;
  }

  multi_index_polynomial& operator+=(const multi_index_polynomial& o) {
    check_dim(o);
    for (const auto& [k, c] : o.terms_) {
      add_term(k, c);
    }
    return *this;
  }

  multi_index_polynomial& operator-=(const multi_index_polynomial& o) {
    check_dim(o);
    for (const auto& [k, c] : o.terms_) {
      add_term(k, -c);
    }
    return *this;
  }

  multi_index_polynomial& operator*=(const T& a) {
    if (coefficient_traits<T>::negligible(a)) {
      terms_.clear();
      return *this;
    }
    for (auto it = terms_.begin(); it != terms_.end();) {
      it->second *= a;
      if (coefficient_traits<T>::negligible(it->second)) {
        it = terms_.erase(it);
      } else {
        ++it;
      }
    }
    return *this;
  }

  friend multi_index_polynomial operator+(multi_index_polynomial a, const multi_index_polynomial& b) {
    return a += b;
  }
  friend multi_index_polynomial operator-(multi_index_polynomial a, const multi_index_polynomial& b) {
    return a -= b;
  }
  friend multi_index_polynomial operator-(multi_index_polynomial a) { return a *= T(-1); }
  friend multi_index_polynomial operator*(multi_index_polynomial a, const T& s) { return a *= s; }
  friend multi_index_polynomial operator*(const T& s, multi_index_polynomial a) { return a *= s; }

  friend multi_index_polynomial operator*(const multi_index_polynomial& a, const multi_index_polynomial& b) {
    a.check_dim(b);
    multi_index_polynomial r(a.dim_);
    for (const auto& [ka, ca] : a.terms_) {
      for (const auto& [kb, cb] : b.terms_) {
        r.add_term(ka + kb, ca * cb);
      }
    }
    return r;
  }

  multi_index_polynomial& operator*=(const multi_index_polynomial& o) { return *this = *this * o; }

  friend bool operator==(const multi_index_polynomial& a, const multi_index_polynomial& b) {
    return a.dim_ == b.dim_ && a.terms_ == b.terms_;
  }

  // Evaluates sum c_k x^k with per-variable power tables.
  template <class X>
  X eval(std::span<const X> x) const {
    if (x.size() != dim_) {
      throw dimension_error("evaluation point has wrong dimension");
    }
    std::vector<int> max_exp(dim_, 0);
    for (const auto& [k, c] : terms_) {
      for (std::size_t v = 0; v < dim_; v++) {
        max_exp[v] = std::max(max_exp[v], k[v]);
      }
    }
    std::vector<std::vector<X>> powers(dim_);
    for (std::size_t v = 0; v < dim_; v++) {
      powers[v].resize(max_exp[v] + 1);
      powers[v][0] = X(1);
      for (int e = 1; e <= max_exp[v]; e++) {
        powers[v][e] = powers[v][e - 1] * x[v];
      }
    }
    X sum(0);
    for (const auto& [k, c] : terms_) {
      X term = static_cast<X>(c);
      for (std::size_t v = 0; v < dim_; v++) {
        if (k[v] != 0) {
          term *= powers[v][k[v]];
        }
      }
      sum += term;
    }
    return sum;
  }

  template <class X>
  X eval(const std::vector<X>& x) const {
    return eval(std::span<const X>(x));
  }

  template <class X>
  X operator()(std::span<const X> x) const {
    return eval(x);
  }

  template <class U>
  multi_index_polynomial<U> cast() const {
    multi_index_polynomial<U> p(dim_);
    for (const auto& [k, c] : terms_) {
      p.add_term(k, static_cast<U>(c));
    }
    return p;
  }

 private:
  void check_dim(const multi_index_polynomial& o) const {
    if (o.dim_ != dim_) {
      throw dimension_error("polynomial dimensions differ");
    }
  }

  std::size_t dim_;
  term_map terms_;
};

using polynomial = multi_index_polynomial<double>;
using rational_polynomial = multi_index_polynomial<rational>;

// x -> P(A x + b) for P over rows(A) variables. A and b need (i, j) / (i)
// element access, rows(), cols() and size() as Eigen provides.
template <class T, class Matrix, class Vector>
multi_index_polynomial<T> compose_linear(const multi_index_polynomial<T>& p, const Matrix& a, const Vector& b) {
  const auto ell = static_cast<std::size_t>(a.rows());
  const auto d = static_cast<std::size_t>(a.cols());
  if (ell != p.dim() || static_cast<std::size_t>(b.size()) != ell) {
    throw dimension_error("compose_linear: shape mismatch");
  }

  // Affine forms L_j(x) = sum_i A(j,i) x_i + b_j and their cached powers.
  std::vector<std::vector<multi_index_polynomial<T>>> powers(ell);
  for (std::size_t j = 0; j < ell; j++) {
    multi_index_polynomial<T> form = multi_index_polynomial<T>::constant(d, T(b(j)));
    for (std::size_t i = 0; i < d; i++) {
      form.add_term(multi_index_polynomial<T>::variable(d, i).terms().begin()->first, T(a(j, i)));
    }
    powers[j].push_back(multi_index_polynomial<T>::constant(d, T(1)));
    powers[j].push_back(std::move(form));
  }
  auto power = [&](std::size_t j, int e) -> const multi_index_polynomial<T>& {
    while (static_cast<int>(powers[j].size()) <= e) {
      powers[j].push_back(powers[j].back() * powers[j][1]);
    }
    return powers[j][e];
  };

  multi_index_polynomial<T> result(d);
  for (const auto& [k, c] : p.terms()) {
    auto term = multi_index_polynomial<T>::constant(d, c);
    for (std::size_t j = 0; j < ell; j++) {
      if (k[j] != 0) {
        term = term * power(j, k[j]);
      }
    }
    result += term;
  }
  return result;
}

}  // namespace ridgekit
