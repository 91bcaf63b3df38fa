#pragma once

#include <algorithm>
#include <complex>
#include <type_traits>
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

// Exponent pair (k, l) of the monomial z^k conj(z)^l.
struct bi_index {
  multi_index k;
  multi_index l;

  friend bool operator==(const bi_index&, const bi_index&) = default;
};

struct bi_index_less {
  bool operator()(const bi_index& a, const bi_index& b) const {
    auto oa = a.k.order() + a.l.order();
    auto ob = b.k.order() + b.l.order();
    if (oa != ob) {
      return oa < ob;
    }
    grlex_less less;
    if (less(a.k, b.k)) {
      return true;
    }
    if (less(b.k, a.k)) {
      return false;
    }
    return less(a.l, b.l);
  }
};

// Polynomial in z and conj(z) over C^dim. C is std::complex<double> or
// gaussian_rational.
template <class C>
class complex_bi_polynomial {
 public:
  using coefficient_type = C;
  using term_map = std::map<bi_index, C, bi_index_less>;

  static constexpr int zero_degree = std::numeric_limits<int>::min();

  explicit complex_bi_polynomial(std::size_t dim = 1) : dim_(dim) {
    if (dim == 0) {
      throw dimension_error("polynomial dimension must be positive");
    }
  }

  static complex_bi_polynomial constant(std::size_t dim, const C& c) {
    complex_bi_polynomial p(dim);
    p.add_term(multi_index(dim), multi_index(dim), c);
    return p;
  }

  static complex_bi_polynomial monomial(const multi_index& k, const multi_index& l, const C& c = C(1)) {
    complex_bi_polynomial p(k.size());
    p.add_term(k, l, c);
    return p;
  }

  // z_j, or conj(z_j) when conjugate is set (0-based j).
  static complex_bi_polynomial variable(std::size_t dim, std::size_t j, bool conjugate = false) {
    multi_index k(dim);
    multi_index l(dim);
    (conjugate ? l : k).set(j, 1);
    return monomial(k, l);
  }

  std::size_t dim() const { return dim_; }
  const term_map& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  int holomorphic_degree() const {
    int deg = zero_degree;
    for (const auto& [key, c] : terms_) {
      deg = std::max(deg, key.k.order());
    }
    return deg;
  }

  int antiholomorphic_degree() const {
    int deg = zero_degree;
    for (const auto& [key, c] : terms_) {
      deg = std::max(deg, key.l.order());
    }
    return deg;
  }

  // Membership in P_s(C^d): both partial degrees at most s.
  bool in_degree(int s) const { return holomorphic_degree() <= s && antiholomorphic_degree() <= s; }

  C coefficient(const multi_index& k, const multi_index& l) const {
    auto it = terms_.find(bi_index{k, l});
    return it == terms_.end() ? C(0) : it->second;
  }

  void add_term(const multi_index& k, const multi_index& l, const C& c) {
    if (k.size() != dim_ || l.size() != dim_) {
      throw dimension_error("multi-index length does not match polynomial dimension");
    }
    if (coefficient_traits<C>::negligible(c)) {
      return;
    }
    auto [it, inserted] = terms_.try_emplace(bi_index{k, l}, c);
    if (!inserted) {
      it->second += c;
      if (coefficient_traits<C>::negligible(it->second)) {
        terms_.erase(it);
      }
    }
  }

  // Terms with |k| = s and |l| = t.
  complex_bi_polynomial bihomogeneous_part(int s, int t) const {
    complex_bi_polynomial p(dim_);
    for (const auto& [key, c] : terms_) {
      if (key.k.order() == s && key.l.order() == t) {
        p.terms_.emplace(key, c);
      }
    }
    return p;
  }

  // The polynomial z -> conj(P(z)).
  complex_bi_polynomial conjugate() const {
    using std::conj;
    complex_bi_polynomial p(dim_);
    for (const auto& [key, c] : terms_) {
      p.terms_.emplace(bi_index{key.l, key.k}, conj(c));
    }
    return p;
  }

  complex_bi_polynomial& operator+=(const complex_bi_polynomial& o) {
    check_dim(o);
    for (const auto& [key, c] : o.terms_) {
      add_term(key.k, key.l, c);
    }
    return *this;
  }

  complex_bi_polynomial& operator-=(const complex_bi_polynomial& o) {
    check_dim(o);
    for (const auto& [key, c] : o.terms_) {
      add_term(key.k, key.l, -c);
    }
    return *this;
  }

  complex_bi_polynomial& operator*=(const C& a) {
    for (auto it = terms_.begin(); it != terms_.end();) {
      it->second *= a;
      if (coefficient_traits<C>::negligible(it->second)) {
        it = terms_.erase(it);
      } else {
        ++it;
      }
    }
    return *this;
  }

  friend complex_bi_polynomial operator+(complex_bi_polynomial a, const complex_bi_polynomial& b) { return a += b; }
  friend complex_bi_polynomial operator-(complex_bi_polynomial a, const complex_bi_polynomial& b) { return a -= b; }
  friend complex_bi_polynomial operator-(complex_bi_polynomial a) { return a *= C(-1); }
  friend complex_bi_polynomial operator*(complex_bi_polynomial a, const C& s) { return a *= s; }
  friend complex_bi_polynomial operator*(const C& s, complex_bi_polynomial a) { return a *= s; }

  friend complex_bi_polynomial operator*(const complex_bi_polynomial& a, const complex_bi_polynomial& b) {
    a.check_dim(b);
    complex_bi_polynomial r(a.dim_);
    for (const auto& [ka, ca] : a.terms_) {
      for (const auto& [kb, cb] : b.terms_) {
        r.add_term(ka.k + kb.k, ka.l + kb.l, ca * cb);
      }
    }
    return r;
  }

  friend bool operator==(const complex_bi_polynomial& a, const complex_bi_polynomial& b) {
    return a.dim_ == b.dim_ && a.terms_ == b.terms_;
  }

  template <class X>
  X eval(std::span<const X> z) const {
    using std::conj;
    if (z.size() != dim_) {
      throw dimension_error("evaluation point has wrong dimension");
    }
    std::vector<int> max_k(dim_, 0);
    std::vector<int> max_l(dim_, 0);
    for (const auto& [key, c] : terms_) {
      for (std::size_t v = 0; v < dim_; v++) {
        max_k[v] = std::max(max_k[v], key.k[v]);
        max_l[v] = std::max(max_l[v], key.l[v]);
      }
    }
    auto table = [](const X& base, int n) {
      std::vector<X> p(n + 1);
      p[0] = X(1);
      for (int e = 1; e <= n; e++) {
        p[e] = p[e - 1] * base;
      }
      return p;
    };
    std::vector<std::vector<X>> zp(dim_);
    std::vector<std::vector<X>> zbp(dim_);
    for (std::size_t v = 0; v < dim_; v++) {
      zp[v] = table(z[v], max_k[v]);
      zbp[v] = table(conj(z[v]), max_l[v]);
    }
    X sum(0);
    for (const auto& [key, c] : terms_) {
      X term = convert<X>(c);
      for (std::size_t v = 0; v < dim_; v++) {
        if (key.k[v] != 0) {
          term *= zp[v][key.k[v]];
        }
        if (key.l[v] != 0) {
          term *= zbp[v][key.l[v]];
        }
      }
      sum += term;
    }
    return sum;
  }

  template <class X>
  X eval(const std::vector<X>& z) const {
    return eval(std::span<const X>(z));
  }

  complex_bi_polynomial<std::complex<double>> to_complex_double() const {
    complex_bi_polynomial<std::complex<double>> p(dim_);
    for (const auto& [key, c] : terms_) {
      p.add_term(key.k, key.l, to_complex(c));
    }
    return p;
  }

 private:
  template <class X>
  static X convert(const C& c) {
    if constexpr (std::is_same_v<X, std::complex<double>>) {
      return to_complex(c);
    } else {
      return X(c);
    }
  }

  void check_dim(const complex_bi_polynomial& o) const {
    if (o.dim_ != dim_) {
      throw dimension_error("polynomial dimensions differ");
    }
  }

  std::size_t dim_;
  term_map terms_;
};

using complex_polynomial = complex_bi_polynomial<std::complex<double>>;
using gaussian_polynomial = complex_bi_polynomial<gaussian_rational>;

}  // namespace ridgekit
