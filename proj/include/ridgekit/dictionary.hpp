#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <ridgekit/complex_polynomial.hpp>
#include <ridgekit/error.hpp>
#include <ridgekit/multi_index.hpp>
#include <ridgekit/polynomial.hpp>
#include <ridgekit/rational.hpp>
#include <vector>

namespace ridgekit {

// Bijections between the naturals {0, 1, 2, ...} and the objects the
// dictionaries enumerate. Everything is exact (cpp_int / cpp_rational).
namespace encoding {

// Bijective base-k numeration: digits in 1..k, most significant first; the
// empty digit string is 0.
inline std::vector<int> to_bijective_digits(big_int v, int base) {
  if (v < 0) {
    throw precondition_error("to_bijective_digits: negative value");
  }
  std::vector<int> out;
  while (v > 0) {
    int d = static_cast<int>(v % base);
    if (d == 0) {
      d = base;
    }
    out.push_back(d);
    v = (v - d) / base;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

inline big_int from_bijective_digits(const std::vector<int>& digits, int base) {
  big_int v = 0;
  for (int d : digits) {
    v = v * base + d;
  }
  return v;
}

// Nonempty sequences of naturals: each entry in bijective base 2 (digits
// 1, 2), joined with the separator digit 3, read in bijective base 3.
inline big_int encode_sequence(const std::vector<big_int>& seq) {
  if (seq.empty()) {
    throw precondition_error("encode_sequence: empty sequence");
  }
  std::vector<int> digits;
  for (std::size_t i = 0; i < seq.size(); i++) {
    if (i > 0) {
      digits.push_back(3);
    }
    auto part = to_bijective_digits(seq[i], 2);
    digits.insert(digits.end(), part.begin(), part.end());
  }
  return from_bijective_digits(digits, 3);
}

inline std::vector<big_int> decode_sequence(const big_int& v) {
  auto digits = to_bijective_digits(v, 3);
  std::vector<big_int> seq;
  std::vector<int> part;
  for (int d : digits) {
    if (d == 3) {
      seq.push_back(from_bijective_digits(part, 2));
      part.clear();
    } else {
      part.push_back(d);
    }
  }
  seq.push_back(from_bijective_digits(part, 2));
  return seq;
}

// Positive rationals through the canonical continued fraction
// [a0; a1, ..., an] (last term >= 2 when n >= 1): integers map to (a0 - 1),
// others to (a0, a1 - 1, ..., a_{n-1} - 1, a_n - 2).
inline big_int encode_positive_rational(const rational& r) {
  if (r <= 0) {
    throw precondition_error("encode_positive_rational: value must be positive");
  }
  big_int p = numerator(r);
  big_int q = denominator(r);
  std::vector<big_int> cf;
  while (q != 0) {
    big_int a = p / q;
    cf.push_back(a);
    big_int rem = p - a * q;
    p = q;
    q = rem;
  }
  if (cf.size() == 1) {
    return encode_sequence({cf[0] - 1});
  }
  std::vector<big_int> seq{cf[0]};
  for (std::size_t i = 1; i + 1 < cf.size(); i++) {
    seq.push_back(cf[i] - 1);
  }
  seq.push_back(cf.back() - 2);
  return encode_sequence(seq);
}

inline rational decode_positive_rational(const big_int& v) {
  auto seq = decode_sequence(v);
  if (seq.size() == 1) {
    return rational(seq[0] + 1);
  }
  std::vector<big_int> cf{seq[0]};
  for (std::size_t i = 1; i + 1 < seq.size(); i++) {
    cf.push_back(seq[i] + 1);
  }
  cf.push_back(seq.back() + 2);
  rational x(cf.back());
  for (std::size_t i = cf.size() - 1; i-- > 0;) {
    x = rational(cf[i]) + 1 / x;
  }
  return x;
}

// 0 -> 0, r > 0 -> 2 N(r) + 1, r < 0 -> 2 N(-r) + 2.
inline big_int encode_rational(const rational& r) {
  if (r == 0) {
    return 0;
  }
  return r > 0 ? 2 * encode_positive_rational(r) + 1 : 2 * encode_positive_rational(-r) + 2;
}

inline rational decode_rational(const big_int& v) {
  if (v == 0) {
    return 0;
  }
  if (v % 2 == 1) {
    return decode_positive_rational((v - 1) / 2);
  }
  return -decode_positive_rational((v - 2) / 2);
}

inline big_int cantor_pair(const big_int& a, const big_int& b) { return (a + b) * (a + b + 1) / 2 + b; }

inline std::pair<big_int, big_int> cantor_unpair(const big_int& z) {
  big_int disc = 8 * z + 1;
  big_int w = (boost::multiprecision::sqrt(disc) - 1) / 2;
  big_int t = w * (w + 1) / 2;
  big_int b = z - t;
  return {w - b, b};
}

// Coefficient lists (c_1..c_L, c_L != 0) of code values: (v_1, ..., v_{L-1},
// v_L - 1) as a sequence; index = that code + 2, and 1 for the empty list.
inline big_int encode_coefficient_codes(std::vector<big_int> codes) {
  while (!codes.empty() && codes.back() == 0) {
    codes.pop_back();
  }
  if (codes.empty()) {
    return 1;
  }
  codes.back() -= 1;
  return encode_sequence(codes) + 2;
}

inline std::vector<big_int> decode_coefficient_codes(const big_int& m) {
  if (m < 1) {
    throw precondition_error("dictionary index must be >= 1");
  }
  if (m == 1) {
    return {};
  }
  auto codes = decode_sequence(m - 2);
  codes.back() += 1;
  return codes;
}

// The first count multi-indices over dim variables in grlex order.
inline std::vector<multi_index> grlex_prefix(std::size_t dim, std::size_t count) {
  std::vector<multi_index> out;
  for (int order = 0; out.size() < count; order++) {
    for (const auto& k : multi_indices_of_order(dim, order)) {
      if (out.size() == count) {
        break;
      }
      out.push_back(k);
    }
  }
  return out;
}

// Position of k in the grlex enumeration over k.size() variables.
inline std::size_t grlex_position(const multi_index& k) {
  std::size_t pos = 0;
  for (int order = 0; order < k.order(); order++) {
    pos += multi_indices_of_order(k.size(), order).size();
  }
  auto same = multi_indices_of_order(k.size(), k.order());
  return pos + static_cast<std::size_t>(std::find(same.begin(), same.end(), k) - same.begin());
}

}  // namespace encoding

// Enumeration u_1, u_2, ... of all polynomials in `variables` unknowns with
// rational coefficients, u_1 = 0. The index of p is computed from its grlex
// coefficient list, so lookup is exact and stable across runs.
class polynomial_dictionary {
 public:
  explicit polynomial_dictionary(std::size_t variables) : vars_(variables) {
    if (variables == 0) {
      throw dimension_error("polynomial_dictionary: need at least one variable");
    }
  }

  std::size_t variables() const { return vars_; }

  big_int index_of(const rational_polynomial& p) const {
    if (p.dim() != vars_) {
      throw dimension_error("polynomial_dictionary: wrong variable count");
    }
    std::vector<big_int> codes;
    for (const auto& [k, c] : p.terms()) {
      auto pos = encoding::grlex_position(k);
      if (codes.size() <= pos) {
        codes.resize(pos + 1, 0);
      }
      codes[pos] = encoding::encode_rational(c);
    }
    return encoding::encode_coefficient_codes(codes);
  }

  rational_polynomial polynomial_at(const big_int& m) const {
    auto codes = encoding::decode_coefficient_codes(m);
    auto monos = encoding::grlex_prefix(vars_, codes.size());
    rational_polynomial p(vars_);
    for (std::size_t i = 0; i < codes.size(); i++) {
      p.add_term(monos[i], encoding::decode_rational(codes[i]));
    }
    return p;
  }

  // Double-precision copy of u_m, decoded once and cached.
  std::shared_ptr<const polynomial> numeric(const big_int& m) const {
    std::lock_guard<std::mutex> lock(*mutex_);
    auto it = cache_->find(m);
    if (it != cache_->end()) {
      return it->second;
    }
    auto p = std::make_shared<const polynomial>(polynomial_at(m).template cast<double>());
    cache_->emplace(m, p);
    return p;
  }

 private:
  std::size_t vars_;
  std::shared_ptr<std::mutex> mutex_ = std::make_shared<std::mutex>();
  std::shared_ptr<std::map<big_int, std::shared_ptr<const polynomial>>> cache_ =
      std::make_shared<std::map<big_int, std::shared_ptr<const polynomial>>>();
};

// Enumeration of polynomials in w and conj(w) (one complex variable) with
// Gaussian-rational coefficients; monomials w^a conj(w)^b in grlex order of
// (a, b), coefficients coded by the Cantor pair of the real and imaginary codes.
class complex_polynomial_dictionary {
 public:
  big_int index_of(const gaussian_polynomial& p) const {
    if (p.dim() != 1) {
      throw dimension_error("complex_polynomial_dictionary: profiles are univariate");
    }
    std::vector<big_int> codes;
    for (const auto& [key, c] : p.terms()) {
      auto pos = encoding::grlex_position(multi_index{key.k[0], key.l[0]});
      if (codes.size() <= pos) {
        codes.resize(pos + 1, 0);
      }
      codes[pos] = encoding::cantor_pair(encoding::encode_rational(c.re), encoding::encode_rational(c.im));
    }
    return encoding::encode_coefficient_codes(codes);
  }

  gaussian_polynomial polynomial_at(const big_int& m) const {
    auto codes = encoding::decode_coefficient_codes(m);
    auto monos = encoding::grlex_prefix(2, codes.size());
    gaussian_polynomial p(1);
    for (std::size_t i = 0; i < codes.size(); i++) {
      auto [re, im] = encoding::cantor_unpair(codes[i]);
      p.add_term(multi_index{monos[i][0]}, multi_index{monos[i][1]},
                 gaussian_rational(encoding::decode_rational(re), encoding::decode_rational(im)));
    }
    return p;
  }

  std::shared_ptr<const complex_polynomial> numeric(const big_int& m) const {
    std::lock_guard<std::mutex> lock(*mutex_);
    auto it = cache_->find(m);
    if (it != cache_->end()) {
      return it->second;
    }
    auto p = std::make_shared<const complex_polynomial>(polynomial_at(m).to_complex_double());
    cache_->emplace(m, p);
    return p;
  }

 private:
  std::shared_ptr<std::mutex> mutex_ = std::make_shared<std::mutex>();
  std::shared_ptr<std::map<big_int, std::shared_ptr<const complex_polynomial>>> cache_ =
      std::make_shared<std::map<big_int, std::shared_ptr<const complex_polynomial>>>();
};

}  // namespace ridgekit
