#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <ostream>
#include <ridgekit/error.hpp>
#include <ridgekit/rational.hpp>
#include <vector>

namespace ridgekit {

class multi_index {
 public:
  multi_index() = default;

  explicit multi_index(std::size_t dim) : entries_(dim, 0) {}

  multi_index(std::initializer_list<int> entries) : entries_(entries) { check(); }

  explicit multi_index(std::vector<int> entries) : entries_(std::move(entries)) { check(); }

  std::size_t size() const { return entries_.size(); }

  int operator[](std::size_t i) const { return entries_[i]; }

  void set(std::size_t i, int value) {
    if (value < 0) {
      throw precondition_error("multi-index entries must be non-negative");
    }
    entries_[i] = value;
  }

  const std::vector<int>& entries() const { return entries_; }

  int order() const { return std::accumulate(entries_.begin(), entries_.end(), 0); }

  big_int factorial() const {
    big_int f = 1;
    for (auto e : entries_) {
      for (int j = 2; j <= e; j++) {
        f *= j;
      }
    }
    return f;
  }

  friend bool operator==(const multi_index& a, const multi_index& b) = default;

  friend multi_index operator+(const multi_index& a, const multi_index& b) {
    if (a.size() != b.size()) {
      throw dimension_error("multi-index length mismatch");
    }
    multi_index c(a.size());
    for (std::size_t i = 0; i < a.size(); i++) {
      c.entries_[i] = a.entries_[i] + b.entries_[i];
    }
    return c;
  }

  friend std::ostream& operator<<(std::ostream& os, const multi_index& k) {
    os << '(';
    for (std::size_t i = 0; i < k.size(); i++) {
      os << (i ? "," : "") << k[i];
    }
    return os << ')';
  }

 private:
  void check() const {
    if (std::any_of(entries_.begin(), entries_.end(), [](int e) { return e < 0; })) {
      throw precondition_error("multi-index entries must be non-negative");
    }
  }

  std::vector<int> entries_;
};

// Graded lexicographic order: lower total degree first; within a degree,
// larger leading exponents first, so x1 precedes x2.
struct grlex_less {
  bool operator()(const multi_index& a, const multi_index& b) const {
    auto oa = a.order();
    auto ob = b.order();
    if (oa != ob) {
      return oa < ob;
    }
    return std::lexicographical_compare(b.entries().begin(), b.entries().end(),
                                        a.entries().begin(), a.entries().end());
  }
};

// Same grading, reversed tie-break within a degree.
struct grlex_reversed_less {
  bool operator()(const multi_index& a, const multi_index& b) const {
    auto oa = a.order();
    auto ob = b.order();
    if (oa != ob) {
      return oa < ob;
    }
    return a.entries() < b.entries();
  }
};

namespace detail {

inline void enumerate_order(std::size_t dim, int remaining, std::size_t pos, std::vector<int>& cur,
                            std::vector<multi_index>& out) {
  if (pos + 1 == dim) {
    cur[pos] = remaining;
    out.emplace_back(cur);
    return;
  }
  for (int e = remaining; e >= 0; e--) {
    cur[pos] = e;
    enumerate_order(dim, remaining - e, pos + 1, cur, out);
  }
}

}  // namespace detail

// All multi-indices of the given order, in grlex order.
inline std::vector<multi_index> multi_indices_of_order(std::size_t dim, int order) {
  std::vector<multi_index> out;
  if (dim == 0 || order < 0) {
    return out;
  }
  std::vector<int> cur(dim, 0);
  detail::enumerate_order(dim, order, 0, cur, out);
  return out;
}

// All multi-indices of order <= max_order, in grlex order.
inline std::vector<multi_index> multi_indices_up_to(std::size_t dim, int max_order) {
  std::vector<multi_index> out;
  for (int s = 0; s <= max_order; s++) {
    auto level = multi_indices_of_order(dim, s);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

}  // namespace ridgekit
