#pragma once

// Exact integer lattices: incremental Hermite normal form and a two-sided
// diagonalization with unimodular transforms.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "error.hpp"

namespace wpc {

using Integer = boost::multiprecision::cpp_int;
using IntVector = std::vector<Integer>;
using IntMatrix = std::vector<IntVector>;

template <typename T>
IntVector to_integers(std::vector<T> const& v) {
  return IntVector(v.begin(), v.end());
}

namespace detail {

// Floor division for a possibly negative numerator.
inline Integer floor_div(Integer const& a, Integer const& b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// g = gcd(a, b) = x a + y b, g >= 0.
inline Integer ext_gcd(Integer a, Integer b, Integer& x, Integer& y) {
  Integer x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    Integer q = a / b;
    Integer t = a - q * b;
    a = b;
    b = t;
    t = x0 - q * x1;
    x0 = x1;
    x1 = t;
    t = y0 - q * y1;
    y0 = y1;
    y1 = t;
  }
  if (a < 0) {
    a = -a;
    x0 = -x0;
    y0 = -y0;
  }
  x = x0;
  y = y0;
  return a;
}

}  // namespace detail

// Row lattice kept in echelon form: one row per pivot column, positive pivot.
class IntegerLattice {
 public:
  explicit IntegerLattice(std::size_t dimension = 0) : dim_(dimension) {}

  std::size_t dimension() const noexcept { return dim_; }
  std::size_t rank() const noexcept { return rows_.size(); }

  void add(IntVector v) {
    check(v);
    while (true) {
      auto c = leading(v, 0);
      if (c == dim_) return;
      auto it = rows_.find(c);
      if (it == rows_.end()) {
        if (v[c] < 0) negate(v);
        rows_.emplace(c, std::move(v));
        return;
      }
      IntVector& p = it->second;
      if (v[c] % p[c] == 0) {
        axpy(v, -(v[c] / p[c]), p, c);
        continue;
      }
      Integer x, y;
      Integer g = detail::ext_gcd(p[c], v[c], x, y);
      Integer pc = p[c] / g;
      Integer vc = v[c] / g;
      IntVector np(dim_);
      IntVector nv(dim_);
      for (std::size_t i = c; i < dim_; ++i) {
        np[i] = x * p[i] + y * v[i];
        nv[i] = pc * v[i] - vc * p[i];
      }
      p = std::move(np);
      v = std::move(nv);
    }
  }

  template <typename T>
  void add(std::vector<T> const& v) {
    add(to_integers(v));
  }

  bool contains(IntVector t) const {
    check(t);
    return reduce(t, dim_);
  }

  template <typename T>
  bool contains(std::vector<T> const& t) const {
    return contains(to_integers(t));
  }

  // Subtracts pivot rows with pivot column < limit; false if some column
  // before limit cannot be cleared. On success t[0..limit) is zero.
  bool reduce(IntVector& t, std::size_t limit) const {
    std::size_t c = 0;
    while (true) {
      c = leading(t, c);
      if (c >= limit) return true;
      auto it = rows_.find(c);
      if (it == rows_.end()) return false;
      IntVector const& p = it->second;
      if (t[c] % p[c] != 0) return false;
      axpy(t, -(t[c] / p[c]), p, c);
    }
  }

  // Echelon basis, ordered by pivot column.
  IntMatrix basis() const {
    IntMatrix out;
    for (auto const& [c, row] : rows_) out.push_back(row);
    return out;
  }

  std::map<std::size_t, IntVector> const& rows() const noexcept { return rows_; }

 private:
  void check(IntVector const& v) const {
    if (v.size() != dim_) {
      throw Error(Errc::dimension_mismatch,
                  "vector of length " + std::to_string(v.size()) + " in lattice of dimension " +
                      std::to_string(dim_));
    }
  }

  std::size_t leading(IntVector const& v, std::size_t from) const {
    for (std::size_t i = from; i < dim_; ++i) {
      if (v[i] != 0) return i;
    }
    return dim_;
  }

  static void negate(IntVector& v) {
    for (auto& x : v) x = -x;
  }

  void axpy(IntVector& v, Integer const& a, IntVector const& p, std::size_t from) const {
    if (a == 0) return;
    for (std::size_t i = from; i < dim_; ++i) {
      if (p[i] != 0) v[i] += a * p[i];
    }
  }

  std::size_t dim_;
  std::map<std::size_t, IntVector> rows_;
};

inline bool lattice_membership(IntegerLattice const& lattice, IntVector const& target) {
  return lattice.contains(target);
}

// P * A * Q = D with P, Q unimodular and D diagonal (no divisibility chain
// is enforced). rank = number of nonzero diagonal entries, which come first.
struct Diagonalization {
  IntMatrix p;
  IntMatrix q;
  std::vector<Integer> d;  // length min(rows, cols)
  std::size_t rank = 0;
};

inline Diagonalization diagonalize(IntMatrix a, std::size_t cols) {
  std::size_t const rows = a.size();
  for (auto const& r : a) {
    if (r.size() != cols) throw Error(Errc::dimension_mismatch, "ragged matrix");
  }
  Diagonalization out;
  out.p.assign(rows, IntVector(rows));
  out.q.assign(cols, IntVector(cols));
  for (std::size_t i = 0; i < rows; ++i) out.p[i][i] = 1;
  for (std::size_t i = 0; i < cols; ++i) out.q[i][i] = 1;

  auto swap_rows = [&](std::size_t i, std::size_t j) {
    std::swap(a[i], a[j]);
    std::swap(out.p[i], out.p[j]);
  };
  auto swap_cols = [&](std::size_t i, std::size_t j) {
    for (auto& r : a) std::swap(r[i], r[j]);
    for (auto& r : out.q) std::swap(r[i], r[j]);
  };
  // row_i -= f * row_j
  auto row_op = [&](std::size_t i, std::size_t j, Integer const& f) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (a[j][c] != 0) a[i][c] -= f * a[j][c];
    }
    for (std::size_t c = 0; c < rows; ++c) {
      if (out.p[j][c] != 0) out.p[i][c] -= f * out.p[j][c];
    }
  };
  // col_i -= f * col_j
  auto col_op = [&](std::size_t i, std::size_t j, Integer const& f) {
    for (auto& r : a) {
      if (r[j] != 0) r[i] -= f * r[j];
    }
    for (auto& r : out.q) {
      if (r[j] != 0) r[i] -= f * r[j];
    }
  };

  std::size_t const n = std::min(rows, cols);
  std::size_t t = 0;
  for (; t < n; ++t) {
    while (true) {
      std::size_t bi = rows, bj = cols;
      Integer best = 0;
      for (std::size_t i = t; i < rows; ++i) {
        for (std::size_t j = t; j < cols; ++j) {
          if (a[i][j] == 0) continue;
          Integer v = abs(a[i][j]);
          if (bi == rows || v < best) {
            best = v;
            bi = i;
            bj = j;
          }
        }
      }
      if (bi == rows) break;
      if (bi != t) swap_rows(bi, t);
      if (bj != t) swap_cols(bj, t);
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a[i][t] == 0) continue;
        row_op(i, t, detail::floor_div(a[i][t], a[t][t]));
        if (a[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a[t][j] == 0) continue;
        col_op(j, t, detail::floor_div(a[t][j], a[t][t]));
        if (a[t][j] != 0) clean = false;
      }
      if (clean) break;
    }
    if (a[t][t] == 0) break;
  }
  out.rank = t;
  out.d.assign(n, 0);
  for (std::size_t i = 0; i < t; ++i) out.d[i] = a[i][i];
  return out;
}

}  // namespace wpc
