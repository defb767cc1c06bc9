#pragma once

// Integer and rational linear algebra: Hermite and Smith normal forms with
// unimodular witnesses, ranks, determinants, kernels and exact solving.

#include "normwalk/arith.hpp"

#include <utility>

namespace normwalk {

inline std::size_t num_cols(const IntMatrix& m, std::size_t fallback = 0) {
  return m.empty() ? fallback : m.front().size();
}

inline IntMatrix identity_matrix(std::size_t n) {
  IntMatrix m(n, IntVec(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline IntMatrix zero_matrix(std::size_t r, std::size_t c) {
  return IntMatrix(r, IntVec(c, 0));
}

template <class T>
std::vector<std::vector<T>> transpose(const std::vector<std::vector<T>>& m,
                                      std::size_t cols_if_empty = 0) {
  std::size_t r = m.size(), c = m.empty() ? cols_if_empty : m[0].size();
  std::vector<std::vector<T>> t(c, std::vector<T>(r));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) t[j][i] = m[i][j];
  return t;
}

template <class T>
std::vector<std::vector<T>> multiply(const std::vector<std::vector<T>>& a,
                                     const std::vector<std::vector<T>>& b) {
  if (a.empty()) return {};
  std::size_t inner = a[0].size();
  require_same_size(inner, b.size(), "matrix product");
  std::size_t cols = b.empty() ? 0 : b[0].size();
  std::vector<std::vector<T>> r(a.size(), std::vector<T>(cols, T(0)));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < inner; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) r[i][j] += a[i][k] * b[k][j];
    }
  return r;
}

template <class T>
std::vector<T> multiply(const std::vector<std::vector<T>>& a,
                        const std::vector<T>& x) {
  std::vector<T> r(a.size(), T(0));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = dot(a[i], x);
  return r;
}

/// x^T A for a row vector x.
inline IntVec left_multiply(const IntVec& x, const IntMatrix& a,
                            std::size_t cols) {
  require_same_size(x.size(), a.size(), "row-vector product");
  IntVec r(cols, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < cols; ++j) r[j] += x[i] * a[i][j];
  }
  return r;
}

// ---------------------------------------------------------------------------
// Hermite normal form

struct HermiteForm {
  IntMatrix h;  // row echelon, positive pivots, entries above pivots in [0, pivot)
  IntMatrix u;  // unimodular, u * m == h
  std::vector<std::size_t> pivot_cols;
  std::size_t rank() const { return pivot_cols.size(); }
};

namespace detail {

// Replaces rows (i, j) by a unimodular combination that puts gcd in row i
// and zero in row j at column col.
inline void gcd_rows(IntMatrix& a, IntMatrix* u, std::size_t i, std::size_t j,
                     std::size_t col) {
  const Integer x = a[i][col], y = a[j][col];
  if (y == 0) return;
  if (x != 0 && y % x == 0) {
    const Integer q = y / x;
    for (std::size_t k = 0; k < a[j].size(); ++k) a[j][k] -= q * a[i][k];
    if (u)
      for (std::size_t k = 0; k < (*u)[j].size(); ++k) (*u)[j][k] -= q * (*u)[i][k];
    return;
  }
  auto [g, s, t] = extended_gcd(x, y);
  Integer xg = x / g, yg = y / g;
  auto combine = [&](IntVec& ri, IntVec& rj) {
    for (std::size_t k = 0; k < ri.size(); ++k) {
      Integer ni = s * ri[k] + t * rj[k];
      Integer nj = xg * rj[k] - yg * ri[k];
      ri[k] = std::move(ni);
      rj[k] = std::move(nj);
    }
  };
  combine(a[i], a[j]);
  if (u) combine((*u)[i], (*u)[j]);
}

}  // namespace detail

inline HermiteForm hermite_form(const IntMatrix& m, std::size_t cols_if_empty = 0) {
  HermiteForm r;
  r.h = m;
  r.u = identity_matrix(m.size());
  const std::size_t rows = m.size(), cols = num_cols(m, cols_if_empty);
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < rows; ++col) {
    std::size_t first = rows;
    for (std::size_t i = row; i < rows; ++i)
      if (r.h[i][col] != 0) {
        first = i;
        break;
      }
    if (first == rows) continue;
    if (first != row) {
      std::swap(r.h[first], r.h[row]);
      std::swap(r.u[first], r.u[row]);
    }
    for (std::size_t i = row + 1; i < rows; ++i)
      detail::gcd_rows(r.h, &r.u, row, i, col);
    if (r.h[row][col] < 0) {
      for (auto& x : r.h[row]) x = -x;
      for (auto& x : r.u[row]) x = -x;
    }
    const Integer& p = r.h[row][col];
    for (std::size_t k = 0; k < row; ++k) {
      Integer q = floor_div(r.h[k][col], p);
      if (q == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) r.h[k][j] -= q * r.h[row][j];
      for (std::size_t j = 0; j < rows; ++j) r.u[k][j] -= q * r.u[row][j];
    }
    r.pivot_cols.push_back(col);
    ++row;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Smith normal form

struct SmithForm {
  IntMatrix d;  // diagonal, d_1 | d_2 | ..., nonnegative
  IntMatrix u;  // unimodular rows
  IntMatrix v;  // unimodular columns; u * m * v == d
  std::vector<Integer> invariant_factors() const {
    std::vector<Integer> f;
    for (std::size_t i = 0; i < d.size() && i < num_cols(d); ++i)
      if (d[i][i] != 0) f.push_back(d[i][i]);
    return f;
  }
};

inline SmithForm smith_form(const IntMatrix& m, std::size_t cols_if_empty = 0) {
  const std::size_t rows = m.size(), cols = num_cols(m, cols_if_empty);
  SmithForm r{m, identity_matrix(rows), identity_matrix(cols)};
  IntMatrix& a = r.d;
  // Column operations act on the columns of both a and v.
  auto col_gcd = [&](std::size_t i, std::size_t j, std::size_t row) {
    const Integer x = a[row][i], y = a[row][j];
    if (y == 0) return;
    if (x != 0 && y % x == 0) {
      const Integer q = y / x;
      for (std::size_t k = 0; k < rows; ++k) a[k][j] -= q * a[k][i];
      for (std::size_t k = 0; k < cols; ++k) r.v[k][j] -= q * r.v[k][i];
      return;
    }
    auto [g, s, t] = extended_gcd(x, y);
    Integer xg = x / g, yg = y / g;
    for (std::size_t k = 0; k < rows; ++k) {
      Integer ni = s * a[k][i] + t * a[k][j];
      Integer nj = xg * a[k][j] - yg * a[k][i];
      a[k][i] = std::move(ni);
      a[k][j] = std::move(nj);
    }
    for (std::size_t k = 0; k < cols; ++k) {
      Integer ni = s * r.v[k][i] + t * r.v[k][j];
      Integer nj = xg * r.v[k][j] - yg * r.v[k][i];
      r.v[k][i] = std::move(ni);
      r.v[k][j] = std::move(nj);
    }
  };
  auto swap_cols = [&](std::size_t i, std::size_t j) {
    for (auto& row : a) std::swap(row[i], row[j]);
    for (auto& row : r.v) std::swap(row[i], row[j]);
  };

  const std::size_t n = std::min(rows, cols);
  for (std::size_t t = 0; t < n; ++t) {
    // Smallest nonzero entry of the trailing block becomes the pivot.
    std::size_t pi = rows, pj = cols;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (a[i][j] != 0 && (pi == rows || abs(a[i][j]) < abs(a[pi][pj]))) {
          pi = i;
          pj = j;
        }
    if (pi == rows) break;
    if (pi != t) {
      std::swap(a[pi], a[t]);
      std::swap(r.u[pi], r.u[t]);
    }
    if (pj != t) swap_cols(pj, t);

    for (;;) {
      for (std::size_t i = t + 1; i < rows; ++i)
        detail::gcd_rows(a, &r.u, t, i, t);
      for (std::size_t j = t + 1; j < cols; ++j) col_gcd(t, j, t);
      bool clear = true;
      for (std::size_t i = t + 1; i < rows; ++i)
        if (a[i][t] != 0) clear = false;
      if (!clear) continue;
      // Divisibility: the pivot must divide the whole trailing block.
      std::size_t bad = rows;
      for (std::size_t i = t + 1; i < rows && bad == rows; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (a[i][j] % a[t][t] != 0) {
            bad = i;
            break;
          }
      if (bad == rows) break;
      for (std::size_t j = 0; j < cols; ++j) a[t][j] += a[bad][j];
      for (std::size_t j = 0; j < rows; ++j) r.u[t][j] += r.u[bad][j];
    }
    if (a[t][t] < 0) {
      for (auto& x : a[t]) x = -x;
      for (auto& x : r.u[t]) x = -x;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Rank, determinant, solving

/// Fraction-free Gaussian elimination.
inline std::size_t rank(IntMatrix a) {
  if (a.empty()) return 0;
  const std::size_t rows = a.size(), cols = a[0].size();
  std::size_t r = 0;
  Integer prev = 1;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = rows;
    for (std::size_t i = r; i < rows; ++i)
      if (a[i][c] != 0) {
        p = i;
        break;
      }
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j)
        a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) / prev;
      a[i][c] = 0;
    }
    prev = a[r][c];
    ++r;
  }
  return r;
}

/// Bareiss determinant of a square matrix.
inline Integer determinant(IntMatrix a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  require_same_size(n, a[0].size(), "determinant of non-square matrix");
  Integer sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[p], a[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

/// One solution of a x = b over Q, if any.
inline std::optional<RatVec> solve_rational(RatMatrix a, RatVec b,
                                            std::size_t cols_if_empty = 0) {
  const std::size_t rows = a.size(), cols = a.empty() ? cols_if_empty : a[0].size();
  require_same_size(rows, b.size(), "solve");
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = rows;
    for (std::size_t i = r; i < rows; ++i)
      if (a[i][c] != 0) {
        p = i;
        break;
      }
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    std::swap(b[p], b[r]);
    Rational inv = 1 / a[r][c];
    for (std::size_t j = c; j < cols; ++j) a[r][j] *= inv;
    b[r] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      Rational f = a[i][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
      b[i] -= f * b[r];
    }
    pivots.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i)
    if (b[i] != 0) return std::nullopt;
  RatVec x(cols, Rational(0));
  for (std::size_t i = 0; i < r; ++i) x[pivots[i]] = b[i];
  return x;
}

inline RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix r;
  r.reserve(m.size());
  for (const auto& row : m) r.push_back(to_rational(row));
  return r;
}

/// Inverse of a nonsingular square matrix over Q.
inline RatMatrix inverse(const IntMatrix& m) {
  const std::size_t n = m.size();
  RatMatrix a = to_rational(m);
  RatMatrix inv(n, RatVec(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) throw PreconditionError("inverse of a singular matrix");
    std::swap(a[p], a[c]);
    std::swap(inv[p], inv[c]);
    Rational f = 1 / a[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      a[c][j] *= f;
      inv[c][j] *= f;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a[i][c] == 0) continue;
      Rational g = a[i][c];
      for (std::size_t j = 0; j < n; ++j) {
        a[i][j] -= g * a[c][j];
        inv[i][j] -= g * inv[c][j];
      }
    }
  }
  return inv;
}

/// Inverse of a unimodular matrix; throws if the inverse is not integral.
inline IntMatrix integer_inverse(const IntMatrix& m) {
  RatMatrix inv = inverse(m);
  IntMatrix r(inv.size(), IntVec(inv.size()));
  for (std::size_t i = 0; i < inv.size(); ++i)
    for (std::size_t j = 0; j < inv.size(); ++j) {
      if (boost::multiprecision::denominator(inv[i][j]) != 1)
        throw PreconditionError("matrix is not unimodular");
      r[i][j] = boost::multiprecision::numerator(inv[i][j]);
    }
  return r;
}

// ---------------------------------------------------------------------------
// Lattices

/// Basis (rows) of {x in Z^n : m x = 0}.
inline IntMatrix integer_kernel(const IntMatrix& m, std::size_t n) {
  if (m.empty()) return identity_matrix(n);
  HermiteForm hf = hermite_form(transpose(m, n), m.size());
  IntMatrix basis(hf.u.begin() + static_cast<std::ptrdiff_t>(hf.rank()),
                  hf.u.end());
  if (basis.empty()) return basis;
  // A reduced echelon basis is canonical and usually short.
  HermiteForm reduced = hermite_form(basis);
  return IntMatrix(reduced.h.begin(),
                   reduced.h.begin() + static_cast<std::ptrdiff_t>(reduced.rank()));
}

/// Echelon basis (rows) of the subgroup of Z^n generated by the rows of m.
inline IntMatrix lattice_basis(const IntMatrix& m, std::size_t n) {
  if (m.empty()) return {};
  HermiteForm hf = hermite_form(m, n);
  return IntMatrix(hf.h.begin(), hf.h.begin() + static_cast<std::ptrdiff_t>(hf.rank()));
}

/// Basis of span_R(rows of m) ∩ Z^n.
inline IntMatrix saturated_basis(const IntMatrix& m, std::size_t n) {
  IntMatrix span = lattice_basis(m, n);
  if (span.empty()) return {};
  return integer_kernel(integer_kernel(span, n), n);
}

/// Index of the lattice spanned by the rows of basis inside its saturation
/// (the product of the invariant factors).
inline Integer lattice_index(const IntMatrix& basis, std::size_t n) {
  if (basis.empty()) return 1;
  Integer idx = 1;
  for (const auto& f : smith_form(basis, n).invariant_factors()) idx *= f;
  return idx;
}

}  // namespace normwalk
