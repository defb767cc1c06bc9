#pragma once

// Affine lattice frames and the double description method. Everything that
// needs facets (polytopes, cones, rational polytopes) funnels through here.

#include "normwalk/matrix.hpp"

#include <algorithm>
#include <cstdint>

namespace normwalk {

/// Coordinates on an affine hull: x = origin + sum_i y_i basis[i] with y in
/// Z^k, where basis generates (affine hull - origin) ∩ Z^d.
struct AffineFrame {
  std::size_t ambient = 0;
  LatticePoint origin;
  IntMatrix basis;      // k x d
  IntMatrix coords;     // k x d, dot(coords[i], basis[j]) == (i == j)
  IntMatrix equations;  // (d - k) x d, primitive; dot(e, x) == dot(e, origin)

  std::size_t dim() const { return basis.size(); }

  IntVec to_local(const LatticePoint& x) const {
    IntVec diff = sub(x, origin);
    IntVec y(dim());
    for (std::size_t i = 0; i < dim(); ++i) y[i] = dot(coords[i], diff);
    return y;
  }

  LatticePoint to_global(const IntVec& y) const {
    LatticePoint x = origin;
    for (std::size_t i = 0; i < dim(); ++i)
      if (y[i] != 0)
        for (std::size_t j = 0; j < ambient; ++j) x[j] += y[i] * basis[i][j];
    return x;
  }

  /// A global functional restricting to w on the local lattice.
  IntVec lift_functional(const IntVec& w) const {
    IntVec u(ambient, 0);
    for (std::size_t i = 0; i < dim(); ++i)
      if (w[i] != 0)
        for (std::size_t j = 0; j < ambient; ++j) u[j] += w[i] * coords[i][j];
    return u;
  }

  bool in_affine_hull(const LatticePoint& x) const {
    for (const auto& e : equations)
      if (dot(e, x) != dot(e, origin)) return false;
    return true;
  }
};

namespace detail {

inline AffineFrame frame_from_directions(std::size_t d, LatticePoint origin,
                                         const IntMatrix& directions) {
  AffineFrame f;
  f.ambient = d;
  f.origin = std::move(origin);
  f.basis = saturated_basis(directions, d);
  f.equations = f.basis.empty() ? identity_matrix(d) : integer_kernel(f.basis, d);
  for (auto& e : f.equations) e = primitive(e);
  const std::size_t k = f.basis.size();
  if (k == 0) return f;
  // U B V = [I | 0] because the basis is saturated; coords^T = V[:, :k] U.
  SmithForm s = smith_form(f.basis);
  f.coords = zero_matrix(k, d);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t x = 0; x < d; ++x) {
      Integer acc = 0;
      for (std::size_t i = 0; i < k; ++i) acc += s.v[x][i] * s.u[i][j];
      f.coords[j][x] = acc;
    }
  return f;
}

}  // namespace detail

/// Frame of the affine hull of a nonempty point set.
inline AffineFrame affine_frame(const std::vector<LatticePoint>& points) {
  if (points.empty()) throw PreconditionError("affine frame of an empty set");
  const std::size_t d = points.front().size();
  IntMatrix diffs;
  for (const auto& p : points) {
    require_same_size(p.size(), d, "point dimension");
    IntVec diff = sub(p, points.front());
    if (!is_zero(diff)) diffs.push_back(std::move(diff));
  }
  return detail::frame_from_directions(d, points.front(), diffs);
}

/// Frame of the linear span of a set of vectors (origin 0).
inline AffineFrame linear_frame(const std::vector<IntVec>& vectors, std::size_t d) {
  IntMatrix nonzero;
  for (const auto& v : vectors) {
    require_same_size(v.size(), d, "vector dimension");
    if (!is_zero(v)) nonzero.push_back(v);
  }
  return detail::frame_from_directions(d, IntVec(d, 0), nonzero);
}

// ---------------------------------------------------------------------------
// Double description

namespace detail {

class BitSet {
 public:
  explicit BitSet(std::size_t n = 0) : words_((n + 63) / 64, 0) {}
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }
  BitSet operator&(const BitSet& o) const {
    BitSet r = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] &= o.words_[i];
    return r;
  }
  bool subset_of(const BitSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }

 private:
  std::vector<std::uint64_t> words_;
};

}  // namespace detail

/// Extreme rays of the pointed cone {y in R^n : dot(a_i, y) >= 0}, primitive
/// and sorted. Requires rank(a) == n.
inline IntMatrix extreme_rays(const IntMatrix& a, std::size_t n) {
  const std::size_t m = a.size();
  // Initial simplicial cone from n independent constraints.
  std::vector<std::size_t> chosen;
  IntMatrix sel;
  for (std::size_t i = 0; i < m && chosen.size() < n; ++i) {
    if (is_zero(a[i])) continue;
    sel.push_back(a[i]);
    if (rank(sel) == sel.size())
      chosen.push_back(i);
    else
      sel.pop_back();
  }
  if (chosen.size() < n)
    throw PreconditionError("double description needs a full-rank system");

  struct Ray {
    IntVec r;
    detail::BitSet zeros;
  };
  std::vector<Ray> rays;
  RatMatrix inv = inverse(sel);
  for (std::size_t j = 0; j < n; ++j) {
    RatVec col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = inv[i][j];
    Ray ray{primitive(clear_denominators(col).second), detail::BitSet(m)};
    for (std::size_t i = 0; i < n; ++i)
      if (i != j) ray.zeros.set(chosen[i]);
    rays.push_back(std::move(ray));
  }

  std::vector<bool> done(m, false);
  for (auto i : chosen) done[i] = true;
  for (std::size_t c = 0; c < m; ++c) {
    if (done[c]) continue;
    done[c] = true;
    std::vector<std::size_t> pos, neg, zero;
    std::vector<Integer> val(rays.size());
    for (std::size_t r = 0; r < rays.size(); ++r) {
      val[r] = dot(a[c], rays[r].r);
      if (val[r] > 0)
        pos.push_back(r);
      else if (val[r] < 0)
        neg.push_back(r);
      else
        zero.push_back(r);
    }
    if (neg.empty()) {
      for (auto r : zero) rays[r].zeros.set(c);
      continue;
    }
    std::vector<Ray> next;
    for (auto p : pos) {
      for (auto q : neg) {
        detail::BitSet common = rays[p].zeros & rays[q].zeros;
        if (common.count() + 2 < n) continue;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r)
          if (r != p && r != q && common.subset_of(rays[r].zeros)) adjacent = false;
        if (!adjacent) continue;
        IntVec combo(n);
        for (std::size_t k = 0; k < n; ++k)
          combo[k] = val[p] * rays[q].r[k] - val[q] * rays[p].r[k];
        Ray ray{primitive(std::move(combo)), common};
        ray.zeros.set(c);
        next.push_back(std::move(ray));
      }
    }
    for (auto p : pos) next.push_back(std::move(rays[p]));
    for (auto z : zero) {
      rays[z].zeros.set(c);
      next.push_back(std::move(rays[z]));
    }
    rays = std::move(next);
  }
  IntMatrix out;
  out.reserve(rays.size());
  for (auto& r : rays) out.push_back(std::move(r.r));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Inward facet normals of the cone generated by vectors spanning R^n.
/// Returns an empty matrix together with pointed=false if the cone contains a
/// line.
struct ConeFacets {
  IntMatrix normals;
  bool pointed = true;
};

inline ConeFacets cone_facets(const IntMatrix& generators, std::size_t n) {
  ConeFacets out;
  if (n == 0) return out;
  IntMatrix rays = extreme_rays(generators, n);
  // The dual cone is full-dimensional exactly when the cone is pointed.
  out.pointed = rank(rays) == n;
  out.normals = std::move(rays);
  return out;
}

}  // namespace normwalk
