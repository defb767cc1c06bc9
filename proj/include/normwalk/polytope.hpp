#pragma once

// Lattice polytopes: V- and H-representations, lattice point enumeration,
// normalized volume, the subgroup generated by lattice points, dilation and
// facet width.

#include "normwalk/hull.hpp"

#include <array>
#include <functional>
#include <map>
#include <set>
#include <tuple>

namespace normwalk {

/// dot(normal, x) >= offset (facets) or == offset (equations).
struct Halfspace {
  IntVec normal;
  Integer offset;

  Integer slack(const LatticePoint& x) const { return dot(normal, x) - offset; }
  friend bool operator==(const Halfspace&, const Halfspace&) = default;
  friend auto operator<=>(const Halfspace& a, const Halfspace& b) {
    if (a.normal != b.normal) return a.normal < b.normal ? std::strong_ordering::less
                                                         : std::strong_ordering::greater;
    if (a.offset == b.offset) return std::strong_ordering::equal;
    return a.offset < b.offset ? std::strong_ordering::less
                               : std::strong_ordering::greater;
  }
};

/// A lattice polytope of any affine dimension. Immutable once built.
class LatticePolytope {
 public:
  LatticePolytope() = default;

  std::size_t ambient_dim() const { return frame_.ambient; }
  int dim() const { return static_cast<int>(frame_.dim()); }
  bool is_full_dimensional() const { return frame_.dim() == frame_.ambient; }

  /// Sorted lexicographically.
  const std::vector<LatticePoint>& vertices() const { return vertices_; }
  /// Primitive inward normals within the affine hull, sorted.
  const std::vector<Halfspace>& facets() const { return facets_; }
  const std::vector<Halfspace>& equations() const { return equations_; }
  const AffineFrame& frame() const { return frame_; }
  /// Vertex indices lying on each facet.
  const std::vector<std::vector<std::size_t>>& facet_vertices() const {
    return facet_vertices_;
  }

  /// x ∈ c·P.
  bool contains_dilated(const LatticePoint& x, const Integer& c) const {
    for (const auto& e : equations_)
      if (dot(e.normal, x) != c * e.offset) return false;
    for (const auto& f : facets_)
      if (dot(f.normal, x) < c * f.offset) return false;
    return true;
  }
  bool contains(const LatticePoint& x) const { return contains_dilated(x, 1); }

  bool contains(const RationalPoint& x) const {
    for (const auto& e : equations_)
      if (dot(e.normal, x) != Rational(e.offset)) return false;
    for (const auto& f : facets_)
      if (dot(f.normal, x) < Rational(f.offset)) return false;
    return true;
  }

  friend bool operator==(const LatticePolytope& a, const LatticePolytope& b) {
    return a.vertices_ == b.vertices_;
  }
  friend bool operator<(const LatticePolytope& a, const LatticePolytope& b) {
    return a.vertices_ < b.vertices_;
  }

 private:
  friend LatticePolytope convex_hull(std::vector<LatticePoint> points);
  friend LatticePolytope dilate(const LatticePolytope& p, const Integer& c);

  AffineFrame frame_;
  std::vector<LatticePoint> vertices_;
  std::vector<Halfspace> facets_;
  std::vector<Halfspace> equations_;
  std::vector<std::vector<std::size_t>> facet_vertices_;
};

inline LatticePolytope convex_hull(std::vector<LatticePoint> points) {
  if (points.empty()) throw PreconditionError("convex hull of an empty set");
  const std::size_t d = points.front().size();
  for (const auto& p : points) require_same_size(p.size(), d, "point dimension");
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  LatticePolytope poly;
  poly.frame_ = affine_frame(points);
  const AffineFrame& fr = poly.frame_;
  for (const auto& e : fr.equations)
    poly.equations_.push_back({e, dot(e, fr.origin)});
  std::sort(poly.equations_.begin(), poly.equations_.end());

  const std::size_t k = fr.dim();
  if (k == 0) {
    poly.vertices_ = {points.front()};
    return poly;
  }

  std::vector<IntVec> local;
  IntMatrix homog;
  for (const auto& p : points) {
    local.push_back(fr.to_local(p));
    IntVec h = local.back();
    h.push_back(1);
    homog.push_back(std::move(h));
  }
  IntMatrix rays = extreme_rays(homog, k + 1);

  // rays (w, w0): dot(w, y) + w0 >= 0; w is primitive because facets of a
  // lattice polytope pass through lattice points.
  std::vector<std::pair<IntVec, Integer>> local_facets;
  for (const auto& r : rays) {
    IntVec w(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(k));
    local_facets.emplace_back(std::move(w), -r[k]);
  }

  std::vector<bool> is_vertex(points.size(), false);
  for (std::size_t i = 0; i < points.size(); ++i) {
    IntMatrix tight;
    for (const auto& [w, b] : local_facets)
      if (dot(w, local[i]) == b) tight.push_back(w);
    is_vertex[i] = rank(tight) == k;
  }
  for (std::size_t i = 0; i < points.size(); ++i)
    if (is_vertex[i]) poly.vertices_.push_back(points[i]);

  std::vector<std::pair<Halfspace, std::vector<std::size_t>>> facets;
  for (const auto& [w, b] : local_facets) {
    Halfspace h;
    h.normal = fr.lift_functional(w);
    h.offset = dot(h.normal, fr.origin) + b;
    std::vector<std::size_t> on;
    for (std::size_t v = 0; v < poly.vertices_.size(); ++v)
      if (h.slack(poly.vertices_[v]) == 0) on.push_back(v);
    facets.emplace_back(std::move(h), std::move(on));
  }
  std::sort(facets.begin(), facets.end());
  for (auto& [h, on] : facets) {
    poly.facets_.push_back(std::move(h));
    poly.facet_vertices_.push_back(std::move(on));
  }
  return poly;
}

inline LatticePolytope dilate(const LatticePolytope& p, const Integer& c) {
  if (c < 1) throw PreconditionError("dilation factor must be positive");
  LatticePolytope q = p;
  for (auto& v : q.vertices_) v = scale(v, c);
  for (auto& f : q.facets_) f.offset *= c;
  for (auto& e : q.equations_) e.offset *= c;
  q.frame_.origin = scale(q.frame_.origin, c);
  return q;
}

// ---------------------------------------------------------------------------
// Lattice points

namespace detail {

// Inequalities (w, b) meaning dot(w, y) >= b for the projection of the local
// polytope onto its first j+1 coordinates, for each j.
inline std::vector<std::vector<std::pair<IntVec, Integer>>> prefix_projections(
    const LatticePolytope& p) {
  const AffineFrame& fr = p.frame();
  const std::size_t k = fr.dim();
  std::vector<IntVec> local;
  for (const auto& v : p.vertices()) local.push_back(fr.to_local(v));
  std::vector<std::vector<std::pair<IntVec, Integer>>> out(k);
  for (std::size_t j = 0; j < k; ++j) {
    if (j + 1 == k) {
      for (const auto& f : p.facets()) {
        IntVec w(k);
        for (std::size_t i = 0; i < k; ++i) w[i] = dot(f.normal, fr.basis[i]);
        out[j].emplace_back(std::move(w), f.offset - dot(f.normal, fr.origin));
      }
      break;
    }
    std::vector<LatticePoint> proj;
    for (const auto& y : local) proj.emplace_back(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(j + 1));
    LatticePolytope q = convex_hull(proj);
    for (const auto& f : q.facets()) out[j].emplace_back(f.normal, f.offset);
  }
  return out;
}

}  // namespace detail

/// Calls fn on every point of P ∩ Z^d (lexicographic in frame coordinates).
/// Throws ResourceCapExceeded when the scan exceeds enumeration_cap().
inline void for_each_lattice_point(const LatticePolytope& p,
                                   const std::function<void(const LatticePoint&)>& fn) {
  const AffineFrame& fr = p.frame();
  const std::size_t k = fr.dim();
  if (p.vertices().empty()) return;
  if (k == 0) {
    fn(p.vertices().front());
    return;
  }
  auto proj = detail::prefix_projections(p);
  IntVec y(k, 0);
  std::uint64_t visited = 0;
  const std::uint64_t cap = enumeration_cap();
  std::function<void(std::size_t)> rec = [&](std::size_t j) {
    bool has_lo = false, has_hi = false;
    Integer lo, hi;
    for (const auto& [w, b] : proj[j]) {
      Integer rest = b;
      for (std::size_t i = 0; i < j; ++i) rest -= w[i] * y[i];
      if (w[j] > 0) {
        Integer t = ceil_div(rest, w[j]);
        if (!has_lo || t > lo) lo = t;
        has_lo = true;
      } else if (w[j] < 0) {
        Integer t = floor_div(rest, w[j]);
        if (!has_hi || t < hi) hi = t;
        has_hi = true;
      } else if (rest > 0) {
        return;
      }
    }
    if (!has_lo || !has_hi) throw PreconditionError("unbounded lattice point scan");
    for (Integer t = lo; t <= hi; ++t) {
      if (++visited > cap)
        throw ResourceCapExceeded("lattice point enumeration exceeded cap");
      y[j] = t;
      if (j + 1 == k)
        fn(fr.to_global(y));
      else
        rec(j + 1);
    }
  };
  rec(0);
}

/// P ∩ Z^d, sorted lexicographically.
inline std::vector<LatticePoint> lattice_points(const LatticePolytope& p) {
  std::vector<LatticePoint> pts;
  for_each_lattice_point(p, [&](const LatticePoint& x) { pts.push_back(x); });
  std::sort(pts.begin(), pts.end());
  return pts;
}

inline std::size_t lattice_point_count(const LatticePolytope& p) {
  std::size_t n = 0;
  for_each_lattice_point(p, [&](const LatticePoint&) { ++n; });
  return n;
}

// ---------------------------------------------------------------------------
// Volume

namespace detail {

// Normalized volume relative to the affine lattice; 1 for a point.
inline Integer relative_volume(const LatticePolytope& p) {
  const int k = p.dim();
  if (k == 0) return 1;
  if (k == 1) {
    const AffineFrame& fr = p.frame();
    return abs(fr.to_local(p.vertices()[1])[0] - fr.to_local(p.vertices()[0])[0]);
  }
  // Cone from the first vertex over every facet missing it.
  const LatticePoint& apex = p.vertices().front();
  Integer vol = 0;
  for (std::size_t i = 0; i < p.facets().size(); ++i) {
    Integer h = p.facets()[i].slack(apex);
    if (h == 0) continue;
    std::vector<LatticePoint> fv;
    for (auto v : p.facet_vertices()[i]) fv.push_back(p.vertices()[v]);
    vol += h * relative_volume(convex_hull(std::move(fv)));
  }
  return vol;
}

}  // namespace detail

/// dim(P)! times the Euclidean volume in the affine hull, measured against
/// the induced lattice. Zero for a point.
inline Integer normalized_volume(const LatticePolytope& p) {
  if (p.dim() == 0) return 0;
  return detail::relative_volume(p);
}

// ---------------------------------------------------------------------------
// Sublattices

/// The subgroup generated by differences of lattice points of P.
struct AffineSublattice {
  LatticePoint origin;  // a lattice point of P
  IntMatrix basis;      // echelon basis, rows
  Integer index;        // [span ∩ Z^d : subgroup]
  std::size_t rank() const { return basis.size(); }
};

inline AffineSublattice lambda_subgroup(const std::vector<LatticePoint>& points) {
  if (points.empty()) throw PreconditionError("polytope contains no lattice point");
  const std::size_t d = points.front().size();
  IntMatrix diffs;
  for (const auto& x : points) {
    IntVec diff = sub(x, points.front());
    if (!is_zero(diff)) diffs.push_back(std::move(diff));
  }
  AffineSublattice s;
  s.origin = points.front();
  s.basis = lattice_basis(diffs, d);
  s.index = lattice_index(s.basis, d);
  return s;
}

inline AffineSublattice lambda_subgroup(const LatticePolytope& p) {
  return lambda_subgroup(lattice_points(p));
}

/// Both normal forms of m, each carrying its unimodular witnesses.
struct NormalForms {
  HermiteForm hermite;
  SmithForm smith;
};

inline NormalForms hnf_snf(const IntMatrix& m, std::size_t cols_if_empty = 0) {
  return {hermite_form(m, cols_if_empty), smith_form(m, cols_if_empty)};
}

// ---------------------------------------------------------------------------
// Widths

/// max_x dot(u_i, x) - b_i over P for each facet, in facet order.
inline std::vector<Integer> facet_widths(const LatticePolytope& p) {
  std::vector<Integer> w;
  for (const auto& f : p.facets()) {
    Integer best = 0;
    for (const auto& v : p.vertices()) best = std::max(best, f.slack(v));
    w.push_back(best);
  }
  return w;
}

/// Maximum lattice width over the facet directions, taken inside the affine
/// hull for lower-dimensional polytopes.
inline Integer facet_width(const LatticePolytope& p) {
  if (p.facets().empty()) throw PreconditionError("facet width of a point");
  auto w = facet_widths(p);
  return *std::max_element(w.begin(), w.end());
}

// ---------------------------------------------------------------------------
// H -> V

/// Vertices of {x : dot(f.normal, x) >= f.offset, dot(e.normal, x) == e.offset}
/// by brute force over hyperplane subsets. Intended for small systems.
template <class Offset>
std::vector<RationalPoint> vertices_from_halfspaces(
    std::size_t d, const std::vector<std::pair<IntVec, Offset>>& ineqs,
    const std::vector<std::pair<IntVec, Offset>>& eqs) {
  IntMatrix eq_rows;
  for (const auto& e : eqs) eq_rows.push_back(e.first);
  const std::size_t eq_rank = rank(eq_rows);
  const std::size_t need = d - eq_rank;
  std::vector<RationalPoint> out;
  const std::size_t m = ineqs.size();
  if (need > m) return out;
  std::vector<std::size_t> idx(need);
  for (std::size_t i = 0; i < need; ++i) idx[i] = i;
  auto feasible = [&](const RationalPoint& x) {
    for (const auto& [n, b] : ineqs)
      if (dot(n, x) < Rational(b)) return false;
    for (const auto& [n, b] : eqs)
      if (dot(n, x) != Rational(b)) return false;
    return true;
  };
  for (;;) {
    IntMatrix rows = eq_rows;
    RatVec rhs;
    for (const auto& e : eqs) rhs.push_back(Rational(e.second));
    for (auto i : idx) {
      rows.push_back(ineqs[i].first);
      rhs.push_back(Rational(ineqs[i].second));
    }
    if (rank(rows) == d) {
      auto x = solve_rational(to_rational(rows), rhs, d);
      if (x && feasible(*x)) out.push_back(std::move(*x));
    }
    // next combination
    std::size_t i = need;
    while (i > 0 && idx[i - 1] == m - need + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < need; ++j) idx[j] = idx[j - 1] + 1;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Re-derives the vertex set of P from its H-representation.
inline std::vector<RationalPoint> vertices_from_h(const LatticePolytope& p) {
  std::vector<std::pair<IntVec, Integer>> ineqs, eqs;
  for (const auto& f : p.facets()) ineqs.emplace_back(f.normal, f.offset);
  for (const auto& e : p.equations()) eqs.emplace_back(e.normal, e.offset);
  return vertices_from_halfspaces(p.ambient_dim(), ineqs, eqs);
}

// ---------------------------------------------------------------------------
// Fingerprint

/// Invariants of the Aff(Z^d)-class; equal fingerprints do not imply
/// equivalence.
struct Fingerprint {
  int dim = 0;
  std::size_t lattice_points = 0;
  Integer volume;
  std::vector<Integer> facet_widths;  // sorted
  std::array<std::size_t, 3> ehrhart{};  // |cP ∩ Z^d| for c = 1, 2, 3

  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
  friend bool operator<(const Fingerprint& a, const Fingerprint& b) {
    return std::tie(a.dim, a.lattice_points, a.volume, a.facet_widths, a.ehrhart) <
           std::tie(b.dim, b.lattice_points, b.volume, b.facet_widths, b.ehrhart);
  }
};

inline Fingerprint fingerprint(const LatticePolytope& p) {
  Fingerprint f;
  f.dim = p.dim();
  f.lattice_points = lattice_point_count(p);
  f.volume = normalized_volume(p);
  f.facet_widths = facet_widths(p);
  std::sort(f.facet_widths.begin(), f.facet_widths.end());
  for (int c = 1; c <= 3; ++c)
    f.ehrhart[static_cast<std::size_t>(c - 1)] = lattice_point_count(dilate(p, c));
  return f;
}

// ---------------------------------------------------------------------------
// Affine maps

/// conv(m v + t : v vertex of P).
inline LatticePolytope apply_affine(const LatticePolytope& p, const IntMatrix& m,
                                    const IntVec& t) {
  std::vector<LatticePoint> img;
  for (const auto& v : p.vertices()) img.push_back(add(multiply(m, v), t));
  return convex_hull(std::move(img));
}

inline LatticePolytope simplex(std::size_t d) {
  std::vector<LatticePoint> pts{IntVec(d, 0)};
  for (std::size_t i = 0; i < d; ++i) pts.push_back(unit_vector(d, i));
  return convex_hull(std::move(pts));
}

inline LatticePolytope cube(std::size_t d, const Integer& side = 1) {
  std::vector<LatticePoint> pts;
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    LatticePoint x(d, 0);
    for (std::size_t i = 0; i < d; ++i)
      if (mask >> i & 1U) x[i] = side;
    pts.push_back(std::move(x));
  }
  return convex_hull(std::move(pts));
}

}  // namespace normwalk
