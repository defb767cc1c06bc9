#pragma once

// Rational polytopes, Hausdorff distance, pyramidal extensions and chains of
// them.

#include "normwalk/polytope.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <set>

namespace normwalk {

struct RationalHalfspace {
  IntVec normal;
  Rational offset;  // dot(normal, x) >= offset
  Rational slack(const RatVec& x) const { return dot(normal, x) - offset; }
  friend bool operator==(const RationalHalfspace&, const RationalHalfspace&) = default;
};

/// A polytope with rational vertices, stored as an integral dilate.
class RationalPolytope {
 public:
  RationalPolytope() = default;

  std::size_t ambient_dim() const { return scaled_.ambient_dim(); }
  int dim() const { return scaled_.dim(); }
  bool is_full_dimensional() const { return scaled_.is_full_dimensional(); }
  const std::vector<RationalPoint>& vertices() const { return vertices_; }
  const std::vector<RationalHalfspace>& facets() const { return facets_; }
  const std::vector<RationalHalfspace>& equations() const { return equations_; }
  const std::vector<std::vector<std::size_t>>& facet_vertices() const {
    return scaled_.facet_vertices();
  }
  /// scale() · P is a lattice polytope.
  const LatticePolytope& scaled() const { return scaled_; }
  const Integer& scale() const { return scale_; }

  bool contains(const RatVec& x) const {
    return scaled_.contains(normwalk::scale(x, Rational(scale_)));
  }

  friend bool operator==(const RationalPolytope& a, const RationalPolytope& b) {
    return a.vertices_ == b.vertices_;
  }
  friend bool operator!=(const RationalPolytope& a, const RationalPolytope& b) {
    return !(a == b);
  }

  friend RationalPolytope rational_hull(const std::vector<RationalPoint>& points);

 private:
  LatticePolytope scaled_;
  Integer scale_ = 1;
  std::vector<RationalPoint> vertices_;
  std::vector<RationalHalfspace> facets_, equations_;
};

inline RationalPolytope rational_hull(const std::vector<RationalPoint>& points) {
  if (points.empty()) throw PreconditionError("convex hull of an empty set");
  const std::size_t d = points.front().size();
  Integer l = 1;
  for (const auto& p : points) {
    require_same_size(p.size(), d, "point dimension");
    Integer k = clear_denominators(p).first;
    l = l / gcd(l, k) * k;
  }
  std::vector<LatticePoint> scaled;
  for (const auto& p : points) {
    LatticePoint x(d);
    for (std::size_t i = 0; i < d; ++i) x[i] = numerator(Rational(p[i] * l));
    scaled.push_back(std::move(x));
  }
  RationalPolytope r;
  r.scaled_ = convex_hull(std::move(scaled));
  r.scale_ = l;
  for (const auto& v : r.scaled_.vertices()) r.vertices_.push_back(RatVec(v.begin(), v.end()));
  for (auto& v : r.vertices_)
    for (auto& x : v) x /= l;
  for (const auto& f : r.scaled_.facets())
    r.facets_.push_back({f.normal, Rational(f.offset, l)});
  for (const auto& e : r.scaled_.equations())
    r.equations_.push_back({e.normal, Rational(e.offset, l)});
  return r;
}

inline RationalPolytope rational_hull(const LatticePolytope& p) {
  std::vector<RationalPoint> v;
  for (const auto& x : p.vertices()) v.push_back(to_rational(x));
  return rational_hull(v);
}

/// d! times the Euclidean volume for full-dimensional P, else 0.
inline Rational full_volume(const RationalPolytope& p) {
  if (!p.is_full_dimensional()) return 0;
  return Rational(normalized_volume(p.scaled()), ipow(p.scale(), static_cast<unsigned>(p.ambient_dim())));
}

inline bool is_subset(const RationalPolytope& p, const RationalPolytope& q) {
  require_same_size(p.ambient_dim(), q.ambient_dim(), "polytope dimension");
  return std::all_of(p.vertices().begin(), p.vertices().end(),
                     [&](const RatVec& v) { return q.contains(v); });
}

/// Q ∩ {x : dot(normal, x) >= offset}, or nothing if empty.
inline std::optional<RationalPolytope> intersect(const RationalPolytope& q,
                                                 const RationalHalfspace& h) {
  std::vector<std::pair<IntVec, Rational>> ineqs, eqs;
  for (const auto& f : q.facets()) ineqs.emplace_back(f.normal, f.offset);
  ineqs.emplace_back(h.normal, h.offset);
  for (const auto& e : q.equations()) eqs.emplace_back(e.normal, e.offset);
  auto verts = vertices_from_halfspaces<Rational>(q.ambient_dim(), ineqs, eqs);
  if (verts.empty()) return std::nullopt;
  return rational_hull(verts);
}

// ---------------------------------------------------------------------------
// Hausdorff distance

struct HausdorffDistance {
  Rational squared;
  std::optional<Rational> exact;  // set when squared is a rational square
  Rational lower, upper;          // enclosure of the distance
  std::string decimal;
};

namespace detail {

inline Integer isqrt(const Integer& n) { return boost::multiprecision::sqrt(n); }

// Rational enclosure of sqrt(r) with `digits` decimal places.
inline HausdorffDistance sqrt_enclosure(const Rational& r, unsigned digits) {
  HausdorffDistance h;
  h.squared = r;
  const Integer p = numerator(r), q = denominator(r);
  const Integer sp = isqrt(p), sq = isqrt(q);
  if (sp * sp == p && sq * sq == q) h.exact = Rational(sp, sq);
  const Integer scale = ipow(10, digits);
  // sqrt(p/q) = sqrt(p q) / q
  const Integer root = isqrt(p * q * scale * scale);
  h.lower = Rational(root, q * scale);
  h.upper = h.exact ? h.lower : Rational(root + 1, q * scale);
  if (h.exact) h.lower = h.upper = *h.exact;
  // Truncated decimal of the lower bound.
  const Integer t = floor(h.lower * scale);
  std::string digits_str = Integer(t % scale).str();
  digits_str.insert(0, digits - std::min<std::size_t>(digits, digits_str.size()), '0');
  h.decimal = Integer(t / scale).str() + "." + digits_str;
  return h;
}

// Vertex index sets of all nonempty faces.
inline std::vector<std::vector<std::size_t>> face_vertex_sets(const RationalPolytope& p) {
  std::set<std::vector<std::size_t>> faces;
  std::vector<std::size_t> all(p.vertices().size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  faces.insert(all);
  std::vector<std::vector<std::size_t>> frontier = p.facet_vertices();
  for (auto& f : frontier) faces.insert(f);
  while (!frontier.empty()) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& f : frontier)
      for (const auto& g : p.facet_vertices()) {
        std::vector<std::size_t> h;
        std::set_intersection(f.begin(), f.end(), g.begin(), g.end(), std::back_inserter(h));
        if (!h.empty() && faces.insert(h).second) next.push_back(h);
      }
    frontier = std::move(next);
  }
  for (std::size_t i = 0; i < all.size(); ++i) faces.insert({i});
  return {faces.begin(), faces.end()};
}

inline Rational squared_norm(const RatVec& v) { return dot(v, v); }

// Orthogonal projection of x onto the affine hull of pts.
inline RatVec project_affine(const std::vector<RationalPoint>& pts, const RatVec& x) {
  const RatVec& o = pts.front();
  std::vector<RatVec> dirs;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    RatVec dv = sub(pts[i], o);
    // Gram-Schmidt keeps only independent directions.
    for (const auto& b : dirs) dv = sub(dv, scale(b, dot(dv, b) / dot(b, b)));
    if (std::any_of(dv.begin(), dv.end(), [](const Rational& c) { return c != 0; }))
      dirs.push_back(std::move(dv));
  }
  RatVec diff = sub(x, o), p = o;
  for (const auto& b : dirs) p = add(p, scale(b, dot(diff, b) / dot(b, b)));
  return p;
}

}  // namespace detail

/// Squared Euclidean distance from x to P.
inline Rational squared_distance(const RatVec& x, const RationalPolytope& p) {
  require_same_size(x.size(), p.ambient_dim(), "point dimension");
  if (p.contains(x)) return 0;
  std::optional<Rational> best;
  for (const auto& face : detail::face_vertex_sets(p)) {
    std::vector<RationalPoint> pts;
    for (auto i : face) pts.push_back(p.vertices()[i]);
    RatVec proj = detail::project_affine(pts, x);
    if (!p.contains(proj)) continue;
    Rational d = detail::squared_norm(sub(x, proj));
    if (!best || d < *best) best = d;
  }
  return *best;
}

/// Squared Hausdorff distance; the supremum is attained at vertices.
inline Rational squared_hausdorff(const RationalPolytope& x, const RationalPolytope& y) {
  if (x.ambient_dim() != y.ambient_dim())
    throw DimensionMismatch("Hausdorff distance needs a common ambient space");
  Rational best = 0;
  for (const auto& v : x.vertices()) best = std::max(best, squared_distance(v, y));
  for (const auto& v : y.vertices()) best = std::max(best, squared_distance(v, x));
  return best;
}

inline HausdorffDistance hausdorff_distance(const RationalPolytope& x, const RationalPolytope& y,
                                            unsigned digits = 12) {
  return detail::sqrt_enclosure(squared_hausdorff(x, y), digits);
}

// ---------------------------------------------------------------------------
// Pyramids

struct PyramidWitness {
  RationalPoint apex;
  RationalPolytope base;
};

/// Every (apex, base facet) presentation of Q as a pyramid.
inline std::vector<PyramidWitness> pyramid_presentations(const RationalPolytope& q) {
  if (q.dim() < 1) throw PreconditionError("pyramid test needs dim >= 1");
  std::vector<PyramidWitness> out;
  const auto& fv = q.facet_vertices();
  for (std::size_t v = 0; v < q.vertices().size(); ++v) {
    std::size_t missing = 0, facet = 0;
    for (std::size_t i = 0; i < fv.size(); ++i)
      if (!std::binary_search(fv[i].begin(), fv[i].end(), v)) {
        ++missing;
        facet = i;
      }
    if (missing != 1 || fv[facet].size() + 1 != q.vertices().size()) continue;
    std::vector<RationalPoint> base;
    for (auto i : fv[facet]) base.push_back(q.vertices()[i]);
    out.push_back({q.vertices()[v], rational_hull(base)});
  }
  return out;
}

inline std::optional<PyramidWitness> is_pyramid(const RationalPolytope& q) {
  auto all = pyramid_presentations(q);
  if (all.empty()) return std::nullopt;
  return all.front();
}

namespace detail {

// Coordinates on which the projection is injective on the affine hull of q.
inline std::vector<std::size_t> chart_coordinates(const RationalPolytope& q) {
  const IntMatrix& basis = q.scaled().frame().basis;
  std::vector<std::size_t> chosen;
  IntMatrix cols;  // selected columns of basis, as rows
  for (std::size_t j = 0; j < q.ambient_dim() && chosen.size() < basis.size(); ++j) {
    IntVec col;
    for (const auto& row : basis) col.push_back(row[j]);
    cols.push_back(col);
    if (rank(cols) == cols.size()) {
      chosen.push_back(j);
    } else {
      cols.pop_back();
    }
  }
  return chosen;
}

inline RationalPolytope project(const RationalPolytope& p, const std::vector<std::size_t>& coords) {
  std::vector<RationalPoint> pts;
  for (const auto& v : p.vertices()) {
    RatVec y;
    for (auto j : coords) y.push_back(v[j]);
    pts.push_back(std::move(y));
  }
  return rational_hull(pts);
}

}  // namespace detail

struct ExtensionResult {
  bool holds = false;
  std::string reason;                 // why it fails, empty on success
  std::optional<RationalPoint> apex;  // new vertex of Q, when unique
  std::optional<RationalPolytope> delta;  // closure(Q \ P), in ambient coordinates
  bool pyramid_over_base = false;     // Q itself is a pyramid over P
};

/// P ⊂ Q is a pyramidal extension: closure(Q \ P) is a pyramid meeting P in a
/// facet of itself.
inline ExtensionResult is_pyramidal_extension(const RationalPolytope& p,
                                              const RationalPolytope& q) {
  if (!is_subset(p, q)) throw PreconditionError("pyramidal extension needs P ⊆ Q");
  ExtensionResult r;
  if (p == q) {
    r.reason = "P equals Q";
    return r;
  }
  std::vector<RationalPoint> fresh;
  for (const auto& v : q.vertices())
    if (!std::binary_search(p.vertices().begin(), p.vertices().end(), v)) fresh.push_back(v);
  if (fresh.size() == 1) r.apex = fresh.front();

  if (p.dim() + 1 == q.dim()) {
    bool base_kept = std::all_of(p.vertices().begin(), p.vertices().end(), [&](const RatVec& v) {
      return std::binary_search(q.vertices().begin(), q.vertices().end(), v);
    });
    if (!base_kept || fresh.size() != 1) {
      r.reason = "Q is not a pyramid over P";
      return r;
    }
    r.holds = true;
    r.pyramid_over_base = true;
    r.delta = q;
    return r;
  }
  if (p.dim() != q.dim()) {
    r.reason = "dimension gap larger than one";
    return r;
  }
  if (!q.is_full_dimensional()) {
    auto coords = detail::chart_coordinates(q);
    auto sub = is_pyramidal_extension(detail::project(p, coords), detail::project(q, coords));
    r.holds = sub.holds;
    r.reason = sub.reason;
    if (r.holds) {
      // Δ is the hull of the vertices of Q beyond the stacking facet, lifted.
      std::vector<RationalPoint> lifted;
      for (const auto& v : q.vertices()) {
        RatVec y;
        for (auto j : coords) y.push_back(v[j]);
        if (sub.delta->contains(y)) lifted.push_back(v);
      }
      for (const auto& v : p.vertices()) {
        RatVec y;
        for (auto j : coords) y.push_back(v[j]);
        if (sub.delta->contains(y)) lifted.push_back(v);
      }
      r.delta = rational_hull(lifted);
    }
    return r;
  }

  const Rational vp = full_volume(p), vq = full_volume(q);
  for (std::size_t i = 0; i < p.facets().size(); ++i) {
    const auto& f = p.facets()[i];
    RationalHalfspace beyond{scale(f.normal, Integer(-1)), -f.offset};
    auto delta = intersect(q, beyond);
    if (!delta || !delta->is_full_dimensional()) continue;
    if (full_volume(*delta) + vp != vq) {
      r.reason = "Q \\ P is not contained beyond a single facet of P";
      return r;
    }
    // Δ ∩ P must be the whole facet F.
    std::vector<RationalPoint> face;
    for (auto k : p.facet_vertices()[i]) face.push_back(p.vertices()[k]);
    std::vector<RationalPoint> contact;
    for (const auto& v : delta->vertices())
      if (f.slack(v) == 0) contact.push_back(v);
    if (contact.empty() || rational_hull(contact) != rational_hull(face)) {
      r.reason = "Δ ∩ P is not a facet of P";
      return r;
    }
    if (!is_pyramid(*delta)) {
      r.reason = "closure(Q \\ P) is not a pyramid";
      return r;
    }
    r.holds = true;
    r.delta = std::move(delta);
    return r;
  }
  r.reason = "difference not a pyramid candidate";
  return r;
}

// ---------------------------------------------------------------------------
// Chains

enum class ChainKind { pyramidal, quasi_pyramidal };

struct PyramidalChain {
  ChainKind kind = ChainKind::pyramidal;
  std::vector<RationalPolytope> chain;  // P_0 ⊂ ... ⊂ P_n
  std::vector<RationalPolytope> primes;  // quasi kind: P'_1 .. P'_n
  std::size_t steps() const { return chain.empty() ? 0 : chain.size() - 1; }
};

struct ChainCheck {
  bool valid = true;
  std::size_t failed_step = 0;  // 1-based, when invalid
  std::string reason;
};

inline ChainCheck check_chain(const PyramidalChain& c) {
  if (c.chain.empty()) throw PreconditionError("chain has no polytopes");
  if (c.kind == ChainKind::quasi_pyramidal && c.primes.size() != c.steps())
    throw PreconditionError("quasi-pyramidal chain needs one witness per step");
  if (c.kind == ChainKind::pyramidal && !c.primes.empty())
    throw PreconditionError("pyramidal chain takes no witnesses");
  auto fail = [](std::size_t i, std::string why) { return ChainCheck{false, i, std::move(why)}; };
  for (std::size_t i = 1; i < c.chain.size(); ++i) {
    const auto& prev = c.chain[i - 1];
    const auto& cur = c.chain[i];
    if (prev.ambient_dim() != cur.ambient_dim()) return fail(i, "ambient dimension changes");
    if (!is_subset(prev, cur) || prev == cur) return fail(i, "inclusion is not strict");
    if (c.kind == ChainKind::pyramidal) {
      auto ext = is_pyramidal_extension(prev, cur);
      if (!ext.holds) return fail(i, ext.reason);
    } else {
      const auto& prime = c.primes[i - 1];
      if (prime.ambient_dim() != cur.ambient_dim()) return fail(i, "witness dimension");
      if (!is_subset(c.chain.front(), prime)) return fail(i, "witness does not contain P_0");
      if (!is_subset(prime, prev)) return fail(i, "witness not inside P_{i-1}");
      if (prime == cur) return fail(i, "witness equals P_i");
      auto ext = is_pyramidal_extension(prime, cur);
      if (!ext.holds) return fail(i, ext.reason);
    }
  }
  return {};
}

inline bool verify_chain(const PyramidalChain& c) { return check_chain(c).valid; }

/// The same chain with witnesses P'_i = P_{i-1}.
inline PyramidalChain as_quasi(const PyramidalChain& c) {
  PyramidalChain q{ChainKind::quasi_pyramidal, c.chain, {}};
  for (std::size_t i = 1; i < c.chain.size(); ++i) q.primes.push_back(c.chain[i - 1]);
  return q;
}

struct DefectBound {
  std::vector<Rational> squared;  // d(P'_i, P_i)^2 per step
  Rational lower, upper;          // enclosure of the sum of distances
};

/// Σ d(P'_i, P_i) for a verified quasi-pyramidal chain: an upper bound on the
/// defect of (P_0, P_n).
inline DefectBound chain_defect(const PyramidalChain& c, unsigned digits = 12) {
  if (c.kind != ChainKind::quasi_pyramidal)
    throw PreconditionError("defect is defined for quasi-pyramidal chains");
  auto check = check_chain(c);
  if (!check.valid)
    throw PreconditionError("chain fails at step " + std::to_string(check.failed_step) + ": " +
                            check.reason);
  DefectBound b;
  for (std::size_t i = 0; i < c.primes.size(); ++i) {
    auto h = hausdorff_distance(c.primes[i], c.chain[i + 1], digits);
    b.squared.push_back(h.squared);
    b.lower += h.lower;
    b.upper += h.upper;
  }
  return b;
}

/// Greedy stacking from P toward Q. Each step stacks a pyramid on one facet
/// of the current polytope, with apex at a vertex of the part of Q that sees
/// only that facet; the largest added volume wins, ties go to the
/// lexicographically least apex. Returns a verified chain or nothing.
inline std::optional<PyramidalChain> search_pyramidal_chain(const RationalPolytope& p,
                                                            const RationalPolytope& q,
                                                            std::size_t budget) {
  if (!is_subset(p, q)) throw PreconditionError("chain search needs P ⊆ Q");
  PyramidalChain out;
  out.chain.push_back(p);
  while (out.chain.back() != q) {
    if (out.steps() >= budget) return std::nullopt;
    const RationalPolytope& cur = out.chain.back();
    std::optional<std::pair<Rational, RationalPoint>> best;
    auto consider = [&](const Rational& gain, const RationalPoint& z) {
      if (!best || gain > best->first || (gain == best->first && z < best->second))
        best = {gain, z};
    };
    if (cur.dim() < q.dim()) {
      // Raise the dimension by a pyramid over the current polytope.
      for (const auto& w : q.vertices()) {
        std::vector<RationalPoint> pts = cur.vertices();
        pts.push_back(w);
        if (rational_hull(pts).dim() == cur.dim() + 1) consider(0, w);
      }
    } else {
      const auto coords = q.is_full_dimensional() ? std::vector<std::size_t>{}
                                                  : detail::chart_coordinates(q);
      const RationalPolytope cq = coords.empty() ? cur : detail::project(cur, coords);
      const RationalPolytope qq = coords.empty() ? q : detail::project(q, coords);
      const Rational base_volume = full_volume(cq);
      for (std::size_t i = 0; i < cq.facets().size(); ++i) {
        std::vector<std::pair<IntVec, Rational>> ineqs;
        for (const auto& f : qq.facets()) ineqs.emplace_back(f.normal, f.offset);
        for (std::size_t k = 0; k < cq.facets().size(); ++k) {
          const auto& g = cq.facets()[k];
          if (k == i) {
            ineqs.emplace_back(scale(g.normal, Integer(-1)), -g.offset);
          } else {
            ineqs.emplace_back(g.normal, g.offset);
          }
        }
        const auto& f = cq.facets()[i];
        for (const auto& z : vertices_from_halfspaces<Rational>(qq.ambient_dim(), ineqs, {})) {
          if (f.slack(z) >= 0) continue;
          std::vector<RationalPoint> pts = cq.vertices();
          pts.push_back(z);
          Rational gain = full_volume(rational_hull(pts)) - base_volume;
          if (coords.empty()) {
            consider(gain, z);
            continue;
          }
          // Lift z back onto the affine hull of Q.
          std::vector<RationalPoint> qv;
          for (const auto& v : q.vertices()) qv.push_back(v);
          const IntMatrix& basis = q.scaled().frame().basis;
          const RatVec origin = scale(to_rational(q.scaled().frame().origin),
                                      Rational(Integer(1), q.scale()));
          RatMatrix a;
          RatVec rhs;
          for (std::size_t r = 0; r < coords.size(); ++r) {
            RatVec row;
            for (const auto& b : basis) row.push_back(Rational(b[coords[r]]));
            a.push_back(row);
            rhs.push_back(z[r] - origin[coords[r]]);
          }
          auto t = solve_rational(a, rhs, basis.size());
          if (!t) continue;
          RatVec lifted = origin;
          for (std::size_t k = 0; k < basis.size(); ++k)
            lifted = add(lifted, scale(to_rational(basis[k]), (*t)[k]));
          consider(gain, lifted);
        }
      }
    }
    if (!best) return std::nullopt;
    std::vector<RationalPoint> pts = cur.vertices();
    pts.push_back(best->second);
    out.chain.push_back(rational_hull(pts));
  }
  if (!verify_chain(out)) return std::nullopt;
  return out;
}

}  // namespace normwalk
