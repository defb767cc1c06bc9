#pragma once

// Integral closedness, normality, unimodular and smooth checks, the (UCP)
// falsifier, and bounded integral Carathéodory verification.

#include "normwalk/bits.hpp"
#include "normwalk/cones.hpp"
#include "normwalk/polytope.hpp"

#include <map>
#include <optional>
#include <set>

namespace normwalk {

/// z ∈ cP that is not a sum of c lattice points of P.
struct DecompositionWitness {
  Integer c;
  LatticePoint z;
  friend bool operator==(const DecompositionWitness&, const DecompositionWitness&) = default;
};

struct ClosureResult {
  bool holds = true;
  std::optional<DecompositionWitness> witness;
  Integer max_degree;  // largest c examined
};

namespace detail {

// Some x ∈ points with z - x ∈ (c-1)P. Tries the lattice points around z/c
// before scanning.
inline const LatticePoint* find_summand(const LatticePolytope& p,
                                        const std::vector<LatticePoint>& points,
                                        const std::set<LatticePoint>& point_set,
                                        const LatticePoint& z, const Integer& c) {
  const std::size_t d = z.size();
  const Integer rest = c - 1;
  LatticePoint base(d);
  for (std::size_t i = 0; i < d; ++i) base[i] = floor_div(z[i], c);
  if (d <= 4) {
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
      LatticePoint x = base;
      for (std::size_t i = 0; i < d; ++i)
        if (mask >> i & 1U) x[i] += 1;
      auto it = point_set.find(x);
      if (it != point_set.end() && p.contains_dilated(sub(z, x), rest)) return &*it;
    }
  }
  for (const auto& x : points)
    if (p.contains_dilated(sub(z, x), rest)) return &x;
  return nullptr;
}

}  // namespace detail

/// Checks c = 2..max(2, dim-1) in order. Higher degrees follow from the
/// degree bound on the Hilbert basis of the cone over P. The witness is the
/// lexicographically least failing z at the least failing c.
inline ClosureResult is_integrally_closed(const LatticePolytope& p) {
  ClosureResult r;
  const long top = std::max(2, p.dim() - 1);
  r.max_degree = top;
  if (p.dim() <= 1) return r;
  const auto points = lattice_points(p);
  const std::set<LatticePoint> point_set(points.begin(), points.end());
  for (long c = 2; c <= top; ++c) {
    // All z ∈ (c-1)P already decompose, so one summand suffices.
    std::optional<LatticePoint> worst;
    for_each_lattice_point(dilate(p, c), [&](const LatticePoint& z) {
      if (worst && !(z < *worst)) return;
      if (!detail::find_summand(p, points, point_set, z, c)) worst = z;
    });
    if (worst) {
      r.holds = false;
      r.witness = DecompositionWitness{c, *worst};
      r.max_degree = c;
      return r;
    }
  }
  return r;
}

/// Explicit x_1 + ... + x_c = z with x_i ∈ P ∩ Z^d, if one exists.
inline std::optional<std::vector<LatticePoint>> decompose(const LatticePolytope& p,
                                                          const Integer& c,
                                                          const LatticePoint& z) {
  if (c < 1) throw PreconditionError("decomposition degree must be positive");
  if (!p.contains_dilated(z, c)) return std::nullopt;
  const auto points = lattice_points(p);
  const std::set<LatticePoint> point_set(points.begin(), points.end());
  std::set<std::pair<Integer, LatticePoint>> failed;
  std::vector<LatticePoint> out;
  std::function<bool(const Integer&, const LatticePoint&)> rec =
      [&](const Integer& k, const LatticePoint& y) {
        if (k == 1) {
          if (!point_set.count(y)) return false;
          out.push_back(y);
          return true;
        }
        if (failed.count({k, y})) return false;
        for (const auto& x : points) {
          LatticePoint rest = sub(y, x);
          if (!p.contains_dilated(rest, k - 1)) continue;
          out.push_back(x);
          if (rec(k - 1, rest)) return true;
          out.pop_back();
        }
        failed.insert({k, y});
        return false;
      };
  if (!rec(c, z)) return std::nullopt;
  return out;
}

/// Cross-check: P is integrally closed iff the Hilbert basis of the cone over
/// P sits at height 1.
inline bool is_integrally_closed_via_hilbert(const LatticePolytope& p) {
  for (const auto& h : hilbert_basis(cone_over(p)).elements)
    if (h.back() != 1) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Normality with respect to Λ

/// P expressed in coordinates of its lattice-point subgroup: x = origin + a B.
struct LambdaChart {
  AffineSublattice lambda;
  LatticePolytope image;  // full-dimensional in Z^rank

  IntVec to_lambda(const LatticePoint& x) const {
    auto a = solve_rational(to_rational(transpose(lambda.basis, x.size())),
                            to_rational(sub(x, lambda.origin)), lambda.rank());
    if (!a) throw PreconditionError("point outside the affine span of Λ");
    IntVec r;
    for (const auto& v : *a) {
      if (boost::multiprecision::denominator(v) != 1)
        throw PreconditionError("point outside the lattice Λ");
      r.push_back(boost::multiprecision::numerator(v));
    }
    return r;
  }

  /// Maps a point of c·image back to c·P.
  LatticePoint from_lambda(const IntVec& a, const Integer& c) const {
    LatticePoint x = scale(lambda.origin, c);
    for (std::size_t i = 0; i < a.size(); ++i) x = add(x, scale(lambda.basis[i], a[i]));
    return x;
  }
};

/// Requires dim P >= 1.
inline LambdaChart lambda_chart(const LatticePolytope& p) {
  if (p.dim() < 1) throw PreconditionError("Λ chart of a point");
  LambdaChart ch;
  ch.lambda = lambda_subgroup(lattice_points(p));
  std::vector<LatticePoint> img;
  for (const auto& v : p.vertices()) img.push_back(ch.to_lambda(v));
  ch.image = convex_hull(std::move(img));
  return ch;
}

inline ClosureResult is_normal(const LatticePolytope& p) {
  ClosureResult r;
  r.max_degree = std::max(2, p.dim() - 1);
  if (p.dim() <= 1) return r;
  LambdaChart ch = lambda_chart(p);
  r = is_integrally_closed(ch.image);
  if (r.witness) r.witness->z = ch.from_lambda(r.witness->z, r.witness->c);
  return r;
}

struct NormalityReport {
  bool integrally_closed = true;
  bool normal_wrt_lambda = true;
  std::optional<DecompositionWitness> ic_witness;
  std::optional<DecompositionWitness> normal_witness;
  Integer lambda_index;
};

inline NormalityReport normality_report(const LatticePolytope& p) {
  NormalityReport rep;
  auto ic = is_integrally_closed(p);
  rep.integrally_closed = ic.holds;
  rep.ic_witness = ic.witness;
  if (ic.holds) {
    rep.normal_wrt_lambda = true;
  } else {
    auto n = is_normal(p);
    rep.normal_wrt_lambda = n.holds;
    rep.normal_witness = n.witness;
  }
  rep.lambda_index = lambda_subgroup(p).index;
  return rep;
}

// ---------------------------------------------------------------------------
// Unimodular and smooth

/// A point counts as a unimodular 0-simplex.
inline bool is_unimodular_simplex(const LatticePolytope& p) {
  if (p.vertices().size() != static_cast<std::size_t>(p.dim()) + 1) return false;
  return p.dim() == 0 || normalized_volume(p) == 1;
}

struct SmoothResult {
  bool smooth = true;
  std::optional<LatticePoint> offending_vertex;
};

/// Primitive edge directions at v, sorted.
inline IntMatrix edge_directions(const LatticePolytope& p, std::size_t v) {
  const auto& verts = p.vertices();
  const std::size_t k = static_cast<std::size_t>(p.dim());
  std::vector<std::size_t> tight_v;
  for (std::size_t f = 0; f < p.facets().size(); ++f)
    if (p.facets()[f].slack(verts[v]) == 0) tight_v.push_back(f);
  IntMatrix dirs;
  for (std::size_t w = 0; w < verts.size(); ++w) {
    if (w == v) continue;
    IntMatrix common;
    for (auto f : tight_v)
      if (p.facets()[f].slack(verts[w]) == 0) common.push_back(p.facets()[f].normal);
    if (k == 1 || rank(common) == k - 1) dirs.push_back(primitive(sub(verts[w], verts[v])));
  }
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

inline SmoothResult is_smooth(const LatticePolytope& p) {
  if (!p.is_full_dimensional())
    throw PreconditionError("smoothness is defined for full-dimensional polytopes");
  SmoothResult r;
  const std::size_t d = p.ambient_dim();
  for (std::size_t v = 0; v < p.vertices().size(); ++v) {
    IntMatrix dirs = edge_directions(p, v);
    if (dirs.size() != d || abs(determinant(dirs)) != 1) {
      r.smooth = false;
      r.offending_vertex = p.vertices()[v];
      return r;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// (UCP) falsifier

struct UcpResult {
  std::optional<RationalPoint> counterexample;
  std::size_t samples_tested = 0;
  std::size_t unimodular_simplices = 0;
  bool input_normal = true;
  bool bits_exhausted = false;
};

namespace detail {

struct LocalSimplex {
  IntVec base;       // first vertex
  IntMatrix inv;     // integer inverse of the edge matrix (rows = edges)
};

// Barycentric test: y = base + lambda E with lambda >= 0, sum lambda <= 1.
inline bool in_local_simplex(const LocalSimplex& s, const RatVec& y) {
  const std::size_t k = s.base.size();
  RatVec diff(k);
  for (std::size_t i = 0; i < k; ++i) diff[i] = y[i] - Rational(s.base[i]);
  Rational total = 0;
  for (std::size_t j = 0; j < k; ++j) {
    Rational l = 0;
    for (std::size_t i = 0; i < k; ++i) l += diff[i] * Rational(s.inv[i][j]);
    if (l < 0) return false;
    total += l;
  }
  return total <= 1;
}

}  // namespace detail

/// Samples rational points of P and reports one lying in no unimodular
/// simplex spanned by lattice points of P. The schedule is the barycenter,
/// then the grids (1/q)Z^d ∩ P for q = 2, 3, 5, 7 in lexicographic order,
/// then random convex combinations of the vertices read from `bits`.
inline UcpResult ucp_falsify(const LatticePolytope& p, std::size_t trials,
                             BitSource* bits = nullptr) {
  UcpResult r;
  r.input_normal = is_normal(p).holds;
  const std::size_t k = static_cast<std::size_t>(p.dim());
  if (k == 0 || trials == 0) return r;
  const AffineFrame& fr = p.frame();

  std::vector<IntVec> local;
  for (const auto& x : lattice_points(p)) local.push_back(fr.to_local(x));
  std::vector<detail::LocalSimplex> simplices;
  std::vector<std::size_t> idx(k + 1);
  for (std::size_t i = 0; i <= k; ++i) idx[i] = i;
  const std::size_t n = local.size();
  std::uint64_t visited = 0;
  while (n >= k + 1) {
    if (++visited > enumeration_cap())
      throw ResourceCapExceeded("unimodular simplex enumeration exceeded cap");
    IntMatrix e;
    for (std::size_t i = 1; i <= k; ++i) e.push_back(sub(local[idx[i]], local[idx[0]]));
    Integer det = determinant(e);
    if (abs(det) == 1) simplices.push_back({local[idx[0]], integer_inverse(e)});
    std::size_t i = k + 1;
    while (i > 0 && idx[i - 1] == n - (k + 1) + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j <= k; ++j) idx[j] = idx[j - 1] + 1;
  }
  r.unimodular_simplices = simplices.size();

  auto covered = [&](const RatVec& y) {
    for (const auto& s : simplices)
      if (detail::in_local_simplex(s, y)) return true;
    return false;
  };
  auto to_global = [&](const RatVec& y) {
    RationalPoint x = to_rational(fr.origin);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < x.size(); ++j) x[j] += y[i] * Rational(fr.basis[i][j]);
    return x;
  };
  auto test = [&](const RatVec& y) {
    ++r.samples_tested;
    if (covered(y)) return false;
    r.counterexample = to_global(y);
    return true;
  };

  std::vector<IntVec> vert_local;
  for (const auto& v : p.vertices()) vert_local.push_back(fr.to_local(v));
  RatVec bary(k, Rational(0));
  for (const auto& v : vert_local)
    for (std::size_t i = 0; i < k; ++i) bary[i] += Rational(v[i]);
  for (auto& x : bary) x /= static_cast<long>(vert_local.size());
  if (test(bary)) return r;

  LatticePolytope local_p = convex_hull(vert_local);
  for (long q : {2L, 3L, 5L, 7L}) {
    for (const auto& z : lattice_points(dilate(local_p, q))) {
      if (r.samples_tested >= trials) return r;
      RatVec y;
      for (const auto& c : z) y.push_back(Rational(c, q));
      if (test(y)) return r;
    }
  }

  if (!bits) return r;
  try {
    while (r.samples_tested < trials) {
      RatVec y(k, Rational(0));
      Integer total = 0;
      std::vector<Integer> w;
      for (std::size_t i = 0; i < vert_local.size(); ++i) {
        w.push_back(bits->read_uint(16) + 1);
        total += w.back();
      }
      for (std::size_t i = 0; i < vert_local.size(); ++i)
        for (std::size_t j = 0; j < k; ++j)
          y[j] += Rational(w[i] * vert_local[i][j], total);
      if (test(y)) return r;
    }
  } catch (const BitSourceExhausted&) {
    r.bits_exhausted = true;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Integral Carathéodory

struct IcpResult {
  bool holds = true;
  std::size_t r = 0;
  Integer c_max;
  std::optional<DecompositionWitness> witness;  // needs more than r points
};

namespace detail {

class IcpSearch {
 public:
  IcpSearch(const LatticePolytope& p, std::vector<LatticePoint> points)
      : p_(p), points_(std::move(points)) {}

  // Whether z is a sum of c points using at most r distinct ones, picking
  // points from index `from` on.
  bool representable(const LatticePoint& z, const Integer& c, std::size_t r,
                     std::size_t from = 0) {
    if (c == 0) return is_zero(z);
    if (r == 0 || from >= points_.size()) return false;
    if (!p_.contains_dilated(z, c)) return false;
    auto key = std::make_tuple(from, c, r, z);
    if (failed_.count(key)) return false;
    for (std::size_t j = from; j < points_.size(); ++j) {
      for (Integer a = c; a >= 1; --a) {
        LatticePoint rest = sub(z, scale(points_[j], a));
        if (a == c) {
          if (is_zero(rest)) return true;
          continue;
        }
        if (representable(rest, c - a, r - 1, j + 1)) return true;
      }
    }
    failed_.insert(key);
    return false;
  }

 private:
  const LatticePolytope& p_;
  std::vector<LatticePoint> points_;
  std::set<std::tuple<std::size_t, Integer, std::size_t, LatticePoint>> failed_;
};

}  // namespace detail

/// For c = 1..c_max and z ∈ cP ∩ Z^d, searches for at most r lattice points
/// of P with positive integer weights summing to c and weighted sum z.
inline IcpResult icp_check_bounded(const LatticePolytope& p, std::size_t r,
                                   const Integer& c_max) {
  if (c_max < 2) throw PreconditionError("c_max must be at least 2");
  if (r < 1) throw PreconditionError("r must be positive");
  if (!is_integrally_closed(p).holds)
    throw PreconditionError("ICP check requires an integrally closed polytope");
  IcpResult res;
  res.r = r;
  res.c_max = c_max;
  detail::IcpSearch search(p, lattice_points(p));
  for (Integer c = 1; c <= c_max; ++c) {
    std::optional<LatticePoint> worst;
    for_each_lattice_point(dilate(p, c), [&](const LatticePoint& z) {
      if (worst && !(z < *worst)) return;
      if (!search.representable(z, c, r)) worst = z;
    });
    if (worst) {
      res.holds = false;
      res.witness = DecompositionWitness{c, *worst};
      return res;
    }
  }
  return res;
}

struct CRCertificate {
  std::size_t lower_bound = 0;
  std::size_t envelope_low = 0;   // dim + 1
  std::size_t envelope_high = 0;  // 2 dim
  IcpResult upper_bound_checked;  // holds at r = lower_bound
  std::optional<DecompositionWitness> witness;  // fails at r = lower_bound - 1
};

/// Least r >= dim + 1 for which the ICP check holds up to c_max.
inline CRCertificate caratheodory_bounds(const LatticePolytope& p, const Integer& c_max) {
  CRCertificate cert;
  const std::size_t dim = static_cast<std::size_t>(p.dim());
  cert.envelope_low = dim + 1;
  cert.envelope_high = std::max<std::size_t>(1, 2 * dim);
  const std::size_t n = lattice_point_count(p);
  for (std::size_t r = dim + 1;; ++r) {
    IcpResult res = icp_check_bounded(p, r, c_max);
    if (res.holds || r >= n) {
      cert.lower_bound = r;
      cert.upper_bound_checked = res;
      return cert;
    }
    cert.witness = res.witness;
  }
}

}  // namespace normwalk
