#pragma once

// Rational cones, Hilbert bases, homogenization, monoid membership and the
// single-step cone extension test.

#include "normwalk/polytope.hpp"

#include <map>
#include <optional>
#include <set>

namespace normwalk {

class RationalCone {
 public:
  RationalCone() = default;

  std::size_t ambient_dim() const { return frame_.ambient; }
  int dim() const { return static_cast<int>(frame_.dim()); }
  bool is_pointed() const { return pointed_; }

  /// Primitive extreme rays, sorted. For a non-pointed cone these are the
  /// reduced input generators.
  const IntMatrix& generators() const { return rays_; }
  /// Primitive inward normals within the linear span, in local coordinates.
  const IntMatrix& local_facets() const { return local_facets_; }
  /// Facet functionals lifted to Z^d; valid on the linear span.
  const IntMatrix& facets() const { return facets_; }
  const AffineFrame& frame() const { return frame_; }

  bool contains(const IntVec& x) const {
    require_same_size(x.size(), ambient_dim(), "cone membership");
    if (!frame_.in_affine_hull(x)) return false;
    for (const auto& f : facets_)
      if (dot(f, x) < 0) return false;
    return true;
  }

  bool contains(const RatVec& x) const {
    return contains(clear_denominators(x).second);
  }

  friend bool operator==(const RationalCone& a, const RationalCone& b) {
    return a.ambient_dim() == b.ambient_dim() && a.rays_ == b.rays_;
  }

 private:
  friend RationalCone make_cone(const IntMatrix& generators, std::size_t d);

  AffineFrame frame_;
  IntMatrix rays_;
  IntMatrix local_facets_;
  IntMatrix facets_;
  bool pointed_ = true;
};

/// The cone generated by the given vectors of Z^d. Zero vectors are ignored.
inline RationalCone make_cone(const IntMatrix& generators, std::size_t d) {
  RationalCone c;
  IntMatrix gens;
  for (const auto& g : generators) {
    require_same_size(g.size(), d, "cone generator");
    if (!is_zero(g)) gens.push_back(primitive(g));
  }
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  c.frame_ = linear_frame(gens, d);
  const std::size_t k = c.frame_.dim();
  if (k == 0) return c;

  IntMatrix local;
  for (const auto& g : gens) local.push_back(c.frame_.to_local(g));
  ConeFacets cf = cone_facets(local, k);
  c.pointed_ = cf.pointed;
  c.local_facets_ = cf.normals;
  for (const auto& w : c.local_facets_) c.facets_.push_back(c.frame_.lift_functional(w));

  if (!c.pointed_) {
    c.rays_ = gens;
    return c;
  }
  for (std::size_t i = 0; i < gens.size(); ++i) {
    IntMatrix tight;
    for (const auto& w : c.local_facets_)
      if (dot(w, local[i]) == 0) tight.push_back(w);
    if (k == 1 || rank(tight) == k - 1) c.rays_.push_back(gens[i]);
  }
  return c;
}

/// R_{>=0}(P, 1): the cone over P placed at height 1 in R^{d+1}.
inline RationalCone cone_over(const LatticePolytope& p) {
  IntMatrix gens;
  for (const auto& v : p.vertices()) {
    IntVec g = v;
    g.emplace_back(1);
    gens.push_back(std::move(g));
  }
  return make_cone(gens, p.ambient_dim() + 1);
}

// ---------------------------------------------------------------------------
// Hilbert bases

enum class HilbertMethod { automatic, graded, triangulation };

struct HilbertBasis {
  IntMatrix elements;            // sorted lexicographically
  std::vector<Integer> degrees;  // parallel to elements
  bool height_one_grading = false;  // degrees come from a grading equal to 1 on the rays
  HilbertMethod method = HilbertMethod::automatic;
  Integer degree_bound;  // graded method only
};

namespace detail {

// A rational functional equal to 1 on every row of `rows` (local coordinates),
// if one exists.
inline std::optional<RatVec> unit_functional(const IntMatrix& rows, std::size_t k) {
  RatVec ones(rows.size(), Rational(1));
  return solve_rational(to_rational(rows), ones, k);
}

inline bool is_integral(const RatVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) {
    return boost::multiprecision::denominator(x) == 1;
  });
}

inline IntVec to_integer(const RatVec& v) {
  IntVec r;
  for (const auto& x : v) r.push_back(boost::multiprecision::numerator(x));
  return r;
}

// Strictly positive on nonzero elements of a pointed full-dimensional cone
// given by its facet normals.
inline IntVec positive_grading(const IntMatrix& facets, std::size_t k) {
  IntVec g(k, 0);
  for (const auto& f : facets) g = add(g, f);
  return g;
}

// Pulling triangulation of the cone spanned by the given rays (all extreme).
// Returns index sets into `rays`.
inline void pulling_triangulation(const IntMatrix& rays, std::vector<std::size_t> idx,
                                  std::size_t k,
                                  std::vector<std::vector<std::size_t>>& out) {
  IntMatrix sub_rays;
  for (auto i : idx) sub_rays.push_back(rays[i]);
  RationalCone c = make_cone(sub_rays, k);
  // Keep only extreme rays of this face.
  std::vector<std::size_t> ext;
  for (auto i : idx)
    if (std::binary_search(c.generators().begin(), c.generators().end(), rays[i]))
      ext.push_back(i);
  if (ext.size() == static_cast<std::size_t>(c.dim())) {
    out.push_back(ext);
    return;
  }
  const std::size_t apex = ext.front();
  for (const auto& f : c.facets()) {
    if (dot(f, rays[apex]) == 0) continue;
    std::vector<std::size_t> face;
    for (auto i : ext)
      if (dot(f, rays[i]) == 0) face.push_back(i);
    std::vector<std::vector<std::size_t>> sub;
    pulling_triangulation(rays, face, k, sub);
    for (auto& s : sub) {
      s.push_back(apex);
      std::sort(s.begin(), s.end());
      out.push_back(std::move(s));
    }
  }
}

// Lattice points of the half-open fundamental parallelepiped of a simplicial
// cone with independent rows r (k x k), zero excluded.
inline IntMatrix parallelepiped_points(const IntMatrix& r) {
  const std::size_t k = r.size();
  SmithForm s = smith_form(r);
  RatMatrix rinv = inverse(r);
  RatMatrix vinv = inverse(s.v);
  IntMatrix out;
  std::vector<Integer> bound(k);
  for (std::size_t i = 0; i < k; ++i) bound[i] = abs(s.d[i][i]);
  IntVec a(k, 0);
  for (;;) {
    // x = a V^{-1}, reduced modulo the rows of r.
    RatVec x(k, Rational(0));
    for (std::size_t i = 0; i < k; ++i)
      if (a[i] != 0)
        for (std::size_t j = 0; j < k; ++j) x[j] += Rational(a[i]) * vinv[i][j];
    RatVec lambda(k, Rational(0));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) lambda[j] += x[i] * rinv[i][j];
    RatVec q(k, Rational(0));
    bool zero = true;
    for (std::size_t j = 0; j < k; ++j) {
      Rational frac = lambda[j] - Rational(floor(lambda[j]));
      if (frac == 0) continue;
      zero = false;
      for (std::size_t c = 0; c < k; ++c) q[c] += frac * Rational(r[j][c]);
    }
    if (!zero) out.push_back(to_integer(q));
    std::size_t i = 0;
    while (i < k) {
      if (++a[i] < bound[i]) break;
      a[i] = 0;
      ++i;
    }
    if (i == k) break;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Hilbert basis of a pointed full-dimensional cone in Z^k given by local rays
// and facets, via triangulation.
inline IntMatrix hilbert_by_triangulation(const IntMatrix& rays, const IntMatrix& facets,
                                          std::size_t k) {
  std::vector<std::vector<std::size_t>> simplices;
  std::vector<std::size_t> all(rays.size());
  for (std::size_t i = 0; i < rays.size(); ++i) all[i] = i;
  pulling_triangulation(rays, all, k, simplices);

  std::set<IntVec> cand(rays.begin(), rays.end());
  for (const auto& s : simplices) {
    IntMatrix r;
    for (auto i : s) r.push_back(rays[i]);
    for (auto& p : parallelepiped_points(r)) cand.insert(std::move(p));
  }
  IntVec grade = positive_grading(facets, k);
  auto in_cone = [&](const IntVec& x) {
    for (const auto& f : facets)
      if (dot(f, x) < 0) return false;
    return true;
  };
  // Sort by degree so each element is only tested against smaller ones.
  std::vector<std::pair<Integer, IntVec>> by_degree;
  for (const auto& c : cand) by_degree.emplace_back(dot(grade, c), c);
  std::sort(by_degree.begin(), by_degree.end());
  IntMatrix basis;
  for (const auto& [deg, x] : by_degree) {
    bool reducible = false;
    for (const auto& h : basis)
      if (in_cone(sub(x, h))) {
        reducible = true;
        break;
      }
    if (!reducible) basis.push_back(x);
  }
  return basis;
}

}  // namespace detail

/// The unique minimal generating set of C ∩ Z^d.
inline HilbertBasis hilbert_basis(const RationalCone& c,
                                  HilbertMethod method = HilbertMethod::automatic) {
  if (!c.is_pointed()) throw PreconditionError("Hilbert basis of a non-pointed cone");
  HilbertBasis hb;
  const AffineFrame& fr = c.frame();
  const std::size_t k = fr.dim();
  if (k == 0) return hb;

  IntMatrix rays;
  for (const auto& g : c.generators()) rays.push_back(fr.to_local(g));
  const IntMatrix& facets = c.local_facets();

  std::optional<IntVec> height;
  if (auto l = detail::unit_functional(rays, k); l && detail::is_integral(*l))
    height = detail::to_integer(*l);

  if (method == HilbertMethod::automatic)
    method = height ? HilbertMethod::graded : HilbertMethod::triangulation;
  if (method == HilbertMethod::graded && !height)
    throw PreconditionError("graded Hilbert basis needs all rays at height 1");
  hb.method = method;

  IntMatrix local;
  if (method == HilbertMethod::graded) {
    // Cone over a lattice polytope of dimension k-1; generators live in
    // degrees up to max(1, k-2).
    const long bound = std::max<long>(1, static_cast<long>(k) - 2);
    hb.degree_bound = bound;
    auto in_cone = [&](const IntVec& x) {
      for (const auto& f : facets)
        if (dot(f, x) < 0) return false;
      return true;
    };
    for (long deg = 1; deg <= bound; ++deg) {
      IntMatrix layer;
      for (const auto& r : rays) layer.push_back(scale(r, Integer(deg)));
      IntMatrix found;
      for_each_lattice_point(convex_hull(layer), [&](const LatticePoint& x) {
        for (const auto& h : local)
          if (in_cone(sub(x, h))) return;
        found.push_back(x);
      });
      for (auto& x : found) local.push_back(std::move(x));
    }
  } else {
    local = detail::hilbert_by_triangulation(rays, facets, k);
  }

  IntVec grade = height ? *height : detail::positive_grading(facets, k);
  hb.height_one_grading = height.has_value();
  std::vector<std::pair<IntVec, Integer>> out;
  for (const auto& y : local) out.emplace_back(fr.to_global(y), dot(grade, y));
  std::sort(out.begin(), out.end());
  for (auto& [x, deg] : out) {
    hb.elements.push_back(std::move(x));
    hb.degrees.push_back(std::move(deg));
  }
  return hb;
}

// ---------------------------------------------------------------------------
// Homogeneity

/// The affine hyperplane dot(normal, x) == offset with offset != 0.
struct HyperplaneWitness {
  IntVec normal;
  Integer offset;
};

struct HomogeneityResult {
  bool homogeneous = false;
  std::optional<HyperplaneWitness> witness;
};

inline HomogeneityResult is_homogeneous(const RationalCone& c) {
  HomogeneityResult r;
  const std::size_t d = c.ambient_dim();
  HilbertBasis hb = hilbert_basis(c);
  if (hb.elements.empty()) {
    r.homogeneous = true;
    r.witness = HyperplaneWitness{unit_vector(d, 0), 1};
    return r;
  }
  const AffineFrame& fr = c.frame();
  IntMatrix local;
  for (const auto& h : hb.elements) local.push_back(fr.to_local(h));
  auto l = detail::unit_functional(local, fr.dim());
  if (!l) return r;
  auto [den, w] = clear_denominators(*l);
  r.homogeneous = true;
  r.witness = HyperplaneWitness{fr.lift_functional(w), den};
  return r;
}

/// Hilb(C) ⊂ R^{d-1} x [0, h], measured on the last coordinate.
inline bool in_height_filtration(const RationalCone& c, const Integer& h) {
  for (const auto& x : hilbert_basis(c).elements)
    if (x.back() < 0 || x.back() > h) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Monoid membership

struct MembershipResult {
  bool member = false;
  std::vector<Integer> coefficients;  // parallel to the generators when member
  Integer degree_bound;               // sum of coefficients never exceeds this
};

/// Decides z ∈ Z_{>=0} gens by exhaustive search bounded by a positive grading.
inline MembershipResult monoid_member(const IntVec& z, const IntMatrix& gens) {
  const std::size_t d = z.size();
  for (const auto& g : gens) {
    require_same_size(g.size(), d, "generator dimension");
    if (is_zero(g)) throw PreconditionError("zero generator: no open halfspace contains it");
  }
  MembershipResult res;
  res.coefficients.assign(gens.size(), 0);
  if (is_zero(z)) {
    res.member = true;
    res.degree_bound = 0;
    return res;
  }
  if (gens.empty()) {
    res.degree_bound = 0;
    return res;
  }
  RationalCone all = make_cone(gens, d);
  if (!all.is_pointed())
    throw PreconditionError("generators are not contained in an open halfspace");
  IntVec grade = all.frame().lift_functional(
      detail::positive_grading(all.local_facets(), all.frame().dim()));
  Integer min_g = dot(grade, gens.front());
  for (const auto& g : gens) min_g = std::min(min_g, dot(grade, g));
  if (!all.contains(z)) {
    res.degree_bound = 0;
    return res;
  }
  res.degree_bound = dot(grade, z) / min_g;

  // Suffix cones prune remainders that later generators cannot reach.
  std::vector<RationalCone> suffix(gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i) {
    IntMatrix tail(gens.begin() + static_cast<std::ptrdiff_t>(i), gens.end());
    suffix[i] = make_cone(tail, d);
  }
  std::set<std::pair<std::size_t, IntVec>> failed;
  std::vector<Integer> coef(gens.size(), 0);
  std::function<bool(std::size_t, const IntVec&)> rec = [&](std::size_t i,
                                                            const IntVec& rest) {
    if (is_zero(rest)) return true;
    if (i == gens.size()) return false;
    if (!suffix[i].contains(rest)) return false;
    if (failed.count({i, rest})) return false;
    Integer gz = dot(grade, rest), gg = dot(grade, gens[i]);
    Integer max_t = gz / gg;
    for (Integer t = max_t; t >= 0; --t) {
      IntVec next = sub(rest, scale(gens[i], t));
      coef[i] = t;
      if (rec(i + 1, next)) return true;
    }
    coef[i] = 0;
    failed.insert({i, rest});
    return false;
  };
  if (rec(0, z)) {
    res.member = true;
    res.coefficients = coef;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Cone extensions

/// Whether C ∩ Z^d = (D ∩ Z^d) + Z_{>=0} x.
inline bool is_cone_extension(const RationalCone& d_cone, const RationalCone& c,
                              const IntVec& x) {
  require_same_size(d_cone.ambient_dim(), c.ambient_dim(), "cone dimension");
  for (const auto& g : d_cone.generators())
    if (!c.contains(g)) throw PreconditionError("D is not contained in C");
  if (!c.contains(x)) throw PreconditionError("x is not in C");
  if (d_cone.contains(x)) throw PreconditionError("x already lies in D");
  for (const auto& h : hilbert_basis(c).elements) {
    bool reached = false;
    for (IntVec rest = h; c.contains(rest); rest = sub(rest, x))
      if (d_cone.contains(rest)) {
        reached = true;
        break;
      }
    if (!reached) return false;
  }
  return true;
}

}  // namespace normwalk
