#pragma once

// Finite pieces of the poset of integrally closed polytopes inside a
// coordinate box, their Hasse diagrams and the homology of the order complex.

#include "normwalk/cones.hpp"
#include "normwalk/poset.hpp"

#include <map>
#include <set>

namespace normwalk {

struct AtlasOptions {
  std::size_t max_elements = 20000;
  std::size_t max_simplices = 200000;
  bool homology = true;
};

struct HasseEdge {
  std::size_t lower = 0;
  std::size_t upper = 0;
  LatticePoint point;  // the lattice point of upper missing from lower
  bool pyramid = false;  // dim(upper) = dim(lower) + 1
};

struct Homology {
  std::vector<std::size_t> betti;
  std::vector<std::vector<Integer>> torsion;  // invariant factors > 1 per degree
  std::vector<std::size_t> simplices;  // face counts per dimension
};

struct Atlas {
  LatticePoint box_lo, box_hi;
  std::vector<LatticePolytope> elements;  // by lattice point count, then vertices
  std::vector<HasseEdge> hasse_edges;     // sorted by (lower, upper)
  std::optional<Homology> homology;
  std::size_t fingerprint_classes = 0;
};

namespace detail {

// Integer matrix given by sparse columns; computes rank and the invariant
// factors greater than one. Unit pivots are eliminated sparsely, the rest by a
// dense Smith form.
inline std::pair<std::size_t, std::vector<Integer>> sparse_smith(
    std::vector<std::map<std::size_t, Integer>> cols) {
  std::map<std::size_t, std::set<std::size_t>> rows;
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (const auto& [i, a] : cols[j]) rows[i].insert(j);
  std::size_t rank = 0;
  for (bool progress = true; progress;) {
    progress = false;
    for (std::size_t j = 0; j < cols.size(); ++j) {
      auto pivot = std::find_if(cols[j].begin(), cols[j].end(),
                                [](const auto& e) { return abs(e.second) == 1; });
      if (pivot == cols[j].end()) continue;
      const std::size_t i = pivot->first;
      const Integer unit = pivot->second;
      std::vector<std::size_t> others(rows[i].begin(), rows[i].end());
      for (std::size_t k : others) {
        if (k == j) continue;
        const Integer f = cols[k].at(i) * unit;
        for (const auto& [r, a] : cols[j]) {
          Integer& t = cols[k][r];
          t -= f * a;
          if (t == 0) {
            cols[k].erase(r);
            rows[r].erase(k);
          } else {
            rows[r].insert(k);
          }
        }
      }
      for (const auto& [r, a] : cols[j]) rows[r].erase(j);
      cols[j].clear();
      rows.erase(i);
      ++rank;
      progress = true;
    }
  }
  std::vector<std::size_t> live_cols;
  for (std::size_t j = 0; j < cols.size(); ++j)
    if (!cols[j].empty()) live_cols.push_back(j);
  std::vector<Integer> torsion;
  if (live_cols.empty()) return {rank, torsion};
  std::map<std::size_t, std::size_t> row_index;
  for (const auto& [i, s] : rows)
    if (!s.empty()) row_index.emplace(i, row_index.size());
  IntMatrix dense = zero_matrix(row_index.size(), live_cols.size());
  for (std::size_t c = 0; c < live_cols.size(); ++c)
    for (const auto& [i, a] : cols[live_cols[c]]) dense[row_index.at(i)][c] = a;
  for (const auto& f : smith_form(dense).invariant_factors()) {
    ++rank;
    if (f > 1) torsion.push_back(f);
  }
  return {rank, torsion};
}

}  // namespace detail

/// Homology of the order complex of a finite poset on {0..n-1}. `above[i]`
/// lists the elements strictly greater than i; every such element must have
/// a larger index.
inline Homology order_complex_homology(const std::vector<std::vector<std::size_t>>& above,
                                       std::size_t max_simplices) {
  using Chain = std::vector<std::size_t>;
  std::vector<std::map<Chain, std::size_t>> faces;
  std::size_t total = 0;
  Chain chain;
  std::function<void(std::size_t)> extend = [&](std::size_t top) {
    if (++total > max_simplices) throw ResourceCapExceeded("order complex exceeds simplex cap");
    const std::size_t k = chain.size() - 1;
    if (faces.size() <= k) faces.resize(k + 1);
    faces[k].emplace(chain, faces[k].size());
    for (std::size_t next : above[top]) {
      chain.push_back(next);
      extend(next);
      chain.pop_back();
    }
  };
  for (std::size_t i = 0; i < above.size(); ++i) {
    chain = {i};
    extend(i);
  }
  Homology h;
  const std::size_t top = faces.size();
  std::vector<std::size_t> ranks(top + 1, 0);  // ranks[k] = rank of boundary C_k -> C_{k-1}
  std::vector<std::vector<Integer>> tors(top + 1);
  for (std::size_t k = 1; k < top; ++k) {
    std::vector<std::map<std::size_t, Integer>> cols(faces[k].size());
    for (const auto& [s, idx] : faces[k]) {
      for (std::size_t drop = 0; drop < s.size(); ++drop) {
        Chain f = s;
        f.erase(f.begin() + static_cast<long>(drop));
        cols[idx][faces[k - 1].at(f)] = drop % 2 == 0 ? 1 : -1;
      }
    }
    auto [r, t] = detail::sparse_smith(std::move(cols));
    ranks[k] = r;
    tors[k] = std::move(t);
  }
  for (std::size_t k = 0; k < top; ++k) {
    h.simplices.push_back(faces[k].size());
    h.betti.push_back(faces[k].size() - ranks[k] - ranks[k + 1]);
    h.torsion.push_back(tors[k + 1]);
  }
  return h;
}

/// All integrally closed polytopes with vertices in the box [lo, hi],
/// identified by vertex set.
inline Atlas build_atlas(const LatticePoint& lo, const LatticePoint& hi,
                         const AtlasOptions& opt = {}) {
  if (lo.size() != hi.size() || lo.empty()) throw DimensionMismatch("atlas box corners");
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (lo[i] > hi[i]) throw PreconditionError("atlas box is empty");
  Atlas atlas{lo, hi, {}, {}, std::nullopt, 0};

  std::vector<LatticePoint> box;
  detail::for_each_box_point(lo, hi, [&](const LatticePoint& z) { box.push_back(z); });
  std::map<LatticePoint, std::size_t> box_index;
  for (std::size_t i = 0; i < box.size(); ++i) box_index.emplace(box[i], i);

  // Lattice-convex subsets S = conv(S) ∩ Z^d of the box, grown one point at a
  // time from singletons. Every such set is reached by adding its vertices.
  using Mask = std::vector<bool>;
  std::map<Mask, LatticePolytope> seen;
  std::vector<Mask> queue;
  auto visit = [&](const LatticePolytope& p) {
    Mask m(box.size(), false);
    for_each_lattice_point(p, [&](const LatticePoint& x) { m[box_index.at(x)] = true; });
    if (seen.count(m)) return;
    if (seen.size() >= opt.max_elements)
      throw ResourceCapExceeded("atlas exceeds element cap");
    seen.emplace(m, p);
    queue.push_back(std::move(m));
  };
  for (const auto& z : box) visit(convex_hull({z}));
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Mask m = queue[head];
    const LatticePolytope& p = seen.at(m);
    for (std::size_t i = 0; i < box.size(); ++i) {
      if (m[i]) continue;
      std::vector<LatticePoint> verts = p.vertices();
      verts.push_back(box[i]);
      visit(convex_hull(std::move(verts)));
    }
  }

  std::vector<std::pair<std::size_t, LatticePolytope>> keyed;
  for (auto& [m, p] : seen) {
    if (!is_integrally_closed(p).holds) continue;
    keyed.emplace_back(static_cast<std::size_t>(std::count(m.begin(), m.end(), true)), p);
  }
  std::sort(keyed.begin(), keyed.end());
  std::map<LatticePolytope, std::size_t> element_index;
  for (auto& [n, p] : keyed) {
    element_index.emplace(p, atlas.elements.size());
    atlas.elements.push_back(std::move(p));
  }

  std::vector<std::vector<std::size_t>> covers(atlas.elements.size());
  for (std::size_t q = 0; q < atlas.elements.size(); ++q) {
    for (const auto& down : enumerate_jumps_down(atlas.elements[q])) {
      std::size_t p = element_index.at(down.smaller);
      atlas.hasse_edges.push_back(HasseEdge{p, q, down.point, down.dimension_drop});
      covers[p].push_back(q);
    }
  }
  std::sort(atlas.hasse_edges.begin(), atlas.hasse_edges.end(),
            [](const HasseEdge& a, const HasseEdge& b) {
              return std::tie(a.lower, a.upper) < std::tie(b.lower, b.upper);
            });

  std::set<Fingerprint> prints;
  for (const auto& p : atlas.elements) prints.insert(fingerprint(p));
  atlas.fingerprint_classes = prints.size();

  if (opt.homology) {
    // Transitive closure of the cover relation; covers point to larger indices.
    const std::size_t n = atlas.elements.size();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t i = n; i-- > 0;)
      for (std::size_t c : covers[i]) {
        reach[i][c] = true;
        for (std::size_t k = 0; k < n; ++k)
          if (reach[c][k]) reach[i][k] = true;
      }
    std::vector<std::vector<std::size_t>> above(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        if (reach[i][k]) above[i].push_back(k);
    atlas.homology = order_complex_homology(above, opt.max_simplices);
  }
  return atlas;
}

/// The box [-radius, radius]^d.
inline Atlas build_atlas(std::size_t d, const Integer& radius, const AtlasOptions& opt = {}) {
  if (d == 0) throw PreconditionError("atlas dimension must be positive");
  if (radius < 0) throw PreconditionError("atlas radius must be nonnegative");
  return build_atlas(LatticePoint(d, -radius), LatticePoint(d, radius), opt);
}

/// A map from polytopes to cones used to compare the poset with the cone
/// filtration. normwalk ships no implementation; callers may plug one in.
class EmbedMap {
 public:
  virtual ~EmbedMap() = default;
  virtual RationalCone operator()(const LatticePolytope& p) const = 0;
};

}  // namespace normwalk
