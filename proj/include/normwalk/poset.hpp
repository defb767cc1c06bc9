#pragma once

// Quantum jumps between integrally closed polytopes, distance strata around
// a polytope, minimal/maximal tests and walks through the poset.

#include "normwalk/bits.hpp"
#include "normwalk/normality.hpp"

#include <functional>
#include <optional>

namespace normwalk {

/// Lattice distance of z from a full-dimensional P: -min_i slack_i(z), or 0
/// for z ∈ P.
inline Integer lattice_distance(const LatticePolytope& p, const LatticePoint& z) {
  Integer worst = 0;
  for (const auto& f : p.facets()) worst = std::min(worst, f.slack(z));
  return -worst;
}

namespace detail {

// Integer bounding box [lo, hi] of P^{-j} = {x : <u_i, x> >= b_i - j}.
inline std::pair<LatticePoint, LatticePoint> relaxed_box(const LatticePolytope& p,
                                                         const Integer& j) {
  std::vector<std::pair<IntVec, Integer>> ineqs;
  for (const auto& f : p.facets()) ineqs.emplace_back(f.normal, f.offset - j);
  auto verts = vertices_from_halfspaces<Integer>(p.ambient_dim(), ineqs, {});
  const std::size_t d = p.ambient_dim();
  LatticePoint lo(d), hi(d);
  for (std::size_t i = 0; i < d; ++i) {
    lo[i] = floor(verts.front()[i]);
    hi[i] = ceil(verts.front()[i]);
    for (const auto& v : verts) {
      lo[i] = std::min(lo[i], floor(v[i]));
      hi[i] = std::max(hi[i], ceil(v[i]));
    }
  }
  return {lo, hi};
}

inline void for_each_box_point(const LatticePoint& lo, const LatticePoint& hi,
                               const std::function<void(const LatticePoint&)>& fn) {
  const std::size_t d = lo.size();
  for (std::size_t i = 0; i < d; ++i)
    if (lo[i] > hi[i]) return;
  LatticePoint x = lo;
  std::uint64_t visited = 0;
  for (;;) {
    if (++visited > enumeration_cap()) throw ResourceCapExceeded("box scan exceeded cap");
    fn(x);
    std::size_t i = d;
    while (i > 0) {
      --i;
      if (x[i] < hi[i]) {
        ++x[i];
        for (std::size_t k = i + 1; k < d; ++k) x[k] = lo[k];
        break;
      }
      if (i == 0) return;
    }
    if (d == 0) return;
  }
}

inline void require_full_dimensional(const LatticePolytope& p, const char* what) {
  if (!p.is_full_dimensional())
    throw PreconditionError(std::string(what) + " needs a full-dimensional polytope");
}

}  // namespace detail

/// ∂(P^{-j}) ∩ Z^d, sorted.
inline std::vector<LatticePoint> points_at_distance(const LatticePolytope& p,
                                                    const Integer& j) {
  detail::require_full_dimensional(p, "distance strata");
  if (j < 1) throw PreconditionError("distance must be positive");
  auto [lo, hi] = detail::relaxed_box(p, j);
  std::vector<LatticePoint> out;
  detail::for_each_box_point(lo, hi, [&](const LatticePoint& z) {
    if (lattice_distance(p, z) == j) out.push_back(z);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Jumps

struct Jump {
  LatticePolytope base;
  LatticePoint point;
  LatticePolytope target;
  Integer height;
  Integer volume;  // NV(target) - NV(base)
};

struct JumpsUp {
  std::vector<Jump> jumps;  // sorted by point
  Integer height_bound;
  std::vector<LatticePoint> tested;  // every candidate examined, sorted
};

/// max(1, 1 + (d-2)·width(P)); the floor of 1 covers d = 1.
inline Integer jump_height_bound(const LatticePolytope& p) {
  const long d = static_cast<long>(p.ambient_dim());
  Integer h = 1 + Integer(d - 2) * facet_width(p);
  return h < 1 ? Integer(1) : h;
}

/// All z at lattice distance at most the height bound such that
/// conv(P ∪ {z}) has exactly one new lattice point and is integrally closed.
inline JumpsUp enumerate_jumps_up(const LatticePolytope& p) {
  detail::require_full_dimensional(p, "jump enumeration");
  if (!is_integrally_closed(p).holds)
    throw PreconditionError("jump enumeration needs an integrally closed polytope");
  JumpsUp out;
  out.height_bound = jump_height_bound(p);
  const auto points = lattice_points(p);
  const std::size_t n = points.size();
  const Integer base_volume = normalized_volume(p);
  auto [lo, hi] = detail::relaxed_box(p, out.height_bound);
  detail::for_each_box_point(lo, hi, [&](const LatticePoint& z) {
    Integer h = lattice_distance(p, z);
    if (h < 1 || h > out.height_bound) return;
    out.tested.push_back(z);
    // The lattice point next to z on each segment [x, z] must already be in P.
    for (const auto& x : points) {
      LatticePoint step = sub(z, primitive(sub(z, x)));
      if (step != x && !p.contains(step)) return;
    }
    std::vector<LatticePoint> verts = p.vertices();
    verts.push_back(z);
    LatticePolytope q = convex_hull(std::move(verts));
    if (lattice_point_count(q) != n + 1) return;
    if (!is_integrally_closed(q).holds) return;
    out.jumps.push_back(Jump{p, z, q, h, normalized_volume(q) - base_volume});
  });
  return out;
}

struct JumpDown {
  LatticePolytope smaller;
  LatticePoint point;  // the removed vertex
  bool dimension_drop = false;
};

/// All vertices z of Q whose removal leaves an integrally closed polytope
/// with one fewer lattice point; a dimension drop is allowed only when Q is a
/// unimodular pyramid over the remainder.
inline std::vector<JumpDown> enumerate_jumps_down(const LatticePolytope& q) {
  if (!is_integrally_closed(q).holds)
    throw PreconditionError("jump enumeration needs an integrally closed polytope");
  std::vector<JumpDown> out;
  const auto points = lattice_points(q);
  if (points.size() < 2) return out;
  for (const auto& z : q.vertices()) {
    std::vector<LatticePoint> rest;
    for (const auto& x : points)
      if (x != z) rest.push_back(x);
    LatticePolytope p = convex_hull(rest);
    if (lattice_point_count(p) + 1 != points.size()) continue;
    bool drop = p.dim() < q.dim();
    if (drop && detail::relative_volume(q) != detail::relative_volume(p)) continue;
    if (!is_integrally_closed(p).holds) continue;
    out.push_back(JumpDown{p, z, drop});
  }
  return out;
}

inline bool is_minimal(const LatticePolytope& q) { return enumerate_jumps_down(q).empty(); }

/// Lower-dimensional polytopes are never maximal: a unimodular pyramid over
/// them always exists.
inline bool is_maximal(const LatticePolytope& p) {
  if (!is_integrally_closed(p).holds)
    throw PreconditionError("maximality needs an integrally closed polytope");
  if (!p.is_full_dimensional()) return false;
  return enumerate_jumps_up(p).jumps.empty();
}

// ---------------------------------------------------------------------------
// Walks

enum class WalkStrategy { greedy_volume, random };
enum class WalkStop { maximal_reached, step_budget, user_stop };

inline const char* to_string(WalkStop s) {
  switch (s) {
    case WalkStop::maximal_reached: return "maximal_reached";
    case WalkStop::step_budget: return "step_budget";
    case WalkStop::user_stop: return "user_stop";
  }
  return "step_budget";
}

struct WalkStep {
  Jump jump;
  std::size_t candidates = 0;  // number of jumps available at this step
  std::optional<Integer> draw;  // random strategy: the index drawn
};

struct WalkTrace {
  std::vector<LatticePolytope> chain;
  std::vector<Integer> volumes;  // NV of each chain entry
  std::vector<WalkStep> steps;
  WalkStop terminated = WalkStop::step_budget;
  std::uint64_t bits_consumed = 0;
};

/// sum over chain entries i >= from of vol(P_i)^(-s). Entries of volume 0
/// are skipped.
inline Rational zeta_partial(const WalkTrace& t, unsigned s, std::size_t from = 0) {
  Rational sum = 0;
  for (std::size_t i = from; i < t.volumes.size(); ++i) {
    if (t.volumes[i] == 0) continue;
    sum += Rational(Integer(1), ipow(t.volumes[i], s));
  }
  return sum;
}

struct WalkOptions {
  WalkStrategy strategy = WalkStrategy::greedy_volume;
  std::size_t budget = 10;
  BitSource* bits = nullptr;  // required for the random strategy
  std::function<bool(const WalkTrace&)> stop;  // polled after each step
  std::function<void(const WalkTrace&)> on_step;
};

inline WalkTrace walk(const LatticePolytope& start, const WalkOptions& opt) {
  if (opt.budget == 0) throw PreconditionError("walk budget must be positive");
  if (opt.strategy == WalkStrategy::random && !opt.bits)
    throw PreconditionError("random walk needs a bit source");
  WalkTrace t;
  t.chain.push_back(start);
  t.volumes.push_back(normalized_volume(start));
  const std::uint64_t bits_start = opt.bits ? opt.bits->cursor() : 0;
  for (std::size_t step = 0; step < opt.budget; ++step) {
    JumpsUp up = enumerate_jumps_up(t.chain.back());
    if (up.jumps.empty()) {
      t.terminated = WalkStop::maximal_reached;
      break;
    }
    WalkStep ws;
    ws.candidates = up.jumps.size();
    std::size_t pick = 0;
    if (opt.strategy == WalkStrategy::greedy_volume) {
      for (std::size_t i = 1; i < up.jumps.size(); ++i)
        if (up.jumps[i].volume > up.jumps[pick].volume) pick = i;
    } else {
      Integer r = opt.bits->uniform_below(up.jumps.size());
      ws.draw = r;
      pick = static_cast<std::size_t>(r);
    }
    ws.jump = std::move(up.jumps[pick]);
    t.chain.push_back(ws.jump.target);
    t.volumes.push_back(normalized_volume(ws.jump.target));
    t.steps.push_back(std::move(ws));
    if (opt.bits) t.bits_consumed = opt.bits->cursor() - bits_start;
    if (opt.on_step) opt.on_step(t);
    if (opt.stop && opt.stop(t)) {
      t.terminated = WalkStop::user_stop;
      break;
    }
  }
  return t;
}

}  // namespace normwalk
