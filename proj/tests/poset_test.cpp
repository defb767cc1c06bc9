#include "normwalk/poset.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <map>
#include <set>

namespace normwalk {
namespace {

using testing::oracle_integrally_closed;
using testing::oracle_lattice_points;
using testing::pt;
using testing::pts;
using testing::Rng;

LatticePolytope unit_square() { return cube(2, 1); }
LatticePolytope unit_triangle() { return simplex(2); }

// Every lattice point at distance 1..h, found by scanning a generous box.
std::set<LatticePoint> scan_candidates(const LatticePolytope& p, const Integer& h) {
  const std::size_t d = p.ambient_dim();
  LatticePoint lo = p.vertices().front(), hi = lo;
  for (const auto& v : p.vertices())
    for (std::size_t i = 0; i < d; ++i) {
      lo[i] = std::min(lo[i], v[i]);
      hi[i] = std::max(hi[i], v[i]);
    }
  const Integer pad = 4 * h + 4;
  for (std::size_t i = 0; i < d; ++i) {
    lo[i] -= pad;
    hi[i] += pad;
  }
  std::set<LatticePoint> out;
  detail::for_each_box_point(lo, hi, [&](const LatticePoint& z) {
    Integer j = lattice_distance(p, z);
    if (j >= 1 && j <= h) out.insert(z);
  });
  return out;
}

void expect_valid_jump(const Jump& j) {
  auto before = oracle_lattice_points(j.base.vertices());
  auto after = oracle_lattice_points(j.target.vertices());
  EXPECT_EQ(after.size(), before.size() + 1);
  EXPECT_TRUE(std::find(after.begin(), after.end(), j.point) != after.end());
  for (const auto& x : before)
    EXPECT_TRUE(std::find(after.begin(), after.end(), x) != after.end());
  EXPECT_EQ(j.target.dim(), j.base.dim());
  EXPECT_GE(j.height, 1);
  EXPECT_GE(j.volume, 1);
  EXPECT_LE(j.height, jump_height_bound(j.base));
  EXPECT_EQ(j.height, lattice_distance(j.base, j.point));
  EXPECT_EQ(j.volume, normalized_volume(j.target) - normalized_volume(j.base));
}

TEST(Strata, SquareAndTriangle) {
  auto sq = points_at_distance(unit_square(), 1);
  EXPECT_EQ(sq.size(), 12u);
  for (const auto& z : sq) {
    EXPECT_TRUE(z[0] >= -1 && z[0] <= 2 && z[1] >= -1 && z[1] <= 2);
    EXPECT_FALSE(z[0] >= 0 && z[0] <= 1 && z[1] >= 0 && z[1] <= 1);
  }
  auto tri = points_at_distance(unit_triangle(), 1);
  EXPECT_EQ(tri.size(), 12u);
  // Boundary of the triangle (-1,-1), (3,-1), (-1,3).
  for (const auto& z : tri)
    EXPECT_TRUE(z[0] == -1 || z[1] == -1 || z[0] + z[1] == 2);
}

TEST(Strata, CubeShellsPartitionComplement) {
  auto c = cube(3, 1);
  std::set<LatticePoint> all;
  for (long j = 1; j <= 3; ++j) {
    auto shell = points_at_distance(c, j);
    // [-j, 1+j]^3 minus [-(j-1), j]^3
    EXPECT_EQ(shell.size(), static_cast<std::size_t>(std::pow(2 * j + 2, 3) - std::pow(2 * j, 3)));
    for (const auto& z : shell) EXPECT_TRUE(all.insert(z).second);
  }
}

TEST(Strata, Preconditions) {
  EXPECT_THROW(points_at_distance(unit_square(), 0), PreconditionError);
  EXPECT_THROW(points_at_distance(convex_hull(pts({{0, 0}, {1, 0}})), 1), PreconditionError);
}

TEST(JumpsUp, TriangleAndSquareExamples) {
  auto tri = enumerate_jumps_up(unit_triangle());
  auto it = std::find_if(tri.jumps.begin(), tri.jumps.end(),
                         [](const Jump& j) { return j.point == pt({1, 1}); });
  ASSERT_NE(it, tri.jumps.end());
  EXPECT_EQ(it->target, unit_square());
  EXPECT_EQ(it->height, 1);
  EXPECT_EQ(it->volume, 1);

  auto sq = enumerate_jumps_up(unit_square());
  auto it2 = std::find_if(sq.jumps.begin(), sq.jumps.end(),
                          [](const Jump& j) { return j.point == pt({2, 0}); });
  ASSERT_NE(it2, sq.jumps.end());
  EXPECT_EQ(it2->height, 1);
  EXPECT_EQ(it2->volume, 1);
  EXPECT_EQ(normalized_volume(it2->target), 3);
  for (const auto& j : sq.jumps) expect_valid_jump(j);
}

TEST(JumpsUp, CubeHeightsWithinBound) {
  auto up = enumerate_jumps_up(cube(3, 1));
  EXPECT_EQ(up.height_bound, 2);
  EXPECT_FALSE(up.jumps.empty());
  for (const auto& j : up.jumps) {
    EXPECT_LE(j.height, 2);
    expect_valid_jump(j);
  }
  EXPECT_TRUE(std::is_sorted(up.jumps.begin(), up.jumps.end(),
                             [](const Jump& a, const Jump& b) { return a.point < b.point; }));
}

TEST(JumpsUp, MatchesBruteForceOnPolygons) {
  Rng rng(11);
  for (int trial = 0; trial < 12; ++trial) {
    auto p = convex_hull(rng.points(4, 2, 0, 3));
    if (!p.is_full_dimensional()) continue;
    auto up = enumerate_jumps_up(p);
    auto expected_candidates = scan_candidates(p, up.height_bound);
    EXPECT_EQ(std::set<LatticePoint>(up.tested.begin(), up.tested.end()), expected_candidates);
    const auto base = oracle_lattice_points(p.vertices());
    std::set<LatticePoint> expected;
    for (const auto& z : expected_candidates) {
      auto verts = p.vertices();
      verts.push_back(z);
      if (oracle_lattice_points(verts).size() == base.size() + 1) expected.insert(z);
    }
    std::set<LatticePoint> got;
    for (const auto& j : up.jumps) got.insert(j.point);
    EXPECT_EQ(got, expected) << "trial " << trial;
  }
}

TEST(JumpsUp, MatchesBruteForceIn3D) {
  Rng rng(5);
  int checked = 0;
  while (checked < 1) {
    auto p = convex_hull(rng.points(5, 3, 0, 1));
    if (!p.is_full_dimensional() || !is_integrally_closed(p).holds) continue;
    ++checked;
    auto up = enumerate_jumps_up(p);
    auto expected_candidates = scan_candidates(p, up.height_bound);
    EXPECT_EQ(std::set<LatticePoint>(up.tested.begin(), up.tested.end()), expected_candidates);
    const auto base = oracle_lattice_points(p.vertices());
    std::set<LatticePoint> expected;
    for (const auto& z : expected_candidates) {
      auto verts = p.vertices();
      verts.push_back(z);
      if (oracle_lattice_points(verts).size() != base.size() + 1) continue;
      if (oracle_integrally_closed(verts, 3)) expected.insert(z);
    }
    std::set<LatticePoint> got;
    for (const auto& j : up.jumps) got.insert(j.point);
    EXPECT_EQ(got, expected);
  }
}

TEST(JumpsUp, RejectsNonNormalAndLowDimensional) {
  auto empty_simplex = convex_hull(pts({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 2}}));
  EXPECT_THROW(enumerate_jumps_up(empty_simplex), PreconditionError);
  EXPECT_THROW(enumerate_jumps_up(convex_hull(pts({{0, 0}, {1, 0}}))), PreconditionError);
}

TEST(JumpsDown, Examples) {
  auto seg = enumerate_jumps_down(convex_hull(pts({{0}, {1}})));
  ASSERT_EQ(seg.size(), 2u);
  for (const auto& d : seg) {
    EXPECT_EQ(d.smaller.dim(), 0);
    EXPECT_TRUE(d.dimension_drop);
  }

  auto tri = enumerate_jumps_down(unit_triangle());
  ASSERT_EQ(tri.size(), 3u);
  for (const auto& d : tri) {
    EXPECT_EQ(d.smaller.dim(), 1);
    EXPECT_TRUE(d.dimension_drop);
  }

  auto sq = enumerate_jumps_down(unit_square());
  ASSERT_EQ(sq.size(), 4u);
  for (const auto& d : sq) {
    EXPECT_FALSE(d.dimension_drop);
    EXPECT_TRUE(is_unimodular_simplex(d.smaller));
  }
}

TEST(JumpsDown, MixedDropKinds) {
  // conv(0, e1, 2e2) has the extra point e2. Removing e1 leaves the segment
  // [0, 2e2], over which the triangle is a unimodular pyramid.
  auto down = enumerate_jumps_down(convex_hull(pts({{0, 0}, {1, 0}, {0, 2}})));
  std::map<LatticePoint, bool> drops;
  for (const auto& d : down) drops[d.point] = d.dimension_drop;
  EXPECT_EQ(drops, (std::map<LatticePoint, bool>{
                       {pt({0, 0}), false}, {pt({0, 2}), false}, {pt({1, 0}), true}}));
}

TEST(JumpsDown, DualToJumpsUp) {
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    auto q = convex_hull(rng.points(5, 2, 0, 3));
    if (!q.is_full_dimensional()) continue;
    for (const auto& d : enumerate_jumps_down(q)) {
      if (d.dimension_drop) continue;
      auto up = enumerate_jumps_up(d.smaller);
      auto it = std::find_if(up.jumps.begin(), up.jumps.end(),
                             [&](const Jump& j) { return j.point == d.point; });
      ASSERT_NE(it, up.jumps.end());
      EXPECT_EQ(it->target, q);
    }
  }
}

TEST(MinimalMaximal, Examples) {
  EXPECT_TRUE(is_minimal(convex_hull({pt({0, 0})})));
  EXPECT_FALSE(is_minimal(unit_triangle()));
  EXPECT_FALSE(is_maximal(unit_square()));
  EXPECT_FALSE(is_maximal(convex_hull(pts({{0, 0}, {1, 0}}))));
  auto empty_simplex = convex_hull(pts({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 2}}));
  EXPECT_THROW(is_maximal(empty_simplex), PreconditionError);
  EXPECT_THROW(is_minimal(empty_simplex), PreconditionError);
}

TEST(Walk, GreedyIsDeterministicAndPicksMaxVolume) {
  WalkOptions opt;
  opt.budget = 3;
  auto a = walk(cube(3, 1), opt);
  auto b = walk(cube(3, 1), opt);
  ASSERT_EQ(a.chain.size(), 4u);
  EXPECT_EQ(a.chain, b.chain);
  EXPECT_EQ(a.terminated, WalkStop::step_budget);

  auto first = enumerate_jumps_up(cube(3, 1));
  Integer best = 0;
  for (const auto& j : first.jumps) best = std::max(best, j.volume);
  EXPECT_EQ(a.steps[0].jump.volume, best);
  for (const auto& j : first.jumps)
    if (j.volume == best) {
      EXPECT_EQ(a.steps[0].jump.point, j.point);  // lexicographically least
      break;
    }
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    EXPECT_EQ(a.steps[i].jump.base, a.chain[i]);
    EXPECT_EQ(a.steps[i].jump.target, a.chain[i + 1]);
    expect_valid_jump(a.steps[i].jump);
  }
}

TEST(Walk, ZetaPartialSums) {
  WalkOptions opt;
  opt.budget = 4;
  auto t = walk(unit_square(), opt);
  Rational sum = 0;
  for (const auto& p : t.chain) sum += Rational(Integer(1), normalized_volume(p));
  EXPECT_EQ(zeta_partial(t, 1), sum);
  EXPECT_EQ(zeta_partial(t, 1, 1), sum - Rational(Integer(1), normalized_volume(t.chain[0])));
  for (unsigned s = 1; s < 5; ++s) EXPECT_GE(zeta_partial(t, s), zeta_partial(t, s + 1));
}

TEST(Walk, RandomIsReproducibleFromBits) {
  const std::string bits = "1011001110001111010101100101001101011100";
  auto run = [&] {
    auto src = BitSource::from_bit_string(bits);
    WalkOptions opt;
    opt.strategy = WalkStrategy::random;
    opt.budget = 3;
    opt.bits = &src;
    return walk(unit_square(), opt);
  };
  auto a = run();
  auto b = run();
  EXPECT_EQ(a.chain, b.chain);
  EXPECT_EQ(a.bits_consumed, b.bits_consumed);
  EXPECT_GT(a.bits_consumed, 0u);
  for (const auto& s : a.steps) {
    ASSERT_TRUE(s.draw.has_value());
    EXPECT_LT(*s.draw, s.candidates);
  }
}

TEST(Walk, Errors) {
  WalkOptions opt;
  opt.budget = 0;
  EXPECT_THROW(walk(unit_square(), opt), PreconditionError);
  opt.budget = 5;
  opt.strategy = WalkStrategy::random;
  EXPECT_THROW(walk(unit_square(), opt), PreconditionError);
  auto src = BitSource::from_bit_string("1");
  opt.bits = &src;
  EXPECT_THROW(walk(unit_square(), opt), BitSourceExhausted);
  EXPECT_TRUE(src.exhausted());
}

TEST(Walk, UserStop) {
  WalkOptions opt;
  opt.budget = 10;
  opt.stop = [](const WalkTrace& t) { return t.steps.size() == 2; };
  auto t = walk(unit_square(), opt);
  EXPECT_EQ(t.terminated, WalkStop::user_stop);
  EXPECT_EQ(t.steps.size(), 2u);
}

}  // namespace
}  // namespace normwalk
