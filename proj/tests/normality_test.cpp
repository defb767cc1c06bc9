#include "normwalk/normality.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

namespace normwalk {
namespace {

using testing::oracle_integrally_closed;
using testing::oracle_lattice_points;
using testing::oracle_min_support;
using testing::pt;
using testing::pts;
using testing::Rng;

const auto kEmptySimplex = pts({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 2}});

// Least r such that every z ∈ cP, c <= c_max, uses at most r distinct points.
std::size_t oracle_icp_r(const std::vector<LatticePoint>& v, long c_max) {
  auto sums = oracle_min_support(oracle_lattice_points(v), c_max);
  std::size_t worst = 0;
  for (const auto& [key, support] : sums) worst = std::max(worst, support);
  return worst;
}

TEST(IntegrallyClosed, Examples) {
  EXPECT_TRUE(is_integrally_closed(cube(3)).holds);
  auto es = is_integrally_closed(convex_hull(kEmptySimplex));
  EXPECT_FALSE(es.holds);
  ASSERT_TRUE(es.witness.has_value());
  EXPECT_EQ(es.witness->c, 2);
  EXPECT_EQ(es.witness->z, pt({1, 1, 1}));
  // (1,1,1) ∈ 2P but is no sum of two vertices.
  EXPECT_TRUE(convex_hull(kEmptySimplex).contains_dilated(pt({1, 1, 1}), 2));
  EXPECT_FALSE(decompose(convex_hull(kEmptySimplex), 2, pt({1, 1, 1})).has_value());
}

TEST(IntegrallyClosed, PolygonsAlwaysHold) {
  Rng rng(201);
  for (int trial = 0; trial < 30; ++trial) {
    auto p = convex_hull(rng.points(static_cast<std::size_t>(rng.uniform(1, 7)), 2, -5, 5));
    EXPECT_TRUE(is_integrally_closed(p).holds) << "trial " << trial;
  }
}

TEST(IntegrallyClosed, MatchesMultisetOracle) {
  Rng rng(203);
  for (int trial = 0; trial < 25; ++trial) {
    auto v = rng.points(4, 3, 0, 2);
    v.push_back(pt({0, 0, 0}));
    auto p = convex_hull(v);
    if (p.dim() != 3) continue;
    EXPECT_EQ(is_integrally_closed(p).holds, oracle_integrally_closed(p.vertices(), p.dim()))
        << "trial " << trial;
  }
  auto es = convex_hull(kEmptySimplex);
  EXPECT_EQ(is_integrally_closed(es).holds, oracle_integrally_closed(kEmptySimplex, 3));
}

TEST(IntegrallyClosed, AgreesWithHilbertCriterion) {
  Rng rng(207);
  for (int trial = 0; trial < 20; ++trial) {
    auto p = convex_hull(rng.points(static_cast<std::size_t>(rng.uniform(3, 6)), 3, 0, 2));
    EXPECT_EQ(is_integrally_closed(p).holds, is_integrally_closed_via_hilbert(p))
        << "trial " << trial;
  }
  // Reeve-type simplices conv(0, e1, e2, (1,1,q)) are not closed for q >= 2.
  for (long q = 1; q <= 4; ++q) {
    auto p = convex_hull(pts({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, q}}));
    EXPECT_EQ(is_integrally_closed(p).holds, q == 1);
    EXPECT_EQ(is_integrally_closed_via_hilbert(p), q == 1);
  }
}

TEST(IntegrallyClosed, DilationsBeyondDimMinusOne) {
  Rng rng(211);
  for (int trial = 0; trial < 6; ++trial) {
    auto p = convex_hull(rng.points(4, 3, 0, 2));
    for (long c = std::max(1, p.dim() - 1); c <= 3; ++c)
      EXPECT_TRUE(is_integrally_closed(dilate(p, c)).holds) << "trial " << trial;
  }
  EXPECT_TRUE(is_integrally_closed(dilate(convex_hull(kEmptySimplex), 2)).holds);
}

TEST(IntegrallyClosed, UnionOfClosedPieces) {
  // [0,2] x [0,1]^2 is the union of two unit cubes.
  auto box = convex_hull(pts({{0, 0, 0}, {2, 0, 0}, {0, 1, 0}, {2, 1, 0},
                              {0, 0, 1}, {2, 0, 1}, {0, 1, 1}, {2, 1, 1}}));
  EXPECT_TRUE(is_integrally_closed(box).holds);
  // A triangular prism split into three unimodular tetrahedra.
  auto prism = convex_hull(pts({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 1}, {0, 1, 1}}));
  EXPECT_TRUE(is_integrally_closed(prism).holds);
}

TEST(Decompose, ProducesValidSums) {
  auto p = cube(3);
  auto d = decompose(p, 3, pt({2, 1, 3}));
  ASSERT_TRUE(d.has_value());
  ASSERT_EQ(d->size(), 3u);
  IntVec sum(3, 0);
  for (const auto& x : *d) {
    EXPECT_TRUE(p.contains(x));
    sum = add(sum, x);
  }
  EXPECT_EQ(sum, pt({2, 1, 3}));
  EXPECT_FALSE(decompose(p, 2, pt({3, 0, 0})).has_value());
}

TEST(Normal, Examples) {
  auto es = convex_hull(kEmptySimplex);
  auto rep = normality_report(es);
  EXPECT_FALSE(rep.integrally_closed);
  EXPECT_TRUE(rep.normal_wrt_lambda);
  EXPECT_EQ(rep.lambda_index, 2);
  ASSERT_TRUE(rep.ic_witness.has_value());
  EXPECT_FALSE(rep.normal_witness.has_value());
  EXPECT_TRUE(is_normal(cube(2)).holds);
  for (std::size_t d = 1; d <= 4; ++d) EXPECT_TRUE(is_normal(simplex(d)).holds);
}

TEST(Normal, ImpliedByIntegrallyClosed) {
  Rng rng(213);
  for (int trial = 0; trial < 20; ++trial) {
    auto p = convex_hull(rng.points(4, 3, 0, 2));
    auto rep = normality_report(p);
    if (rep.integrally_closed) EXPECT_TRUE(rep.normal_wrt_lambda);
    EXPECT_EQ(rep.ic_witness.has_value(), !rep.integrally_closed);
    EXPECT_EQ(rep.normal_witness.has_value(), !rep.normal_wrt_lambda);
  }
}

TEST(Normal, CoincidesWithClosureWhenLambdaIsFull) {
  auto p = convex_hull(pts({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 3}}));
  auto ic = is_integrally_closed(p);
  auto n = is_normal(p);
  EXPECT_EQ(lambda_subgroup(p).index, 1);
  // With Λ = Z^3 both notions coincide.
  EXPECT_EQ(ic.holds, n.holds);
  EXPECT_EQ(ic.witness, n.witness);
}

TEST(Normal, InvariantUnderUnimodularMaps) {
  Rng rng(217);
  auto es = convex_hull(kEmptySimplex);
  for (int trial = 0; trial < 5; ++trial) {
    auto q = apply_affine(es, rng.unimodular(3, 6, 2), pt({rng.uniform(-3, 3), 0, 1}));
    auto rep = normality_report(q);
    EXPECT_FALSE(rep.integrally_closed);
    EXPECT_TRUE(rep.normal_wrt_lambda);
  }
}

TEST(Unimodular, Examples) {
  for (std::size_t d = 1; d <= 4; ++d) EXPECT_TRUE(is_unimodular_simplex(simplex(d)));
  EXPECT_FALSE(is_unimodular_simplex(cube(2)));
  EXPECT_FALSE(is_unimodular_simplex(convex_hull(kEmptySimplex)));
  EXPECT_TRUE(is_unimodular_simplex(convex_hull(pts({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}))));
  EXPECT_FALSE(is_unimodular_simplex(convex_hull(pts({{0, 0}, {2, 0}}))));
}

TEST(Smooth, Examples) {
  EXPECT_TRUE(is_smooth(cube(3)).smooth);
  EXPECT_TRUE(is_smooth(simplex(3)).smooth);
  auto es = is_smooth(convex_hull(kEmptySimplex));
  EXPECT_FALSE(es.smooth);
  EXPECT_TRUE(es.offending_vertex.has_value());
  // conv(0, 2e1, e2): the vertex e2 has edge directions (0,-1), (2,-1).
  auto tri = is_smooth(convex_hull(pts({{0, 0}, {2, 0}, {0, 1}})));
  EXPECT_FALSE(tri.smooth);
  EXPECT_EQ(*tri.offending_vertex, pt({0, 1}));
  // Square pyramid: the apex has four edges.
  auto pyr = convex_hull(pts({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0, 0, 1}}));
  EXPECT_FALSE(is_smooth(pyr).smooth);
  EXPECT_THROW(is_smooth(convex_hull(pts({{0, 0, 0}, {1, 0, 0}}))), PreconditionError);
}

TEST(Smooth, EdgeDirectionsOfCube) {
  auto dirs = edge_directions(cube(3), 0);
  EXPECT_EQ(dirs, pts({{0, 0, 1}, {0, 1, 0}, {1, 0, 0}}));
}

TEST(Ucp, Examples) {
  auto sq = ucp_falsify(cube(2), 200);
  EXPECT_FALSE(sq.counterexample.has_value());
  EXPECT_GT(sq.samples_tested, 1u);
  EXPECT_EQ(sq.unimodular_simplices, 4u);

  auto es = ucp_falsify(convex_hull(kEmptySimplex), 10);
  ASSERT_TRUE(es.counterexample.has_value());
  EXPECT_EQ(*es.counterexample, (RationalPoint{Rational(1, 2), Rational(1, 2), Rational(1, 2)}));
  EXPECT_EQ(es.samples_tested, 1u);
  EXPECT_EQ(es.unimodular_simplices, 0u);

  for (std::size_t d = 1; d <= 3; ++d)
    EXPECT_FALSE(ucp_falsify(simplex(d), 100).counterexample.has_value());
}

TEST(Ucp, CounterexamplesAreSound) {
  // Every returned point is checked against all unimodular simplices found
  // by an independent subset scan.
  Rng rng(223);
  for (int trial = 0; trial < 8; ++trial) {
    auto v = rng.points(4, 3, 0, 2);
    auto p = convex_hull(v);
    if (p.dim() != 3) continue;
    auto r = ucp_falsify(p, 50);
    if (!r.counterexample) continue;
    auto lp = oracle_lattice_points(p.vertices());
    testing::for_each_subset(lp.size(), 4, [&](const std::vector<std::size_t>& s) {
      IntMatrix e;
      for (int i = 1; i < 4; ++i) e.push_back(sub(lp[s[i]], lp[s[0]]));
      if (abs(determinant(e)) != 1) return;
      std::vector<LatticePoint> simplex_pts;
      for (auto i : s) simplex_pts.push_back(lp[i]);
      EXPECT_FALSE(testing::oracle_in_hull(simplex_pts, *r.counterexample));
    });
  }
}

TEST(Ucp, RandomPhaseReadsBits) {
  auto bits = BitSource::from_bit_string(std::string(16 * 4 * 3, '1'));
  auto r = ucp_falsify(cube(2), 1000, &bits);
  EXPECT_FALSE(r.counterexample.has_value());
  EXPECT_TRUE(r.bits_exhausted);
  EXPECT_EQ(bits.cursor(), 16u * 4 * 3);
}

TEST(Icp, Examples) {
  for (std::size_t d = 1; d <= 3; ++d)
    EXPECT_TRUE(icp_check_bounded(simplex(d), d + 1, 4).holds);
  EXPECT_TRUE(icp_check_bounded(cube(2), 3, 5).holds);
  auto sq = cube(2);
  bool oracle = oracle_icp_r(sq.vertices(), 2) <= 2;
  EXPECT_EQ(icp_check_bounded(sq, 2, 2).holds, oracle);
  EXPECT_TRUE(oracle);
  EXPECT_THROW(icp_check_bounded(convex_hull(kEmptySimplex), 4, 3), PreconditionError);
  EXPECT_THROW(icp_check_bounded(sq, 3, 1), PreconditionError);
}

TEST(Icp, MatchesOracleAndIsMonotone) {
  Rng rng(227);
  for (int trial = 0; trial < 8; ++trial) {
    auto p = convex_hull(rng.points(4, 2, 0, 3));
    if (p.dim() != 2) continue;
    const long c_max = 3;
    std::size_t need = oracle_icp_r(p.vertices(), c_max);
    for (std::size_t r = 1; r <= 5; ++r) {
      auto res = icp_check_bounded(p, r, c_max);
      EXPECT_EQ(res.holds, r >= need) << "trial " << trial << " r " << r;
      // Antitone in c_max.
      if (res.holds) EXPECT_TRUE(icp_check_bounded(p, r, 2).holds);
    }
  }
}

TEST(Caratheodory, Examples) {
  auto tri = caratheodory_bounds(simplex(2), 6);
  EXPECT_EQ(tri.lower_bound, 3u);
  auto sq = caratheodory_bounds(cube(2), 6);
  EXPECT_GE(sq.lower_bound, 3u);
  EXPECT_LE(sq.lower_bound, 4u);
  EXPECT_EQ(sq.lower_bound, std::max<std::size_t>(3, oracle_icp_r(cube(2).vertices(), 6)));
  auto c3 = caratheodory_bounds(cube(3), 4);
  EXPECT_GE(c3.lower_bound, 4u);
  EXPECT_LE(c3.lower_bound, 6u);
  EXPECT_EQ(c3.envelope_low, 4u);
  EXPECT_EQ(c3.envelope_high, 6u);
}

}  // namespace
}  // namespace normwalk
