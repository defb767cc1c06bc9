#include "normwalk/cones.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

namespace normwalk {
namespace {

using testing::pt;
using testing::pts;
using testing::Rng;

IntMatrix mat(std::initializer_list<std::initializer_list<long>> rows) { return pts(rows); }

IntMatrix to_int(const std::vector<std::vector<long>>& v) {
  IntMatrix m;
  for (const auto& r : v) {
    IntVec row;
    for (long x : r) row.emplace_back(x);
    m.push_back(std::move(row));
  }
  return m;
}

TEST(ConeOver, UnitSquare) {
  auto c = cone_over(cube(2));
  EXPECT_EQ(c.ambient_dim(), 3u);
  EXPECT_EQ(c.dim(), 3);
  EXPECT_TRUE(c.is_pointed());
  ASSERT_EQ(c.generators().size(), 4u);
  for (const auto& g : c.generators()) EXPECT_EQ(g.back(), 1);
}

TEST(ConeOver, Point) {
  auto c = cone_over(convex_hull(pts({{0, 0}})));
  EXPECT_EQ(c.dim(), 1);
  EXPECT_EQ(c.generators(), mat({{0, 0, 1}}));
}

TEST(ConeOver, EmptySimplexIsSimplicial) {
  auto s = convex_hull(pts({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 2}}));
  auto c = cone_over(s);
  EXPECT_EQ(c.dim(), 4);
  EXPECT_EQ(c.generators(), mat({{0, 0, 0, 1}, {0, 1, 0, 1}, {1, 0, 0, 1}, {1, 1, 2, 1}}));
  EXPECT_EQ(c.facets().size(), 4u);
}

TEST(MakeCone, DropsNonExtremeAndDetectsLines) {
  auto c = make_cone(mat({{1, 0}, {1, 1}, {1, 2}, {2, 4}}), 2);
  EXPECT_EQ(c.generators(), mat({{1, 0}, {1, 2}}));
  auto line = make_cone(mat({{1, 0}, {-1, 0}, {0, 1}}), 2);
  EXPECT_FALSE(line.is_pointed());
  EXPECT_THROW(hilbert_basis(line), PreconditionError);
}

TEST(HilbertBasis, UnitSquareCone) {
  auto hb = hilbert_basis(cone_over(cube(2)));
  EXPECT_EQ(hb.elements, mat({{0, 0, 1}, {0, 1, 1}, {1, 0, 1}, {1, 1, 1}}));
  EXPECT_TRUE(hb.height_one_grading);
  for (const auto& deg : hb.degrees) EXPECT_EQ(deg, 1);
}

TEST(HilbertBasis, PlanarCone) {
  auto hb = hilbert_basis(make_cone(mat({{1, 0}, {1, 2}}), 2));
  EXPECT_EQ(hb.elements, mat({{1, 0}, {1, 1}, {1, 2}}));
  EXPECT_EQ(to_int(testing::oracle_hilbert_basis({{1, 0}, {1, 2}})), hb.elements);
  auto hb3 = hilbert_basis(make_cone(mat({{1, 0}, {1, 3}}), 2));
  EXPECT_EQ(hb3.elements, mat({{1, 0}, {1, 1}, {1, 2}, {1, 3}}));
}

TEST(HilbertBasis, UnimodularSimplexCone) {
  for (std::size_t d = 1; d <= 4; ++d) {
    auto p = simplex(d);
    auto hb = hilbert_basis(cone_over(p));
    EXPECT_EQ(hb.elements, cone_over(p).generators());
  }
}

TEST(HilbertBasis, EmptySimplexHasDegreeTwoElement) {
  auto s = convex_hull(pts({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 2}}));
  auto hb = hilbert_basis(cone_over(s));
  EXPECT_EQ(hb.elements.size(), 5u);
  EXPECT_TRUE(std::find(hb.elements.begin(), hb.elements.end(), pt({1, 1, 1, 2})) !=
              hb.elements.end());
  auto tri = hilbert_basis(cone_over(s), HilbertMethod::triangulation);
  EXPECT_EQ(tri.elements, hb.elements);
}

TEST(HilbertBasis, LowerDimensionalCone) {
  // A planar cone embedded in R^3.
  auto c = make_cone(mat({{1, 0, 0}, {1, 2, 0}}), 3);
  EXPECT_EQ(c.dim(), 2);
  EXPECT_EQ(hilbert_basis(c).elements, mat({{1, 0, 0}, {1, 1, 0}, {1, 2, 0}}));
}

TEST(HilbertBasis, MatchesOracleOnRandomCones) {
  Rng rng(101);
  int checked = 0;
  for (int trial = 0; checked < 40; ++trial) {
    std::size_t d = trial % 2 == 0 ? 2 : 3;
    std::size_t n = static_cast<std::size_t>(rng.uniform(static_cast<long>(d), static_cast<long>(d) + 2));
    std::vector<std::vector<long>> gens;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<long> g(d);
      for (auto& x : g) x = rng.uniform(0, 6);
      gens.push_back(g);
    }
    auto expected = testing::oracle_hilbert_basis(gens);
    if (expected.empty()) continue;  // not full-dimensional
    ++checked;
    auto c = make_cone(to_int(gens), d);
    EXPECT_EQ(hilbert_basis(c).elements, to_int(expected)) << "trial " << trial;
    EXPECT_EQ(hilbert_basis(c, HilbertMethod::triangulation).elements, to_int(expected));
  }
}

TEST(HilbertBasis, EquivariantUnderUnimodularMaps) {
  Rng rng(103);
  for (int trial = 0; trial < 15; ++trial) {
    std::size_t d = 2 + static_cast<std::size_t>(trial % 2);
    std::vector<std::vector<long>> gens;
    for (std::size_t i = 0; i < d + 1; ++i) {
      std::vector<long> g(d);
      for (auto& x : g) x = rng.uniform(0, 5);
      gens.push_back(g);
    }
    auto expected = testing::oracle_hilbert_basis(gens);
    if (expected.empty()) continue;
    IntMatrix u = rng.unimodular(d, 5, 2);
    IntMatrix moved;
    for (const auto& g : to_int(gens)) moved.push_back(multiply(u, g));
    IntMatrix want;
    for (const auto& h : to_int(expected)) want.push_back(multiply(u, h));
    std::sort(want.begin(), want.end());
    EXPECT_EQ(hilbert_basis(make_cone(moved, d)).elements, want) << "trial " << trial;
  }
}

TEST(HilbertBasis, GradedAndTriangulationAgreeOnPolytopeCones) {
  Rng rng(107);
  for (int trial = 0; trial < 15; ++trial) {
    std::size_t d = 2 + static_cast<std::size_t>(trial % 2);
    auto p = convex_hull(rng.points(static_cast<std::size_t>(rng.uniform(2, 6)), d, 0, 2));
    auto c = cone_over(p);
    EXPECT_EQ(hilbert_basis(c, HilbertMethod::graded).elements,
              hilbert_basis(c, HilbertMethod::triangulation).elements)
        << "trial " << trial;
  }
}

TEST(HilbertBasis, ElementsPairwiseIrreducible) {
  Rng rng(109);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::vector<long>> gens;
    for (int i = 0; i < 3; ++i) gens.push_back({rng.uniform(0, 5), rng.uniform(0, 5), rng.uniform(0, 5)});
    auto c = make_cone(to_int(gens), 3);
    if (c.dim() != 3) continue;
    auto hb = hilbert_basis(c).elements;
    for (const auto& h : hb)
      for (const auto& a : hb)
        if (a != h) {
          auto rest = sub(h, a);
          // h - a in the cone would make h reducible.
          EXPECT_FALSE(c.contains(rest) && !is_zero(rest));
        }
  }
}

TEST(Homogeneous, Examples) {
  auto sq = is_homogeneous(cone_over(cube(2)));
  ASSERT_TRUE(sq.homogeneous);
  EXPECT_EQ(sq.witness->normal, pt({0, 0, 1}));
  EXPECT_EQ(sq.witness->offset, 1);

  auto planar = is_homogeneous(make_cone(mat({{1, 0}, {1, 2}}), 2));
  ASSERT_TRUE(planar.homogeneous);
  EXPECT_EQ(planar.witness->normal, pt({1, 0}));
  EXPECT_EQ(planar.witness->offset, 1);

  EXPECT_TRUE(is_homogeneous(make_cone(mat({{1, 0}, {1, 3}}), 2)).homogeneous);

  // Basis (1,1), (1,2), (2,1) does not lie on one affine line.
  auto c = make_cone(mat({{2, 1}, {1, 2}}), 2);
  EXPECT_EQ(hilbert_basis(c).elements, mat({{1, 1}, {1, 2}, {2, 1}}));
  EXPECT_FALSE(is_homogeneous(c).homogeneous);
}

TEST(Homogeneous, WitnessContainsBasisAndMissesOrigin) {
  auto s = convex_hull(pts({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 2}}));
  auto c = cone_over(s);
  // (1,1,1,2) sits at height 2, so no affine hyperplane through the basis
  // avoids the origin.
  EXPECT_FALSE(is_homogeneous(c).homogeneous);
  auto r = is_homogeneous(cone_over(cube(3)));
  ASSERT_TRUE(r.homogeneous);
  EXPECT_NE(r.witness->offset, 0);
  for (const auto& h : hilbert_basis(cone_over(cube(3))).elements)
    EXPECT_EQ(dot(r.witness->normal, h), r.witness->offset);
}

TEST(HeightFiltration, Predicate) {
  auto s = convex_hull(pts({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 2}}));
  EXPECT_FALSE(in_height_filtration(cone_over(s), 1));
  EXPECT_TRUE(in_height_filtration(cone_over(s), 2));
  EXPECT_TRUE(in_height_filtration(cone_over(cube(2)), 1));
}

TEST(MonoidMember, Examples) {
  auto a = monoid_member(pt({2, 2}), mat({{1, 1}}));
  ASSERT_TRUE(a.member);
  EXPECT_EQ(a.coefficients, std::vector<Integer>{2});

  EXPECT_FALSE(monoid_member(pt({1, 1}), mat({{1, 0}, {0, 2}})).member);

  auto gens = mat({{1, 1}, {1, 2}, {0, 1}});
  auto c = monoid_member(pt({3, 4}), gens);
  ASSERT_TRUE(c.member);
  IntVec sum(2, 0);
  for (std::size_t i = 0; i < gens.size(); ++i) sum = add(sum, scale(gens[i], c.coefficients[i]));
  EXPECT_EQ(sum, pt({3, 4}));
  for (const auto& x : c.coefficients) EXPECT_GE(x, 0);

  EXPECT_THROW(monoid_member(pt({1, 0}), mat({{1, 0}, {-1, 0}})), PreconditionError);
  EXPECT_THROW(monoid_member(pt({1, 0}), mat({{0, 0}})), PreconditionError);
}

TEST(MonoidMember, MatchesExhaustiveSearch) {
  Rng rng(113);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::vector<long>> gens;
    for (int i = 0; i < 3; ++i) {
      std::vector<long> g{rng.uniform(0, 3), rng.uniform(0, 3)};
      if (g[0] == 0 && g[1] == 0) g[0] = 1;
      gens.push_back(g);
    }
    std::vector<long> z{rng.uniform(0, 7), rng.uniform(0, 7)};
    // Coefficients never exceed 7 because every generator is nonzero and
    // nonnegative.
    bool expected = false;
    for (long a = 0; a <= 7 && !expected; ++a)
      for (long b = 0; b <= 7 && !expected; ++b)
        for (long c = 0; c <= 7 && !expected; ++c) {
          bool eq = true;
          for (int j = 0; j < 2; ++j)
            eq = eq && a * gens[0][j] + b * gens[1][j] + c * gens[2][j] == z[j];
          expected = eq;
        }
    auto r = monoid_member(to_int({z}).front(), to_int(gens));
    EXPECT_EQ(r.member, expected) << "trial " << trial;
  }
}

TEST(ConeExtension, Examples) {
  auto quadrant = make_cone(mat({{1, 0}, {0, 1}}), 2);
  EXPECT_TRUE(is_cone_extension(make_cone(mat({{1, 0}}), 2), quadrant, pt({0, 1})));

  auto c = make_cone(mat({{1, 0}, {1, 2}}), 2);
  EXPECT_TRUE(is_cone_extension(make_cone(mat({{1, 0}, {1, 1}}), 2), c, pt({1, 2})));
  EXPECT_FALSE(is_cone_extension(make_cone(mat({{1, 0}}), 2), c, pt({1, 2})));

  EXPECT_THROW(is_cone_extension(quadrant, c, pt({1, 2})), PreconditionError);
  EXPECT_THROW(is_cone_extension(make_cone(mat({{1, 0}}), 2), c, pt({1, 0})),
               PreconditionError);
}

TEST(ConeExtension, ImpliesCoverageOnBox) {
  Rng rng(127);
  int positives = 0;
  for (int trial = 0; trial < 60; ++trial) {
    IntVec top = pt({rng.uniform(0, 3), rng.uniform(1, 3)});
    IntVec mid = pt({rng.uniform(0, 3), rng.uniform(0, 3)});
    auto big = make_cone(IntMatrix{pt({1, 0}), top}, 2);
    auto small = make_cone(IntMatrix{pt({1, 0}), mid}, 2);
    if (!big.contains(mid) || small.contains(top) || big.dim() != 2) continue;
    if (!is_cone_extension(small, big, top)) continue;
    ++positives;
    // Every lattice point of big in a box is reachable as small-point + t*top.
    for (long x = 0; x <= 8; ++x)
      for (long y = 0; y <= 8; ++y) {
        IntVec z = pt({x, y});
        if (!big.contains(z)) continue;
        bool ok = false;
        for (IntVec rest = z; big.contains(rest); rest = sub(rest, top))
          if (small.contains(rest)) ok = true;
        EXPECT_TRUE(ok);
      }
  }
  EXPECT_GT(positives, 0);
}

}  // namespace
}  // namespace normwalk
