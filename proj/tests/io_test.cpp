#include "normwalk/io.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <sstream>

namespace normwalk {
namespace {

using testing::pt;
using testing::pts;
using testing::Rng;
using testing::rpt;

TEST(Json, ScalarsAreStrings) {
  EXPECT_EQ(io::to_json(Integer(-7)), Json("-7"));
  EXPECT_EQ(io::to_json(Rational(3, 6)), Json("1/2"));
  EXPECT_EQ(io::to_json(Rational(-4, 2)), Json("-2"));
  const Integer big = ipow(Integer(10), 40) + 1;
  EXPECT_EQ(io::integer_from_json(io::to_json(big)), big);
  EXPECT_EQ(io::rational_from_json(Json("-6/4")), Rational(-3, 2));
  EXPECT_EQ(io::integer_from_json(Json(12)), 12);
  EXPECT_THROW(io::integer_from_json(Json("1.5")), MalformedInput);
  EXPECT_THROW(io::integer_from_json(Json(1.5)), MalformedInput);
  EXPECT_THROW(io::rational_from_json(Json("1/0")), MalformedInput);
  EXPECT_THROW(io::integer_from_json(Json(nullptr)), MalformedInput);
}

TEST(Json, PolytopeRoundTrip) {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t d = 1 + trial % 3;
    auto p = convex_hull(rng.points(2 + trial % 5, d, -4, 4));
    const std::string text = io::dump(io::to_json(p));
    auto back = io::lattice_polytope_from_json(io::parse(text));
    EXPECT_EQ(back, p);
    EXPECT_EQ(io::dump(io::to_json(back)), text);
  }
}

TEST(Json, HugeCoordinates) {
  const Integer big = ipow(Integer(2), 80);
  LatticePoint a{big, Integer(0)}, b{Integer(0), big}, o{Integer(0), Integer(0)};
  auto p = convex_hull({o, a, b});
  auto back = io::lattice_polytope_from_json(io::parse(io::dump(io::to_json(p))));
  EXPECT_EQ(back, p);
}

TEST(Json, PolytopeReaderRejectsBadInput) {
  EXPECT_THROW(io::lattice_polytope_from_json(io::parse(R"({"vertices": [["0"]]})")),
               MalformedInput);
  EXPECT_THROW(io::lattice_polytope_from_json(io::parse(R"({"dim": 2, "vertices": [["0"]]})")),
               MalformedInput);
  EXPECT_THROW(io::lattice_polytope_from_json(io::parse(R"({"dim": 1, "vertices": []})")),
               MalformedInput);
  EXPECT_THROW(io::lattice_polytope_from_json(io::parse(R"({"dim": 1, "vertices": [["1/2"]]})")),
               MalformedInput);
  EXPECT_THROW(io::parse(std::string("{\"dim\": ")), MalformedInput);
}

TEST(Json, RationalPolytopeRoundTrip) {
  auto p = rational_hull({rpt({0, 0}), rpt({Rational(1, 3), 0}), rpt({0, Rational(5, 2)})});
  const std::string text = io::dump(io::to_json(p));
  EXPECT_NE(text.find("\"1/3\""), std::string::npos);
  auto back = io::rational_polytope_from_json(io::parse(text));
  EXPECT_EQ(back, p);
  EXPECT_EQ(io::dump(io::to_json(back)), text);
}

TEST(Json, KeysAreSorted) {
  io::CheckDocument d;
  d.header.command = "check";
  d.header.params = {{"zeta", "1"}, {"alpha", "2"}};
  d.polytope = cube(2);
  d.report = normality_report(d.polytope);
  const std::string text = io::dump(io::to_json(d));
  EXPECT_LT(text.find("\"alpha\""), text.find("\"zeta\""));
  EXPECT_LT(text.find("\"cr\""), text.find("\"falsified\""));
  EXPECT_LT(text.find("\"falsified\""), text.find("\"header\""));
}

TEST(Documents, CheckRoundTrip) {
  for (const auto& p : {cube(2), convex_hull(pts({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 2}}))}) {
    io::CheckDocument d;
    d.header.command = "check";
    d.polytope = p;
    d.report = normality_report(p);
    d.smooth = is_smooth(p);
    if (d.report.integrally_closed) {
      d.icp = icp_check_bounded(p, 3, 3);
      d.cr = caratheodory_bounds(p, 3);
    }
    d.ucp = ucp_falsify(p, 10);
    const std::string text = io::dump(io::to_json(d));
    auto back = io::check_from_json(io::parse(text));
    EXPECT_EQ(io::dump(io::to_json(back)), text);
    EXPECT_EQ(back.falsified(), !d.report.integrally_closed);
  }
}

TEST(Documents, FalsifiedFlagMustAgree) {
  io::CheckDocument d;
  d.header.command = "check";
  d.polytope = cube(2);
  d.report = normality_report(d.polytope);
  Json j = io::to_json(d);
  j["falsified"] = true;
  EXPECT_THROW(io::check_from_json(j), MalformedInput);
}

TEST(Documents, JumpsRoundTrip) {
  io::JumpsDocument d;
  d.header.command = "jumps";
  d.polytope = cube(2);
  auto up = enumerate_jumps_up(d.polytope);
  d.height_bound = up.height_bound;
  d.tested = up.tested.size();
  d.up = up.jumps;
  d.down = enumerate_jumps_down(d.polytope);
  const std::string text = io::dump(io::to_json(d));
  auto back = io::jumps_from_json(io::parse(text));
  EXPECT_EQ(io::dump(io::to_json(back)), text);
  ASSERT_EQ(back.up.size(), d.up.size());
  for (std::size_t i = 0; i < d.up.size(); ++i) EXPECT_EQ(back.up[i].target, d.up[i].target);
}

TEST(Documents, WalkLinesRoundTrip) {
  auto bits = BitSource::from_bit_string(std::string(40, '1') + std::string(40, '0'));
  io::WalkDocument d;
  d.header.command = "walk";
  d.header.bits = io::provenance(bits, 0);
  d.strategy = WalkStrategy::random;
  d.budget = 3;
  WalkOptions opt;
  opt.strategy = WalkStrategy::random;
  opt.budget = 3;
  opt.bits = &bits;
  d.trace = walk(cube(2), opt);
  std::string text;
  for (const auto& l : io::walk_lines(d)) text += l + "\n";
  std::istringstream in(text);
  auto back = io::walk_from_lines(in);
  std::string again;
  for (const auto& l : io::walk_lines(back)) again += l + "\n";
  EXPECT_EQ(again, text);
  EXPECT_EQ(back.trace.volumes, d.trace.volumes);
  EXPECT_EQ(zeta_partial(back.trace, 1), zeta_partial(d.trace, 1));
}

TEST(Documents, WalkReaderChecksVolumes) {
  io::WalkDocument d;
  d.header.command = "walk";
  d.budget = 1;
  WalkOptions opt;
  opt.budget = 1;
  d.trace = walk(cube(2), opt);
  auto lines = io::walk_lines(d);
  Json step = Json::parse(lines[1]);
  step["volume"] = "99";
  lines[1] = step.dump();
  std::string text;
  for (const auto& l : lines) text += l + "\n";
  std::istringstream in(text);
  EXPECT_THROW(io::walk_from_lines(in), MalformedInput);
}

TEST(Documents, AtlasRoundTrip) {
  io::AtlasDocument d;
  d.header.command = "atlas";
  d.atlas = build_atlas(pt({0, 0}), pt({1, 1}));
  const std::string text = io::dump(io::to_json(d));
  auto back = io::atlas_from_json(io::parse(text));
  EXPECT_EQ(io::dump(io::to_json(back)), text);
  EXPECT_EQ(back.atlas.elements, d.atlas.elements);
}

TEST(Documents, GenAndSurveyRoundTrip) {
  auto bits = BitSource::from_bit_string(std::string(36, '0') + std::string(144, '1'));
  io::GenDocument g;
  g.header.command = "gen";
  g.params = {1, 2, 2, 3, 1};
  for (std::uint64_t n = 1; n <= 2; ++n)
    for (auto& p : generate_cluster(bits, ClusterSpec{n, 2, 3, 1})) g.polytopes.push_back(p);
  g.header.bits = io::provenance(bits, 0);
  EXPECT_EQ(g.header.bits->consumed, g.params.total_bits());
  auto stats = survey(g.polytopes, {true, true, true});
  g.counts = stats.counts;
  const std::string text = io::dump(io::to_json(g));
  EXPECT_EQ(io::dump(io::to_json(io::gen_from_json(io::parse(text)))), text);

  io::SurveyDocument s;
  s.header.command = "survey";
  s.checks = {true, true, true};
  s.counts = stats.counts;
  s.per_cluster = stats.per_cluster;
  const std::string stext = io::dump(io::to_json(s));
  EXPECT_EQ(io::dump(io::to_json(io::survey_from_json(io::parse(stext)))), stext);
  const std::string csv = io::survey_csv(s);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "cluster,n,total,normal,minimal,maximal");
  EXPECT_NE(csv.find("\n1,1,6,"), std::string::npos);
  EXPECT_NE(csv.find("\n2,2,12,"), std::string::npos);
}

TEST(Documents, PyramidRoundTrip) {
  auto p = rational_hull(cube(2));
  auto q = rational_hull({rpt({0, 0}), rpt({1, 0}), rpt({1, 1}), rpt({Rational(1, 2), 2}),
                          rpt({0, 1})});
  io::ExtensionDocument e{{"pyramid", {}, {}}, p, q, is_pyramidal_extension(p, q)};
  const std::string text = io::dump(io::to_json(e));
  auto back = io::extension_from_json(io::parse(text));
  EXPECT_EQ(io::dump(io::to_json(back)), text);
  EXPECT_TRUE(back.result.holds);

  auto tri = rational_hull(simplex(2));
  io::ChainDocument c{{"pyramid", {}, {}}, tri, q, 5, search_pyramidal_chain(tri, q, 5)};
  ASSERT_TRUE(c.chain.has_value());
  const std::string ctext = io::dump(io::to_json(c));
  auto cback = io::chain_document_from_json(io::parse(ctext));
  EXPECT_EQ(io::dump(io::to_json(cback)), ctext);
  EXPECT_TRUE(verify_chain(*cback.chain));
}

TEST(Documents, HeaderRoundTrip) {
  io::RunHeader h;
  h.command = "gen";
  h.params = {{"bits", "x.bin"}};
  h.bits = io::BitProvenance{"file", "x.bin", 8, 64, 800};
  EXPECT_EQ(io::header_from_json(io::to_json(h)), h);
}

}  // namespace
}  // namespace normwalk
