#pragma once

// Polytope generation from bit streams, the SL_d(Z)-parametrized hexagon
// family and frequency surveys over generated streams.

#include "normwalk/bits.hpp"
#include "normwalk/poset.hpp"

#include <map>
#include <set>
#include <string>

namespace normwalk {

// ---------------------------------------------------------------------------
// Clusters

struct ClusterSpec {
  std::uint64_t n = 1;  // bits per coordinate, also the cluster index
  std::uint64_t d = 2;
  std::uint64_t v = 3;  // points per polytope
  std::uint64_t c = 1;

  /// (n·d·v)^c
  Integer phi() const { return ipow(Integer(n * d * v), static_cast<unsigned>(c)); }
  Integer bits_required() const { return Integer(n * d * v) * phi(); }
};

struct GeneratedPolytope {
  LatticePolytope polytope;
  std::vector<LatticePoint> points;  // the raw v-tuple
  std::uint64_t cluster = 0;
  std::uint64_t index = 0;   // position within the cluster
  std::uint64_t offset = 0;  // bit offset of the first coordinate
  bool degenerate = false;   // repeated points or not full-dimensional
};

/// Consumes exactly n·d·v·φ bits and returns φ polytopes. Nothing is consumed
/// if the source holds fewer bits.
inline std::vector<GeneratedPolytope> generate_cluster(BitSource& src, const ClusterSpec& spec) {
  if (spec.n == 0 || spec.d == 0 || spec.v == 0)
    throw PreconditionError("cluster parameters must be positive");
  const Integer need = spec.bits_required();
  if (Integer(spec.v) * spec.phi() > Integer(enumeration_cap()))
    throw ResourceCapExceeded("cluster size exceeds cap");
  src.require(static_cast<std::uint64_t>(need));
  const auto phi = static_cast<std::uint64_t>(spec.phi());
  std::vector<GeneratedPolytope> out;
  out.reserve(phi);
  for (std::uint64_t k = 0; k < phi; ++k) {
    GeneratedPolytope g;
    g.cluster = spec.n;
    g.index = k;
    g.offset = src.cursor();
    for (std::uint64_t j = 0; j < spec.v; ++j) {
      LatticePoint x(spec.d);
      for (auto& coord : x) coord = src.read_uint(spec.n);
      g.points.push_back(std::move(x));
    }
    g.polytope = convex_hull(g.points);
    std::set<LatticePoint> distinct(g.points.begin(), g.points.end());
    g.degenerate = distinct.size() < g.points.size() || !g.polytope.is_full_dimensional();
    out.push_back(std::move(g));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hexagon family

/// 36 + (3d² - d)/2
inline Integer theta(std::uint64_t d) {
  if (d < 1) throw PreconditionError("theta needs d >= 1");
  return 36 + (3 * Integer(d) * d - d) / 2;
}

struct HexagonParams {
  std::size_t d = 2;
  std::vector<Integer> a;  // exponents, length theta(d)
  std::vector<std::pair<std::size_t, std::size_t>> positions;  // 1-based (i, j), i != j
};

inline void validate(const HexagonParams& p) {
  const auto t = static_cast<std::size_t>(theta(p.d));
  if (p.a.size() != t || p.positions.size() != t)
    throw PreconditionError("hexagon parameters need theta(d) = " + std::to_string(t) +
                            " exponents and positions");
  for (const auto& [i, j] : p.positions)
    if (i < 1 || j < 1 || i > p.d || j > p.d || i == j)
      throw PreconditionError("malformed elementary matrix position (" + std::to_string(i) +
                              ", " + std::to_string(j) + ")");
}

/// The product of the elementary matrices e_{i_k j_k}^{a_k}, in order.
inline IntMatrix hexagon_basis(const HexagonParams& p) {
  validate(p);
  IntMatrix m = identity_matrix(p.d);
  for (std::size_t k = 0; k < p.a.size(); ++k) {
    if (p.a[k] == 0) continue;
    // Right multiplication by e_ij^a adds a times column i to column j.
    const std::size_t i = p.positions[k].first - 1, j = p.positions[k].second - 1;
    for (std::size_t r = 0; r < p.d; ++r) m[r][j] += p.a[k] * m[r][i];
  }
  return m;
}

/// The 2d+2 generating points 0, e_1..e_{d+1}, (z_1, 1)..(z_d, 1) in Z^{d+1}.
inline std::vector<LatticePoint> hexagon_points(const HexagonParams& p) {
  const IntMatrix z = hexagon_basis(p);
  std::vector<LatticePoint> pts{LatticePoint(p.d + 1, 0)};
  for (std::size_t i = 0; i <= p.d; ++i) pts.push_back(unit_vector(p.d + 1, i));
  for (const auto& row : z) {
    LatticePoint x = row;
    x.push_back(1);
    pts.push_back(std::move(x));
  }
  return pts;
}

inline LatticePolytope hexagon_from_params(const HexagonParams& p) {
  return convex_hull(hexagon_points(p));
}

/// The index-th position sequence in lexicographic order, reading index in
/// base d(d-1) with the first position most significant. Ordered pairs are
/// listed lexicographically.
inline std::vector<std::pair<std::size_t, std::size_t>> systematic_positions(std::size_t d,
                                                                             Integer index) {
  if (d < 2) throw PreconditionError("elementary matrices need d >= 2");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 1; i <= d; ++i)
    for (std::size_t j = 1; j <= d; ++j)
      if (i != j) pairs.emplace_back(i, j);
  const auto t = static_cast<std::size_t>(theta(d));
  const Integer base = pairs.size();
  if (index < 0 || index >= ipow(base, static_cast<unsigned>(t)))
    throw PreconditionError("systematic position index out of range");
  std::vector<std::pair<std::size_t, std::size_t>> out(t);
  for (std::size_t k = t; k-- > 0;) {
    out[k] = pairs[static_cast<std::size_t>(index % base)];
    index /= base;
  }
  return out;
}

/// Exponents uniform in [-bound, bound] read from bits; positions either read
/// from bits or taken from systematic_positions(d, position_index).
inline HexagonParams hexagon_params_from_bits(BitSource& src, std::size_t d,
                                              const Integer& bound,
                                              std::optional<Integer> position_index = {}) {
  if (d < 2) throw PreconditionError("elementary matrices need d >= 2");
  if (bound < 0) throw PreconditionError("exponent bound must be nonnegative");
  const auto t = static_cast<std::size_t>(theta(d));
  HexagonParams p;
  p.d = d;
  for (std::size_t k = 0; k < t; ++k) p.a.push_back(src.uniform_below(2 * bound + 1) - bound);
  if (position_index) {
    p.positions = systematic_positions(d, *position_index);
  } else {
    const Integer pairs = Integer(d) * (d - 1);
    for (std::size_t k = 0; k < t; ++k) {
      auto r = static_cast<std::size_t>(src.uniform_below(pairs));
      std::size_t i = r / (d - 1), j = r % (d - 1);
      if (j >= i) ++j;
      p.positions.emplace_back(i + 1, j + 1);
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// Surveys

struct SurveyChecks {
  bool normal = true;
  bool minimal = false;
  bool maximal = false;
};

struct SurveyVerdict {
  std::uint64_t cluster = 0;
  std::uint64_t index = 0;
  std::uint64_t offset = 0;
  bool degenerate = false;
  std::optional<bool> normal, minimal, maximal;
  bool capped = false;  // a check hit the enumeration cap
};

using SurveyCounts = std::map<std::string, std::uint64_t>;

inline SurveyCounts empty_survey_counts() {
  return {{"total", 0},   {"normal", 0},    {"minimal", 0},
          {"maximal", 0}, {"isolated_candidate", 0}, {"degenerate", 0}, {"capped", 0}};
}

struct SurveyStats {
  SurveyCounts counts = empty_survey_counts();
  std::map<std::uint64_t, SurveyCounts> per_cluster;
  std::vector<SurveyVerdict> verdicts;
};

/// Checks one polytope in the order normal, minimal, maximal; later checks
/// run only on normal input.
inline SurveyVerdict survey_one(const GeneratedPolytope& g, const SurveyChecks& checks) {
  SurveyVerdict v{g.cluster, g.index, g.offset, g.degenerate, {}, {}, {}, false};
  try {
    v.normal = is_integrally_closed(g.polytope).holds;
    if (!*v.normal) return v;
    if (checks.minimal) v.minimal = is_minimal(g.polytope);
    if (checks.maximal) v.maximal = is_maximal(g.polytope);
  } catch (const ResourceCapExceeded&) {
    v.capped = true;
  }
  return v;
}

inline void accumulate(SurveyStats& stats, const SurveyVerdict& v) {
  auto bump = [&](const char* key) {
    ++stats.counts[key];
    auto& cluster = stats.per_cluster.try_emplace(v.cluster, empty_survey_counts()).first->second;
    ++cluster[key];
  };
  bump("total");
  if (v.degenerate) bump("degenerate");
  if (v.capped) bump("capped");
  if (v.normal.value_or(false)) bump("normal");
  if (v.minimal.value_or(false)) bump("minimal");
  if (v.maximal.value_or(false)) bump("maximal");
  if (v.minimal.value_or(false) && v.maximal.value_or(false)) bump("isolated_candidate");
  stats.verdicts.push_back(v);
}

inline SurveyStats survey(const std::vector<GeneratedPolytope>& stream, SurveyChecks checks) {
  if (!checks.normal && !checks.minimal && !checks.maximal)
    throw PreconditionError("survey needs at least one check");
  checks.normal = true;
  SurveyStats stats;
  for (const auto& g : stream) accumulate(stats, survey_one(g, checks));
  return stats;
}

/// Wraps plain polytopes as cluster 0 entries.
inline std::vector<GeneratedPolytope> as_stream(const std::vector<LatticePolytope>& polys) {
  std::vector<GeneratedPolytope> out;
  for (std::size_t i = 0; i < polys.size(); ++i) {
    GeneratedPolytope g;
    g.polytope = polys[i];
    g.points = polys[i].vertices();
    g.index = i;
    g.degenerate = !polys[i].is_full_dimensional();
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace normwalk
