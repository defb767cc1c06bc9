#pragma once

// Canonical JSON for every document the command-line tool emits, with a
// reader for each. Objects are key-sorted, integers are decimal strings and
// rationals are "p/q" strings, so write(read(text)) reproduces text exactly.

#include "normwalk/atlas.hpp"
#include "normwalk/continuous.hpp"
#include "normwalk/generators.hpp"
#include "normwalk/normality.hpp"
#include "normwalk/poset.hpp"

#include <nlohmann/json.hpp>

#include <istream>
#include <map>
#include <string>

namespace normwalk {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

class MalformedInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace io {

// ---------------------------------------------------------------------------
// Scalars and points

inline Json to_json(const Integer& a) { return a.str(); }
inline Json to_json(const Rational& r) { return to_string(r); }

inline Integer integer_from_json(const Json& j) {
  try {
    if (j.is_string()) return parse_integer(j.get<std::string>());
    if (j.is_number_integer()) return Integer(j.get<long long>());
  } catch (const std::invalid_argument& e) {
    throw MalformedInput(e.what());
  }
  throw MalformedInput("expected an integer, got " + j.dump());
}

inline Rational rational_from_json(const Json& j) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
  } catch (const std::invalid_argument& e) {
    throw MalformedInput(e.what());
  }
  throw MalformedInput("expected a rational, got " + j.dump());
}

inline std::uint64_t count_from_json(const Json& j) {
  Integer v = integer_from_json(j);
  if (v < 0 || v > std::numeric_limits<std::uint64_t>::max())
    throw MalformedInput("count out of range: " + v.str());
  return static_cast<std::uint64_t>(v);
}

template <class T>
Json vec_to_json(const std::vector<T>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) throw MalformedInput(std::string("expected an object holding '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) throw MalformedInput(std::string("missing field '") + key + "'");
  return *it;
}

inline const Json& array_field(const Json& j, const char* key) {
  const Json& a = field(j, key);
  if (!a.is_array()) throw MalformedInput(std::string("field '") + key + "' must be an array");
  return a;
}

inline bool bool_field(const Json& j, const char* key) {
  const Json& b = field(j, key);
  if (!b.is_boolean()) throw MalformedInput(std::string("field '") + key + "' must be a boolean");
  return b.get<bool>();
}

inline std::string string_field(const Json& j, const char* key) {
  const Json& s = field(j, key);
  if (!s.is_string()) throw MalformedInput(std::string("field '") + key + "' must be a string");
  return s.get<std::string>();
}

inline std::size_t small_field(const Json& j, const char* key) {
  const Json& n = field(j, key);
  if (!n.is_number_unsigned() && !(n.is_number_integer() && n.get<long long>() >= 0))
    throw MalformedInput(std::string("field '") + key + "' must be a nonnegative number");
  return n.get<std::size_t>();
}

inline IntVec int_vec_from_json(const Json& j) {
  if (!j.is_array()) throw MalformedInput("expected an array of integers");
  IntVec v;
  for (const auto& x : j) v.push_back(integer_from_json(x));
  return v;
}

inline RatVec rat_vec_from_json(const Json& j) {
  if (!j.is_array()) throw MalformedInput("expected an array of rationals");
  RatVec v;
  for (const auto& x : j) v.push_back(rational_from_json(x));
  return v;
}

inline Json points_to_json(const std::vector<LatticePoint>& pts) {
  Json a = Json::array();
  for (const auto& p : pts) a.push_back(vec_to_json(p));
  return a;
}

inline Json points_to_json(const std::vector<RationalPoint>& pts) {
  Json a = Json::array();
  for (const auto& p : pts) a.push_back(vec_to_json(p));
  return a;
}

inline std::vector<LatticePoint> lattice_points_from_json(const Json& j) {
  if (!j.is_array()) throw MalformedInput("expected an array of points");
  std::vector<LatticePoint> out;
  for (const auto& p : j) out.push_back(int_vec_from_json(p));
  return out;
}

template <class Point>
void require_dim(const std::vector<Point>& pts, std::size_t d) {
  if (pts.empty()) throw MalformedInput("polytope has no vertices");
  for (const auto& p : pts)
    if (p.size() != d)
      throw MalformedInput("vertex of length " + std::to_string(p.size()) + " in dimension " +
                           std::to_string(d));
}

// ---------------------------------------------------------------------------
// Polytopes

/// {"dim": d, "vertices": [...]}, where d is the ambient dimension.
inline Json to_json(const LatticePolytope& p) {
  return Json{{"dim", p.ambient_dim()}, {"vertices", points_to_json(p.vertices())}};
}

/// Accepts any point list; the hull is taken.
inline LatticePolytope lattice_polytope_from_json(const Json& j) {
  const std::size_t d = small_field(j, "dim");
  auto pts = lattice_points_from_json(array_field(j, "vertices"));
  require_dim(pts, d);
  return convex_hull(std::move(pts));
}

inline Json hrep_to_json(const LatticePolytope& p) {
  Json normals = Json::array(), offsets = Json::array(), equations = Json::array();
  for (const auto& f : p.facets()) {
    normals.push_back(vec_to_json(f.normal));
    offsets.push_back(to_json(f.offset));
  }
  for (const auto& e : p.equations())
    equations.push_back(Json{{"normal", vec_to_json(e.normal)}, {"offset", to_json(e.offset)}});
  return Json{{"normals", normals}, {"offsets", offsets}, {"equations", equations}};
}

inline Json to_json(const RationalPolytope& p) {
  return Json{{"dim", p.ambient_dim()}, {"vertices", points_to_json(p.vertices())}};
}

inline RationalPolytope rational_polytope_from_json(const Json& j) {
  const std::size_t d = small_field(j, "dim");
  std::vector<RationalPoint> pts;
  for (const auto& p : array_field(j, "vertices")) pts.push_back(rat_vec_from_json(p));
  require_dim(pts, d);
  return rational_hull(pts);
}

inline Json to_json(const std::optional<DecompositionWitness>& w) {
  if (!w) return nullptr;
  return Json{{"c", to_json(w->c)}, {"z", vec_to_json(w->z)}};
}

inline std::optional<DecompositionWitness> witness_from_json(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return DecompositionWitness{integer_from_json(field(j, "c")), int_vec_from_json(field(j, "z"))};
}

template <class T, class F>
Json optional_to_json(const std::optional<T>& v, F&& f) {
  return v ? f(*v) : Json(nullptr);
}

// ---------------------------------------------------------------------------
// Run header

struct BitProvenance {
  std::string origin;  // file, os_entropy, http_fetcher, memory
  std::string source;  // path, dump path or URL
  std::uint64_t start = 0;
  std::uint64_t consumed = 0;
  std::uint64_t available = 0;
  friend bool operator==(const BitProvenance&, const BitProvenance&) = default;
};

inline BitProvenance provenance(const BitSource& src, std::uint64_t start) {
  return {to_string(src.origin()), src.provenance(), start, src.cursor() - start, src.size()};
}

struct RunHeader {
  std::string command;
  std::map<std::string, std::string> params;
  std::optional<BitProvenance> bits;
  std::string version = kVersion;
  friend bool operator==(const RunHeader&, const RunHeader&) = default;
};

inline Json to_json(const RunHeader& h) {
  Json bits = nullptr;
  if (h.bits)
    bits = Json{{"origin", h.bits->origin},
                {"source", h.bits->source},
                {"start", std::to_string(h.bits->start)},
                {"consumed", std::to_string(h.bits->consumed)},
                {"available", std::to_string(h.bits->available)}};
  return Json{{"command", h.command}, {"params", h.params}, {"bits", bits}, {"version", h.version}};
}

inline RunHeader header_from_json(const Json& j) {
  RunHeader h;
  h.command = string_field(j, "command");
  h.version = string_field(j, "version");
  const Json& params = field(j, "params");
  if (!params.is_object()) throw MalformedInput("header params must be an object");
  for (const auto& [k, v] : params.items()) {
    if (!v.is_string()) throw MalformedInput("header param '" + k + "' must be a string");
    h.params[k] = v.get<std::string>();
  }
  const Json& bits = field(j, "bits");
  if (!bits.is_null())
    h.bits = BitProvenance{string_field(bits, "origin"), string_field(bits, "source"),
                           count_from_json(field(bits, "start")),
                           count_from_json(field(bits, "consumed")),
                           count_from_json(field(bits, "available"))};
  return h;
}

// ---------------------------------------------------------------------------
// check

inline Json to_json(const IcpResult& r) {
  return Json{{"holds", r.holds}, {"r", std::to_string(r.r)}, {"c_max", to_json(r.c_max)},
              {"witness", to_json(r.witness)}};
}

inline IcpResult icp_from_json(const Json& j) {
  IcpResult r;
  r.holds = bool_field(j, "holds");
  r.r = count_from_json(field(j, "r"));
  r.c_max = integer_from_json(field(j, "c_max"));
  r.witness = witness_from_json(field(j, "witness"));
  return r;
}

inline Json to_json(const CRCertificate& c) {
  return Json{{"lower_bound", std::to_string(c.lower_bound)},
              {"envelope_low", std::to_string(c.envelope_low)},
              {"envelope_high", std::to_string(c.envelope_high)},
              {"upper_bound_checked", to_json(c.upper_bound_checked)},
              {"witness", to_json(c.witness)}};
}

inline CRCertificate cr_from_json(const Json& j) {
  CRCertificate c;
  c.lower_bound = count_from_json(field(j, "lower_bound"));
  c.envelope_low = count_from_json(field(j, "envelope_low"));
  c.envelope_high = count_from_json(field(j, "envelope_high"));
  c.upper_bound_checked = icp_from_json(field(j, "upper_bound_checked"));
  c.witness = witness_from_json(field(j, "witness"));
  return c;
}

inline Json to_json(const UcpResult& u) {
  return Json{{"counterexample", optional_to_json(u.counterexample,
                                                  [](const RationalPoint& x) { return vec_to_json(x); })},
              {"samples_tested", std::to_string(u.samples_tested)},
              {"unimodular_simplices", std::to_string(u.unimodular_simplices)},
              {"input_normal", u.input_normal},
              {"bits_exhausted", u.bits_exhausted}};
}

inline UcpResult ucp_from_json(const Json& j) {
  UcpResult u;
  const Json& ce = field(j, "counterexample");
  if (!ce.is_null()) u.counterexample = rat_vec_from_json(ce);
  u.samples_tested = count_from_json(field(j, "samples_tested"));
  u.unimodular_simplices = count_from_json(field(j, "unimodular_simplices"));
  u.input_normal = bool_field(j, "input_normal");
  u.bits_exhausted = bool_field(j, "bits_exhausted");
  return u;
}

struct CheckDocument {
  RunHeader header;
  LatticePolytope polytope;
  NormalityReport report;
  bool unimodular_simplex = false;
  SmoothResult smooth;
  std::optional<IcpResult> icp;
  std::optional<CRCertificate> cr;
  std::optional<UcpResult> ucp;

  /// Some requested property failed.
  bool falsified() const {
    return !report.integrally_closed || (icp && !icp->holds) || (ucp && ucp->counterexample);
  }
};

inline Json to_json(const CheckDocument& d) {
  Json report{{"integrally_closed", d.report.integrally_closed},
              {"normal_wrt_lambda", d.report.normal_wrt_lambda},
              {"ic_witness", to_json(d.report.ic_witness)},
              {"normal_witness", to_json(d.report.normal_witness)},
              {"lambda_index", to_json(d.report.lambda_index)},
              {"unimodular_simplex", d.unimodular_simplex},
              {"smooth", d.smooth.smooth},
              {"smooth_offending_vertex",
               optional_to_json(d.smooth.offending_vertex,
                                [](const LatticePoint& x) { return vec_to_json(x); })}};
  return Json{{"header", to_json(d.header)},
              {"polytope", to_json(d.polytope)},
              {"report", report},
              {"icp", optional_to_json(d.icp, [](const IcpResult& r) { return to_json(r); })},
              {"cr", optional_to_json(d.cr, [](const CRCertificate& c) { return to_json(c); })},
              {"ucp", optional_to_json(d.ucp, [](const UcpResult& u) { return to_json(u); })},
              {"falsified", d.falsified()}};
}

inline CheckDocument check_from_json(const Json& j) {
  CheckDocument d;
  d.header = header_from_json(field(j, "header"));
  d.polytope = lattice_polytope_from_json(field(j, "polytope"));
  const Json& r = field(j, "report");
  d.report.integrally_closed = bool_field(r, "integrally_closed");
  d.report.normal_wrt_lambda = bool_field(r, "normal_wrt_lambda");
  d.report.ic_witness = witness_from_json(field(r, "ic_witness"));
  d.report.normal_witness = witness_from_json(field(r, "normal_witness"));
  d.report.lambda_index = integer_from_json(field(r, "lambda_index"));
  d.unimodular_simplex = bool_field(r, "unimodular_simplex");
  d.smooth.smooth = bool_field(r, "smooth");
  const Json& off = field(r, "smooth_offending_vertex");
  if (!off.is_null()) d.smooth.offending_vertex = int_vec_from_json(off);
  if (!field(j, "icp").is_null()) d.icp = icp_from_json(field(j, "icp"));
  if (!field(j, "cr").is_null()) d.cr = cr_from_json(field(j, "cr"));
  if (!field(j, "ucp").is_null()) d.ucp = ucp_from_json(field(j, "ucp"));
  if (bool_field(j, "falsified") != d.falsified())
    throw MalformedInput("falsified flag disagrees with the report");
  return d;
}

// ---------------------------------------------------------------------------
// jumps

struct JumpsDocument {
  RunHeader header;
  LatticePolytope polytope;
  Integer height_bound;
  std::uint64_t tested = 0;
  std::vector<Jump> up;
  std::optional<std::vector<JumpDown>> down;
};

inline Json to_json(const Jump& j) {
  return Json{{"point", vec_to_json(j.point)},
              {"height", to_json(j.height)},
              {"volume", to_json(j.volume)},
              {"target", to_json(j.target)}};
}

inline Jump jump_from_json(const LatticePolytope& base, const Json& j) {
  Jump out;
  out.base = base;
  out.point = int_vec_from_json(field(j, "point"));
  out.height = integer_from_json(field(j, "height"));
  out.volume = integer_from_json(field(j, "volume"));
  out.target = lattice_polytope_from_json(field(j, "target"));
  return out;
}

inline Json to_json(const JumpDown& j) {
  return Json{{"point", vec_to_json(j.point)},
              {"dimension_drop", j.dimension_drop},
              {"smaller", to_json(j.smaller)}};
}

inline Json to_json(const JumpsDocument& d) {
  Json up = Json::array();
  for (const auto& j : d.up) up.push_back(to_json(j));
  Json down = nullptr;
  if (d.down) {
    down = Json::array();
    for (const auto& j : *d.down) down.push_back(to_json(j));
  }
  return Json{{"header", to_json(d.header)},
              {"polytope", to_json(d.polytope)},
              {"height_bound", to_json(d.height_bound)},
              {"tested", std::to_string(d.tested)},
              {"jumps", up},
              {"jumps_down", down},
              {"maximal", d.up.empty()}};
}

inline JumpsDocument jumps_from_json(const Json& j) {
  JumpsDocument d;
  d.header = header_from_json(field(j, "header"));
  d.polytope = lattice_polytope_from_json(field(j, "polytope"));
  d.height_bound = integer_from_json(field(j, "height_bound"));
  d.tested = count_from_json(field(j, "tested"));
  for (const auto& x : array_field(j, "jumps")) d.up.push_back(jump_from_json(d.polytope, x));
  const Json& down = field(j, "jumps_down");
  if (!down.is_null()) {
    d.down.emplace();
    for (const auto& x : down)
      d.down->push_back(JumpDown{lattice_polytope_from_json(field(x, "smaller")),
                                 int_vec_from_json(field(x, "point")),
                                 bool_field(x, "dimension_drop")});
  }
  if (bool_field(j, "maximal") != d.up.empty())
    throw MalformedInput("maximal flag disagrees with the jump list");
  return d;
}

// ---------------------------------------------------------------------------
// walk (JSON lines)

inline const char* to_string(WalkStrategy s) {
  return s == WalkStrategy::random ? "random" : "greedy";
}

inline WalkStrategy strategy_from_string(const std::string& s) {
  if (s == "greedy") return WalkStrategy::greedy_volume;
  if (s == "random") return WalkStrategy::random;
  throw MalformedInput("unknown walk strategy '" + s + "'");
}

inline WalkStop stop_from_string(const std::string& s) {
  for (auto w : {WalkStop::maximal_reached, WalkStop::step_budget, WalkStop::user_stop})
    if (s == normwalk::to_string(w)) return w;
  throw MalformedInput("unknown walk termination '" + s + "'");
}

struct WalkDocument {
  RunHeader header;
  WalkStrategy strategy = WalkStrategy::greedy_volume;
  std::size_t budget = 0;
  WalkTrace trace;
};

inline Json walk_header_line(const RunHeader& h, WalkStrategy s, std::size_t budget,
                             const LatticePolytope& start) {
  return Json{{"header", to_json(h)},
              {"strategy", to_string(s)},
              {"budget", std::to_string(budget)},
              {"start", to_json(start)},
              {"start_volume", to_json(normalized_volume(start))}};
}

inline Json walk_step_line(const WalkTrace& t, std::size_t i) {
  const WalkStep& s = t.steps[i];
  return Json{{"step", i + 1},
              {"point", vec_to_json(s.jump.point)},
              {"height", to_json(s.jump.height)},
              {"volume_gain", to_json(s.jump.volume)},
              {"volume", to_json(t.volumes[i + 1])},
              {"candidates", std::to_string(s.candidates)},
              {"draw", optional_to_json(s.draw, [](const Integer& x) { return to_json(x); })}};
}

inline Json walk_summary_line(const WalkTrace& t) {
  return Json{{"summary",
               Json{{"terminated", normwalk::to_string(t.terminated)},
                    {"steps", std::to_string(t.steps.size())},
                    {"bits_consumed", std::to_string(t.bits_consumed)},
                    {"final", to_json(t.chain.back())},
                    {"zeta_1", to_json(zeta_partial(t, 1))},
                    {"zeta_2", to_json(zeta_partial(t, 2))}}}};
}

inline std::vector<std::string> walk_lines(const WalkDocument& d) {
  std::vector<std::string> out{
      walk_header_line(d.header, d.strategy, d.budget, d.trace.chain.front()).dump()};
  for (std::size_t i = 0; i < d.trace.steps.size(); ++i)
    out.push_back(walk_step_line(d.trace, i).dump());
  out.push_back(walk_summary_line(d.trace).dump());
  return out;
}

/// Rebuilds the trace from the start polytope and the added points; every
/// recorded volume and the final polytope are checked against it.
inline WalkDocument walk_from_lines(std::istream& in) {
  std::vector<Json> lines;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) lines.push_back(Json::parse(line));
  if (lines.size() < 2) throw MalformedInput("walk trace needs a header and a summary line");
  WalkDocument d;
  d.header = header_from_json(field(lines.front(), "header"));
  d.strategy = strategy_from_string(string_field(lines.front(), "strategy"));
  d.budget = count_from_json(field(lines.front(), "budget"));
  LatticePolytope cur = lattice_polytope_from_json(field(lines.front(), "start"));
  d.trace.chain.push_back(cur);
  d.trace.volumes.push_back(normalized_volume(cur));
  for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
    const Json& l = lines[i];
    if (small_field(l, "step") != i) throw MalformedInput("walk steps out of order");
    WalkStep s;
    s.jump.base = cur;
    s.jump.point = int_vec_from_json(field(l, "point"));
    s.jump.height = integer_from_json(field(l, "height"));
    s.jump.volume = integer_from_json(field(l, "volume_gain"));
    auto verts = cur.vertices();
    verts.push_back(s.jump.point);
    s.jump.target = convex_hull(std::move(verts));
    s.candidates = count_from_json(field(l, "candidates"));
    if (!field(l, "draw").is_null()) s.draw = integer_from_json(field(l, "draw"));
    cur = s.jump.target;
    const Integer vol = normalized_volume(cur);
    if (vol != integer_from_json(field(l, "volume")))
      throw MalformedInput("walk step " + std::to_string(i) + " volume mismatch");
    d.trace.chain.push_back(cur);
    d.trace.volumes.push_back(vol);
    d.trace.steps.push_back(std::move(s));
  }
  const Json& sum = field(lines.back(), "summary");
  d.trace.terminated = stop_from_string(string_field(sum, "terminated"));
  d.trace.bits_consumed = count_from_json(field(sum, "bits_consumed"));
  if (count_from_json(field(sum, "steps")) != d.trace.steps.size() ||
      lattice_polytope_from_json(field(sum, "final")) != cur)
    throw MalformedInput("walk summary disagrees with the steps");
  return d;
}

// ---------------------------------------------------------------------------
// atlas

struct AtlasDocument {
  RunHeader header;
  Atlas atlas;
};

inline Json to_json(const AtlasDocument& d) {
  const Atlas& a = d.atlas;
  Json elements = Json::array();
  for (std::size_t i = 0; i < a.elements.size(); ++i) {
    const auto& p = a.elements[i];
    elements.push_back(Json{{"index", i},
                            {"polytope", to_json(p)},
                            {"polytope_dim", p.dim()},
                            {"lattice_points", std::to_string(lattice_point_count(p))},
                            {"volume", to_json(detail::relative_volume(p))}});
  }
  Json edges = Json::array();
  for (const auto& e : a.hasse_edges)
    edges.push_back(Json{{"lower", e.lower},
                         {"upper", e.upper},
                         {"point", vec_to_json(e.point)},
                         {"pyramid", e.pyramid}});
  Json homology = nullptr;
  if (a.homology) {
    Json betti = Json::array(), torsion = Json::array(), simplices = Json::array();
    for (auto b : a.homology->betti) betti.push_back(std::to_string(b));
    for (const auto& t : a.homology->torsion) torsion.push_back(vec_to_json(t));
    for (auto s : a.homology->simplices) simplices.push_back(std::to_string(s));
    homology = Json{{"betti", betti}, {"torsion", torsion}, {"simplices", simplices}};
  }
  return Json{{"header", to_json(d.header)},
              {"box", Json{{"lo", vec_to_json(a.box_lo)}, {"hi", vec_to_json(a.box_hi)}}},
              {"elements", elements},
              {"hasse_edges", edges},
              {"homology", homology},
              {"fingerprint_classes", std::to_string(a.fingerprint_classes)}};
}

inline AtlasDocument atlas_from_json(const Json& j) {
  AtlasDocument d;
  d.header = header_from_json(field(j, "header"));
  Atlas& a = d.atlas;
  a.box_lo = int_vec_from_json(field(field(j, "box"), "lo"));
  a.box_hi = int_vec_from_json(field(field(j, "box"), "hi"));
  for (const auto& e : array_field(j, "elements")) {
    if (small_field(e, "index") != a.elements.size()) throw MalformedInput("atlas index gap");
    a.elements.push_back(lattice_polytope_from_json(field(e, "polytope")));
  }
  for (const auto& e : array_field(j, "hasse_edges")) {
    HasseEdge h{small_field(e, "lower"), small_field(e, "upper"),
                int_vec_from_json(field(e, "point")), bool_field(e, "pyramid")};
    if (h.lower >= a.elements.size() || h.upper >= a.elements.size())
      throw MalformedInput("Hasse edge refers to a missing element");
    a.hasse_edges.push_back(std::move(h));
  }
  const Json& h = field(j, "homology");
  if (!h.is_null()) {
    Homology hom;
    for (const auto& b : array_field(h, "betti")) hom.betti.push_back(count_from_json(b));
    for (const auto& t : array_field(h, "torsion")) hom.torsion.push_back(int_vec_from_json(t));
    for (const auto& s : array_field(h, "simplices")) hom.simplices.push_back(count_from_json(s));
    a.homology = std::move(hom);
  }
  a.fingerprint_classes = count_from_json(field(j, "fingerprint_classes"));
  return d;
}

// ---------------------------------------------------------------------------
// gen and survey

inline Json to_json(const SurveyCounts& c) {
  Json o = Json::object();
  for (const auto& [k, v] : c) o[k] = std::to_string(v);
  return o;
}

inline SurveyCounts counts_from_json(const Json& j) {
  if (!j.is_object()) throw MalformedInput("survey counts must be an object");
  SurveyCounts c;
  for (const auto& [k, v] : j.items()) c[k] = count_from_json(v);
  return c;
}

struct GenParams {
  std::uint64_t n_start = 1, n_end = 1, d = 2, v = 3, c = 1;

  Integer total_bits() const {
    Integer t = 0;
    for (std::uint64_t n = n_start; n <= n_end; ++n) t += ClusterSpec{n, d, v, c}.bits_required();
    return t;
  }
};

inline Json to_json(const GenParams& p) {
  return Json{{"n_start", std::to_string(p.n_start)}, {"n_end", std::to_string(p.n_end)},
              {"dim", std::to_string(p.d)},           {"max_vertices", std::to_string(p.v)},
              {"c_exponent", std::to_string(p.c)}};
}

inline GenParams gen_params_from_json(const Json& j) {
  return GenParams{count_from_json(field(j, "n_start")), count_from_json(field(j, "n_end")),
                   count_from_json(field(j, "dim")), count_from_json(field(j, "max_vertices")),
                   count_from_json(field(j, "c_exponent"))};
}

struct GenDocument {
  RunHeader header;
  GenParams params;
  std::vector<GeneratedPolytope> polytopes;
  SurveyCounts counts = empty_survey_counts();
};

inline Json to_json(const GeneratedPolytope& g) {
  return Json{{"cluster", std::to_string(g.cluster)},
              {"index", std::to_string(g.index)},
              {"offset", std::to_string(g.offset)},
              {"degenerate", g.degenerate},
              {"points", points_to_json(g.points)},
              {"polytope", to_json(g.polytope)}};
}

inline GeneratedPolytope generated_from_json(const Json& j) {
  GeneratedPolytope g;
  g.cluster = count_from_json(field(j, "cluster"));
  g.index = count_from_json(field(j, "index"));
  g.offset = count_from_json(field(j, "offset"));
  g.degenerate = bool_field(j, "degenerate");
  g.points = lattice_points_from_json(field(j, "points"));
  if (g.points.empty()) throw MalformedInput("generated polytope has no points");
  g.polytope = convex_hull(g.points);
  if (lattice_polytope_from_json(field(j, "polytope")) != g.polytope)
    throw MalformedInput("generated polytope is not the hull of its points");
  return g;
}

inline Json to_json(const GenDocument& d) {
  Json polys = Json::array();
  for (const auto& g : d.polytopes) polys.push_back(to_json(g));
  return Json{{"header", to_json(d.header)},
              {"params", to_json(d.params)},
              {"polytopes", polys},
              {"counts", to_json(d.counts)}};
}

inline GenDocument gen_from_json(const Json& j) {
  GenDocument d;
  d.header = header_from_json(field(j, "header"));
  d.params = gen_params_from_json(field(j, "params"));
  for (const auto& g : array_field(j, "polytopes")) d.polytopes.push_back(generated_from_json(g));
  d.counts = counts_from_json(field(j, "counts"));
  return d;
}

struct SurveyDocument {
  RunHeader header;
  SurveyChecks checks;
  SurveyCounts counts = empty_survey_counts();
  std::map<std::uint64_t, SurveyCounts> per_cluster;  // keyed by n
};

inline Json to_json(const SurveyDocument& d) {
  Json clusters = Json::array();
  std::size_t ordinal = 0;
  for (const auto& [n, c] : d.per_cluster)
    clusters.push_back(Json{{"cluster", std::to_string(++ordinal)},
                            {"n", std::to_string(n)},
                            {"counts", to_json(c)}});
  return Json{{"header", to_json(d.header)},
              {"checks", Json{{"normal", d.checks.normal},
                              {"minimal", d.checks.minimal},
                              {"maximal", d.checks.maximal}}},
              {"counts", to_json(d.counts)},
              {"clusters", clusters}};
}

inline SurveyDocument survey_from_json(const Json& j) {
  SurveyDocument d;
  d.header = header_from_json(field(j, "header"));
  const Json& c = field(j, "checks");
  d.checks = {bool_field(c, "normal"), bool_field(c, "minimal"), bool_field(c, "maximal")};
  d.counts = counts_from_json(field(j, "counts"));
  std::size_t ordinal = 0;
  for (const auto& row : array_field(j, "clusters")) {
    if (count_from_json(field(row, "cluster")) != ++ordinal)
      throw MalformedInput("survey clusters out of order");
    d.per_cluster[count_from_json(field(row, "n"))] = counts_from_json(field(row, "counts"));
  }
  return d;
}

/// cluster,n,total,normal,minimal,maximal
inline std::string survey_csv(const SurveyDocument& d) {
  std::string out = "cluster,n,total,normal,minimal,maximal\n";
  std::size_t ordinal = 0;
  for (const auto& [n, c] : d.per_cluster) {
    out += std::to_string(++ordinal) + "," + std::to_string(n);
    for (const char* k : {"total", "normal", "minimal", "maximal"})
      out += "," + std::to_string(c.at(k));
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// pyramid

struct ExtensionDocument {
  RunHeader header;
  RationalPolytope p, q;
  ExtensionResult result;
};

inline Json to_json(const ExtensionDocument& d) {
  const auto& r = d.result;
  return Json{
      {"header", to_json(d.header)},
      {"p", to_json(d.p)},
      {"q", to_json(d.q)},
      {"extension",
       Json{{"holds", r.holds},
            {"reason", r.reason},
            {"apex", optional_to_json(r.apex, [](const RationalPoint& x) { return vec_to_json(x); })},
            {"delta",
             optional_to_json(r.delta, [](const RationalPolytope& x) { return to_json(x); })},
            {"pyramid_over_base", r.pyramid_over_base}}}};
}

inline ExtensionDocument extension_from_json(const Json& j) {
  ExtensionDocument d;
  d.header = header_from_json(field(j, "header"));
  d.p = rational_polytope_from_json(field(j, "p"));
  d.q = rational_polytope_from_json(field(j, "q"));
  const Json& e = field(j, "extension");
  d.result.holds = bool_field(e, "holds");
  d.result.reason = string_field(e, "reason");
  if (!field(e, "apex").is_null()) d.result.apex = rat_vec_from_json(field(e, "apex"));
  if (!field(e, "delta").is_null()) d.result.delta = rational_polytope_from_json(field(e, "delta"));
  d.result.pyramid_over_base = bool_field(e, "pyramid_over_base");
  return d;
}

struct ChainDocument {
  RunHeader header;
  RationalPolytope p, q;
  std::size_t budget = 0;
  std::optional<PyramidalChain> chain;
};

inline Json to_json(const PyramidalChain& c) {
  Json a = Json::array();
  for (const auto& p : c.chain) a.push_back(points_to_json(p.vertices()));
  return a;
}

inline PyramidalChain chain_from_json(const Json& j, std::size_t d) {
  if (!j.is_array() || j.empty()) throw MalformedInput("chain must be a nonempty array");
  PyramidalChain c;
  for (const auto& verts : j) {
    std::vector<RationalPoint> pts;
    if (!verts.is_array()) throw MalformedInput("chain entry must be a vertex array");
    for (const auto& x : verts) pts.push_back(rat_vec_from_json(x));
    require_dim(pts, d);
    c.chain.push_back(rational_hull(pts));
  }
  return c;
}

inline Json to_json(const ChainDocument& d) {
  return Json{{"header", to_json(d.header)},
              {"p", to_json(d.p)},
              {"q", to_json(d.q)},
              {"budget", std::to_string(d.budget)},
              {"found", d.chain.has_value()},
              {"steps", d.chain ? Json(std::to_string(d.chain->steps())) : Json(nullptr)},
              {"chain", optional_to_json(d.chain, [](const PyramidalChain& c) { return to_json(c); })}};
}

inline ChainDocument chain_document_from_json(const Json& j) {
  ChainDocument d;
  d.header = header_from_json(field(j, "header"));
  d.p = rational_polytope_from_json(field(j, "p"));
  d.q = rational_polytope_from_json(field(j, "q"));
  d.budget = count_from_json(field(j, "budget"));
  if (!field(j, "chain").is_null()) d.chain = chain_from_json(field(j, "chain"), d.p.ambient_dim());
  if (bool_field(j, "found") != d.chain.has_value())
    throw MalformedInput("found flag disagrees with the chain");
  return d;
}

// ---------------------------------------------------------------------------
// Text

/// Two-space indented canonical form with a trailing newline.
inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline Json parse(std::istream& in) {
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw MalformedInput(std::string("malformed JSON: ") + e.what());
  }
}

inline Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw MalformedInput(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace io
}  // namespace normwalk
