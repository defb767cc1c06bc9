// normwalk command-line tool.
//
// Exit status: 0 success, 1 a checked property was falsified, 2 usage or
// input error, 3 a resource cap was hit (NORMWALK_MAX_POINTS, bit supply).

#include "normwalk/normwalk.hpp"

#include "fetch.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace nw = normwalk;
namespace io = normwalk::io;

namespace {

enum Exit : int { kOk = 0, kFalsified = 1, kUsage = 2, kCap = 3 };

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Common {
  std::string format = "json";
  std::string output;  // empty: stdout
};

class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty()) return;
    file_.open(path, std::ios::binary);
    if (!file_) throw UsageError("cannot write " + path);
  }
  std::ostream& out() { return file_.is_open() ? file_ : std::cout; }
  void write(const std::string& s) { out() << s << std::flush; }

 private:
  std::ofstream file_;
};

nw::Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  return io::parse(in);
}

nw::LatticePolytope read_lattice(const std::string& path) {
  return io::lattice_polytope_from_json(read_json_file(path));
}

nw::RationalPolytope read_rational(const std::string& path) {
  return io::rational_polytope_from_json(read_json_file(path));
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

template <class Points>
std::string point_list(const Points& pts) {
  std::string s;
  for (const auto& p : pts) {
    if (!s.empty()) s += " ";
    s += nw::to_string(p);
  }
  return s;
}

std::string csv_row(std::initializer_list<std::string> fields) {
  std::string s;
  for (const auto& f : fields) {
    if (!s.empty()) s += ",";
    s += csv_field(f);
  }
  return s + "\n";
}

std::string yes_no(bool b) { return b ? "true" : "false"; }

std::string witness_text(const std::optional<nw::DecompositionWitness>& w) {
  return w ? "c=" + w->c.str() + " z=" + nw::to_string(w->z) : "";
}

// ---------------------------------------------------------------------------
// Bit sources

struct BitOptions {
  std::string file;
  std::string fetch_url;
  std::string fetch_cache = "normwalk-fetch.bin";
  bool os_entropy = false;
  std::string entropy_dump = "normwalk-entropy.bin";
  std::size_t entropy_bytes = 0;

  void add(CLI::App* app, const std::string& file_flag = "--bits") {
    auto* group = app->add_option_group("bit source");
    group->add_option(file_flag, file, "Raw bit file, read MSB-first")->check(CLI::ExistingFile);
    group->add_flag("--os-entropy", os_entropy,
                    "Draw bits from the OS and dump them to --entropy-dump");
    group->add_option("--fetch", fetch_url, "Fetch bits over HTTP(S), cached in --fetch-cache");
    group->require_option(0, 1);
    app->add_option("--fetch-cache", fetch_cache, "Cache file for --fetch");
    app->add_option("--entropy-dump", entropy_dump, "Replay file written by --os-entropy");
    app->add_option("--entropy-bytes", entropy_bytes, "Bytes drawn by --os-entropy");
  }

  bool given() const { return !file.empty() || !fetch_url.empty() || os_entropy; }

  /// Records the source in params and opens it.
  std::optional<nw::BitSource> open(std::map<std::string, std::string>& params,
                                    std::size_t default_bytes) const {
    if (!file.empty()) {
      params["bits"] = file;
      return nw::BitSource::from_file(file);
    }
    if (!fetch_url.empty()) {
      params["fetch"] = fetch_url;
      return nw::tools::fetch_bits(fetch_url, fetch_cache);
    }
    if (os_entropy) {
      const std::size_t n = entropy_bytes ? entropy_bytes : default_bytes;
      if (n > nw::enumeration_cap()) throw nw::ResourceCapExceeded("entropy request exceeds cap");
      params["os_entropy"] = entropy_dump;
      return nw::BitSource::from_os_entropy(n, entropy_dump);
    }
    return std::nullopt;
  }
};

io::RunHeader header(const std::string& command) {
  io::RunHeader h;
  h.command = command;
  return h;
}

// ---------------------------------------------------------------------------
// check

struct CheckArgs {
  std::string input;
  std::size_t icp_r = 0;
  std::string icp_cmax = "3";
  std::string cr_cmax;
  std::size_t ucp_trials = 0;
  BitOptions bits;
};

int run_check(const CheckArgs& a, const Common& c) {
  io::CheckDocument d;
  d.header = header("check");
  d.header.params["input"] = a.input;
  d.polytope = read_lattice(a.input);
  d.report = nw::normality_report(d.polytope);
  d.unimodular_simplex = nw::is_unimodular_simplex(d.polytope);
  d.smooth = nw::is_smooth(d.polytope);
  if (a.icp_r > 0) {
    d.header.params["icp_r"] = std::to_string(a.icp_r);
    d.header.params["icp_cmax"] = a.icp_cmax;
    if (d.report.integrally_closed)
      d.icp = nw::icp_check_bounded(d.polytope, a.icp_r, nw::parse_integer(a.icp_cmax));
  }
  if (!a.cr_cmax.empty()) {
    d.header.params["cr_cmax"] = a.cr_cmax;
    if (d.report.integrally_closed)
      d.cr = nw::caratheodory_bounds(d.polytope, nw::parse_integer(a.cr_cmax));
  }
  if (a.ucp_trials > 0) {
    d.header.params["ucp_trials"] = std::to_string(a.ucp_trials);
    auto src = a.bits.open(d.header.params, 1024);
    d.ucp = nw::ucp_falsify(d.polytope, a.ucp_trials, src ? &*src : nullptr);
    if (src) d.header.bits = io::provenance(*src, 0);
  }

  Sink sink(c.output);
  if (c.format == "csv") {
    std::string s = csv_row({"property", "value"});
    s += csv_row({"integrally_closed", yes_no(d.report.integrally_closed)});
    s += csv_row({"ic_witness", witness_text(d.report.ic_witness)});
    s += csv_row({"normal_wrt_lambda", yes_no(d.report.normal_wrt_lambda)});
    s += csv_row({"normal_witness", witness_text(d.report.normal_witness)});
    s += csv_row({"lambda_index", d.report.lambda_index.str()});
    s += csv_row({"unimodular_simplex", yes_no(d.unimodular_simplex)});
    s += csv_row({"smooth", yes_no(d.smooth.smooth)});
    if (d.icp) {
      s += csv_row({"icp_holds", yes_no(d.icp->holds)});
      s += csv_row({"icp_witness", witness_text(d.icp->witness)});
    }
    if (d.cr) {
      s += csv_row({"cr_lower_bound", std::to_string(d.cr->lower_bound)});
      s += csv_row({"cr_envelope", std::to_string(d.cr->envelope_low) + ".." +
                                       std::to_string(d.cr->envelope_high)});
    }
    if (d.ucp) {
      s += csv_row({"ucp_counterexample",
                    d.ucp->counterexample ? nw::to_string(*d.ucp->counterexample) : ""});
      s += csv_row({"ucp_samples", std::to_string(d.ucp->samples_tested)});
    }
    s += csv_row({"falsified", yes_no(d.falsified())});
    sink.write(s);
  } else {
    sink.write(io::dump(io::to_json(d)));
  }
  return d.falsified() ? kFalsified : kOk;
}

// ---------------------------------------------------------------------------
// jumps

struct JumpsArgs {
  std::string input;
  bool down = false;
};

int run_jumps(const JumpsArgs& a, const Common& c) {
  io::JumpsDocument d;
  d.header = header("jumps");
  d.header.params["input"] = a.input;
  d.polytope = read_lattice(a.input);
  auto up = nw::enumerate_jumps_up(d.polytope);
  d.height_bound = up.height_bound;
  d.tested = up.tested.size();
  d.up = std::move(up.jumps);
  if (a.down) {
    d.header.params["down"] = "true";
    d.down = nw::enumerate_jumps_down(d.polytope);
  }
  Sink sink(c.output);
  if (c.format == "csv") {
    std::string s = csv_row({"direction", "point", "height", "volume"});
    for (const auto& j : d.up)
      s += csv_row({"up", nw::to_string(j.point), j.height.str(), j.volume.str()});
    if (d.down)
      for (const auto& j : *d.down)
        s += csv_row({"down", nw::to_string(j.point), "", j.dimension_drop ? "drop" : ""});
    sink.write(s);
  } else {
    sink.write(io::dump(io::to_json(d)));
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// walk

struct WalkArgs {
  std::string input;
  std::string strategy = "greedy";
  std::size_t budget = 10;
  BitOptions bits;
};

int run_walk(const WalkArgs& a, const Common& c) {
  auto h = header("walk");
  h.params["input"] = a.input;
  h.params["strategy"] = a.strategy;
  h.params["budget"] = std::to_string(a.budget);
  const auto start = read_lattice(a.input);
  const auto strategy = io::strategy_from_string(a.strategy);
  if (strategy == nw::WalkStrategy::random && !a.bits.given())
    throw UsageError("the random strategy needs --bits, --os-entropy or --fetch");
  auto src = a.bits.open(h.params, 4096);
  if (src) h.bits = io::provenance(*src, 0);
  if (src && strategy == nw::WalkStrategy::greedy_volume)
    throw UsageError("the greedy strategy reads no bits");

  nw::WalkOptions opt;
  opt.strategy = strategy;
  opt.budget = a.budget;
  opt.bits = src ? &*src : nullptr;
  Sink sink(c.output);
  const bool csv = c.format == "csv";
  if (csv) {
    sink.write(csv_row({"step", "point", "height", "volume_gain", "volume", "candidates"}));
  } else {
    // Bits are recorded up front; the summary line carries the final count.
    sink.write(io::walk_header_line(h, strategy, a.budget, start).dump() + "\n");
  }
  opt.on_step = [&](const nw::WalkTrace& t) {
    const std::size_t i = t.steps.size() - 1;
    if (csv) {
      const auto& j = t.steps[i].jump;
      sink.write(csv_row({std::to_string(i + 1), nw::to_string(j.point), j.height.str(),
                          j.volume.str(), t.volumes[i + 1].str(),
                          std::to_string(t.steps[i].candidates)}));
    } else {
      sink.write(io::walk_step_line(t, i).dump() + "\n");
    }
  };
  auto trace = nw::walk(start, opt);
  if (!csv) sink.write(io::walk_summary_line(trace).dump() + "\n");
  return kOk;
}

// ---------------------------------------------------------------------------
// atlas

struct AtlasArgs {
  std::size_t dim = 2;
  std::string radius = "1";
  bool no_homology = false;
  std::size_t max_elements = nw::AtlasOptions{}.max_elements;
  std::size_t max_simplices = nw::AtlasOptions{}.max_simplices;
};

int run_atlas(const AtlasArgs& a, const Common& c) {
  io::AtlasDocument d;
  d.header = header("atlas");
  d.header.params["dim"] = std::to_string(a.dim);
  d.header.params["radius"] = a.radius;
  d.header.params["homology"] = yes_no(!a.no_homology);
  d.header.params["max_elements"] = std::to_string(a.max_elements);
  d.header.params["max_simplices"] = std::to_string(a.max_simplices);
  nw::AtlasOptions opt{a.max_elements, a.max_simplices, !a.no_homology};
  d.atlas = nw::build_atlas(a.dim, nw::parse_integer(a.radius), opt);
  Sink sink(c.output);
  if (c.format == "csv") {
    std::string s = csv_row({"index", "dim", "lattice_points", "volume", "vertices"});
    for (std::size_t i = 0; i < d.atlas.elements.size(); ++i) {
      const auto& p = d.atlas.elements[i];
      s += csv_row({std::to_string(i), std::to_string(p.dim()),
                    std::to_string(nw::lattice_point_count(p)),
                    nw::detail::relative_volume(p).str(), point_list(p.vertices())});
    }
    sink.write(s);
  } else {
    sink.write(io::dump(io::to_json(d)));
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// gen and survey

struct GenArgs {
  io::GenParams params;
  BitOptions bits;
};

void record(std::map<std::string, std::string>& m, const io::GenParams& p) {
  m["n_start"] = std::to_string(p.n_start);
  m["n_end"] = std::to_string(p.n_end);
  m["dim"] = std::to_string(p.d);
  m["max_vertices"] = std::to_string(p.v);
  m["c_exponent"] = std::to_string(p.c);
}

std::vector<nw::GeneratedPolytope> generate(const GenArgs& a, io::RunHeader& h) {
  const auto& p = a.params;
  if (p.n_start < 1 || p.n_end < p.n_start) throw UsageError("need 1 <= n-start <= n-end");
  if (!a.bits.given()) throw UsageError("gen needs --bits, --os-entropy or --fetch");
  record(h.params, p);
  const nw::Integer total = p.total_bits();
  if (total / 8 > nw::enumeration_cap()) throw nw::ResourceCapExceeded("bit demand exceeds cap");
  auto src = a.bits.open(h.params, static_cast<std::size_t>((total + 7) / 8));
  std::vector<nw::GeneratedPolytope> out;
  for (std::uint64_t n = p.n_start; n <= p.n_end; ++n)
    for (auto& g : nw::generate_cluster(*src, nw::ClusterSpec{n, p.d, p.v, p.c}))
      out.push_back(std::move(g));
  h.bits = io::provenance(*src, 0);
  return out;
}

int run_gen(const GenArgs& a, const Common& c) {
  io::GenDocument d;
  d.header = header("gen");
  d.params = a.params;
  d.polytopes = generate(a, d.header);
  d.counts = nw::survey(d.polytopes, {true, false, false}).counts;
  Sink sink(c.output);
  if (c.format == "csv") {
    std::string s = csv_row({"n", "index", "offset", "degenerate", "vertices"});
    for (const auto& g : d.polytopes)
      s += csv_row({std::to_string(g.cluster), std::to_string(g.index), std::to_string(g.offset),
                    yes_no(g.degenerate), point_list(g.polytope.vertices())});
    sink.write(s);
  } else {
    sink.write(io::dump(io::to_json(d)));
  }
  return kOk;
}

struct SurveyArgs {
  GenArgs gen;
  std::string input;  // a gen document instead of generating
  bool minimal = false;
  bool maximal = false;
  std::string summary;
};

int run_survey(const SurveyArgs& a, const Common& c) {
  io::SurveyDocument d;
  d.header = header("survey");
  d.checks = {true, a.minimal, a.maximal};
  d.header.params["minimal"] = yes_no(a.minimal);
  d.header.params["maximal"] = yes_no(a.maximal);
  std::vector<nw::GeneratedPolytope> stream;
  if (!a.input.empty()) {
    if (a.gen.bits.given()) throw UsageError("--input replaces the bit source");
    auto gen = io::gen_from_json(read_json_file(a.input));
    d.header.params["input"] = a.input;
    d.header.bits = gen.header.bits;
    stream = std::move(gen.polytopes);
  } else {
    stream = generate(a.gen, d.header);
  }
  auto stats = nw::survey(stream, d.checks);
  d.counts = stats.counts;
  d.per_cluster = stats.per_cluster;

  const std::string json = io::dump(io::to_json(d));
  if (!a.summary.empty()) Sink(a.summary).write(json);
  Sink sink(c.output);
  sink.write(c.format == "csv" ? io::survey_csv(d) : json);
  return kOk;
}

// ---------------------------------------------------------------------------
// pyramid

struct PyramidArgs {
  std::vector<std::string> extension;
  std::vector<std::string> chain;
  std::vector<std::string> distance;
  std::size_t budget = 16;
};

int run_pyramid(const PyramidArgs& a, const Common& c) {
  Sink sink(c.output);
  const bool csv = c.format == "csv";
  if (!a.extension.empty()) {
    io::ExtensionDocument d;
    d.header = header("pyramid");
    d.header.params["check_extension"] = a.extension[0] + " " + a.extension[1];
    d.p = read_rational(a.extension[0]);
    d.q = read_rational(a.extension[1]);
    d.result = nw::is_pyramidal_extension(d.p, d.q);
    if (csv) {
      sink.write(csv_row({"holds", "reason", "apex"}) +
                 csv_row({yes_no(d.result.holds), d.result.reason,
                          d.result.apex ? nw::to_string(*d.result.apex) : ""}));
    } else {
      sink.write(io::dump(io::to_json(d)));
    }
    return d.result.holds ? kOk : kFalsified;
  }
  if (!a.chain.empty()) {
    io::ChainDocument d;
    d.header = header("pyramid");
    d.header.params["search_chain"] = a.chain[0] + " " + a.chain[1];
    d.header.params["budget"] = std::to_string(a.budget);
    d.p = read_rational(a.chain[0]);
    d.q = read_rational(a.chain[1]);
    d.budget = a.budget;
    d.chain = nw::search_pyramidal_chain(d.p, d.q, a.budget);
    if (csv) {
      std::string s = csv_row({"step", "vertices"});
      if (d.chain)
        for (std::size_t i = 0; i < d.chain->chain.size(); ++i)
          s += csv_row({std::to_string(i), point_list(d.chain->chain[i].vertices())});
      sink.write(s);
    } else {
      sink.write(io::dump(io::to_json(d)));
    }
    return d.chain ? kOk : kFalsified;
  }
  if (!a.distance.empty()) {
    auto p = read_rational(a.distance[0]);
    auto q = read_rational(a.distance[1]);
    auto h = nw::hausdorff_distance(p, q);
    nw::Json j{{"header", io::to_json(header("pyramid"))},
               {"squared", io::to_json(h.squared)},
               {"exact", io::optional_to_json(h.exact, [](const nw::Rational& r) {
                  return io::to_json(r);
                })},
               {"lower", io::to_json(h.lower)},
               {"upper", io::to_json(h.upper)},
               {"decimal", h.decimal}};
    j["header"]["params"]["distance"] = a.distance[0] + " " + a.distance[1];
    if (csv)
      sink.write(csv_row({"squared", "decimal"}) + csv_row({nw::to_string(h.squared), h.decimal}));
    else
      sink.write(io::dump(j));
    return kOk;
  }
  throw UsageError("pyramid needs --check-extension, --search-chain or --distance");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice polytope normality checks and walks on the poset of normal polytopes"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("normwalk ") + nw::kVersion);
  Common common;
  app.add_option("--format", common.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("-o,--output", common.output, "Output file (default stdout)");
  app.fallthrough();

  CheckArgs check;
  auto* c_check = app.add_subcommand("check", "Normality battery for one polytope");
  c_check->add_option("polytope", check.input, "Polytope JSON")->required()->check(CLI::ExistingFile);
  c_check->add_option("--icp-r", check.icp_r, "Run the bounded ICP check with r points");
  c_check->add_option("--icp-cmax", check.icp_cmax, "Largest dilation for --icp-r");
  c_check->add_option("--cr-cmax", check.cr_cmax, "Certify a Caratheodory rank lower bound");
  c_check->add_option("--ucp-trials", check.ucp_trials, "Samples for the UCP falsifier");
  check.bits.add(c_check, "--seed-file");

  JumpsArgs jumps;
  auto* c_jumps = app.add_subcommand("jumps", "Quantum jumps from an integrally closed polytope");
  c_jumps->add_option("polytope", jumps.input, "Polytope JSON")->required()->check(CLI::ExistingFile);
  c_jumps->add_flag("--down", jumps.down, "Also list jumps down");

  WalkArgs walk;
  auto* c_walk = app.add_subcommand("walk", "Walk upward through quantum jumps (JSON lines)");
  c_walk->add_option("polytope", walk.input, "Start polytope JSON")->required()->check(CLI::ExistingFile);
  c_walk->add_option("--strategy", walk.strategy, "Step choice")->check(CLI::IsMember({"greedy", "random"}));
  c_walk->add_option("--budget", walk.budget, "Maximum number of steps");
  walk.bits.add(c_walk);

  AtlasArgs atlas;
  auto* c_atlas = app.add_subcommand("atlas", "All normal polytopes in [-r, r]^d");
  c_atlas->add_option("--dim", atlas.dim, "Ambient dimension")->required();
  c_atlas->add_option("--radius", atlas.radius, "Box half-width")->required();
  c_atlas->add_flag("--no-homology", atlas.no_homology, "Skip order-complex homology");
  c_atlas->add_option("--max-elements", atlas.max_elements, "Cap on atlas elements");
  c_atlas->add_option("--max-simplices", atlas.max_simplices, "Cap on order-complex simplices");

  auto add_gen = [](CLI::App* sub, GenArgs& g) {
    sub->add_option("--n-start", g.params.n_start, "First bit length");
    sub->add_option("--n-end", g.params.n_end, "Last bit length");
    sub->add_option("--dim", g.params.d, "Ambient dimension");
    sub->add_option("--max-vertices", g.params.v, "Points per polytope");
    sub->add_option("--c-exponent", g.params.c, "Cluster size exponent");
    g.bits.add(sub);
  };
  GenArgs gen;
  auto* c_gen = app.add_subcommand("gen", "Generate polytope clusters from a bit stream");
  add_gen(c_gen, gen);

  SurveyArgs surv;
  auto* c_survey = app.add_subcommand("survey", "Count normal, minimal and maximal polytopes");
  add_gen(c_survey, surv.gen);
  c_survey->add_option("--input", surv.input, "Survey a gen document")->check(CLI::ExistingFile);
  c_survey->add_flag("--minimal", surv.minimal, "Also test minimality");
  c_survey->add_flag("--maximal", surv.maximal, "Also test maximality");
  c_survey->add_option("--summary", surv.summary, "Also write the JSON summary here");

  PyramidArgs pyr;
  auto* c_pyr = app.add_subcommand("pyramid", "Pyramidal extensions and chains");
  auto* modes = c_pyr->add_option_group("mode");
  modes->add_option("--check-extension", pyr.extension, "P.json Q.json")->expected(2);
  modes->add_option("--search-chain", pyr.chain, "P.json Q.json")->expected(2);
  modes->add_option("--distance", pyr.distance, "P.json Q.json")->expected(2);
  modes->require_option(1);
  c_pyr->add_option("--budget", pyr.budget, "Maximum chain length");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*c_check) return run_check(check, common);
    if (*c_jumps) return run_jumps(jumps, common);
    if (*c_walk) return run_walk(walk, common);
    if (*c_atlas) return run_atlas(atlas, common);
    if (*c_gen) return run_gen(gen, common);
    if (*c_survey) return run_survey(surv, common);
    if (*c_pyr) return run_pyramid(pyr, common);
  } catch (const nw::ResourceCapExceeded& e) {
    std::cerr << "normwalk: resource cap: " << e.what() << "\n";
    return kCap;
  } catch (const nw::BitSourceExhausted& e) {
    std::cerr << "normwalk: resource cap: " << e.what() << "\n";
    return kCap;
  } catch (const nw::Json::exception& e) {
    std::cerr << "normwalk: malformed input: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "normwalk: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
