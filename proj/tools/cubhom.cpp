// cubhom: homology and verification suites for the cubical sets of graphs.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cubhom/cubhom.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace cubhom;

namespace {

enum Exit { ok = 0, inconsistent = 1, config_error = 2, resource_cap = 3, io_error = 4 };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string graph_path;
  std::string family;
  int max_dim = 3;
  std::string mode = "nd";
  std::string ring = "Z";
  std::string format = "text";
  unsigned workers = 1;
  std::size_t max_cubes = EnumerationLimits{}.max_cubes;
  bool timings = false;
  bool inject_fault = false;

  BuildOptions build() const {
    BuildOptions o;
    o.limits.max_cubes = max_cubes;
    o.workers = workers;
    return o;
  }
  std::string source() const { return family.empty() ? graph_path : family; }
};

Graph load(const RunConfig& c) {
  if (c.graph_path.empty() == c.family.empty()) throw ConfigError("give exactly one of --graph and --family");
  if (!c.family.empty()) {
    auto colon = c.family.find(':');
    std::uint64_t k = 0;
    if (colon == std::string::npos || !detail::parse_index(std::string_view(c.family).substr(colon + 1), k))
      throw ConfigError("family must look like NAME:K, got '" + c.family + "'");
    try {
      return build_family(c.family.substr(0, colon), static_cast<long long>(k));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  std::ifstream in(c.graph_path);
  if (!in) throw ConfigError("cannot open graph file '" + c.graph_path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return load_graph(buf.str());
  } catch (const GraphFormatError& e) {
    throw ConfigError(c.graph_path + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(c.graph_path + ": " + e.what());
  }
}

/// 0 for Z and Q; p for Fp:P.
std::uint64_t ring_characteristic(const std::string& ring) {
  if (ring == "Z" || ring == "Q") return 0;
  std::uint64_t p = 0;
  if (ring.rfind("Fp:", 0) != 0 || !detail::parse_index(std::string_view(ring).substr(3), p) || !is_prime(p) ||
      p >= (std::uint64_t{1} << 31))
    throw ConfigError("ring must be Z, Q or Fp:P with P a prime below 2^31, got '" + ring + "'");
  return p;
}

void validate(const RunConfig& c) {
  if (c.max_dim < 1) throw ConfigError("--max-dim must be at least 1");
  if (c.max_cubes == 0) throw ConfigError("--max-cubes must be positive");
  if (c.workers == 0) throw ConfigError("--workers must be positive");
  parse_normalization(c.mode);
  ring_characteristic(c.ring);
}

json config_json(const RunConfig& c, const Graph& g) {
  json j;
  j["graph"] = c.source();
  j["vertices"] = g.vertex_count();
  j["edges"] = g.edge_count();
  j["max_dim"] = c.max_dim;
  j["mode"] = c.mode;
  j["ring"] = c.ring;
  j["max_cubes"] = c.max_cubes;
  return j;
}

json integer_json(const Integer& v) {
  if (v <= std::numeric_limits<long long>::max() && v >= std::numeric_limits<long long>::min())
    return static_cast<long long>(v);
  return v.str();
}

/// Adds one to an entry of the highest nonzero boundary so d^2 = 0 fails.
void corrupt(ChainComplex& x) {
  for (int n = x.max_dim; n >= 1; --n) {
    auto t = x.boundaries[n].triplets();
    if (t.empty()) continue;
    t.front().value += 1;
    x.boundaries[n] = SparseIntMatrix::from_triplets(x.boundaries[n].rows(), x.boundaries[n].cols(), std::move(t));
    return;
  }
  // No entries anywhere: plant one in d_1 if it has a cell.
  if (x.max_dim >= 1 && x.boundaries[1].rows() && x.boundaries[1].cols())
    x.boundaries[1] = SparseIntMatrix::from_triplets(x.boundaries[1].rows(), x.boundaries[1].cols(),
                                                     {{0, 0, Integer(1)}});
}

/// Operator double for the hidden fault flag: f_1^+ returns f_1^-.
struct FaultyOperators : StandardOperators {
  void face_into(std::span<const Vertex> in, int n, int i, Sign a, std::span<Vertex> out) const {
    kernel::face(in, n, i, i == 1 ? Sign::minus : a, out);
  }
};

class Clock {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s : std::string(w - s.size(), ' ') + s; }

std::string torsion_text(const std::vector<Integer>& t) {
  if (t.empty()) return "-";
  std::string s;
  for (const auto& f : t) s += (s.empty() ? "Z/" : " Z/") + f.str();
  return s;
}

json per_dim_json(const std::vector<CubeCensus>& census) {
  json a = json::array();
  for (std::size_t n = 0; n < census.size(); ++n) {
    json d;
    d["n"] = n;
    d["total"] = census[n].total;
    d["basis_nd"] = census[n].non_degenerate;
    d["basis_ndc"] = census[n].ndc();
    d["con_rank"] = census[n].connections;
    d["betti"] = nullptr;
    d["torsion"] = nullptr;
    a.push_back(d);
  }
  return a;
}

// ---------------------------------------------------------------------------

int cmd_hom(const RunConfig& c) {
  Clock clock;
  const Graph g = load(c);
  auto x = build_complex(g, c.max_dim, parse_normalization(c.mode), c.build());
  if (c.inject_fault) corrupt(x);
  Report squared = verify_boundary_squared(x);

  const std::uint64_t p = ring_characteristic(c.ring);
  std::vector<std::size_t> betti;
  std::vector<std::vector<Integer>> torsion;
  bool witness = true;
  if (c.ring == "Z") {
    auto h = homology(x);
    betti = h.betti();
    for (const auto& d : h.dims) torsion.push_back(d.torsion);
    witness = h.transforms_valid;
  } else {
    betti = homology_over_field(x, p);
    torsion.assign(betti.size(), {});
  }
  const std::size_t violations = squared.total_violations() + (witness ? 0 : 1);

  if (c.format == "json") {
    json out;
    out["config"] = config_json(c, g);
    out["per_dim"] = per_dim_json(x.census);
    for (std::size_t n = 0; n < betti.size(); ++n) {
      out["per_dim"][n]["betti"] = betti[n];
      json t = json::array();
      for (const auto& f : torsion[n]) t.push_back(integer_json(f));
      out["per_dim"][n]["torsion"] = t;
    }
    out["betti"] = betti;
    if (c.timings) out["timings"] = {{"total_ms", clock.ms()}};
    out["violations"] = violations;
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << "graph " << c.source() << " (" << g.vertex_count() << " vertices, " << g.edge_count()
              << " edges), mode " << c.mode << ", ring " << c.ring << ", max dim " << c.max_dim << "\n";
    std::cout << "  n  basis_nd basis_ndc  con_rank  betti  torsion\n";
    for (int n = 0; n <= c.max_dim; ++n) {
      const auto& k = x.census[n];
      std::cout << pad(std::to_string(n), 3) << pad(std::to_string(k.non_degenerate), 10)
                << pad(std::to_string(k.ndc()), 10) << pad(std::to_string(k.connections), 10);
      if (static_cast<std::size_t>(n) < betti.size())
        std::cout << pad(std::to_string(betti[n]), 7) << "  " << (c.ring == "Z" ? torsion_text(torsion[n]) : "n/a");
      else
        std::cout << "  not computed (truncation)";
      std::cout << '\n';
    }
    for (const auto& m : squared.messages()) std::cout << "violation: " << m << '\n';
    if (!witness) std::cout << "violation: Smith normal form witness failed\n";
    std::cout << "wall-clock " << std::fixed << std::setprecision(1) << clock.ms() << " ms\n";
  }
  return violations ? inconsistent : ok;
}

int cmd_stats(const RunConfig& c) {
  Clock clock;
  const Graph g = load(c);
  const auto census = cube_census(g, c.max_dim, c.build().limits);
  if (c.format == "json") {
    json out;
    out["config"] = config_json(c, g);
    out["per_dim"] = per_dim_json(census);
    if (c.timings) out["timings"] = {{"total_ms", clock.ms()}};
    out["violations"] = 0;
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << "graph " << c.source() << " (" << g.vertex_count() << " vertices, " << g.edge_count()
              << " edges)\n";
    std::cout << "  n       |KG_n|     |nd|    |ndc|    |Con|  reduction\n";
    for (std::size_t n = 0; n < census.size(); ++n) {
      const auto& k = census[n];
      std::ostringstream pct;
      pct << std::fixed << std::setprecision(1)
          << (k.non_degenerate ? 100.0 * static_cast<double>(k.connections) / static_cast<double>(k.non_degenerate)
                               : 0.0)
          << '%';
      std::cout << pad(std::to_string(n), 3) << pad(std::to_string(k.total), 13)
                << pad(std::to_string(k.non_degenerate), 9) << pad(std::to_string(k.ndc()), 9)
                << pad(std::to_string(k.connections), 9) << pad(pct.str(), 11) << '\n';
    }
  }
  return ok;
}

const std::vector<std::string> kSuites = {"axioms", "subcomplex", "connections", "bd",
                                          "identities", "homotopy",   "compare"};

struct SuiteResult {
  std::string name;
  Report report;
  json extra = json::object();
};

template <class Ops>
SuiteResult run_suite(const std::string& name, const Graph& g, const RunConfig& c, const Ops& ops) {
  SuiteResult r{name, {}, json::object()};
  const int d = c.max_dim;
  auto options = c.build();
  if (name == "axioms") {
    r.report = verify_cubical_axioms(g, d, ops, options.limits);
  } else if (name == "connections") {
    r.report = verify_connection_axioms(g, d, ops, options.limits);
  } else if (name == "bd") {
    r.report = verify_thm_bd_suite(g, d, ops, options);
  } else if (name == "identities") {
    if (d < 2) throw ConfigError("the identities suite needs --max-dim >= 2");
    r.report = verify_identity_suite(g, d, ops, options);
  } else if (name == "subcomplex") {
    for (auto mode : {Normalization::degeneracies, Normalization::degeneracies_and_connections}) {
      auto x = build_complex(g, d, mode, options);
      if (c.inject_fault) corrupt(x);
      r.report.merge(verify_boundary_squared(x));
      if (mode == Normalization::degeneracies)
        for (int n = 1; n <= d; ++n) r.report.merge(verify_con_subcomplex(x, n));
    }
  } else if (name == "homotopy") {
    if (d < 2) throw ConfigError("the homotopy suite needs --max-dim >= 2");
    auto x = build_complex(g, d, Normalization::degeneracies, options);
    if (c.inject_fault) corrupt(x);
    auto cert = build_certificate(x);
    r.report.merge(cert.report);
    json dims = json::array();
    for (const auto& k : cert.dims)
      dims.push_back({{"n", k.n}, {"con_rank", k.con_rank}, {"phi_nnz", k.phi.nnz()}, {"residual", k.residual}});
    r.extra["certificate"] = dims;
    auto h = homology_of_con(x);
    const auto id = r.report.id("con_acyclic");
    json con = json::array();
    for (std::size_t n = 0; n < h.dims.size(); ++n) {
      con.push_back({{"n", n}, {"betti", h.dims[n].betti}, {"torsion", h.dims[n].torsion.size()}});
      r.report.check(id, h.dims[n].betti == 0 && h.dims[n].torsion.empty(),
                     [&] { return "H_" + std::to_string(n) + "(Con) is nonzero"; });
    }
    r.extra["con_homology"] = con;
  } else if (name == "compare") {
    auto cmp = compare_homology(g, d, options);
    r.report = cmp.report;
    r.extra["betti_nd"] = cmp.with_connections.betti();
    r.extra["betti_quotient"] = cmp.quotient.betti();
  }
  return r;
}

int cmd_verify(const RunConfig& c, const std::string& suite) {
  Clock clock;
  const Graph g = load(c);
  std::vector<std::string> names;
  if (suite == "all")
    names = kSuites;
  else if (std::find(kSuites.begin(), kSuites.end(), suite) != kSuites.end())
    names = {suite};
  else
    throw ConfigError("unknown suite '" + suite + "'");

  std::vector<SuiteResult> results;
  for (const auto& s : names)
    results.push_back(c.inject_fault ? run_suite(s, g, c, FaultyOperators{}) : run_suite(s, g, c, StandardOperators{}));

  std::size_t violations = 0;
  for (const auto& r : results) violations += r.report.total_violations();

  if (c.format == "json") {
    json out;
    out["config"] = config_json(c, g);
    out["per_dim"] = per_dim_json(cube_census(g, c.max_dim, c.build().limits));
    json suites = json::array();
    for (const auto& r : results) {
      json s;
      s["suite"] = r.name;
      json fams = json::array();
      for (const auto& f : r.report.families())
        fams.push_back({{"family", f.name}, {"checked", f.checked}, {"violations", f.violations}});
      s["families"] = fams;
      s["notes"] = r.report.notes();
      s["messages"] = r.report.messages();
      for (const auto& [k, v] : r.extra.items()) s[k] = v;
      suites.push_back(s);
    }
    out["suites"] = suites;
    if (c.timings) out["timings"] = {{"total_ms", clock.ms()}};
    out["violations"] = violations;
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << "graph " << c.source() << ", max dim " << c.max_dim << "\n";
    for (const auto& r : results) {
      std::cout << "[" << r.name << "]\n";
      for (const auto& f : r.report.families())
        std::cout << "  " << std::left << std::setw(24) << f.name << std::right << pad(std::to_string(f.checked), 12)
                  << " checked " << pad(std::to_string(f.violations), 8) << " violations\n";
      if (r.extra.contains("certificate"))
        for (const auto& k : r.extra["certificate"])
          std::cout << "  phi_" << k["n"] << ": con_rank " << k["con_rank"] << ", nnz " << k["phi_nnz"]
                    << ", residual " << k["residual"] << '\n';
      for (const auto& n : r.report.notes()) std::cout << "  note: " << n << '\n';
      for (const auto& m : r.report.messages()) std::cout << "  violation: " << m << '\n';
    }
    std::cout << (violations ? "FAILED" : "OK") << ": " << violations << " violations, wall-clock " << std::fixed
              << std::setprecision(1) << clock.ms() << " ms\n";
  }
  return violations ? inconsistent : ok;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) h = (h ^ ch) * 0x100000001b3ULL;
  return h;
}

int cmd_export(const RunConfig& c, const std::string& target) {
  const Graph g = load(c);
  auto x = build_complex(g, c.max_dim, parse_normalization(c.mode), c.build());
  std::error_code ec;
  fs::create_directories(target, ec);
  if (ec || !fs::is_directory(target)) throw IoError("cannot create directory '" + target + "'");

  auto write = [&](const fs::path& p, auto&& body) {
    std::ofstream out(p);
    if (!out) throw IoError("cannot write '" + p.string() + "'");
    body(out);
    out.flush();
    if (!out) throw IoError("failed writing '" + p.string() + "'");
  };
  for (int n = 0; n <= x.max_dim; ++n)
    write(fs::path(target) / ("boundary_" + std::to_string(n) + ".txt"),
          [&](std::ostream& o) { write_triplets(o, n, x.boundaries[n]); });

  json m;
  std::ostringstream hash;
  hash << std::hex << std::setw(16) << std::setfill('0') << fnv1a(serialize_graph(g));
  m["graph"] = c.source();
  m["graph_hash"] = "fnv1a64:" + hash.str();
  m["mode"] = c.mode;
  m["max_dim"] = c.max_dim;
  m["caps"] = {{"max_dim", EnumerationLimits{}.max_dim}, {"max_cubes", c.max_cubes}};
  json bases = json::array();
  for (int n = 0; n <= x.max_dim; ++n) {
    json b = json::array();
    for (const auto& cube : x.bases[n]) b.push_back(to_string(cube));
    bases.push_back(b);
  }
  m["bases"] = bases;
  write(fs::path(target) / "manifest.json", [&](std::ostream& o) { o << m.dump(2) << '\n'; });
  if (c.format == "json")
    std::cout << json{{"exported", target}, {"files", x.max_dim + 2}}.dump() << '\n';
  else
    std::cout << "wrote " << x.max_dim + 1 << " boundary files and manifest.json to " << target << '\n';
  return ok;
}

void add_common(CLI::App* app, RunConfig& c) {
  app->add_option("--graph", c.graph_path, "graph file: vertex count, then one 'u v' edge per line");
  app->add_option("--family", c.family, "graph family NAME:K (cycle, path, complete, hypercube)");
  app->add_option("--max-dim", c.max_dim, "highest cube dimension")->capture_default_str();
  app->add_option("--mode", c.mode, "nd or quotient")->capture_default_str();
  app->add_option("--ring", c.ring, "Z, Q or Fp:P")->capture_default_str();
  app->add_option("--format", c.format, "text or json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  app->add_option("--workers", c.workers, "worker threads")->capture_default_str();
  app->add_option("--max-cubes", c.max_cubes, "cap on cubes per dimension")->capture_default_str();
  app->add_flag("--timings", c.timings, "include wall-clock timings in JSON output");
  app->add_flag("--inject-fault", c.inject_fault)->group("");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Homology and structural checks for cubical sets of graphs"};
  app.require_subcommand(1);
  RunConfig c;
  std::string suite = "all";
  std::string target;

  auto* hom = app.add_subcommand("hom", "homology of the normalized chain complex");
  add_common(hom, c);
  auto* verify = app.add_subcommand("verify", "run verification suites");
  add_common(verify, c);
  verify->add_option("--suite", suite, "axioms, connections, subcomplex, bd, identities, homotopy, compare or all")
      ->capture_default_str();
  auto* stats = app.add_subcommand("stats", "cube counts per dimension");
  add_common(stats, c);
  auto* exp = app.add_subcommand("export", "write boundary matrices and a manifest");
  add_common(exp, c);
  exp->add_option("--out", target, "target directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : config_error;
  }

  try {
    validate(c);
    if (*hom) return cmd_hom(c);
    if (*verify) return cmd_verify(c, suite);
    if (*stats) return cmd_stats(c);
    if (*exp) return cmd_export(c, target);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return config_error;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return config_error;
  } catch (const ResourceLimitError& e) {
    std::cerr << "resource cap: " << e.what() << '\n';
    return resource_cap;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return io_error;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return inconsistent;
  }
  return ok;
}
