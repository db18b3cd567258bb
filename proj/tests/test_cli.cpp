#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "cubhom/chain.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run cli(const std::string& args) {
  const std::string cmd = std::string(CUBHOM_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, p)) > 0;) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("cubhom_cli_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Cli, HomologyOfFiveCycle) {
  auto r = cli("hom --family cycle:5 --max-dim 3 --mode quotient --format json");
  ASSERT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  EXPECT_EQ(j["betti"], json::array({1, 1, 0}));
  EXPECT_EQ(j["config"]["mode"], "quotient");
  EXPECT_TRUE(j["per_dim"][3]["betti"].is_null());
  EXPECT_EQ(j["violations"], 0);
  EXPECT_FALSE(j.contains("timings"));
}

TEST(Cli, HomologyOfAPointFromFile) {
  auto dir = scratch("point");
  fs::create_directories(dir);
  std::ofstream(dir / "k1.txt") << "1\n";
  auto r = cli("hom --graph " + (dir / "k1.txt").string() + " --max-dim 2 --format json");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["betti"], json::array({1, 0}));
  fs::remove_all(dir);
}

TEST(Cli, RingsAgreeOnTorsionFreeGraphs) {
  for (const char* ring : {"Z", "Q", "Fp:2", "Fp:101"}) {
    auto r = cli(std::string("hom --family cycle:4 --ring ") + ring + " --format json");
    ASSERT_EQ(r.code, 0) << ring;
    EXPECT_EQ(json::parse(r.out)["betti"], json::array({1, 0, 0})) << ring;
  }
}

TEST(Cli, TextOutputMentionsTruncation) {
  auto r = cli("hom --family cycle:5");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("not computed"), std::string::npos);
}

TEST(Cli, ConfigurationErrors) {
  EXPECT_EQ(cli("hom --graph /nonexistent/graph.txt").code, 2);
  EXPECT_EQ(cli("hom").code, 2);
  EXPECT_EQ(cli("hom --family cycle:5 --ring Fp:4").code, 2);
  EXPECT_EQ(cli("hom --family cycle:5 --ring R").code, 2);
  EXPECT_EQ(cli("hom --family cycle:5 --mode both").code, 2);
  EXPECT_EQ(cli("hom --family wheel:5").code, 2);
  EXPECT_EQ(cli("hom --family cycle:5 --format yaml").code, 2);
  EXPECT_EQ(cli("frobnicate").code, 2);
  EXPECT_EQ(cli("verify --family cycle:5 --suite nonsense").code, 2);
}

TEST(Cli, MalformedGraphFile) {
  auto dir = scratch("bad");
  fs::create_directories(dir);
  std::ofstream(dir / "g.txt") << "3\n0 1\n1 7\n";
  EXPECT_EQ(cli("hom --graph " + (dir / "g.txt").string()).code, 2);
  fs::remove_all(dir);
}

TEST(Cli, ResourceCap) {
  EXPECT_EQ(cli("stats --family complete:4 --max-dim 3 --max-cubes 1000").code, 3);
  EXPECT_EQ(cli("stats --family cycle:4 --max-dim 5").code, 3);
}

TEST(Cli, VerifyAllSucceeds) {
  auto r = cli("verify --family cycle:4 --format json");
  ASSERT_EQ(r.code, 0) << r.out;
  auto j = json::parse(r.out);
  EXPECT_EQ(j["violations"], 0);
  std::set<std::string> names;
  for (const auto& s : j["suites"]) names.insert(s["suite"]);
  EXPECT_EQ(names, (std::set<std::string>{"axioms", "connections", "subcomplex", "bd", "identities", "homotopy",
                                          "compare"}));
}

TEST(Cli, HomotopySuiteReportsZeroResidual) {
  auto r = cli("verify --suite homotopy --family cycle:5 --format json");
  ASSERT_EQ(r.code, 0);
  auto s = json::parse(r.out)["suites"][0];
  ASSERT_EQ(s["certificate"].size(), 1u);
  EXPECT_EQ(s["certificate"][0]["n"], 2);
  EXPECT_EQ(s["certificate"][0]["residual"], 0);
  EXPECT_GT(s["certificate"][0]["con_rank"].get<int>(), 0);
  for (const auto& h : s["con_homology"]) EXPECT_EQ(h["betti"], 0);
}

TEST(Cli, InjectedFaultIsReported) {
  for (const char* suite : {"subcomplex", "homotopy", "axioms", "bd"}) {
    auto r = cli(std::string("verify --suite ") + suite + " --family cycle:4 --inject-fault --format json");
    EXPECT_EQ(r.code, 1) << suite;
    EXPECT_GT(json::parse(r.out)["violations"].get<int>(), 0) << suite;
  }
}

TEST(Cli, StatsCounts) {
  auto r = cli("stats --family cycle:4 --format json");
  ASSERT_EQ(r.code, 0);
  auto d = json::parse(r.out)["per_dim"];
  ASSERT_EQ(d.size(), 4u);
  EXPECT_EQ(d[3]["total"], 2652);
  EXPECT_EQ(d[3]["basis_nd"], 2432);
  EXPECT_EQ(d[3]["basis_ndc"], 2192);
  for (const auto& row : d) EXPECT_EQ(row["basis_nd"].get<int>() - row["basis_ndc"].get<int>(), row["con_rank"]);
}

TEST(Cli, ExportRoundTrip) {
  auto dir = scratch("export");
  auto r = cli("export --family cycle:4 --out " + dir.string());
  ASSERT_EQ(r.code, 0);
  auto x = cubhom::build_complex(cubhom::build_family("cycle", 4), 3, cubhom::Normalization::degeneracies);
  for (int n = 0; n <= 3; ++n) {
    std::ifstream in(dir / ("boundary_" + std::to_string(n) + ".txt"));
    auto back = cubhom::import_boundary_matrices(in);
    ASSERT_EQ(back.size(), 1u);
    EXPECT_EQ(back[0].n, n);
    EXPECT_EQ(back[0].matrix, x.boundaries[n]);
  }
  auto m = json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(m["bases"][1].size(), x.rank(1));
  EXPECT_EQ(m["mode"], "nd");
  EXPECT_EQ(m["graph_hash"].get<std::string>().rfind("fnv1a64:", 0), 0u);

  // same input, same bytes
  auto again = scratch("export2");
  ASSERT_EQ(cli("export --family cycle:4 --workers 3 --out " + again.string()).code, 0);
  for (const char* f : {"boundary_2.txt", "boundary_3.txt", "manifest.json"}) EXPECT_EQ(slurp(dir / f), slurp(again / f));
  fs::remove_all(dir);
  fs::remove_all(again);
}

TEST(Cli, ExportOfAPoint) {
  auto dir = scratch("point_export");
  ASSERT_EQ(cli("export --family complete:1 --max-dim 2 --out " + dir.string()).code, 0);
  EXPECT_EQ(slurp(dir / "boundary_0.txt"), "0 0 1 0\n");
  EXPECT_EQ(slurp(dir / "boundary_1.txt"), "1 1 0 0\n");
  EXPECT_EQ(slurp(dir / "boundary_2.txt"), "2 0 0 0\n");
  fs::remove_all(dir);
}

TEST(Cli, ExportToUnwritablePath) {
  auto dir = scratch("blocker");
  fs::create_directories(dir);
  std::ofstream(dir / "file") << "x";
  EXPECT_EQ(cli("export --family cycle:4 --out " + (dir / "file" / "sub").string()).code, 4);
  fs::remove_all(dir);
}

TEST(Cli, JsonIsIndependentOfWorkerCount) {
  for (const char* cmd : {"hom --family cycle:4", "verify --family cycle:4 --suite compare", "stats --family path:4"}) {
    auto one = cli(std::string(cmd) + " --workers 1 --format json");
    auto eight = cli(std::string(cmd) + " --workers 8 --format json");
    ASSERT_EQ(one.code, 0) << cmd;
    EXPECT_EQ(one.out, eight.out) << cmd;
  }
}

TEST(Cli, TimingsOnlyOnRequest) {
  auto r = cli("stats --family cycle:4 --format json --timings");
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(json::parse(r.out).contains("timings"));
}
