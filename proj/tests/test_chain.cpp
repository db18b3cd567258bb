#include <gtest/gtest.h>

#include <map>
#include <sstream>

#include "cubhom/chain.hpp"
#include "oracle.hpp"

using namespace cubhom;

namespace {

// (|KG_n|, |nd|, |ndc|) for n = 0..3, produced by a separate brute-force script.
const std::map<std::string, std::vector<oracle::Counts>> kFrozen = {
    {"C4", {{4, 4, 4}, {12, 8, 8}, {84, 64, 48}, {2652, 2432, 2192}}},
    {"C5", {{5, 5, 5}, {15, 10, 10}, {95, 70, 50}, {2475, 2230, 1970}}},
    {"K2", {{2, 2, 2}, {4, 2, 2}, {16, 10, 6}, {256, 218, 182}}},
    {"Q3", {{8, 8, 8}, {32, 24, 24}, {320, 264, 216}, {15488, 14616, 13608}}},
    {"K4", {{4, 4, 4}, {16, 12, 12}, {256, 228, 204}, {65536, 64812, 63924}}},
    {"K3", {{3, 3, 3}, {9, 6, 6}, {81, 66, 54}, {6561, 6342, 6090}}},
    {"P4", {{4, 4, 4}, {10, 6, 6}, {54, 38, 26}, {1238, 1102, 962}}},
};

Graph library_graph(const oracle::Entry& e) {
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (auto [u, v] : e.edges) edges.emplace_back(u, v);
  return Graph::from_edges(e.vertices, edges);
}

}  // namespace

TEST(Oracle, ReproducesFrozenCounts) {
  for (const auto& e : oracle::corpus()) {
    auto it = kFrozen.find(e.name);
    if (it == kFrozen.end()) continue;
    auto adj = oracle::adjacency(e.vertices, e.edges);
    for (int n = 0; n <= 3; ++n) EXPECT_EQ(oracle::count(adj, n), it->second[n]) << e.name << " n=" << n;
  }
}

TEST(Census, MatchesFrozenCounts) {
  for (const auto& e : oracle::corpus()) {
    auto it = kFrozen.find(e.name);
    if (it == kFrozen.end()) continue;
    auto census = cube_census(library_graph(e), 3);
    for (int n = 0; n <= 3; ++n) {
      EXPECT_EQ(census[n].total, it->second[n].total) << e.name << " n=" << n;
      EXPECT_EQ(census[n].non_degenerate, it->second[n].nd) << e.name << " n=" << n;
      EXPECT_EQ(census[n].ndc(), it->second[n].ndc) << e.name << " n=" << n;
    }
  }
}

TEST(Census, BuildAgreesWithStreaming) {
  auto g = build_family("path", 4);
  auto x = build_complex(g, 3, Normalization::degeneracies);
  auto s = cube_census(g, 3);
  for (int n = 0; n <= 3; ++n) {
    EXPECT_EQ(x.census[n].total, s[n].total);
    EXPECT_EQ(x.census[n].connections, s[n].connections);
    EXPECT_EQ(x.rank(n), s[n].non_degenerate);
  }
  auto q = build_complex(g, 3, Normalization::degeneracies_and_connections);
  for (int n = 0; n <= 3; ++n) EXPECT_EQ(q.rank(n), s[n].ndc());
}

TEST(Complex, TrivialCases) {
  auto k1 = build_complex(build_family("complete", 1), 3, Normalization::degeneracies);
  EXPECT_EQ(k1.rank(0), 1u);
  for (int n = 1; n <= 3; ++n) EXPECT_EQ(k1.rank(n), 0u);
  EXPECT_EQ(k1.boundaries[0].rows(), 0u);
  EXPECT_EQ(k1.boundaries[0].cols(), 1u);
  EXPECT_THROW(build_complex(build_family("complete", 1), -1, Normalization::degeneracies), std::invalid_argument);
}

TEST(Complex, BoundaryOfAnEdge) {
  auto x = build_complex(build_family("complete", 2), 1, Normalization::degeneracies);
  ASSERT_EQ(x.rank(1), 2u);
  // d [0,1] = -(f_1^- - f_1^+) = [1] - [0]
  Chain e{1, {{*x.index_of(SingularCube(1, {0, 1})), Integer(1)}}};
  auto b = boundary(e, x);
  EXPECT_EQ(b.coefficients.at(*x.index_of(SingularCube::vertex(0))), -1);
  EXPECT_EQ(b.coefficients.at(*x.index_of(SingularCube::vertex(1))), 1);
  EXPECT_THROW(boundary(Chain{0, {}}, x), std::invalid_argument);
  EXPECT_FALSE(x.index_of(SingularCube(1, {0, 0})).has_value());  // degenerate, not in the basis
}

TEST(Complex, BoundarySquaredVanishesInBothModes) {
  for (const auto& e : oracle::corpus())
    for (auto mode : {Normalization::degeneracies, Normalization::degeneracies_and_connections}) {
      auto x = build_complex(library_graph(e), 3, mode);
      auto r = verify_boundary_squared(x);
      EXPECT_TRUE(r.ok()) << e.name;
      for (int n = 2; n <= 3; ++n) EXPECT_TRUE((x.boundaries[n - 1] * x.boundaries[n]).is_zero());
    }
}

TEST(Complex, ConnectionsFormASubcomplex) {
  for (const char* fam : {"cycle:4", "cycle:5", "complete:3", "path:4"}) {
    std::string s(fam);
    auto g = build_family(s.substr(0, s.find(':')), std::stoi(s.substr(s.find(':') + 1)));
    auto x = build_complex(g, 3, Normalization::degeneracies);
    for (int n = 1; n <= 3; ++n) EXPECT_TRUE(verify_con_subcomplex(x, n).ok()) << fam;
    EXPECT_EQ(con_basis(x, 1).size(), 0u);
    EXPECT_EQ(con_basis(x, 2).size(), x.census[2].connections);
  }
}

TEST(Complex, SubcomplexCheckDetectsPlantedEntry) {
  auto x = build_complex(build_family("complete", 2), 3, Normalization::degeneracies);
  auto con3 = con_basis(x, 3);
  ASSERT_FALSE(con3.empty());
  std::size_t non_con_row = 0;
  while (x.is_connection[2][non_con_row]) ++non_con_row;
  auto t = x.boundaries[3].triplets();
  std::erase_if(t, [&](const auto& c) { return c.col == con3[0] && c.row == non_con_row; });
  t.push_back({non_con_row, con3[0], Integer(5)});
  x.boundaries[3] = SparseIntMatrix::from_triplets(x.boundaries[3].rows(), x.boundaries[3].cols(), t);
  EXPECT_FALSE(verify_con_subcomplex(x, 3).ok());
}

TEST(Complex, QuotientDerivedEqualsQuotientBuilt) {
  for (auto g : {build_family("cycle", 4), build_family("complete", 3)}) {
    auto nd = build_complex(g, 3, Normalization::degeneracies);
    auto derived = quotient_by_connections(nd);
    auto built = build_complex(g, 3, Normalization::degeneracies_and_connections);
    EXPECT_EQ(derived.bases, built.bases);
    for (int n = 0; n <= 3; ++n) EXPECT_EQ(derived.boundaries[n], built.boundaries[n]);
    EXPECT_THROW(quotient_by_connections(built), std::invalid_argument);
    EXPECT_THROW(con_basis(built, 2), std::invalid_argument);
  }
}

TEST(Complex, WorkersDoNotChangeMatrices) {
  auto g = build_family("hypercube", 3);
  auto a = build_complex(g, 3, Normalization::degeneracies, {{}, 1});
  auto b = build_complex(g, 3, Normalization::degeneracies, {{}, 4});
  EXPECT_EQ(a.bases, b.bases);
  for (int n = 0; n <= 3; ++n) EXPECT_EQ(a.boundaries[n], b.boundaries[n]);
}

TEST(SparseMatrix, Construction) {
  auto m = SparseIntMatrix::from_triplets(2, 3, {{1, 2, Integer(4)}, {0, 0, Integer(-1)}, {1, 0, Integer(0)}});
  EXPECT_EQ(m.nnz(), 2u);
  EXPECT_EQ(m.at(1, 2), 4);
  EXPECT_EQ(m.at(1, 0), 0);
  EXPECT_THROW(SparseIntMatrix::from_triplets(2, 2, {{0, 0, Integer(1)}, {0, 0, Integer(2)}}), std::invalid_argument);
  EXPECT_THROW(SparseIntMatrix::from_triplets(2, 2, {{2, 0, Integer(1)}}), std::out_of_range);
  EXPECT_THROW(SparseIntMatrix::from_triplets(2, 2, {{0, 2, Integer(1)}}), std::out_of_range);

  SparseIntMatrix c(3, 0);
  c.append_column({{2, Integer(1)}, {0, Integer(2)}, {2, Integer(-1)}});
  EXPECT_EQ(c.nnz(), 1u);
  EXPECT_EQ(c.at(0, 0), 2);
  EXPECT_THROW(c.append_column({{3, Integer(1)}}), std::out_of_range);
}

TEST(SparseMatrix, Algebra) {
  auto a = SparseIntMatrix::from_triplets(2, 2, {{0, 0, Integer(1)}, {0, 1, Integer(2)}, {1, 1, Integer(3)}});
  auto b = SparseIntMatrix::from_triplets(2, 1, {{0, 0, Integer(1)}, {1, 0, Integer(-1)}});
  auto p = a * b;
  EXPECT_EQ(p.at(0, 0), -1);
  EXPECT_EQ(p.at(1, 0), -3);
  EXPECT_EQ(a * SparseIntMatrix::identity(2), a);
  EXPECT_TRUE((a - a).is_zero());
  EXPECT_EQ((a + a).at(1, 1), 6);
  EXPECT_EQ(a.transpose().at(1, 0), 2);
  EXPECT_EQ(a.transpose().transpose(), a);
  std::vector<std::size_t> rows{1}, cols{1, 0};
  auto s = a.submatrix(rows, cols);
  EXPECT_EQ(s.rows(), 1u);
  EXPECT_EQ(s.at(0, 0), 3);
  EXPECT_EQ(s.at(0, 1), 0);
  EXPECT_THROW(b * a, std::invalid_argument);
}

TEST(Export, RoundTripIsBitIdentical) {
  auto x = build_complex(build_family("cycle", 4), 3, Normalization::degeneracies);
  std::stringstream io;
  export_boundary_matrices(x, io);
  const std::string first = io.str();
  auto back = import_boundary_matrices(io);
  ASSERT_EQ(back.size(), 4u);
  for (int n = 0; n <= 3; ++n) {
    EXPECT_EQ(back[n].n, n);
    EXPECT_EQ(back[n].matrix, x.boundaries[n]);
  }
  std::stringstream again;
  for (const auto& m : back) write_triplets(again, m.n, m.matrix);
  EXPECT_EQ(again.str(), first);
}

TEST(Export, PointComplexHeaders) {
  auto x = build_complex(build_family("complete", 1), 2, Normalization::degeneracies);
  std::stringstream io;
  export_boundary_matrices(x, io);
  EXPECT_EQ(io.str(), "0 0 1 0\n1 1 0 0\n2 0 0 0\n");
}

TEST(Export, MalformedInputIsRejected) {
  auto parse = [](const std::string& s) {
    std::stringstream in(s);
    return import_boundary_matrices(in);
  };
  EXPECT_THROW(parse("1 2 2\n"), TripletFormatError);
  EXPECT_THROW(parse("1 2 2 1\n"), TripletFormatError);
  EXPECT_THROW(parse("1 2 2 1\n0 0 x\n"), TripletFormatError);
  EXPECT_THROW(parse("1 2 2 1\n0 0 0\n"), TripletFormatError);
  EXPECT_THROW(parse("1 2 2 1\n5 0 1\n"), TripletFormatError);
  EXPECT_THROW(parse("1 2 2 2\n0 0 1\n0 0 1\n"), TripletFormatError);
  EXPECT_EQ(parse("").size(), 0u);
  EXPECT_EQ(parse("1 2 2 1\n\n0 1 -7\n")[0].matrix.at(0, 1), -7);
}
