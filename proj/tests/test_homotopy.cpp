#include <gtest/gtest.h>

#include "cubhom/homotopy.hpp"
#include "oracle.hpp"

using namespace cubhom;

namespace {

// f_1^+ answers with f_1^-.
struct CollapsedFace : StandardOperators {
  void face_into(std::span<const Vertex> in, int n, int i, Sign a, std::span<Vertex> out) const {
    kernel::face(in, n, i, i == 1 ? Sign::minus : a, out);
  }
};

// G_i^+ shifted one slot to the right where possible.
struct ShiftedConnection : StandardOperators {
  void connection_into(std::span<const Vertex> in, int n, int i, Sign b, std::span<Vertex> out) const {
    kernel::connection(in, n, b == Sign::plus && i < n ? i + 1 : i, b, out);
  }
};

SingularCube lib(const oracle::Cube& c) { return SingularCube(c.n, std::vector<Vertex>(c.values.begin(), c.values.end())); }

std::size_t violations(Report& r, const std::string& family) { return r.family(family).violations; }

}  // namespace

TEST(CubeChain, Arithmetic) {
  SingularCube a(1, {0, 1}), b(1, {1, 0});
  auto x = CubeChain::of(a, 2) + CubeChain::of(b);
  x -= CubeChain::of(a, 2);
  EXPECT_EQ(x.terms.size(), 1u);
  EXPECT_EQ(to_string(Integer(-3) * x), "-3*1:[1,0]");
  EXPECT_EQ(to_string(CubeChain{}), "0");
  auto d = CubeChain::of(SingularCube(1, {0, 0})) + CubeChain::of(a);
  EXPECT_EQ(d.reduced().terms.size(), 1u);
}

TEST(Phi, FirstIndexGenerator) {
  // theta = G_1^-[0,1] = max(a1, a2); phi = -G_1^- theta = -max(a1, a2, a3)
  SingularCube theta(2, {0, 1, 1, 1});
  auto dec = connection_decomposition(theta);
  ASSERT_TRUE(dec);
  EXPECT_EQ(dec->index, 1);
  EXPECT_EQ(dec->sign, Sign::minus);
  auto phi = phi_cubes(theta);
  ASSERT_EQ(phi.terms.size(), 1u);
  EXPECT_EQ(phi.terms.begin()->first, SingularCube(3, {0, 1, 1, 1, 1, 1, 1, 1}));
  EXPECT_EQ(phi.terms.begin()->second, -1);
}

TEST(Phi, SecondIndexGenerator) {
  // theta = max(a1, min(a2, a3)) folds only at t = 2 with the plus sign
  auto theta_o = oracle::connection(oracle::Cube{2, {0, 1, 1, 1}}, 2, 1);
  auto theta = lib(theta_o);
  auto dec = connection_decomposition(theta);
  ASSERT_TRUE(dec);
  EXPECT_EQ(dec->index, 2);
  EXPECT_EQ(dec->sign, Sign::plus);
  // phi = -G_2^+ theta + 2 G_1^+ theta
  CubeChain expected;
  expected.add(lib(oracle::connection(theta_o, 2, 1)), -1);
  expected.add(lib(oracle::connection(theta_o, 1, 1)), 2);
  EXPECT_EQ(phi_cubes(theta).terms, expected.reduced().terms);
}

TEST(Phi, RejectsNonGenerators) {
  EXPECT_THROW(phi_cubes(SingularCube(2, {0, 0, 1, 1})), std::invalid_argument);
  EXPECT_THROW(phi_cubes(SingularCube(2, {0, 1, 1, 0})), std::invalid_argument);
  auto x = build_complex(build_family("complete", 2), 2, Normalization::degeneracies);
  EXPECT_THROW(phi_generator(SingularCube(2, {0, 1, 1, 1}), x), std::out_of_range);
  auto q = build_complex(build_family("complete", 2), 3, Normalization::degeneracies_and_connections);
  EXPECT_THROW(phi_generator(SingularCube(2, {0, 1, 1, 1}), q), std::invalid_argument);
}

TEST(Phi, HomotopyIdentityOnOneGenerator) {
  // d phi(theta) + phi(d theta) = theta; d theta has no connection terms here
  SingularCube theta(2, {0, 1, 1, 1});
  auto x = build_complex(build_family("complete", 2), 3, Normalization::degeneracies);
  auto phi = phi_generator(theta, x);
  auto lhs = boundary(phi, x);
  for (const auto& [k, v] : boundary(Chain{2, {{*x.index_of(theta), Integer(1)}}}, x).coefficients)
    EXPECT_FALSE(x.is_connection[1][k]);
  ASSERT_EQ(lhs.coefficients.size(), 1u);
  EXPECT_EQ(lhs.coefficients.begin()->first, *x.index_of(theta));
  EXPECT_EQ(lhs.coefficients.begin()->second, 1);
}

TEST(BoundaryTheorem, CaseLabels) {
  EXPECT_EQ(bd_case(1, 1), "(i)+(ii)");
  EXPECT_EQ(bd_case(1, 3), "(i)");
  EXPECT_EQ(bd_case(3, 3), "(ii)");
  EXPECT_EQ(bd_case(2, 3), "(iii)");
  Report r;
  EXPECT_EQ(verify_thm_bd(SingularCube(2, {0, 1, 1, 2}), 2, Sign::plus, r), "(ii)");
  EXPECT_EQ(verify_thm_bd(SingularCube(3, {0, 1, 1, 2, 1, 2, 2, 3}), 2, Sign::minus, r), "(iii)");
  EXPECT_TRUE(r.ok());
  EXPECT_THROW(verify_thm_bd(SingularCube(2, {0, 1, 1, 2}), 3, Sign::plus, r), std::out_of_range);
}

TEST(BoundaryTheorem, HoldsOnCorpus) {
  for (auto g : {build_family("complete", 2), build_family("cycle", 4), build_family("cycle", 5),
                 build_family("path", 4)}) {
    auto r = verify_thm_bd_suite(g, 3);
    EXPECT_TRUE(r.ok()) << (r.messages().empty() ? "" : r.messages()[0]);
    for (const char* f : {"bd (i)+(ii)", "bd (i)", "bd (ii)", "bd (iii)"}) EXPECT_GT(r.family(f).checked, 0u) << f;
  }
}

TEST(BoundaryTheorem, DetectsBrokenOperators) {
  auto g = build_family("cycle", 4);
  auto faces = verify_thm_bd_suite(g, 3, CollapsedFace{});
  auto conns = verify_thm_bd_suite(g, 3, ShiftedConnection{});
  EXPECT_FALSE(faces.ok());
  EXPECT_FALSE(conns.ok());
}

TEST(Identities, HoldOnCorpus) {
  for (auto g : {build_family("complete", 2), build_family("cycle", 5), build_family("path", 4)}) {
    auto r = verify_identity_suite(g, 3);
    EXPECT_TRUE(r.ok()) << (r.messages().empty() ? "" : r.messages()[0]);
    for (const char* f : {"g1(i)", "g1(ii)", "g1(iii)", "g1(iv)", "gx(i)", "gx(ii)", "lemma"})
      EXPECT_GT(r.family(f).checked, 0u) << f;
    EXPECT_EQ(r.notes().size(), 1u);
  }
  EXPECT_THROW(verify_identity_suite(build_family("complete", 2), 1), std::invalid_argument);
}

TEST(Identities, DetectBrokenOperators) {
  auto r = verify_identity_suite(build_family("cycle", 4), 3, ShiftedConnection{});
  EXPECT_GT(violations(r, "lemma"), 0u);
}

TEST(Certificate, ResidualVanishes) {
  for (auto g : {build_family("complete", 2), build_family("cycle", 4), build_family("cycle", 5)}) {
    auto cert = build_certificate(g, 3);
    ASSERT_EQ(cert.dims.size(), 1u);
    EXPECT_EQ(cert.dims[0].n, 2);
    EXPECT_GT(cert.dims[0].con_rank, 0u);
    EXPECT_EQ(cert.dims[0].residual, 0u);
    EXPECT_TRUE(cert.ok());
  }
  auto k2 = build_certificate(build_family("complete", 2), 4);
  ASSERT_EQ(k2.dims.size(), 2u);
  EXPECT_EQ(k2.dims[1].con_rank, 36u);
  EXPECT_TRUE(k2.ok());
}

TEST(Certificate, PointHasNothingToCertify) {
  auto cert = build_certificate(build_family("complete", 1), 3);
  ASSERT_EQ(cert.dims.size(), 1u);
  EXPECT_EQ(cert.dims[0].con_rank, 0u);
  EXPECT_TRUE(cert.ok());
  EXPECT_THROW(build_certificate(build_family("complete", 1), 1), std::invalid_argument);
}

TEST(Certificate, DetectsCorruptedBoundary) {
  auto x = build_complex(build_family("complete", 2), 3, Normalization::degeneracies);
  auto t = x.boundaries[3].triplets();
  t[0].value += 1;
  x.boundaries[3] = SparseIntMatrix::from_triplets(x.boundaries[3].rows(), x.boundaries[3].cols(), t);
  auto cert = build_certificate(x);
  EXPECT_FALSE(cert.ok());
}

TEST(ConHomology, IsZero) {
  for (auto g : {build_family("complete", 2), build_family("cycle", 5), build_family("path", 4)}) {
    auto h = homology_of_con(g, 3);
    for (const auto& d : h.dims) {
      EXPECT_EQ(d.betti, 0u);
      EXPECT_TRUE(d.torsion.empty());
    }
  }
}

TEST(Generators, CubeLevelIdentity) {
  for (auto g : {build_family("complete", 2), build_family("cycle", 4), build_family("complete", 3)})
    for (int n = 2; n <= 3; ++n) {
      auto r = verify_homotopy_generators(g, n);
      EXPECT_TRUE(r.ok()) << (r.messages().empty() ? "" : r.messages()[0]);
      EXPECT_GT(r.family("homotopy").checked, 0u);
    }
  EXPECT_FALSE(verify_homotopy_generators(build_family("cycle", 4), 3, ShiftedConnection{}).ok());
  EXPECT_FALSE(verify_homotopy_generators(build_family("cycle", 4), 2, CollapsedFace{}).ok());
  EXPECT_THROW(verify_homotopy_generators(build_family("cycle", 4), 1), std::invalid_argument);
}

TEST(Generators, AgreeWithOracleClassification) {
  auto adj = oracle::adjacency(2, {{0, 1}});
  std::size_t generators = 0;
  for (const auto& c : oracle::cubes(adj, 3))
    if (!oracle::is_degenerate(c) && oracle::is_connection(c)) ++generators;
  auto r = verify_homotopy_generators(build_family("complete", 2), 3);
  EXPECT_EQ(r.family("homotopy").checked, generators);
}
