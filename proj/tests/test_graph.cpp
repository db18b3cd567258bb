#include <gtest/gtest.h>

#include "cubhom/graph.hpp"

using namespace cubhom;

TEST(Graph, FromEdgesSortsAndNormalizes) {
  std::vector<std::pair<Vertex, Vertex>> e{{2, 0}, {1, 0}};
  auto g = Graph::from_edges(3, e);
  EXPECT_EQ(g.vertex_count(), 3u);
  EXPECT_EQ(g.edge_count(), 2u);
  std::vector<std::pair<Vertex, Vertex>> expect{{0, 1}, {0, 2}};
  EXPECT_EQ(g.edges(), expect);
  EXPECT_TRUE(g.equal_or_adjacent(0, 0));
  EXPECT_TRUE(g.equal_or_adjacent(2, 0));
  EXPECT_FALSE(g.equal_or_adjacent(1, 2));
  EXPECT_THROW(g.equal_or_adjacent(0, 3), std::out_of_range);
}

TEST(Graph, FromEdgesRejectsBadInput) {
  std::vector<std::pair<Vertex, Vertex>> loop{{1, 1}}, dup{{0, 1}, {1, 0}}, range{{0, 5}};
  EXPECT_THROW(Graph::from_edges(2, loop), std::invalid_argument);
  EXPECT_THROW(Graph::from_edges(2, dup), std::invalid_argument);
  EXPECT_THROW(Graph::from_edges(2, range), std::invalid_argument);
}

TEST(Graph, ClosedNeighbourhoodBitsets) {
  auto g = build_family("path", 3);
  auto nb = g.closed_neighborhood(1);
  ASSERT_EQ(nb.size(), g.words_per_set());
  EXPECT_EQ(nb[0], 0b111u);
  EXPECT_EQ(g.closed_neighborhood(0)[0], 0b011u);
}

TEST(GraphFormat, ParsesCommentsAndBlankLines) {
  auto g = load_graph("# triangle\n\n3\n0 1\n  1 2  \n# tail\n0 2\n");
  EXPECT_EQ(g, build_family("complete", 3));
}

TEST(GraphFormat, EdgelessGraph) {
  auto g = load_graph("2\n");
  EXPECT_EQ(g.vertex_count(), 2u);
  EXPECT_EQ(g.edge_count(), 0u);
}

TEST(GraphFormat, RoundTrip) {
  for (auto g : {build_family("cycle", 5), build_family("hypercube", 3), load_graph("4\n")})
    EXPECT_EQ(load_graph(serialize_graph(g)), g);
}

TEST(GraphFormat, ErrorsCarryLineNumbers) {
  auto line_of = [](const char* text) -> std::size_t {
    try {
      load_graph(text);
    } catch (const GraphFormatError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("3\n0 1\n1 1\n"), 3u);   // self-loop
  EXPECT_EQ(line_of("3\n0 1\n# c\n1 0\n"), 4u);  // duplicate
  EXPECT_EQ(line_of("3\n0 7\n"), 2u);        // out of range
  EXPECT_EQ(line_of("3\n0 1 2\n"), 2u);      // malformed
  EXPECT_EQ(line_of("x\n"), 1u);
  EXPECT_EQ(line_of("3\n-1 2\n"), 2u);
  EXPECT_NE(line_of("# nothing\n"), 0u);
}

TEST(GraphFamily, Shapes) {
  EXPECT_EQ(build_family("cycle", 4).edge_count(), 4u);
  EXPECT_EQ(build_family("path", 4).edge_count(), 3u);
  EXPECT_EQ(build_family("path", 1).edge_count(), 0u);
  EXPECT_EQ(build_family("complete", 4).edge_count(), 6u);
  auto q = build_family("hypercube", 3);
  EXPECT_EQ(q.vertex_count(), 8u);
  EXPECT_EQ(q.edge_count(), 12u);
  EXPECT_TRUE(q.equal_or_adjacent(0b101, 0b100));
  EXPECT_FALSE(q.equal_or_adjacent(0b101, 0b110));
}

TEST(GraphFamily, RejectsBadParameters) {
  EXPECT_THROW(build_family("cycle", 2), std::invalid_argument);
  EXPECT_THROW(build_family("path", 0), std::invalid_argument);
  EXPECT_THROW(build_family("complete", 0), std::invalid_argument);
  EXPECT_THROW(build_family("hypercube", 17), std::invalid_argument);
  EXPECT_THROW(build_family("wheel", 5), std::invalid_argument);
}
