#include "egomerge/graph.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "oracles.hpp"

using namespace egomerge;

namespace {

Graph from_text(const std::string& text, bool mutual_only = false) {
    std::istringstream in(text);
    return load_edge_list(in, mutual_only);
}

}  // namespace

TEST(GraphLoad, Triangle) {
    Graph g = from_text("1 2\n2 3\n1 3");
    EXPECT_EQ(g.vertex_count(), 3u);
    EXPECT_EQ(g.edge_count(), 3u);
    EXPECT_TRUE(g.has_edge(g.dense_id(1), g.dense_id(2)));
}

TEST(GraphLoad, DropsDuplicatesAndSelfLoops) {
    Graph g = from_text("1 2\n2 1\n1 1");
    EXPECT_EQ(g.vertex_count(), 2u);
    EXPECT_EQ(g.edge_count(), 1u);
}

TEST(GraphLoad, MutualOnlyKeepsReciprocatedPairs) {
    Graph g = from_text("1 2\n2 1\n1 3", true);
    EXPECT_EQ(g.edge_count(), 1u);
    EXPECT_TRUE(g.has_edge(g.dense_id(1), g.dense_id(2)));
    // vertex 3 appeared in the input, so it survives with degree 0
    EXPECT_EQ(g.vertex_count(), 3u);
    EXPECT_EQ(g.degree(g.dense_id(3)), 0u);
}

TEST(GraphLoad, MalformedLineReportsLineNumber) {
    std::istringstream in("1 2\nbogus line\n3 4");
    try {
        load_edge_list(in);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
}

TEST(GraphLoad, WrongTokenCountIsAnError) {
    std::istringstream in("1 2 3");
    EXPECT_THROW(load_edge_list(in), ParseError);
}

TEST(GraphLoad, EmptyInputGivesEmptyGraph) {
    Graph g = from_text("");
    EXPECT_EQ(g.vertex_count(), 0u);
    EXPECT_EQ(g.edge_count(), 0u);
}

TEST(GraphLoad, CommentsAreSkipped) {
    Graph g = from_text("# SNAP-style header\n# more\n1 2\n");
    EXPECT_EQ(g.edge_count(), 1u);
}

TEST(GraphLoad, OrderInsensitive) {
    Graph a = from_text("5 9\n2 9\n5 2\n10 2");
    Graph b = from_text("10 2\n5 2\n2 9\n5 9");
    EXPECT_TRUE(a == b);
}

TEST(GraphLoad, RoundTripIncludingIsolatedVertices) {
    Graph g = from_text("1 2\n2 1\n7 7\n3 4");  // 7 ends up isolated
    std::ostringstream out;
    write_edge_list(g, out);
    Graph again = from_text(out.str());
    EXPECT_TRUE(g == again);
}

TEST(GraphBinary, CacheRoundTrip) {
    Graph g = oracle::random_graph(40, 0.2, 7);
    const std::string path = testing::TempDir() + "egomerge_cache_test.bin";
    save_graph_binary(g, path);
    EXPECT_TRUE(is_graph_binary(path));
    Graph again = load_graph_binary(path);
    EXPECT_TRUE(g == again);
    std::remove(path.c_str());
}

TEST(GraphBinary, RejectsForeignFile) {
    const std::string path = testing::TempDir() + "egomerge_not_a_cache.bin";
    {
        std::ofstream out(path);
        out << "1 2\n";
    }
    EXPECT_FALSE(is_graph_binary(path));
    EXPECT_THROW(load_graph_binary(path), std::runtime_error);
    std::remove(path.c_str());
}

TEST(GraphStatsTest, ReportedDatasetIdentities) {
    // <k> = 2m/n identity on the reported dataset figures; the published
    // numbers are rounded to three significant digits
    EXPECT_NEAR(2.0 * 1046e6 / 79.4e6, 26.4, 0.1);
    EXPECT_NEAR(2.0 * 1806e6 / 65.6e6, 55.1, 0.1);
}

TEST(GraphStatsTest, TriangleIsFullyClustered) {
    Graph g = from_text("1 2\n2 3\n1 3");
    const auto s = stats(g);
    EXPECT_DOUBLE_EQ(s.mean_local_clustering, 1.0);
    EXPECT_DOUBLE_EQ(s.mean_degree, 2.0);
}

TEST(GraphStatsTest, PathHasZeroClustering) {
    Graph g = from_text("1 2\n2 3");
    EXPECT_DOUBLE_EQ(stats(g).mean_local_clustering, 0.0);
}

TEST(GraphStatsTest, MatchesBruteForceTriangleCounting) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        Graph g = oracle::random_graph(100, 0.08, seed);
        double expected = 0.0;
        for (VertexId v = 0; v < g.vertex_count(); ++v) expected += oracle::local_clustering(g, v);
        expected /= static_cast<double>(g.vertex_count());
        EXPECT_NEAR(stats(g, 2).mean_local_clustering, expected, 1e-12) << "seed " << seed;
        for (VertexId v = 0; v < g.vertex_count(); ++v)
            EXPECT_NEAR(local_clustering(g, v), oracle::local_clustering(g, v), 1e-12);
    }
}

TEST(EgoSubgraph, CenterOfK5SeesK4) {
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (VertexId i = 0; i < 5; ++i)
        for (VertexId j = i + 1; j < 5; ++j) edges.emplace_back(i, j);
    Graph g = Graph::build(5, std::move(edges));
    const EgoGraph ego = ego_subgraph(g, 0);
    EXPECT_EQ(ego.vertex_count(), 4u);
    EXPECT_EQ(ego.edge_count(), 6u);
}

TEST(EgoSubgraph, ArticulationVertexSeesTwoDisjointEdges) {
    // v=0 joins triangles {0,1,2} and {0,3,4}
    Graph g = Graph::build(5, {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {0, 4}, {3, 4}});
    const EgoGraph ego = ego_subgraph(g, 0);
    EXPECT_EQ(ego.vertex_count(), 4u);
    EXPECT_EQ(ego.edge_count(), 2u);
    for (std::uint32_t lv = 0; lv < ego.vertex_count(); ++lv) EXPECT_EQ(ego.neighbors(lv).size(), 1u);
}

TEST(EgoSubgraph, MatchesDirectEdgeFilter) {
    Graph g = oracle::random_graph(30, 0.25, 11);
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        const EgoGraph ego = ego_subgraph(g, v);
        std::set<std::pair<VertexId, VertexId>> got;
        for (std::uint32_t lu = 0; lu < ego.vertex_count(); ++lu)
            for (std::uint32_t lw : ego.neighbors(lu))
                if (lw > lu) got.emplace(ego.global[lu], ego.global[lw]);
        EXPECT_EQ(got, oracle::ego_edges(g, v)) << "ego " << v;
    }
}

TEST(EgoSubgraph, OutOfRangeThrows) {
    Graph g = from_text("1 2");
    EXPECT_THROW(ego_subgraph(g, 5), std::out_of_range);
}

TEST(GraphInvariants, AdjacencySymmetricSortedAndCountsConsistent) {
    Graph g = oracle::random_graph(60, 0.1, 3);
    std::uint64_t degree_sum = 0;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        const auto nb = g.neighbors(v);
        EXPECT_TRUE(std::is_sorted(nb.begin(), nb.end()));
        EXPECT_TRUE(std::adjacent_find(nb.begin(), nb.end()) == nb.end());
        for (VertexId w : nb) {
            EXPECT_NE(w, v);
            EXPECT_TRUE(g.has_edge(w, v));
        }
        degree_sum += nb.size();
    }
    EXPECT_EQ(degree_sum, 2 * g.edge_count());
}
