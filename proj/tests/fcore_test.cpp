#include "egomerge/fcore.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace egomerge;

namespace {

Graph clique(std::size_t k) {
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (VertexId i = 0; i < k; ++i)
        for (VertexId j = i + 1; j < k; ++j) edges.emplace_back(i, j);
    return Graph::build(k, std::move(edges));
}

std::vector<VertexId> range(VertexId lo, VertexId hi) {
    std::vector<VertexId> out;
    for (VertexId v = lo; v < hi; ++v) out.push_back(v);
    return out;
}

// triangle {0,1,2} plus pendant vertex 3 attached to 2
Graph triangle_with_pendant() {
    return Graph::build(4, {{0, 1}, {0, 2}, {1, 2}, {2, 3}});
}

std::vector<VertexId> random_subset(std::size_t n, std::mt19937_64& rng) {
    std::vector<VertexId> out;
    for (VertexId v = 0; v < n; ++v)
        if (rng() % 2 == 0) out.push_back(v);
    return out;
}

}  // namespace

TEST(FCoreVerify, CompleteGraphAtFOne) {
    for (std::size_t k : {2, 4, 7}) {
        Graph g = clique(k);
        EXPECT_TRUE(verify_fcore(g, range(0, k), 1.0)) << "K" << k;
    }
}

TEST(FCoreVerify, PendantBreaksTheFraction) {
    Graph g = triangle_with_pendant();
    // b of vertex 3 in {0,1,2,3} is 1/3 < 0.6
    EXPECT_FALSE(verify_fcore(g, range(0, 4), 0.6));
    EXPECT_TRUE(verify_fcore(g, range(0, 3), 0.6));
}

TEST(FCoreVerify, DisconnectedSetFails) {
    Graph g = Graph::build(4, {{0, 1}, {2, 3}});
    EXPECT_FALSE(verify_fcore(g, range(0, 4), 0.1));
}

TEST(FCoreVerify, TooSmallThrows) {
    Graph g = clique(3);
    EXPECT_THROW(verify_fcore(g, std::vector<VertexId>{0}, 0.5), std::invalid_argument);
}

TEST(FCoreVerify, MatchesDirectConditionEvaluation) {
    std::mt19937_64 rng(99);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Graph g = oracle::random_graph(12, 0.35, seed);
        for (int trial = 0; trial < 12; ++trial) {
            auto subset = random_subset(12, rng);
            if (subset.size() < 2) continue;
            for (double f : {0.3, 0.5, 0.8})
                EXPECT_EQ(verify_fcore(g, subset, f), oracle::fcore_feasible(g, subset, f))
                    << "seed " << seed << " f " << f;
        }
    }
}

TEST(FCoreVerify, ThresholdMonotonicity) {
    std::mt19937_64 rng(5);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Graph g = oracle::random_graph(12, 0.4, seed);
        auto subset = random_subset(12, rng);
        if (subset.size() < 2) continue;
        if (verify_fcore(g, subset, 0.7)) {
            EXPECT_TRUE(verify_fcore(g, subset, 0.5));
            EXPECT_TRUE(verify_fcore(g, subset, 0.2));
        }
    }
}

TEST(FCorePeel, FeasibleSeedIsUntouched) {
    Graph g = clique(5);
    EXPECT_EQ(peel_fcore(g, range(0, 5), 0.9), range(0, 5));
}

TEST(FCorePeel, PendantIsPeeled) {
    Graph g = triangle_with_pendant();
    EXPECT_EQ(peel_fcore(g, range(0, 4), 0.6), range(0, 3));
}

TEST(FCorePeel, StarCollapsesToAnEdge) {
    // star: center 0, leaves 1..4; leaves peel off lowest-id first until the
    // surviving pair is fully connected
    Graph g = Graph::build(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
    EXPECT_EQ(peel_fcore(g, range(0, 5), 0.9), (std::vector<VertexId>{0, 4}));
}

TEST(FCorePeel, ReturnsEmptyWhenNothingSurvives) {
    // seed is an independent set; everything peels away
    Graph g = Graph::build(5, {{0, 1}});
    EXPECT_TRUE(peel_fcore(g, std::vector<VertexId>{2, 3, 4}, 0.5).empty());
}

TEST(FCorePeel, SeedTooSmallThrows) {
    Graph g = clique(3);
    EXPECT_THROW(peel_fcore(g, std::vector<VertexId>{1}, 0.5), std::invalid_argument);
}

TEST(FCorePeel, OutputFeasibleSubsetOfOracleMaximal) {
    std::mt19937_64 rng(1234);
    int nonempty = 0, maximal = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        Graph g = oracle::random_graph(12, 0.3, seed);
        auto seed_set = random_subset(12, rng);
        if (seed_set.size() < 2) continue;
        const double f = 0.5;
        const auto peeled = peel_fcore(g, seed_set, f);
        if (peeled.empty()) continue;
        ++nonempty;
        EXPECT_TRUE(verify_fcore(g, peeled, f));
        EXPECT_TRUE(std::includes(seed_set.begin(), seed_set.end(), peeled.begin(), peeled.end()));
        // subset of some brute-force maximal feasible set
        const auto cores = brute_force_fcores(g, f);
        bool covered = false, is_maximal = false;
        for (const auto& core : cores) {
            if (std::includes(core.begin(), core.end(), peeled.begin(), peeled.end())) covered = true;
            if (core == peeled) is_maximal = true;
        }
        EXPECT_TRUE(covered) << "seed " << seed;
        if (is_maximal) ++maximal;
    }
    ASSERT_GT(nonempty, 10);
    // peeling does not guarantee maximality; report the observed fraction
    std::printf("[ info ] peel returned a maximal f-core in %d of %d nonempty runs\n", maximal,
                nonempty);
}

TEST(FCorePeel, Idempotent) {
    std::mt19937_64 rng(77);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Graph g = oracle::random_graph(12, 0.35, seed);
        auto seed_set = random_subset(12, rng);
        if (seed_set.size() < 2) continue;
        const auto once = peel_fcore(g, seed_set, 0.5);
        if (once.size() < 2) continue;
        EXPECT_EQ(peel_fcore(g, once, 0.5), once);
    }
}

TEST(FCoreBrute, CompleteGraphIsTheOnlyCore) {
    Graph g = clique(4);
    const auto cores = brute_force_fcores(g, 1.0);
    ASSERT_EQ(cores.size(), 1u);
    EXPECT_EQ(cores[0], range(0, 4));
}

TEST(FCoreBrute, DisjointTrianglesAreBothFound) {
    Graph g = Graph::build(6, {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}});
    const auto cores = brute_force_fcores(g, 0.9);
    ASSERT_EQ(cores.size(), 2u);
    EXPECT_EQ(cores[0], range(0, 3));
    EXPECT_EQ(cores[1], range(3, 6));
}

TEST(FCoreBrute, RefusesLargeGraphs) {
    Graph g = oracle::random_graph(17, 0.2, 1);
    EXPECT_THROW(brute_force_fcores(g, 0.5), std::invalid_argument);
}

TEST(FCoreBrute, EveryResultIsFeasibleAndMutuallyIncomparable) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Graph g = oracle::random_graph(10, 0.35, seed);
        const auto cores = brute_force_fcores(g, 0.5);
        for (const auto& core : cores) EXPECT_TRUE(oracle::fcore_feasible(g, core, 0.5));
        for (std::size_t i = 0; i < cores.size(); ++i)
            for (std::size_t j = 0; j < cores.size(); ++j) {
                if (i == j) continue;
                EXPECT_FALSE(
                    std::includes(cores[j].begin(), cores[j].end(), cores[i].begin(), cores[i].end()))
                    << "core " << i << " contained in " << j;
            }
    }
}

TEST(FCoreBoundary, ReportsOutsideVerticesMeetingTheFraction) {
    // K4 plus vertex 4 adjacent to two of its members
    Graph g = Graph::build(5, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {4, 0}, {4, 1}});
    const auto boundary = fcore_boundary(g, range(0, 4), 0.5);
    EXPECT_EQ(boundary, std::vector<VertexId>{4});  // 2/4 >= 0.5
    EXPECT_TRUE(fcore_boundary(g, range(0, 4), 0.6).empty());
}

TEST(FCoreParamsTest, Validation) {
    FCoreParams p;
    p.f = 0.0;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p.f = 1.5;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p.f = 1.0;
    EXPECT_NO_THROW(p.validate());
}
