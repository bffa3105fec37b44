#include "egomerge/cover.hpp"

#include <gtest/gtest.h>

#include <sstream>

#include "egomerge/synth.hpp"
#include "oracles.hpp"

using namespace egomerge;

namespace {

Graph two_cliques_sharing_vertex(std::size_t k, VertexId shared, std::vector<VertexId>& a,
                                 std::vector<VertexId>& b) {
    // clique A = {0..k-1}, clique B = {k-1..2k-2}; shared vertex is k-1
    std::vector<std::pair<VertexId, VertexId>> edges;
    a.clear();
    b.clear();
    for (VertexId i = 0; i < k; ++i) a.push_back(i);
    for (VertexId i = 0; i < k; ++i) b.push_back(static_cast<VertexId>(k - 1 + i));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            edges.emplace_back(a[i], a[j]);
            edges.emplace_back(b[i], b[j]);
        }
    (void)shared;
    return Graph::build(2 * k - 1, std::move(edges));
}

}  // namespace

TEST(CoverBuild, MembershipIndex) {
    Cover cover({Community{0, {1, 2, 3}}, Community{1, {3, 4, 5}}});
    const auto ms = cover.memberships(3);
    ASSERT_EQ(ms.size(), 2u);
    EXPECT_EQ(ms[0], 0u);
    EXPECT_EQ(ms[1], 1u);
    EXPECT_EQ(cover.membership_count(2), 1u);
    EXPECT_EQ(cover.membership_count(9), 0u);
}

TEST(CoverBuild, DisjointCommunitiesHaveMvAtMostOne) {
    Cover cover({Community{0, {0, 1}}, Community{1, {2, 3}}, Community{2, {4, 5, 6}}});
    for (VertexId v = 0; v <= cover.max_vertex(); ++v) EXPECT_LE(cover.membership_count(v), 1u);
}

TEST(CoverBuild, SlotCountingIdentity) {
    Cover cover = oracle::random_cover(50, 12, 3, 9, 5);
    std::uint64_t m_sum = 0;
    for (VertexId v = 0; v <= cover.max_vertex(); ++v) m_sum += cover.membership_count(v);
    std::uint64_t size_sum = 0;
    for (const auto& c : cover.communities()) size_sum += c.size();
    EXPECT_EQ(m_sum, size_sum);
    EXPECT_EQ(cover.total_slots(), size_sum);
}

TEST(CoverBuild, DuplicateIdThrows) {
    EXPECT_THROW(Cover({Community{3, {1, 2}}, Community{3, {4, 5}}}), std::invalid_argument);
}

TEST(CoverBuild, UnknownCommunityLookupThrows) {
    Cover cover({Community{0, {1, 2}}});
    EXPECT_THROW(cover.community(42), std::out_of_range);
    EXPECT_THROW(neighbor_count(cover, 42), std::out_of_range);
}

TEST(Overlaps, TwoCliquesSharedVertexNoCrossEdges) {
    std::vector<VertexId> a, b;
    Graph g = two_cliques_sharing_vertex(8, 7, a, b);
    Cover cover({Community{0, a}, Community{1, b}});
    const auto records = overlaps(cover, g);
    ASSERT_EQ(records.size(), 1u);
    EXPECT_EQ(records[0].a, 0u);
    EXPECT_EQ(records[0].b, 1u);
    EXPECT_EQ(records[0].shared, std::vector<VertexId>{7});
    EXPECT_EQ(records[0].e2_count, 0u);
}

TEST(Overlaps, CrossEdgeCountsAsE2) {
    std::vector<VertexId> a, b;
    Graph base = two_cliques_sharing_vertex(8, 7, a, b);
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (VertexId u = 0; u < base.vertex_count(); ++u)
        for (VertexId w : base.neighbors(u))
            if (w > u) edges.emplace_back(u, w);
    edges.emplace_back(1, 9);  // 1 in A only, 9 in B only
    Graph g = Graph::build(base.vertex_count(), std::move(edges));
    Cover cover({Community{0, a}, Community{1, b}});
    const auto records = overlaps(cover, g);
    ASSERT_EQ(records.size(), 1u);
    EXPECT_EQ(records[0].e2_count, 1u);
}

TEST(Overlaps, MatchesBruteForce) {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        Graph g = oracle::random_graph(60, 0.12, seed);
        Cover cover = oracle::random_cover(60, 14, 3, 12, seed + 100);
        const auto got = overlaps(cover, g);
        const auto want = oracle::overlaps(cover, g);
        ASSERT_EQ(got.size(), want.size()) << "seed " << seed;
        for (std::size_t i = 0; i < got.size(); ++i) {
            EXPECT_EQ(got[i].a, want[i].a);
            EXPECT_EQ(got[i].b, want[i].b);
            EXPECT_EQ(got[i].shared, want[i].shared);
            EXPECT_EQ(got[i].e2_count, want[i].e2) << "pair " << got[i].a << "," << got[i].b;
        }
    }
}

TEST(Overlaps, PairAppearsExactlyOnceIffIntersecting) {
    Graph g = oracle::random_graph(40, 0.1, 2);
    Cover cover = oracle::random_cover(40, 10, 2, 8, 9);
    const auto records = overlaps(cover, g);
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    for (const auto& r : records) {
        EXPECT_LT(r.a, r.b);
        EXPECT_GE(r.shared.size(), 1u);
        EXPECT_TRUE(seen.emplace(r.a, r.b).second) << "duplicate pair";
    }
    EXPECT_EQ(records.size(), oracle::overlaps(cover, g).size());
}

TEST(NeighborCount, IsolatedAndHub) {
    Cover cover({Community{0, {0, 1, 2}}, Community{1, {2, 3}}, Community{2, {2, 4}},
                 Community{3, {2, 5}}, Community{4, {10, 11}}});
    EXPECT_EQ(neighbor_count(cover, 0), 3u);  // overlaps 1, 2, 3 at vertex 2
    EXPECT_EQ(neighbor_count(cover, 4), 0u);
}

TEST(NeighborCount, EqualsOverlapRecordDegree) {
    Graph g = oracle::random_graph(50, 0.1, 4);
    Cover cover = oracle::random_cover(50, 12, 3, 10, 21);
    const auto records = overlaps(cover, g);
    std::map<std::uint32_t, std::size_t> degree;
    for (const auto& r : records) {
        ++degree[r.a];
        ++degree[r.b];
    }
    for (const auto& c : cover.communities())
        EXPECT_EQ(neighbor_count(cover, c.id), degree.count(c.id) ? degree[c.id] : 0u) << c.id;
}

TEST(NeighborCount, PlantedGroundTruthAgrees) {
    PlantedSpec spec;
    spec.community_count = 60;
    spec.seed = 42;
    const GroundTruth truth = generate(spec);
    std::map<std::uint32_t, std::size_t> degree;
    for (const auto& r : truth.overlaps) {
        ++degree[r.a];
        ++degree[r.b];
    }
    for (const auto& c : truth.cover.communities())
        EXPECT_EQ(neighbor_count(truth.cover, c.id), degree.count(c.id) ? degree[c.id] : 0u);
}

TEST(CoverFile, RoundTripsLosslessly) {
    Graph g = oracle::random_graph(40, 0.15, 8);
    Cover cover = oracle::random_cover(40, 9, 2, 9, 17);
    // give l and g nontrivial values
    std::vector<Community> cs = cover.communities();
    for (std::size_t i = 0; i < cs.size(); ++i) {
        cs[i].merge_count = static_cast<std::uint32_t>(7 + i);
        cs[i].density = 1.0 / (3.0 + static_cast<double>(i));
    }
    Cover tagged(std::move(cs));
    std::ostringstream out;
    write_cover(tagged, g, out);
    std::istringstream in(out.str());
    Cover again = read_cover(in, g);
    ASSERT_EQ(again.community_count(), tagged.community_count());
    for (std::size_t i = 0; i < tagged.community_count(); ++i) {
        const auto& x = tagged.communities()[i];
        const auto& y = again.communities()[i];
        EXPECT_EQ(x.id, y.id);
        EXPECT_EQ(x.members, y.members);
        EXPECT_EQ(x.merge_count, y.merge_count);
        EXPECT_DOUBLE_EQ(x.density, y.density);
    }
}

TEST(CoverFile, UnknownVertexIsAnError) {
    Graph g = Graph::build(3, {{0, 1}, {1, 2}});
    std::istringstream in("0 1 0.5 2: 0 99\n");
    EXPECT_THROW(read_cover(in, g), ParseError);
}

TEST(CoverFile, MemberCountMismatchIsAnError) {
    Graph g = Graph::build(3, {{0, 1}, {1, 2}});
    std::istringstream in("0 1 0.5 3: 0 1\n");
    EXPECT_THROW(read_cover(in, g), ParseError);
}
