// Brute-force oracles used to validate the library. Everything here is
// written directly from the definitions and stays independent of the
// implementation paths it checks.
#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "egomerge/cover.hpp"
#include "egomerge/graph.hpp"

namespace oracle {

using egomerge::Community;
using egomerge::Cover;
using egomerge::Graph;
using egomerge::OrigId;
using egomerge::VertexId;

// ---- random instances ----

inline Graph random_graph(std::size_t n, double p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (VertexId i = 0; i < n; ++i)
        for (VertexId j = i + 1; j < n; ++j)
            if (u(rng) < p) edges.emplace_back(i, j);
    return Graph::build(n, std::move(edges));
}

inline Cover random_cover(std::size_t n, std::size_t communities, std::size_t min_size,
                          std::size_t max_size, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> size_d(min_size, max_size);
    std::uniform_int_distribution<VertexId> vert_d(0, static_cast<VertexId>(n - 1));
    std::vector<Community> cs(communities);
    for (std::size_t c = 0; c < communities; ++c) {
        std::set<VertexId> members;
        const std::size_t want = size_d(rng);
        while (members.size() < want) members.insert(vert_d(rng));
        cs[c].id = static_cast<std::uint32_t>(c);
        cs[c].members.assign(members.begin(), members.end());
    }
    return Cover(std::move(cs));
}

// ---- graph ----

inline std::uint64_t triangles_at(const Graph& g, VertexId v) {
    const auto nv = g.neighbors(v);
    std::uint64_t count = 0;
    for (std::size_t i = 0; i < nv.size(); ++i)
        for (std::size_t j = i + 1; j < nv.size(); ++j)
            if (g.has_edge(nv[i], nv[j])) ++count;
    return count;
}

inline double local_clustering(const Graph& g, VertexId v) {
    const auto d = static_cast<double>(g.degree(v));
    if (d < 2.0) return 0.0;
    return 2.0 * static_cast<double>(triangles_at(g, v)) / (d * (d - 1.0));
}

// all edges with both endpoints in N(v), as global id pairs
inline std::set<std::pair<VertexId, VertexId>> ego_edges(const Graph& g, VertexId v) {
    std::set<VertexId> nv(g.neighbors(v).begin(), g.neighbors(v).end());
    std::set<std::pair<VertexId, VertexId>> out;
    for (VertexId u : nv)
        for (VertexId w : g.neighbors(u))
            if (w > u && nv.count(w)) out.emplace(u, w);
    return out;
}

// ---- cover / metrics ----

inline bool in_community(const Community& c, VertexId v) {
    return std::find(c.members.begin(), c.members.end(), v) != c.members.end();
}

struct BruteOverlap {
    std::uint32_t a, b;
    std::vector<VertexId> shared;
    std::uint64_t e2;
};

inline std::vector<BruteOverlap> overlaps(const Cover& cover, const Graph& g) {
    const auto& cs = cover.communities();
    std::vector<BruteOverlap> out;
    for (std::size_t i = 0; i < cs.size(); ++i)
        for (std::size_t j = i + 1; j < cs.size(); ++j) {
            BruteOverlap rec;
            rec.a = std::min(cs[i].id, cs[j].id);
            rec.b = std::max(cs[i].id, cs[j].id);
            const Community& ca = cs[i].id == rec.a ? cs[i] : cs[j];
            const Community& cb = cs[i].id == rec.a ? cs[j] : cs[i];
            for (VertexId v : ca.members)
                if (in_community(cb, v)) rec.shared.push_back(v);
            if (rec.shared.empty()) continue;
            rec.e2 = 0;
            for (VertexId u : ca.members) {
                if (in_community(cb, u)) continue;
                for (VertexId w : cb.members) {
                    if (in_community(ca, w)) continue;
                    if (g.has_edge(u, w)) ++rec.e2;
                }
            }
            out.push_back(std::move(rec));
        }
    std::sort(out.begin(), out.end(), [](const BruteOverlap& x, const BruteOverlap& y) {
        return x.a != y.a ? x.a < y.a : x.b < y.b;
    });
    return out;
}

inline double belongingness(const Graph& g, const Community& c, VertexId v) {
    std::uint64_t k = 0;
    for (VertexId u : c.members)
        if (u != v && g.has_edge(v, u)) ++k;
    return static_cast<double>(k) / static_cast<double>(c.members.size() - 1);
}

inline std::pair<std::uint64_t, std::uint64_t> edge_counts(const Graph& g, const Community& c) {
    std::uint64_t internal_pairs = 0, outbound = 0;
    const std::size_t n = g.vertex_count();
    for (VertexId u = 0; u < n; ++u)
        for (VertexId w : g.neighbors(u)) {
            if (w <= u) continue;
            const bool iu = in_community(c, u), iw = in_community(c, w);
            if (iu && iw) ++internal_pairs;
            else if (iu || iw) ++outbound;
        }
    return {2 * internal_pairs, outbound};  // internal endpoints counted at both ends
}

// categories of one community's outbound edges: 0=E1, 1=E2, 2=E3
inline std::array<std::uint64_t, 3> outbound_categories(const Graph& g, const Cover& cover,
                                                        std::uint32_t cid) {
    const Community& c = cover.community(cid);
    // neighbor communities: share at least one vertex
    std::set<std::uint32_t> nbr;
    for (const auto& d : cover.communities()) {
        if (d.id == cid) continue;
        for (VertexId v : d.members)
            if (in_community(c, v)) {
                nbr.insert(d.id);
                break;
            }
    }
    std::array<std::uint64_t, 3> counts{};
    for (VertexId v : c.members)
        for (VertexId w : g.neighbors(v)) {
            if (in_community(c, w)) continue;
            bool e1 = false;
            for (const auto& d : cover.communities())
                if (d.id != cid && in_community(d, v) && in_community(d, w)) {
                    e1 = true;
                    break;
                }
            if (e1) {
                ++counts[0];
                continue;
            }
            bool e2 = false;
            for (std::uint32_t nid : nbr)
                if (in_community(cover.community(nid), w)) {
                    e2 = true;
                    break;
                }
            ++counts[e2 ? 1 : 2];
        }
    return counts;
}

// network-wide five-type classification, evaluated in order
inline std::array<std::uint64_t, 5> edge_types(const Graph& g, const Cover& cover) {
    std::array<std::uint64_t, 5> counts{};
    const auto& cs = cover.communities();
    auto overlapping = [&](const Community& x, const Community& y) {
        for (VertexId v : x.members)
            if (in_community(y, v)) return true;
        return false;
    };
    const std::size_t n = g.vertex_count();
    for (VertexId u = 0; u < n; ++u)
        for (VertexId w : g.neighbors(u)) {
            if (w <= u) continue;
            bool t1 = false;
            for (const auto& c : cs)
                if (in_community(c, u) && in_community(c, w)) {
                    t1 = true;
                    break;
                }
            if (t1) {
                ++counts[0];
                continue;
            }
            bool t2 = false;
            for (const auto& a : cs) {
                if (!in_community(a, u)) continue;
                for (const auto& b : cs) {
                    if (a.id == b.id || !in_community(b, w)) continue;
                    if (overlapping(a, b)) {
                        t2 = true;
                        break;
                    }
                }
                if (t2) break;
            }
            if (t2) {
                ++counts[1];
                continue;
            }
            const bool mu = cover.membership_count(u) > 0;
            const bool mw = cover.membership_count(w) > 0;
            if (mu && mw) ++counts[2];
            else if (mu || mw) ++counts[3];
            else ++counts[4];
        }
    return counts;
}

// direct slot counting: share of (vertex, community) incidences whose vertex
// has m memberships
inline std::map<std::size_t, double> slot_distribution(const Cover& cover) {
    std::map<std::size_t, std::uint64_t> counts;
    std::uint64_t total = 0;
    for (const auto& c : cover.communities())
        for (VertexId v : c.members) {
            ++counts[cover.membership_count(v)];
            ++total;
        }
    std::map<std::size_t, double> out;
    for (const auto& [m, cnt] : counts) out[m] = static_cast<double>(cnt) / static_cast<double>(total);
    return out;
}

// f-core feasibility straight from the definition
inline bool fcore_feasible(const Graph& g, const std::vector<VertexId>& members, double f) {
    if (members.size() < 2) return false;
    for (VertexId v : members) {
        std::uint64_t k = 0;
        for (VertexId u : members)
            if (u != v && g.has_edge(v, u)) ++k;
        if (static_cast<double>(k) / static_cast<double>(members.size() - 1) < f) return false;
    }
    // connectivity by repeated expansion
    std::set<VertexId> seen{members.front()};
    for (;;) {
        const std::size_t before = seen.size();
        for (VertexId v : members)
            if (!seen.count(v))
                for (VertexId s : seen)
                    if (g.has_edge(v, s)) {
                        seen.insert(v);
                        break;
                    }
        if (seen.size() == before) break;
    }
    return seen.size() == members.size();
}

}  // namespace oracle
