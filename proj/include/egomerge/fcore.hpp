#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "egomerge/graph.hpp"
#include "egomerge/setops.hpp"

namespace egomerge {

struct FCoreParams {
    double f = 0.5;  // no canonical value exists; 0.5 is an arbitrary default

    void validate() const {
        if (!(f > 0.0 && f <= 1.0)) throw std::invalid_argument("f must be in (0, 1]");
    }
};

namespace detail {

inline std::vector<std::uint64_t> internal_degrees(const Graph& g, std::span<const VertexId> s) {
    std::vector<std::uint64_t> k(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) k[i] = intersection_count(g.neighbors(s[i]), s);
    return k;
}

inline bool induced_connected(const Graph& g, std::span<const VertexId> s) {
    if (s.empty()) return false;
    std::vector<bool> seen(s.size(), false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    std::size_t visited = 1;
    while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        for (VertexId w : g.neighbors(s[i])) {
            auto it = std::lower_bound(s.begin(), s.end(), w);
            if (it == s.end() || *it != w) continue;
            const auto j = static_cast<std::size_t>(it - s.begin());
            if (!seen[j]) {
                seen[j] = true;
                ++visited;
                stack.push_back(j);
            }
        }
    }
    return visited == s.size();
}

}  // namespace detail

/// Feasibility check for the f-core conditions on a vertex set: the induced
/// subgraph is connected and every member is adjacent to at least a fraction
/// f of the other members. Maximality is a separate question, answered by
/// brute_force_fcores on small graphs.
inline bool verify_fcore(const Graph& g, std::span<const VertexId> members, double f) {
    if (members.size() < 2) throw std::invalid_argument("f-core verification needs at least 2 vertices");
    const auto k = detail::internal_degrees(g, members);
    const double other = static_cast<double>(members.size() - 1);
    for (std::uint64_t kv : k)
        if (static_cast<double>(kv) / other < f) return false;
    return detail::induced_connected(g, members);
}

inline bool verify_fcore(const Graph& g, const std::vector<VertexId>& members, double f) {
    return verify_fcore(g, std::span<const VertexId>{members}, f);
}

/// Greedy extraction: repeatedly remove the member with the lowest
/// belongingness (ties to the lowest id) while any falls below f, then
/// restrict to the largest connected component (ties to the component with
/// the smallest id) and repeat until the survivor passes verify_fcore.
/// Returns the empty set when nothing of size >= 2 survives. Removed
/// vertices are never re-admitted, so the result is feasible but not
/// guaranteed maximal.
inline std::vector<VertexId> peel_fcore(const Graph& g, std::span<const VertexId> seed, double f) {
    if (seed.size() < 2) throw std::invalid_argument("f-core peeling needs at least 2 vertices");
    std::vector<VertexId> s(seed.begin(), seed.end());
    sort_unique(s);

    for (;;) {
        auto k = detail::internal_degrees(g, s);
        while (s.size() >= 2) {
            const double other = static_cast<double>(s.size() - 1);
            std::size_t worst = 0;
            for (std::size_t i = 1; i < s.size(); ++i)
                if (k[i] < k[worst]) worst = i;  // same denominator, so min k = min b
            if (static_cast<double>(k[worst]) / other >= f) break;
            const VertexId victim = s[worst];
            s.erase(s.begin() + static_cast<std::ptrdiff_t>(worst));
            k.erase(k.begin() + static_cast<std::ptrdiff_t>(worst));
            for (VertexId w : g.neighbors(victim)) {
                auto it = std::lower_bound(s.begin(), s.end(), w);
                if (it != s.end() && *it == w) --k[static_cast<std::size_t>(it - s.begin())];
            }
        }
        if (s.size() < 2) return {};

        // components of the induced subgraph; BFS seeds ascend, so the first
        // component found at the maximum size contains the smallest id
        std::vector<int> comp(s.size(), -1);
        int comp_count = 0;
        std::vector<std::size_t> best;
        for (std::size_t start = 0; start < s.size(); ++start) {
            if (comp[start] != -1) continue;
            std::vector<std::size_t> stack{start}, found{start};
            comp[start] = comp_count;
            while (!stack.empty()) {
                const std::size_t i = stack.back();
                stack.pop_back();
                for (VertexId w : g.neighbors(s[i])) {
                    auto it = std::lower_bound(s.begin(), s.end(), w);
                    if (it == s.end() || *it != w) continue;
                    const auto j = static_cast<std::size_t>(it - s.begin());
                    if (comp[j] == -1) {
                        comp[j] = comp_count;
                        stack.push_back(j);
                        found.push_back(j);
                    }
                }
            }
            if (found.size() > best.size()) best = std::move(found);
            ++comp_count;
        }
        if (best.size() == s.size()) return s;  // connected and all b >= f
        if (best.size() < 2) return {};
        std::vector<VertexId> next;
        next.reserve(best.size());
        std::sort(best.begin(), best.end());
        for (std::size_t i : best) next.push_back(s[i]);
        s = std::move(next);
    }
}

inline std::vector<VertexId> peel_fcore(const Graph& g, const std::vector<VertexId>& seed, double f) {
    return peel_fcore(g, std::span<const VertexId>{seed}, f);
}

/// Vertices outside the set whose belongingness against it would reach f,
/// i.e. |adj(w) & S| / |S| >= f. These are the boundary cases the maximality
/// clause leaves ambiguous; they are reported, not resolved.
inline std::vector<VertexId> fcore_boundary(const Graph& g, std::span<const VertexId> members, double f) {
    std::vector<VertexId> candidates;
    for (VertexId v : members)
        for (VertexId w : g.neighbors(v))
            if (!sorted_contains(members, w)) candidates.push_back(w);
    sort_unique(candidates);
    std::vector<VertexId> out;
    const double denom = static_cast<double>(members.size());
    for (VertexId w : candidates)
        if (static_cast<double>(intersection_count(g.neighbors(w), members)) / denom >= f) out.push_back(w);
    return out;
}

/// Exhaustive enumeration of all maximal connected subsets satisfying the
/// f-core conditions. Exponential in n; refuses n > 16. This is the oracle
/// that verify_fcore and peel_fcore are validated against.
inline std::vector<std::vector<VertexId>> brute_force_fcores(const Graph& g, double f) {
    const std::size_t n = g.vertex_count();
    if (n > 16) throw std::invalid_argument("brute-force f-core enumeration is limited to n <= 16");

    std::vector<std::uint32_t> adj_mask(n, 0);
    for (VertexId v = 0; v < n; ++v)
        for (VertexId w : g.neighbors(v)) adj_mask[v] |= 1u << w;

    auto feasible = [&](std::uint32_t mask, int size) {
        for (std::uint32_t rest = mask; rest != 0; rest &= rest - 1) {
            const int v = std::countr_zero(rest);
            const int kv = std::popcount(adj_mask[static_cast<std::size_t>(v)] & mask);
            if (static_cast<double>(kv) / static_cast<double>(size - 1) < f) return false;
        }
        // connectivity by bitmask expansion
        std::uint32_t frontier = mask & (~mask + 1), reached = 0;
        while (frontier != 0) {
            reached |= frontier;
            std::uint32_t next = 0;
            for (std::uint32_t rest = frontier; rest != 0; rest &= rest - 1)
                next |= adj_mask[static_cast<std::size_t>(std::countr_zero(rest))];
            frontier = next & mask & ~reached;
        }
        return reached == mask;
    };

    std::vector<std::uint32_t> feasible_masks;
    const std::uint32_t limit = n >= 32 ? 0xffffffffu : (1u << n);
    for (std::uint32_t mask = 0; mask < limit; ++mask) {
        const int size = std::popcount(mask);
        if (size >= 2 && feasible(mask, size)) feasible_masks.push_back(mask);
    }
    std::sort(feasible_masks.begin(), feasible_masks.end(),
              [](std::uint32_t a, std::uint32_t b) { return std::popcount(a) > std::popcount(b); });

    std::vector<std::uint32_t> maximal;
    for (std::uint32_t mask : feasible_masks) {
        bool dominated = false;
        for (std::uint32_t big : maximal)
            if ((mask & big) == mask && mask != big) {
                dominated = true;
                break;
            }
        if (!dominated) maximal.push_back(mask);
    }

    std::vector<std::vector<VertexId>> out;
    out.reserve(maximal.size());
    std::sort(maximal.begin(), maximal.end());
    for (std::uint32_t mask : maximal) {
        std::vector<VertexId> members;
        for (std::uint32_t rest = mask; rest != 0; rest &= rest - 1)
            members.push_back(static_cast<VertexId>(std::countr_zero(rest)));
        out.push_back(std::move(members));
    }
    return out;
}

}  // namespace egomerge
