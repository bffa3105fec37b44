#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "egomerge/cover.hpp"
#include "egomerge/graph.hpp"
#include "egomerge/metrics.hpp"
#include "egomerge/parallel.hpp"
#include "egomerge/setops.hpp"

namespace egomerge {

struct DetectParams {
    std::uint32_t min_partial_size = 3;     // smallest useful partial community
    std::uint32_t min_overlap_to_merge = 3; // absolute overlap floor for merging
    double min_similarity = 0.5;            // |a&b| / min(|a|,|b|) floor for merging
    double belongingness_floor = 0.3;       // members below this are peeled in cleanup
    std::uint32_t min_community_size = 6;
    std::uint32_t strict_support = 10;      // l at which a community is accepted outright
    std::uint32_t soft_support_low = 6;     // lower l band, accepted when density > coeff / l
    double density_coefficient = 3.0;

    void validate() const {
        if (!(min_similarity > 0.0 && min_similarity <= 1.0))
            throw std::invalid_argument("min_similarity must be in (0, 1]");
        if (!(belongingness_floor >= 0.0 && belongingness_floor < 1.0))
            throw std::invalid_argument("belongingness_floor must be in [0, 1)");
        if (soft_support_low > strict_support)
            throw std::invalid_argument("soft_support_low must not exceed strict_support");
        if (min_partial_size < 2) throw std::invalid_argument("min_partial_size must be >= 2");
    }
};

struct PartialCommunity {
    VertexId ego = 0;
    std::vector<VertexId> members;  // sorted, includes the ego
};

struct MergedCommunity {
    std::vector<VertexId> members;      // sorted
    std::vector<std::uint32_t> support; // parallel to members: contributing partials
    std::uint32_t merge_count = 1;      // l
};

/// Clusters the ego network of v by deterministic greedy agglomeration:
/// every ego-subgraph vertex starts as a singleton and the pair of clusters
/// with the highest inter-cluster edge density is merged while that density
/// stays >= 0.5, ties going to the pair with the smallest minimum member id.
/// Clusters smaller than min_partial_size - 1 are discarded; the ego itself
/// is added to each survivor. Clusters are disjoint within one ego.
inline std::vector<PartialCommunity> ego_partition(const Graph& g, VertexId v, const DetectParams& p) {
    if (g.degree(v) + 1 < p.min_partial_size) return {};
    const EgoGraph ego = ego_subgraph(g, v);
    const auto k = static_cast<std::uint32_t>(ego.vertex_count());

    // cluster representative = minimum local member id, so merging b into a
    // (a < b) keeps representatives stable
    std::vector<bool> alive(k, true);
    std::vector<std::uint32_t> size(k, 1), version(k, 0);
    std::vector<std::vector<std::uint32_t>> members(k);
    std::vector<std::unordered_map<std::uint32_t, std::uint64_t>> cut(k);
    for (std::uint32_t i = 0; i < k; ++i) members[i] = {i};
    for (std::uint32_t i = 0; i < k; ++i)
        for (std::uint32_t j : ego.neighbors(i))
            if (j > i) {
                cut[i][j] = 1;
                cut[j][i] = 1;
            }

    struct Cand {
        double density;
        std::uint32_t a, b, va, vb;
    };
    auto worse = [](const Cand& x, const Cand& y) {
        if (x.density != y.density) return x.density < y.density;
        if (x.a != y.a) return x.a > y.a;
        return x.b > y.b;
    };
    std::priority_queue<Cand, std::vector<Cand>, decltype(worse)> heap(worse);
    for (std::uint32_t i = 0; i < k; ++i)
        for (const auto& [j, cnt] : cut[i])
            if (j > i) heap.push({static_cast<double>(cnt), i, j, 0, 0});

    while (!heap.empty()) {
        const Cand top = heap.top();
        heap.pop();
        if (!alive[top.a] || !alive[top.b] || version[top.a] != top.va || version[top.b] != top.vb)
            continue;
        if (top.density < 0.5) break;
        const std::uint32_t a = top.a, b = top.b;
        alive[b] = false;
        ++version[a];
        size[a] += size[b];
        members[a].insert(members[a].end(), members[b].begin(), members[b].end());
        members[b].clear();
        cut[a].erase(b);
        cut[b].erase(a);
        for (const auto& [c, cnt] : cut[b]) {
            cut[c].erase(b);
            cut[a][c] += cnt;
            cut[c][a] = cut[a][c];
        }
        cut[b].clear();
        for (const auto& [c, cnt] : cut[a]) {
            if (!alive[c]) continue;
            const double density = static_cast<double>(cnt) / (static_cast<double>(size[a]) * size[c]);
            const std::uint32_t lo = std::min(a, c), hi = std::max(a, c);
            heap.push({density, lo, hi, version[lo], version[hi]});
        }
    }

    std::vector<PartialCommunity> out;
    for (std::uint32_t i = 0; i < k; ++i) {
        if (!alive[i] || size[i] < p.min_partial_size - 1) continue;
        PartialCommunity part;
        part.ego = v;
        part.members.reserve(members[i].size() + 1);
        for (std::uint32_t local : members[i]) part.members.push_back(ego.global[local]);
        part.members.push_back(v);
        std::sort(part.members.begin(), part.members.end());
        out.push_back(std::move(part));
    }
    std::sort(out.begin(), out.end(),
              [](const PartialCommunity& x, const PartialCommunity& y) { return x.members < y.members; });
    return out;
}

struct SimilarityResult {
    double score = 0.0;
    bool mergeable = false;
};

/// Relative overlap of two partials with an absolute floor. The floor is the
/// noise suppression: single-vertex overlaps are the dominant legitimate
/// overlap pattern between distinct communities and must never cause merges.
inline SimilarityResult similarity(const PartialCommunity& a, const PartialCommunity& b,
                                   const DetectParams& p) {
    const std::size_t inter =
        intersection_count(std::span<const VertexId>{a.members}, std::span<const VertexId>{b.members});
    SimilarityResult r;
    const std::size_t smaller = std::min(a.members.size(), b.members.size());
    r.score = smaller > 0 ? static_cast<double>(inter) / static_cast<double>(smaller) : 0.0;
    r.mergeable = inter >= p.min_overlap_to_merge && r.score >= p.min_similarity;
    return r;
}

/// Reassembles complete communities from partials by a canonical-order
/// reduction: partials are processed ascending by (ego, member list) and
/// each one is absorbed into the existing merged community it is most
/// similar to (same overlap floor and relative score as similarity()), or
/// opens a new one. A closing fixpoint pass merges merged communities that
/// became mergeable with each other. Absorbing into the single best match
/// is what keeps noise from chaining communities together: a stray partial
/// joins one community as low-support members instead of welding two
/// communities into one.
inline std::vector<MergedCommunity> merge_pass(std::vector<PartialCommunity> partials,
                                               const DetectParams& p, unsigned workers = 1) {
    (void)workers;  // the reduction is a single canonical-order pass by contract
    std::sort(partials.begin(), partials.end(), [](const PartialCommunity& x, const PartialCommunity& y) {
        return x.ego != y.ego ? x.ego < y.ego : x.members < y.members;
    });
    if (partials.empty()) return {};

    VertexId max_v = 0;
    for (const auto& part : partials) max_v = std::max(max_v, part.members.back());

    std::vector<MergedCommunity> comms;
    std::vector<std::uint32_t> redirect;  // community slot -> surviving slot
    auto root_of = [&](std::uint32_t x) {
        while (redirect[x] != x) {
            redirect[x] = redirect[redirect[x]];
            x = redirect[x];
        }
        return x;
    };
    std::vector<std::vector<std::uint32_t>> index(static_cast<std::size_t>(max_v) + 1);

    // overlap counts against live communities for a sorted member list;
    // per-member community lists are deduplicated through the redirects
    std::vector<std::uint32_t> scratch;
    auto gather = [&](const std::vector<VertexId>& members, std::uint32_t skip,
                      std::vector<std::pair<std::uint32_t, std::uint32_t>>& counts) {
        counts.clear();
        scratch.clear();
        std::vector<std::uint32_t> per_vertex;
        for (VertexId v : members) {
            per_vertex.clear();
            for (std::uint32_t id : index[v]) {
                const std::uint32_t root = root_of(id);
                if (root != skip) per_vertex.push_back(root);
            }
            sort_unique(per_vertex);
            scratch.insert(scratch.end(), per_vertex.begin(), per_vertex.end());
        }
        std::sort(scratch.begin(), scratch.end());
        for (std::size_t a = 0; a < scratch.size();) {
            std::size_t b = a;
            while (b < scratch.size() && scratch[b] == scratch[a]) ++b;
            counts.emplace_back(scratch[a], static_cast<std::uint32_t>(b - a));
            a = b;
        }
    };

    auto best_match = [&](const std::vector<VertexId>& members, std::uint32_t skip) {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> counts;
        gather(members, skip, counts);
        std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
        double best_score = 0.0;
        for (const auto& [id, overlap] : counts) {
            if (overlap < p.min_overlap_to_merge) continue;
            const std::size_t smaller = std::min(members.size(), comms[id].members.size());
            const double score = static_cast<double>(overlap) / static_cast<double>(smaller);
            if (score < p.min_similarity) continue;
            if (score > best_score || (score == best_score && id < best)) {
                best_score = score;
                best = id;
            }
        }
        return best;
    };

    // absorb other_members with other_support into community slot `into`
    auto absorb = [&](std::uint32_t into, const std::vector<VertexId>& other_members,
                      const std::vector<std::uint32_t>& other_support) {
        MergedCommunity& dst = comms[into];
        std::vector<VertexId> members;
        std::vector<std::uint32_t> support;
        members.reserve(dst.members.size() + other_members.size());
        support.reserve(members.capacity());
        std::size_t i = 0, j = 0;
        while (i < dst.members.size() || j < other_members.size()) {
            if (j == other_members.size() ||
                (i < dst.members.size() && dst.members[i] < other_members[j])) {
                members.push_back(dst.members[i]);
                support.push_back(dst.support[i]);
                ++i;
            } else if (i == dst.members.size() || other_members[j] < dst.members[i]) {
                members.push_back(other_members[j]);
                support.push_back(other_support[j]);
                index[other_members[j]].push_back(into);
                ++j;
            } else {
                members.push_back(dst.members[i]);
                support.push_back(dst.support[i] + other_support[j]);
                ++i;
                ++j;
            }
        }
        dst.members = std::move(members);
        dst.support = std::move(support);
    };

    for (const auto& part : partials) {
        std::vector<std::uint32_t> unit_support(part.members.size(), 1);
        const std::uint32_t target = best_match(part.members, std::numeric_limits<std::uint32_t>::max());
        if (target == std::numeric_limits<std::uint32_t>::max()) {
            const auto slot = static_cast<std::uint32_t>(comms.size());
            MergedCommunity mc;
            mc.members = part.members;
            mc.support = std::move(unit_support);
            mc.merge_count = 1;
            comms.push_back(std::move(mc));
            redirect.push_back(slot);
            for (VertexId v : part.members) index[v].push_back(slot);
        } else {
            absorb(target, part.members, unit_support);
            ++comms[target].merge_count;
        }
    }

    // merged communities that grew into each other are combined until stable
    for (bool changed = true; changed;) {
        changed = false;
        for (std::uint32_t i = 0; i < comms.size(); ++i) {
            if (root_of(i) != i) continue;
            const std::uint32_t j = best_match(comms[i].members, i);
            if (j == std::numeric_limits<std::uint32_t>::max()) continue;
            const std::uint32_t survivor = std::min(i, j);
            const std::uint32_t victim = std::max(i, j);
            absorb(survivor, comms[victim].members, comms[victim].support);
            comms[survivor].merge_count += comms[victim].merge_count;
            comms[victim].members.clear();
            comms[victim].support.clear();
            redirect[victim] = survivor;
            changed = true;
        }
    }

    std::vector<MergedCommunity> out;
    out.reserve(comms.size());
    for (std::uint32_t i = 0; i < comms.size(); ++i)
        if (root_of(i) == i) out.push_back(std::move(comms[i]));
    return out;
}

enum class RejectReason : std::uint8_t {
    low_support,        // l below the soft band
    low_density,        // l in the soft band but density <= coeff / l
    too_small,          // fewer than min_community_size members survive
    low_belongingness,  // peeling left fewer than 2 members
};

inline const char* to_string(RejectReason r) {
    switch (r) {
        case RejectReason::low_support: return "low_support";
        case RejectReason::low_density: return "low_density";
        case RejectReason::too_small: return "too_small";
        case RejectReason::low_belongingness: return "low_belongingness";
    }
    return "unknown";
}

struct CleanupResult {
    std::optional<Community> community;
    std::optional<RejectReason> reason;
    bool accepted() const { return community.has_value(); }
};

/// Noise removal and acceptance test for one merged community. Members with
/// support < 2 are dropped first when l >= 4; then the member with the
/// lowest belongingness is peeled (ties to the lowest id) while any falls
/// below the floor. The survivor is accepted iff it has at least
/// min_community_size members and either l >= strict_support or l sits in
/// [soft_support_low, strict_support) with intra-community edge density
/// g > density_coefficient / l.
inline CleanupResult cleanup(const MergedCommunity& mc, const Graph& g, const DetectParams& p) {
    std::vector<VertexId> s;
    s.reserve(mc.members.size());
    if (mc.merge_count >= 4) {
        for (std::size_t i = 0; i < mc.members.size(); ++i)
            if (mc.support[i] >= 2) s.push_back(mc.members[i]);
    } else {
        s = mc.members;
    }

    std::vector<std::uint64_t> k(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        k[i] = intersection_count(g.neighbors(s[i]), std::span<const VertexId>{s});
    while (s.size() >= 2) {
        const double other = static_cast<double>(s.size() - 1);
        std::size_t worst = 0;
        for (std::size_t i = 1; i < s.size(); ++i)
            if (k[i] < k[worst]) worst = i;
        if (static_cast<double>(k[worst]) / other >= p.belongingness_floor) break;
        const VertexId victim = s[worst];
        s.erase(s.begin() + static_cast<std::ptrdiff_t>(worst));
        k.erase(k.begin() + static_cast<std::ptrdiff_t>(worst));
        for (VertexId w : g.neighbors(victim)) {
            auto it = std::lower_bound(s.begin(), s.end(), w);
            if (it != s.end() && *it == w) --k[static_cast<std::size_t>(it - s.begin())];
        }
    }

    CleanupResult result;
    if (s.size() < 2) {
        result.reason = RejectReason::low_belongingness;
        return result;
    }
    if (s.size() < p.min_community_size) {
        result.reason = RejectReason::too_small;
        return result;
    }
    std::uint64_t k_int = 0;
    for (std::uint64_t kv : k) k_int += kv;
    const double n_c = static_cast<double>(s.size());
    const double density = static_cast<double>(k_int) / (n_c * (n_c - 1.0));
    const std::uint32_t l = mc.merge_count;
    if (l < p.soft_support_low) {
        result.reason = RejectReason::low_support;
        return result;
    }
    if (l < p.strict_support && !(density > p.density_coefficient / static_cast<double>(l))) {
        result.reason = RejectReason::low_density;
        return result;
    }
    Community c;
    c.members = std::move(s);
    c.merge_count = l;
    c.density = density;
    result.community = std::move(c);
    return result;
}

// Treats an already accepted community as a merged community again, e.g. to
// re-run cleanup. Support is saturated so the support-based drop is a no-op.
inline MergedCommunity as_merged(const Community& c) {
    MergedCommunity mc;
    mc.members = c.members;
    mc.merge_count = c.merge_count;
    mc.support.assign(c.members.size(), std::max<std::uint32_t>(c.merge_count, 2));
    return mc;
}

struct DetectStats {
    std::uint64_t partials = 0;
    std::uint64_t merged_groups = 0;
    std::uint64_t accepted = 0;
    std::uint64_t rejected_low_support = 0;
    std::uint64_t rejected_low_density = 0;
    std::uint64_t rejected_too_small = 0;
    std::uint64_t rejected_low_belongingness = 0;
    std::uint64_t deduplicated = 0;
};

struct DetectResult {
    Cover cover;
    DetectStats stats;
};

/// The full three-stage pipeline: partial communities from every ego
/// network, merging by the transitive closure of the similarity relation,
/// cleanup of every merged community, and near-duplicate removal (Jaccard
/// >= 0.9 keeps the larger l, then the larger size, then the
/// lexicographically smaller member list). Deterministic for a fixed graph
/// and parameter set, independent of the worker count.
inline DetectResult detect(const Graph& g, const DetectParams& p = {}, unsigned workers = 1) {
    p.validate();
    const std::size_t n = g.vertex_count();

    std::vector<std::vector<PartialCommunity>> per_vertex(n);
    parallel_for(n, workers, [&](std::size_t v) {
        per_vertex[v] = ego_partition(g, static_cast<VertexId>(v), p);
    });
    std::vector<PartialCommunity> partials;
    for (auto& list : per_vertex)
        for (auto& part : list) partials.push_back(std::move(part));
    per_vertex.clear();
    per_vertex.shrink_to_fit();

    DetectResult result;
    result.stats.partials = partials.size();
    std::vector<MergedCommunity> merged = merge_pass(std::move(partials), p, workers);
    result.stats.merged_groups = merged.size();

    std::vector<CleanupResult> cleaned(merged.size());
    parallel_for(merged.size(), workers, [&](std::size_t i) { cleaned[i] = cleanup(merged[i], g, p); });

    std::vector<Community> accepted;
    for (auto& cr : cleaned) {
        if (cr.accepted()) {
            accepted.push_back(std::move(*cr.community));
        } else {
            switch (*cr.reason) {
                case RejectReason::low_support: ++result.stats.rejected_low_support; break;
                case RejectReason::low_density: ++result.stats.rejected_low_density; break;
                case RejectReason::too_small: ++result.stats.rejected_too_small; break;
                case RejectReason::low_belongingness: ++result.stats.rejected_low_belongingness; break;
            }
        }
    }

    // near-duplicate removal, best candidates first
    std::vector<std::uint32_t> order(accepted.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<std::uint32_t>(i);
    std::sort(order.begin(), order.end(), [&](std::uint32_t x, std::uint32_t y) {
        const Community& a = accepted[x];
        const Community& b = accepted[y];
        if (a.merge_count != b.merge_count) return a.merge_count > b.merge_count;
        if (a.size() != b.size()) return a.size() > b.size();
        return a.members < b.members;
    });
    std::vector<std::vector<std::uint32_t>> kept_at(n);
    std::vector<Community> kept;
    for (std::uint32_t idx : order) {
        Community& cand = accepted[idx];
        std::vector<std::uint32_t> rivals;
        for (VertexId v : cand.members)
            rivals.insert(rivals.end(), kept_at[v].begin(), kept_at[v].end());
        sort_unique(rivals);
        bool duplicate = false;
        for (std::uint32_t r : rivals) {
            const auto inter = intersection_count(std::span<const VertexId>{cand.members},
                                                  std::span<const VertexId>{kept[r].members});
            const auto uni = cand.members.size() + kept[r].members.size() - inter;
            if (static_cast<double>(inter) / static_cast<double>(uni) >= 0.9) {
                duplicate = true;
                break;
            }
        }
        if (duplicate) {
            ++result.stats.deduplicated;
            continue;
        }
        const auto kept_idx = static_cast<std::uint32_t>(kept.size());
        for (VertexId v : cand.members) kept_at[v].push_back(kept_idx);
        kept.push_back(std::move(cand));
    }

    std::sort(kept.begin(), kept.end(),
              [](const Community& a, const Community& b) { return a.members < b.members; });
    for (std::size_t i = 0; i < kept.size(); ++i) kept[i].id = static_cast<std::uint32_t>(i);
    result.stats.accepted = kept.size();
    result.cover = Cover(std::move(kept));
    return result;
}

}  // namespace egomerge
