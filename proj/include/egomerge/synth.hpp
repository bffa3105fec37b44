#pragma once

#include <cstdint>
#include <deque>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "egomerge/cover.hpp"
#include "egomerge/graph.hpp"
#include "egomerge/metrics.hpp"
#include "egomerge/rng.hpp"
#include "egomerge/setops.hpp"

namespace egomerge {

/// Parameters of the planted-overlap benchmark. The defaults reproduce the
/// empirical shape this toolkit targets: about half of the covered vertices
/// with multiple memberships, overlaps dominated by single shared vertices,
/// a mean of 1.6 direct edges between the exclusive parts of an overlapping
/// pair, and a background population without memberships.
struct PlantedSpec {
    std::uint32_t community_count = 500;
    std::uint32_t size_min = 6;
    std::uint32_t size_max = 50;
    double multi_membership_fraction = 0.5;  // covered vertices with m > 1
    double membership_tail_ratio = 0.45;     // geometric ratio for m >= 2
    std::uint32_t max_memberships = 6;
    // share of overlapping pairs by planned overlap size 1, 2, 3, ...
    std::vector<double> overlap_size_shares = {0.84, 0.04, 0.04, 0.04, 0.04};
    double intra_edge_probability = 0.7;  // p_in
    double e2_mean_per_overlap = 1.6;
    double background_fraction = 0.5;    // of covered vertices
    double background_mean_degree = 2.0;
    std::uint64_t seed = 42;

    void validate() const {
        if (community_count == 0) throw std::invalid_argument("community_count must be positive");
        if (size_min < 2 || size_max < size_min) throw std::invalid_argument("invalid community size range");
        if (!(intra_edge_probability > 0.5 && intra_edge_probability <= 1.0))
            throw std::invalid_argument("intra_edge_probability must be in (0.5, 1]");
        if (!(multi_membership_fraction >= 0.0 && multi_membership_fraction < 1.0))
            throw std::invalid_argument("multi_membership_fraction must be in [0, 1)");
        if (!(membership_tail_ratio >= 0.0 && membership_tail_ratio < 1.0))
            throw std::invalid_argument("membership_tail_ratio must be in [0, 1)");
        if (max_memberships < 2) throw std::invalid_argument("max_memberships must be >= 2");
        if (overlap_size_shares.empty()) throw std::invalid_argument("overlap_size_shares must not be empty");
        double sum = 0.0;
        for (double s : overlap_size_shares) {
            if (s < 0.0) throw std::invalid_argument("overlap_size_shares must be non-negative");
            sum += s;
        }
        if (sum <= 0.0) throw std::invalid_argument("overlap_size_shares must have positive mass");
        if (overlap_size_shares.size() > size_min - 1)
            throw std::invalid_argument("overlap size demand exceeds the smallest community size");
        if (e2_mean_per_overlap < 0.0) throw std::invalid_argument("e2_mean_per_overlap must be >= 0");
        if (background_fraction < 0.0) throw std::invalid_argument("background_fraction must be >= 0");
        if (background_mean_degree < 0.0) throw std::invalid_argument("background_mean_degree must be >= 0");
    }

    /// Target p_m implied by the configuration (geometric tail, capped).
    std::vector<double> target_membership_pmf() const {
        const std::uint32_t cap = std::min(max_memberships, community_count);
        std::vector<double> pmf(std::max<std::uint32_t>(cap, 1) + 1, 0.0);
        pmf[1] = 1.0 - multi_membership_fraction;
        if (cap >= 2) {
            const double q = membership_tail_ratio;
            double tail = multi_membership_fraction;
            for (std::uint32_t m = 2; m < cap; ++m) {
                pmf[m] = tail * (1.0 - q);
                tail *= q;
            }
            pmf[cap] = tail;
        }
        return pmf;
    }

    double target_mean_membership() const {
        const auto pmf = target_membership_pmf();
        double mean = 0.0;
        for (std::size_t m = 1; m < pmf.size(); ++m) mean += static_cast<double>(m) * pmf[m];
        return mean;
    }

    /// Target P_1 (share of community slots held by single-membership
    /// vertices): p_1 / <m>.
    double target_slot_p1() const {
        return (1.0 - multi_membership_fraction) / target_mean_membership();
    }

    double target_singleton_overlap_share() const {
        double sum = 0.0;
        for (double s : overlap_size_shares) sum += s;
        return overlap_size_shares[0] / sum;
    }

    /// Non-duplicate rate implied by the overlap-size distribution: r_nd is
    /// the reciprocal of the mean overlap size.
    double target_nonduplicate_rate() const {
        double sum = 0.0, mean = 0.0;
        for (std::size_t i = 0; i < overlap_size_shares.size(); ++i) {
            sum += overlap_size_shares[i];
            mean += overlap_size_shares[i] * static_cast<double>(i + 1);
        }
        return sum / mean;
    }
};

struct GroundTruth {
    Graph graph;
    Cover cover;                          // planted communities, ids 0..C-1
    std::vector<OverlapRecord> overlaps;  // exact, recomputed from the final graph
    std::uint64_t covered_vertices = 0;
    std::uint64_t background_vertices = 0;
};

namespace detail {

// Fenwick tree over remaining community capacities; supports weighted
// sampling in O(log n).
class CapacityTree {
public:
    explicit CapacityTree(const std::vector<std::uint32_t>& weights)
        : tree_(weights.size() + 1, 0), total_(0) {
        for (std::size_t i = 0; i < weights.size(); ++i) add(i, weights[i]);
    }

    std::uint64_t total() const noexcept { return total_; }

    void add(std::size_t i, std::int64_t delta) {
        total_ = static_cast<std::uint64_t>(static_cast<std::int64_t>(total_) + delta);
        for (std::size_t j = i + 1; j < tree_.size(); j += j & (~j + 1))
            tree_[j] = static_cast<std::uint64_t>(static_cast<std::int64_t>(tree_[j]) + delta);
    }

    // smallest index whose prefix sum exceeds r (r < total)
    std::size_t find(std::uint64_t r) const {
        std::size_t pos = 0;
        std::size_t bit = 1;
        while (bit * 2 < tree_.size()) bit *= 2;
        for (; bit != 0; bit /= 2) {
            const std::size_t next = pos + bit;
            if (next < tree_.size() && tree_[next] <= r) {
                pos = next;
                r -= tree_[next];
            }
        }
        return pos;  // 0-based element index
    }

private:
    std::vector<std::uint64_t> tree_;
    std::uint64_t total_;
};

inline std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
    return (static_cast<std::uint64_t>(std::min(a, b)) << 32) | std::max(a, b);
}

inline std::uint64_t edge_key(VertexId u, VertexId v) {
    return (static_cast<std::uint64_t>(std::min(u, v)) << 32) | std::max(u, v);
}

}  // namespace detail

/// Generates a graph with planted overlapping communities. Community pairs
/// come to share vertices through a capacity-weighted community-level random
/// pairing whose expected degree follows (<m>_C - 1) * n_C * r_nd; the
/// overlap-size distribution is realized by planning a target size for every
/// newly created pair and letting later multi-membership vertices grow it.
/// Ground truth (cover and overlap records) is exact.
inline GroundTruth generate(const PlantedSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);
    const std::uint32_t n_comms = spec.community_count;

    std::vector<std::uint32_t> sizes(n_comms);
    std::uint64_t total_slots = 0;
    for (auto& s : sizes) {
        s = spec.size_min + static_cast<std::uint32_t>(uniform_u64(rng, spec.size_max - spec.size_min + 1));
        total_slots += s;
    }

    // membership counts, drawn until the slots are exactly covered
    const std::uint32_t m_cap = std::min(spec.max_memberships, n_comms);
    std::vector<std::uint32_t> memberships;
    std::uint64_t drawn = 0;
    while (drawn < total_slots) {
        std::uint32_t m = 1;
        if (m_cap >= 2 && bernoulli(rng, spec.multi_membership_fraction)) {
            m = 2;
            while (m < m_cap && bernoulli(rng, spec.membership_tail_ratio)) ++m;
        }
        m = static_cast<std::uint32_t>(std::min<std::uint64_t>(m, total_slots - drawn));
        memberships.push_back(m);
        drawn += m;
    }
    // high-m vertices claim their distinct communities while capacity is wide
    std::stable_sort(memberships.begin(), memberships.end(), std::greater<>());

    std::vector<std::uint32_t> capacity = sizes;
    detail::CapacityTree weights(capacity);
    std::vector<std::vector<VertexId>> members_of(n_comms);
    struct Pending {
        std::uint32_t a, b, remaining;
    };
    std::deque<Pending> pending;
    std::unordered_map<std::uint64_t, std::uint32_t> pair_sizes;

    double share_sum = 0.0;
    for (double s : spec.overlap_size_shares) share_sum += s;
    auto draw_overlap_size = [&](std::uint32_t a, std::uint32_t b) {
        double u = uniform01(rng) * share_sum;
        std::uint32_t k = 1;
        for (std::size_t i = 0; i < spec.overlap_size_shares.size(); ++i) {
            u -= spec.overlap_size_shares[i];
            if (u < 0.0) {
                k = static_cast<std::uint32_t>(i + 1);
                break;
            }
        }
        // an overlap approaching the size of its hosts stops reading as two
        // communities; keep shared sets well below the smaller host
        return std::min(k, std::max(1u, std::min(sizes[a], sizes[b]) / 4));
    };

    VertexId next_vertex = 0;
    std::vector<std::uint32_t> chosen;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> saved;
    for (std::uint32_t m : memberships) {
        if (weights.total() == 0) break;
        chosen.clear();
        saved.clear();
        if (m >= 2) {
            while (!pending.empty() &&
                   (capacity[pending.front().a] == 0 || capacity[pending.front().b] == 0))
                pending.pop_front();
            if (!pending.empty()) {
                auto& front = pending.front();
                chosen.push_back(front.a);
                chosen.push_back(front.b);
                if (--front.remaining == 0) pending.pop_front();
            }
        }
        for (std::uint32_t c : chosen) {
            saved.emplace_back(c, capacity[c]);
            weights.add(c, -static_cast<std::int64_t>(capacity[c]));
        }
        // fresh picks may only create new community pairs; without this rule
        // two multi-membership vertices can share two communities, and such
        // doubled pairs fuse communities under ego-network merging
        while (chosen.size() < m && weights.total() > 0) {
            std::uint32_t picked = n_comms;
            for (int attempt = 0; attempt < 50; ++attempt) {
                const auto c = static_cast<std::uint32_t>(weights.find(uniform_u64(rng, weights.total())));
                bool fresh_pair = true;
                for (std::uint32_t x : chosen)
                    if (pair_sizes.count(detail::pair_key(x, c)) != 0) {
                        fresh_pair = false;
                        break;
                    }
                if (fresh_pair) {
                    picked = c;
                    break;
                }
            }
            if (picked == n_comms) break;  // give this vertex fewer memberships
            chosen.push_back(picked);
            saved.emplace_back(picked, capacity[picked]);
            weights.add(picked, -static_cast<std::int64_t>(capacity[picked]));
        }
        for (const auto& [c, w] : saved) weights.add(c, static_cast<std::int64_t>(w));
        if (chosen.empty()) break;

        const VertexId v = next_vertex++;
        for (std::uint32_t c : chosen) {
            members_of[c].push_back(v);
            --capacity[c];
            weights.add(c, -1);
        }
        for (std::size_t i = 0; i < chosen.size(); ++i)
            for (std::size_t j = i + 1; j < chosen.size(); ++j) {
                const std::uint32_t a = std::min(chosen[i], chosen[j]);
                const std::uint32_t b = std::max(chosen[i], chosen[j]);
                auto [it, is_new] = pair_sizes.emplace(detail::pair_key(a, b), 1);
                if (!is_new) {
                    ++it->second;
                } else {
                    const std::uint32_t target = draw_overlap_size(a, b);
                    if (target > 1) pending.push_back({a, b, target - 1});
                }
            }
    }
    // leftover capacity is filled by fresh single-membership vertices
    while (weights.total() > 0) {
        const auto c = static_cast<std::uint32_t>(weights.find(uniform_u64(rng, weights.total())));
        members_of[c].push_back(next_vertex++);
        --capacity[c];
        weights.add(c, -1);
    }

    const std::uint64_t covered = next_vertex;
    const auto background =
        static_cast<std::uint64_t>(std::llround(spec.background_fraction * static_cast<double>(covered)));
    const std::uint64_t n_total = covered + background;

    std::unordered_set<std::uint64_t> edge_set;
    std::vector<std::pair<VertexId, VertexId>> edges;
    auto add_edge = [&](VertexId u, VertexId v) {
        if (u == v) return false;
        if (!edge_set.insert(detail::edge_key(u, v)).second) return false;
        edges.emplace_back(std::min(u, v), std::max(u, v));
        return true;
    };

    // one draw per unique member pair: a pair sharing two communities must
    // not get a second chance, or overlap sets come out denser than their
    // host communities
    {
        std::vector<std::uint64_t> candidate_pairs;
        for (std::uint32_t c = 0; c < n_comms; ++c) {
            auto& mem = members_of[c];
            std::sort(mem.begin(), mem.end());
            for (std::size_t i = 0; i < mem.size(); ++i)
                for (std::size_t j = i + 1; j < mem.size(); ++j)
                    candidate_pairs.push_back(detail::edge_key(mem[i], mem[j]));
        }
        sort_unique(candidate_pairs);
        for (std::uint64_t key : candidate_pairs)
            if (bernoulli(rng, spec.intra_edge_probability))
                add_edge(static_cast<VertexId>(key >> 32), static_cast<VertexId>(key & 0xffffffffu));
    }

    std::vector<std::uint64_t> pair_keys;
    pair_keys.reserve(pair_sizes.size());
    for (const auto& [key, cnt] : pair_sizes) pair_keys.push_back(key);
    std::sort(pair_keys.begin(), pair_keys.end());
    for (std::uint64_t key : pair_keys) {
        const auto a = static_cast<std::uint32_t>(key >> 32);
        const auto b = static_cast<std::uint32_t>(key & 0xffffffffu);
        const auto a_only = difference<VertexId>(members_of[a], members_of[b]);
        const auto b_only = difference<VertexId>(members_of[b], members_of[a]);
        if (a_only.empty() || b_only.empty()) continue;
        const std::uint32_t wanted = poisson(rng, spec.e2_mean_per_overlap);
        for (std::uint32_t i = 0; i < wanted; ++i)
            for (int attempt = 0; attempt < 20; ++attempt) {
                const VertexId u = a_only[uniform_u64(rng, a_only.size())];
                const VertexId w = b_only[uniform_u64(rng, b_only.size())];
                if (add_edge(u, w)) break;
            }
    }

    if (background > 0 && spec.background_mean_degree > 0.0) {
        const auto bg_edges = static_cast<std::uint64_t>(
            std::llround(static_cast<double>(background) * spec.background_mean_degree / 2.0));
        for (std::uint64_t i = 0; i < bg_edges; ++i)
            for (int attempt = 0; attempt < 20; ++attempt) {
                const auto u = static_cast<VertexId>(covered + uniform_u64(rng, background));
                const auto w = static_cast<VertexId>(uniform_u64(rng, n_total));
                if (add_edge(u, w)) break;
            }
    }

    GroundTruth truth;
    truth.covered_vertices = covered;
    truth.background_vertices = background;
    truth.graph = Graph::build(n_total, std::move(edges));

    std::vector<Community> comms(n_comms);
    for (std::uint32_t c = 0; c < n_comms; ++c) {
        comms[c].id = c;
        comms[c].members = std::move(members_of[c]);
    }
    for (auto& c : comms) {
        const auto ec = edge_counts(truth.graph, c);
        const double n_c = static_cast<double>(c.size());
        c.density = n_c > 1 ? static_cast<double>(ec.internal) / (n_c * (n_c - 1.0)) : 0.0;
    }
    truth.cover = Cover(std::move(comms));
    truth.overlaps = overlaps(truth.cover, truth.graph);
    return truth;
}

struct ScoreReport {
    double recovery_rate = 0.0;      // matched truth communities at the threshold / |truth|
    double mean_best_jaccard = 0.0;  // over truth communities; unmatched count as 0
    double mean_f1 = 0.0;            // same averaging
    std::uint64_t matched = 0;       // greedy matches with Jaccard >= threshold
    std::uint64_t missed = 0;
    std::uint64_t spurious = 0;
    double jaccard_threshold = 0.8;
};

/// Greedy one-to-one matching by descending Jaccard between detected and
/// ground-truth communities; candidates come from shared vertices.
inline ScoreReport score(const Cover& detected, const Cover& truth, double jaccard_threshold = 0.8) {
    ScoreReport report;
    report.jaccard_threshold = jaccard_threshold;
    const auto& dets = detected.communities();
    const auto& trus = truth.communities();
    if (trus.empty()) return report;

    struct Pair {
        double jacc;
        std::uint32_t truth_pos, det_pos;
        std::uint64_t inter;
    };
    std::unordered_map<std::uint32_t, std::uint32_t> truth_pos;
    for (std::uint32_t i = 0; i < trus.size(); ++i) truth_pos.emplace(trus[i].id, i);

    std::vector<Pair> candidates;
    for (std::uint32_t d = 0; d < dets.size(); ++d) {
        std::vector<std::uint32_t> seen;
        for (VertexId v : dets[d].members) {
            auto ms = truth.memberships(v);
            seen.insert(seen.end(), ms.begin(), ms.end());
        }
        sort_unique(seen);
        for (std::uint32_t tid : seen) {
            const std::uint32_t t = truth_pos.at(tid);
            const auto inter = intersection_count(std::span<const VertexId>{dets[d].members},
                                                  std::span<const VertexId>{trus[t].members});
            if (inter == 0) continue;
            const auto uni = dets[d].members.size() + trus[t].members.size() - inter;
            candidates.push_back({static_cast<double>(inter) / static_cast<double>(uni), t, d,
                                  static_cast<std::uint64_t>(inter)});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Pair& x, const Pair& y) {
        if (x.jacc != y.jacc) return x.jacc > y.jacc;
        if (x.truth_pos != y.truth_pos) return x.truth_pos < y.truth_pos;
        return x.det_pos < y.det_pos;
    });

    std::vector<bool> truth_used(trus.size(), false), det_used(dets.size(), false);
    double jacc_sum = 0.0, f1_sum = 0.0;
    std::uint64_t matched_any = 0;
    for (const auto& c : candidates) {
        if (truth_used[c.truth_pos] || det_used[c.det_pos]) continue;
        truth_used[c.truth_pos] = true;
        det_used[c.det_pos] = true;
        ++matched_any;
        jacc_sum += c.jacc;
        f1_sum += 2.0 * static_cast<double>(c.inter) /
                  static_cast<double>(dets[c.det_pos].members.size() + trus[c.truth_pos].members.size());
        if (c.jacc >= jaccard_threshold) ++report.matched;
    }
    report.recovery_rate = static_cast<double>(report.matched) / static_cast<double>(trus.size());
    report.mean_best_jaccard = jacc_sum / static_cast<double>(trus.size());
    report.mean_f1 = f1_sum / static_cast<double>(trus.size());
    report.missed = trus.size() - report.matched;
    report.spurious = dets.size() - report.matched;
    return report;
}

}  // namespace egomerge
