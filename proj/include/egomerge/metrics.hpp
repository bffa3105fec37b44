#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "egomerge/cover.hpp"
#include "egomerge/graph.hpp"
#include "egomerge/parallel.hpp"
#include "egomerge/setops.hpp"

namespace egomerge {

/// Number of community members adjacent to v (v must be a member).
inline std::uint64_t internal_degree(const Graph& g, const Community& c, VertexId v) {
    return intersection_count(g.neighbors(v), std::span<const VertexId>{c.members});
}

/// Belongingness b of a member: the fraction of the other members it is
/// connected to, b = k_int(v,C) / (n_C - 1).
inline double belongingness(const Graph& g, const Community& c, VertexId v) {
    if (!c.contains(v)) throw std::invalid_argument("vertex is not a community member");
    if (c.size() < 2) throw std::invalid_argument("belongingness needs community size >= 2");
    return static_cast<double>(internal_degree(g, c, v)) / static_cast<double>(c.size() - 1);
}

struct MembershipDistributions {
    std::vector<std::uint64_t> count_by_m;  // index m; [0] unused
    std::vector<double> p_m;                // membership distribution over covered vertices
    std::vector<double> slot_p_m;           // P_m: distribution of m over (vertex, community) slots
    double mean_m = 0.0;                    // <m>
    double mean_m_sq = 0.0;                 // <m^2>
    double mean_m_community = 0.0;          // <m>_C = <m^2>/<m>
    std::uint64_t covered_vertices = 0;
    std::uint64_t total_slots = 0;

    double p(std::size_t m) const { return m < p_m.size() ? p_m[m] : 0.0; }
    double slot_p(std::size_t m) const { return m < slot_p_m.size() ? slot_p_m[m] : 0.0; }
    std::size_t max_m() const { return count_by_m.empty() ? 0 : count_by_m.size() - 1; }
};

/// p_m over vertices with m >= 1 and P_m = p_m * m / <m>. P_m is computed as
/// the exact slot ratio count_m * m / total_slots, which coincides with the
/// formula but avoids compounding rounding.
inline MembershipDistributions membership_distributions(const Cover& cover) {
    if (cover.community_count() == 0) throw std::invalid_argument("membership distributions need a non-empty cover");
    MembershipDistributions md;
    for (VertexId v = 0; v <= cover.max_vertex(); ++v) {
        const std::size_t m = cover.membership_count(v);
        if (m == 0) continue;
        if (m >= md.count_by_m.size()) md.count_by_m.resize(m + 1, 0);
        ++md.count_by_m[m];
        ++md.covered_vertices;
        md.total_slots += m;
    }
    md.p_m.assign(md.count_by_m.size(), 0.0);
    md.slot_p_m.assign(md.count_by_m.size(), 0.0);
    double sum_m = 0.0, sum_m_sq = 0.0;
    for (std::size_t m = 1; m < md.count_by_m.size(); ++m) {
        const double cnt = static_cast<double>(md.count_by_m[m]);
        md.p_m[m] = cnt / static_cast<double>(md.covered_vertices);
        md.slot_p_m[m] = cnt * static_cast<double>(m) / static_cast<double>(md.total_slots);
        sum_m += cnt * static_cast<double>(m);
        sum_m_sq += cnt * static_cast<double>(m) * static_cast<double>(m);
    }
    md.mean_m = sum_m / static_cast<double>(md.covered_vertices);
    md.mean_m_sq = sum_m_sq / static_cast<double>(md.covered_vertices);
    md.mean_m_community = md.mean_m_sq / md.mean_m;
    return md;
}

struct EdgeEndpointCounts {
    std::uint64_t internal = 0;  // k_int: every internal edge counted at both ends
    std::uint64_t outbound = 0;  // k_out: each outbound edge counted once
};

inline EdgeEndpointCounts edge_counts(const Graph& g, const Community& c) {
    EdgeEndpointCounts ec;
    for (VertexId v : c.members) {
        const std::uint64_t kint = internal_degree(g, c, v);
        ec.internal += kint;
        ec.outbound += g.degree(v) - kint;
    }
    return ec;
}

struct OutboundCategories {
    std::uint64_t e1_count = 0;  // to a neighbor community the member also belongs to
    std::uint64_t e2_count = 0;  // to a neighbor community the member does not belong to
    std::uint64_t e3_count = 0;  // not to a neighbor community
    double e1 = 0.0, e2 = 0.0, e3 = 0.0;
    bool zero_outbound = false;  // proportions undefined; reported as zeros
};

inline OutboundCategories classify_outbound(const Graph& g, const Cover& cover, std::uint32_t community_id) {
    const Community& c = cover.community(community_id);
    const auto nbr_comms = neighbor_ids(cover, community_id);
    OutboundCategories oc;
    for (VertexId v : c.members) {
        const auto mv = cover.memberships(v);
        for (VertexId w : g.neighbors(v)) {
            if (c.contains(w)) continue;
            const auto mw = cover.memberships(w);
            bool e1 = false;
            // common community of v and w other than C
            std::size_t i = 0, j = 0;
            while (i < mv.size() && j < mw.size()) {
                if (mv[i] < mw[j]) {
                    ++i;
                } else if (mw[j] < mv[i]) {
                    ++j;
                } else {
                    if (mv[i] != community_id) {
                        e1 = true;
                        break;
                    }
                    ++i;
                    ++j;
                }
            }
            if (e1) {
                ++oc.e1_count;
            } else if (intersects(std::span<const std::uint32_t>{mw}, std::span<const std::uint32_t>{nbr_comms})) {
                ++oc.e2_count;
            } else {
                ++oc.e3_count;
            }
        }
    }
    const std::uint64_t total = oc.e1_count + oc.e2_count + oc.e3_count;
    if (total == 0) {
        oc.zero_outbound = true;
    } else {
        oc.e1 = static_cast<double>(oc.e1_count) / static_cast<double>(total);
        oc.e2 = static_cast<double>(oc.e2_count) / static_cast<double>(total);
        oc.e3 = static_cast<double>(oc.e3_count) / static_cast<double>(total);
    }
    return oc;
}

struct EdgeTypeTally {
    // 1: intra-community; 2: between overlapping communities; 3: between
    // non-overlapping communities' members; 4: member to isolated vertex;
    // 5: between isolated vertices. Evaluated in that order, so the five
    // types partition the edge set.
    std::array<std::uint64_t, 5> type_counts{};
    std::uint64_t vertices_with_membership = 0;
    std::uint64_t vertices_without = 0;

    std::uint64_t total_edges() const {
        std::uint64_t t = 0;
        for (auto c : type_counts) t += c;
        return t;
    }
};

inline EdgeTypeTally classify_network_edges(const Graph& g, const Cover& cover, unsigned workers = 1) {
    const std::size_t n = g.vertex_count();
    EdgeTypeTally tally;
    for (VertexId v = 0; v < n; ++v)
        (cover.membership_count(v) > 0 ? tally.vertices_with_membership : tally.vertices_without)++;

    // neighbor community ids per community, for the type-2 test
    const auto& comms = cover.communities();
    std::vector<std::vector<std::uint32_t>> nbrs(comms.size());
    std::unordered_map<std::uint32_t, std::uint32_t> pos;
    pos.reserve(comms.size());
    for (std::size_t i = 0; i < comms.size(); ++i) pos.emplace(comms[i].id, static_cast<std::uint32_t>(i));
    parallel_for(comms.size(), workers, [&](std::size_t i) { nbrs[i] = neighbor_ids(cover, comms[i].id); });

    // fixed block split (independent of worker count), one tally per block
    const std::size_t blocks = std::min<std::size_t>(n == 0 ? 1 : n, 64);
    std::vector<std::array<std::uint64_t, 5>> block_counts(blocks, std::array<std::uint64_t, 5>{});
    parallel_for(blocks, workers, [&](std::size_t bi) {
        const VertexId begin = static_cast<VertexId>(bi * n / blocks);
        const VertexId end = static_cast<VertexId>((bi + 1) * n / blocks);
        auto& counts = block_counts[bi];
        for (VertexId u = begin; u < end; ++u) {
            const auto mu = cover.memberships(u);
            for (VertexId w : g.neighbors(u)) {
                if (w <= u) continue;
                const auto mw = cover.memberships(w);
                int type;
                if (intersects(mu, mw)) {
                    type = 0;
                } else {
                    bool overlap_linked = false;
                    for (std::uint32_t a : mu) {
                        const auto& na = nbrs[pos.at(a)];
                        if (intersects(mw, std::span<const std::uint32_t>{na})) {
                            overlap_linked = true;
                            break;
                        }
                    }
                    if (overlap_linked) {
                        type = 1;
                    } else if (!mu.empty() && !mw.empty()) {
                        type = 2;
                    } else if (!mu.empty() || !mw.empty()) {
                        type = 3;
                    } else {
                        type = 4;
                    }
                }
                ++counts[type];
            }
        }
    });
    for (const auto& counts : block_counts)
        for (int t = 0; t < 5; ++t) tally.type_counts[t] += counts[t];
    return tally;
}

/// Expected neighbor community count for a community of the given size:
/// d = (<m>_C - 1) * n_C * r_nd.
inline double expected_neighbor_count(std::size_t community_size, const MembershipDistributions& md,
                                      double nonduplicate_rate) {
    return (md.mean_m_community - 1.0) * static_cast<double>(community_size) * nonduplicate_rate;
}

struct NonduplicateRate {
    double value = 0.0;
    bool clamped = false;  // raw estimate fell outside (0, 1]
};

inline NonduplicateRate nonduplicate_rate(double observed_neighbors, std::size_t community_size,
                                          const MembershipDistributions& md) {
    const double denom = (md.mean_m_community - 1.0) * static_cast<double>(community_size);
    if (denom <= 0.0) {
        if (observed_neighbors > 0.0)
            throw std::invalid_argument("neighbor communities observed but <m>_C implies none");
        return {0.0, true};
    }
    NonduplicateRate r;
    r.value = observed_neighbors / denom;
    if (r.value <= 0.0 || r.value > 1.0) {
        r.clamped = true;
        r.value = std::clamp(r.value, 0.0, 1.0);
    }
    return r;
}

struct CommunityEdgeProfile {
    std::uint64_t k_int = 0;
    std::uint64_t k_out = 0;
    double e1 = 0.0, e2 = 0.0, e3 = 0.0;
    double delta_int = 0.0;     // k_int / [n_C (n_C - 1)]
    double delta_out = 0.0;     // k_out / [n_C (n - n_C)]
    double conductance = 0.0;   // k_out / (k_int + k_out)
    double fitness = 0.0;       // k_int / (k_int + k_out)^alpha
    bool weak = false;          // k_int > k_out
    bool undefined_ratio = false;   // k_int + k_out == 0
    bool zero_outbound = false;     // e1/e2/e3 undefined, reported as zeros
    bool categories_valid = false;  // e1/e2/e3 filled (needs a cover)
};

inline CommunityEdgeProfile quality(const Graph& g, const Community& c, std::size_t network_size,
                                    double alpha = 1.0) {
    if (c.size() < 2 || network_size < c.size())
        throw std::invalid_argument("quality needs n >= n_C >= 2");
    CommunityEdgeProfile p;
    const auto ec = edge_counts(g, c);
    p.k_int = ec.internal;
    p.k_out = ec.outbound;
    const double n_c = static_cast<double>(c.size());
    const double total = static_cast<double>(p.k_int + p.k_out);
    p.weak = p.k_int > p.k_out;
    p.delta_int = static_cast<double>(p.k_int) / (n_c * (n_c - 1.0));
    p.delta_out = network_size > c.size()
                      ? static_cast<double>(p.k_out) / (n_c * static_cast<double>(network_size - c.size()))
                      : 0.0;
    if (total == 0.0) {
        p.undefined_ratio = true;
    } else {
        p.conductance = static_cast<double>(p.k_out) / total;
        p.fitness = static_cast<double>(p.k_int) / std::pow(total, alpha);
    }
    p.zero_outbound = p.k_out == 0;
    return p;
}

inline CommunityEdgeProfile community_profile(const Graph& g, const Cover& cover, std::uint32_t id,
                                              double alpha = 1.0) {
    CommunityEdgeProfile p = quality(g, cover.community(id), g.vertex_count(), alpha);
    const auto oc = classify_outbound(g, cover, id);
    p.e1 = oc.e1;
    p.e2 = oc.e2;
    p.e3 = oc.e3;
    p.zero_outbound = oc.zero_outbound;
    p.categories_valid = true;
    return p;
}

/// Frequency tables over overlap records, following the reference column
/// scheme: overlap sizes {1,2,3,4,>=5} and E2 edge counts {0,1,2,<=5,>5}
/// (the <=5 column is cumulative).
struct OverlapStats {
    std::uint64_t total_overlaps = 0;
    std::array<std::uint64_t, 5> size_count{};  // 1, 2, 3, 4, >=5
    std::array<double, 5> size_share{};
    std::array<std::uint64_t, 5> e2_count{};  // 0, 1, 2, <=5 (cumulative), >5
    std::array<double, 5> e2_share{};
};

inline OverlapStats overlap_stats(std::span<const OverlapRecord> records) {
    OverlapStats st;
    st.total_overlaps = records.size();
    if (records.empty()) return st;
    for (const auto& r : records) {
        const std::size_t s = r.shared.size();
        ++st.size_count[s >= 5 ? 4 : s - 1];
        if (r.e2_count <= 2) ++st.e2_count[r.e2_count];
        if (r.e2_count <= 5)
            ++st.e2_count[3];
        else
            ++st.e2_count[4];
    }
    for (int i = 0; i < 5; ++i) {
        st.size_share[i] = static_cast<double>(st.size_count[i]) / static_cast<double>(st.total_overlaps);
        st.e2_share[i] = static_cast<double>(st.e2_count[i]) / static_cast<double>(st.total_overlaps);
    }
    return st;
}

// ---- report tables (figure analogues, emitted as CSV by the CLI) ----

struct Histogram2D {
    std::uint32_t x_bins = 0, y_bins = 0;
    double x_max = 0.0, y_max = 0.0;
    struct Cell {
        std::uint32_t x = 0, y = 0;
        std::uint64_t count = 0;
        double value = 0.0;  // normalized per the figure's convention
    };
    std::vector<Cell> cells;  // sorted by (x, y); empty cells omitted
};

struct ColumnStats {
    std::uint32_t key = 0;  // community size
    std::uint64_t count = 0;
    double mean = 0.0;
    double stddev = 0.0;
};

struct ReportTables {
    MembershipDistributions membership;
    // belongingness histogram per membership count m; bin width 0.02
    static constexpr std::uint32_t kBelongingnessBins = 50;
    std::map<std::uint32_t, std::vector<std::uint64_t>> belongingness_by_m;
    Histogram2D neighbors_vs_size;             // x=n_C, y=d_C; per-column max -> 1
    std::vector<ColumnStats> neighbors_by_size;
    Histogram2D degrees_per_member;  // x=k_int/n_C (200 bins), y=k_out/n_C (400); count/(total*bin area)
    Histogram2D e1_vs_e2;            // 400 x 200 on [0,1]^2; count/total
    std::map<std::uint32_t, std::uint64_t> size_distribution;
    Histogram2D density_vs_size;  // x=n_C, y=delta_int bin (width 0.02); per-column max -> 1
    std::uint64_t zero_outbound_communities = 0;  // excluded from the e1/e2 table
};

namespace detail {

inline std::uint32_t clamped_bin(double value, double max_value, std::uint32_t bins) {
    if (max_value <= 0.0) return 0;
    auto b = static_cast<std::int64_t>(value / max_value * bins);
    if (b < 0) b = 0;
    if (b >= bins) b = bins - 1;
    return static_cast<std::uint32_t>(b);
}

template <typename Key>
inline void rescale_columns_to_unit(std::map<Key, std::map<std::uint32_t, std::uint64_t>>& columns,
                                    Histogram2D& out) {
    for (auto& [x, col] : columns) {
        std::uint64_t max_count = 0;
        for (auto& [y, cnt] : col) max_count = std::max(max_count, cnt);
        for (auto& [y, cnt] : col)
            out.cells.push_back({static_cast<std::uint32_t>(x), y, cnt,
                                 static_cast<double>(cnt) / static_cast<double>(max_count)});
    }
}

}  // namespace detail

/// Builds every distribution table the analyze report emits: belongingness
/// per m, p_m/P_m, d_C vs n_C with per-column rescale and column moments,
/// the per-member internal/outbound 2-D histogram, the e1 vs e2 histogram,
/// and the community size and size-vs-density tables.
inline ReportTables histograms(const Graph& g, const Cover& cover, double alpha = 1.0,
                               unsigned workers = 1) {
    ReportTables t;
    t.membership = membership_distributions(cover);
    const auto& comms = cover.communities();
    const std::size_t nc = comms.size();

    // belongingness of every (vertex, community) incidence, grouped by m_v
    {
        std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> per_comm(nc);
        parallel_for(nc, workers, [&](std::size_t i) {
            const auto& c = comms[i];
            if (c.size() < 2) return;
            for (VertexId v : c.members) {
                const double b = belongingness(g, c, v);
                const std::uint32_t bin = detail::clamped_bin(b, 1.0, ReportTables::kBelongingnessBins);
                per_comm[i].emplace_back(static_cast<std::uint32_t>(cover.membership_count(v)), bin);
            }
        });
        for (const auto& rows : per_comm)
            for (const auto& [m, bin] : rows) {
                auto& hist = t.belongingness_by_m[m];
                if (hist.empty()) hist.assign(ReportTables::kBelongingnessBins, 0);
                ++hist[bin];
            }
    }

    // per-community quantities, computed in parallel then binned in order
    std::vector<CommunityEdgeProfile> profiles(nc);
    std::vector<std::uint64_t> d_c(nc);
    parallel_for(nc, workers, [&](std::size_t i) {
        profiles[i] = community_profile(g, cover, comms[i].id, alpha);
        d_c[i] = neighbor_count(cover, comms[i].id);
    });

    // d_C vs n_C (column-rescaled) plus per-size mean and stddev
    {
        std::map<std::uint32_t, std::map<std::uint32_t, std::uint64_t>> columns;
        std::map<std::uint32_t, std::pair<std::uint64_t, std::vector<double>>> by_size;
        for (std::size_t i = 0; i < nc; ++i) {
            const auto size = static_cast<std::uint32_t>(comms[i].size());
            ++columns[size][static_cast<std::uint32_t>(d_c[i])];
            by_size[size].second.push_back(static_cast<double>(d_c[i]));
            t.neighbors_vs_size.x_max = std::max(t.neighbors_vs_size.x_max, static_cast<double>(size));
            t.neighbors_vs_size.y_max = std::max(t.neighbors_vs_size.y_max, static_cast<double>(d_c[i]));
        }
        detail::rescale_columns_to_unit(columns, t.neighbors_vs_size);
        for (auto& [size, data] : by_size) {
            ColumnStats cs;
            cs.key = size;
            cs.count = data.second.size();
            double sum = 0.0;
            for (double x : data.second) sum += x;
            cs.mean = sum / static_cast<double>(cs.count);
            double var = 0.0;
            for (double x : data.second) var += (x - cs.mean) * (x - cs.mean);
            cs.stddev = std::sqrt(var / static_cast<double>(cs.count));
            t.neighbors_by_size.push_back(cs);
        }
    }

    // average internal and outbound edges per member, 200 x 400 bins,
    // counts normalized by community total and bin area
    {
        auto& h = t.degrees_per_member;
        h.x_bins = 200;
        h.y_bins = 400;
        std::vector<std::pair<double, double>> points(nc);
        for (std::size_t i = 0; i < nc; ++i) {
            const double n_members = static_cast<double>(comms[i].size());
            points[i] = {static_cast<double>(profiles[i].k_int) / n_members,
                         static_cast<double>(profiles[i].k_out) / n_members};
            h.x_max = std::max(h.x_max, points[i].first);
            h.y_max = std::max(h.y_max, points[i].second);
        }
        std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> bins;
        for (const auto& [x, y] : points)
            ++bins[{detail::clamped_bin(x, h.x_max, h.x_bins), detail::clamped_bin(y, h.y_max, h.y_bins)}];
        const double bin_area = (h.x_max / h.x_bins) * (h.y_max / h.y_bins);
        for (const auto& [xy, cnt] : bins) {
            const double norm = bin_area > 0.0
                                    ? static_cast<double>(cnt) / (static_cast<double>(nc) * bin_area)
                                    : static_cast<double>(cnt) / static_cast<double>(nc);
            h.cells.push_back({xy.first, xy.second, cnt, norm});
        }
    }

    // e1 vs e2, 400 x 200 bins on [0,1]^2, count / communities-with-outbound
    {
        auto& h = t.e1_vs_e2;
        h.x_bins = 400;
        h.y_bins = 200;
        h.x_max = 1.0;
        h.y_max = 1.0;
        std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> bins;
        std::uint64_t with_outbound = 0;
        for (const auto& p : profiles) {
            if (p.zero_outbound) {
                ++t.zero_outbound_communities;
                continue;
            }
            ++with_outbound;
            ++bins[{detail::clamped_bin(p.e1, 1.0, h.x_bins), detail::clamped_bin(p.e2, 1.0, h.y_bins)}];
        }
        for (const auto& [xy, cnt] : bins)
            h.cells.push_back({xy.first, xy.second, cnt,
                               static_cast<double>(cnt) / static_cast<double>(with_outbound)});
    }

    // community sizes and size vs intra-community edge density
    {
        auto& h = t.density_vs_size;
        h.y_bins = 50;
        h.y_max = 1.0;
        std::map<std::uint32_t, std::map<std::uint32_t, std::uint64_t>> columns;
        for (std::size_t i = 0; i < nc; ++i) {
            const auto size = static_cast<std::uint32_t>(comms[i].size());
            ++t.size_distribution[size];
            ++columns[size][detail::clamped_bin(profiles[i].delta_int, 1.0, 50)];
            h.x_max = std::max(h.x_max, static_cast<double>(size));
        }
        detail::rescale_columns_to_unit(columns, h);
    }
    return t;
}

}  // namespace egomerge
