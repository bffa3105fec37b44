#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>

#include <json.hpp>

#include "egomerge/detect.hpp"
#include "egomerge/fcore.hpp"
#include "egomerge/graph.hpp"
#include "egomerge/metrics.hpp"
#include "egomerge/synth.hpp"
#include "egomerge/version.hpp"

namespace egomerge {

using Json = nlohmann::ordered_json;

namespace detail {

inline std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace detail

/// Writes through a temp file and renames, so failed runs leave no partial
/// report behind.
inline void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + path);
        body(out);
        out.flush();
        if (!out) {
            std::remove(tmp.c_str());
            throw std::runtime_error("write failed: " + path);
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::remove(tmp.c_str());
        throw std::runtime_error("cannot replace " + path + ": " + ec.message());
    }
}

inline void write_json_file(const std::string& path, const Json& j) {
    write_file(path, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
}

inline std::string csv_preamble() {
    return std::string("# egomerge ") + kVersion + "\n";
}

inline Json json_header() {
    return Json{{"tool", "egomerge"}, {"version", kVersion}};
}

// ---- JSON reports ----

inline Json to_json(const GraphStats& s) {
    Json j = json_header();
    j["n"] = s.n;
    j["m"] = s.m;
    j["mean_degree"] = s.mean_degree;
    j["mean_local_clustering"] = s.mean_local_clustering;
    return j;
}

inline Json to_json(const DetectStats& s) {
    Json j = json_header();
    j["partials"] = s.partials;
    j["merged_groups"] = s.merged_groups;
    j["accepted"] = s.accepted;
    j["deduplicated"] = s.deduplicated;
    j["rejected"] = {{"low_support", s.rejected_low_support},
                     {"low_density", s.rejected_low_density},
                     {"too_small", s.rejected_too_small},
                     {"low_belongingness", s.rejected_low_belongingness}};
    return j;
}

inline Json to_json(const EdgeTypeTally& t, std::uint64_t total_vertices) {
    Json j = json_header();
    const std::uint64_t m = t.total_edges();
    j["vertices"] = {{"with_membership", t.vertices_with_membership},
                     {"without_membership", t.vertices_without},
                     {"total", total_vertices}};
    Json types = Json::array();
    for (int i = 0; i < 5; ++i)
        types.push_back({{"type", i + 1},
                         {"count", t.type_counts[i]},
                         {"share", m > 0 ? static_cast<double>(t.type_counts[i]) / static_cast<double>(m) : 0.0}});
    j["edge_types"] = types;
    j["total_edges"] = m;
    return j;
}

inline Json to_json(const ScoreReport& r) {
    Json j = json_header();
    j["jaccard_threshold"] = r.jaccard_threshold;
    j["recovery_rate"] = r.recovery_rate;
    j["mean_best_jaccard"] = r.mean_best_jaccard;
    j["mean_f1"] = r.mean_f1;
    j["matched"] = r.matched;
    j["missed"] = r.missed;
    j["spurious"] = r.spurious;
    return j;
}

inline Json to_json(const PlantedSpec& spec) {
    Json j = json_header();
    j["community_count"] = spec.community_count;
    j["size_min"] = spec.size_min;
    j["size_max"] = spec.size_max;
    j["multi_membership_fraction"] = spec.multi_membership_fraction;
    j["membership_tail_ratio"] = spec.membership_tail_ratio;
    j["max_memberships"] = spec.max_memberships;
    j["overlap_size_shares"] = spec.overlap_size_shares;
    j["intra_edge_probability"] = spec.intra_edge_probability;
    j["e2_mean_per_overlap"] = spec.e2_mean_per_overlap;
    j["background_fraction"] = spec.background_fraction;
    j["background_mean_degree"] = spec.background_mean_degree;
    j["seed"] = spec.seed;
    return j;
}

inline PlantedSpec planted_spec_from_json(const Json& j) {
    PlantedSpec spec;
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::remove_reference_t<decltype(field)>>();
    };
    get("community_count", spec.community_count);
    get("size_min", spec.size_min);
    get("size_max", spec.size_max);
    get("multi_membership_fraction", spec.multi_membership_fraction);
    get("membership_tail_ratio", spec.membership_tail_ratio);
    get("max_memberships", spec.max_memberships);
    get("overlap_size_shares", spec.overlap_size_shares);
    get("intra_edge_probability", spec.intra_edge_probability);
    get("e2_mean_per_overlap", spec.e2_mean_per_overlap);
    get("background_fraction", spec.background_fraction);
    get("background_mean_degree", spec.background_mean_degree);
    get("seed", spec.seed);
    spec.validate();
    return spec;
}

inline PlantedSpec load_planted_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open spec file: " + path);
    Json j = Json::parse(in);
    return planted_spec_from_json(j);
}

// ---- CSV reports ----

inline void write_membership_csv(const std::string& path, const MembershipDistributions& md) {
    write_file(path, [&](std::ostream& out) {
        out << csv_preamble() << "m,count,p_m,P_m\n";
        for (std::size_t m = 1; m < md.count_by_m.size(); ++m) {
            if (md.count_by_m[m] == 0) continue;
            out << m << ',' << md.count_by_m[m] << ',' << detail::fmt(md.p_m[m]) << ','
                << detail::fmt(md.slot_p_m[m]) << '\n';
        }
    });
}

inline void write_belongingness_csv(const std::string& path, const ReportTables& t) {
    write_file(path, [&](std::ostream& out) {
        out << csv_preamble() << "m,bin_low,bin_high,count,share\n";
        for (const auto& [m, hist] : t.belongingness_by_m) {
            std::uint64_t total = 0;
            for (auto c : hist) total += c;
            for (std::size_t b = 0; b < hist.size(); ++b) {
                if (hist[b] == 0) continue;
                out << m << ',' << detail::fmt(0.02 * static_cast<double>(b)) << ','
                    << detail::fmt(0.02 * static_cast<double>(b + 1)) << ',' << hist[b] << ','
                    << detail::fmt(static_cast<double>(hist[b]) / static_cast<double>(total)) << '\n';
            }
        }
    });
}

inline void write_neighbors_by_size_csv(const std::string& hist_path, const std::string& stats_path,
                                        const ReportTables& t) {
    write_file(hist_path, [&](std::ostream& out) {
        out << csv_preamble() << "n_c,d_c,count,rescaled\n";
        for (const auto& cell : t.neighbors_vs_size.cells)
            out << cell.x << ',' << cell.y << ',' << cell.count << ',' << detail::fmt(cell.value) << '\n';
    });
    write_file(stats_path, [&](std::ostream& out) {
        out << csv_preamble() << "n_c,count,mean_d_c,stddev_d_c\n";
        for (const auto& cs : t.neighbors_by_size)
            out << cs.key << ',' << cs.count << ',' << detail::fmt(cs.mean) << ',' << detail::fmt(cs.stddev)
                << '\n';
    });
}

inline void write_hist2d_csv(const std::string& path, const Histogram2D& h, const char* header) {
    write_file(path, [&](std::ostream& out) {
        out << csv_preamble() << "# x_bins=" << h.x_bins << " y_bins=" << h.y_bins
            << " x_max=" << detail::fmt(h.x_max) << " y_max=" << detail::fmt(h.y_max) << '\n'
            << header << '\n';
        for (const auto& cell : h.cells)
            out << cell.x << ',' << cell.y << ',' << cell.count << ',' << detail::fmt(cell.value) << '\n';
    });
}

inline void write_size_distribution_csv(const std::string& path, const ReportTables& t) {
    std::uint64_t total = 0;
    for (const auto& [size, cnt] : t.size_distribution) total += cnt;
    write_file(path, [&](std::ostream& out) {
        out << csv_preamble() << "n_c,count,share\n";
        for (const auto& [size, cnt] : t.size_distribution)
            out << size << ',' << cnt << ','
                << detail::fmt(static_cast<double>(cnt) / static_cast<double>(total)) << '\n';
    });
}

inline void write_profiles_csv(const std::string& path, const Graph& g, const Cover& cover,
                               double alpha, unsigned workers = 1) {
    const auto& comms = cover.communities();
    std::vector<CommunityEdgeProfile> profiles(comms.size());
    std::vector<std::uint64_t> d_c(comms.size());
    parallel_for(comms.size(), workers, [&](std::size_t i) {
        profiles[i] = community_profile(g, cover, comms[i].id, alpha);
        d_c[i] = neighbor_count(cover, comms[i].id);
    });
    write_file(path, [&](std::ostream& out) {
        out << csv_preamble()
            << "id,n_c,l,d_c,k_int,k_out,e1,e2,e3,delta_int,delta_out,conductance,fitness,weak,zero_outbound\n";
        for (std::size_t i = 0; i < comms.size(); ++i) {
            const auto& c = comms[i];
            const auto& p = profiles[i];
            out << c.id << ',' << c.size() << ',' << c.merge_count << ',' << d_c[i] << ',' << p.k_int << ','
                << p.k_out << ',' << detail::fmt(p.e1) << ',' << detail::fmt(p.e2) << ',' << detail::fmt(p.e3)
                << ',' << detail::fmt(p.delta_int) << ',' << detail::fmt(p.delta_out) << ','
                << detail::fmt(p.conductance) << ',' << detail::fmt(p.fitness) << ',' << (p.weak ? 1 : 0)
                << ',' << (p.zero_outbound ? 1 : 0) << '\n';
        }
    });
}

inline void write_overlaps_csv(const std::string& path, const std::vector<OverlapRecord>& records) {
    write_file(path, [&](std::ostream& out) {
        out << csv_preamble() << "id_a,id_b,overlap_size,e2_count\n";
        for (const auto& r : records)
            out << r.a << ',' << r.b << ',' << r.shared.size() << ',' << r.e2_count << '\n';
    });
}

inline void write_overlap_stats_csv(const std::string& path, const OverlapStats& st) {
    static constexpr const char* kSizeLabels[5] = {"1", "2", "3", "4", ">=5"};
    static constexpr const char* kE2Labels[5] = {"0", "1", "2", "<=5", ">5"};
    write_file(path, [&](std::ostream& out) {
        out << csv_preamble() << "table,bin,count,share\n";
        for (int i = 0; i < 5; ++i)
            out << "overlap_size," << kSizeLabels[i] << ',' << st.size_count[i] << ','
                << detail::fmt(st.size_share[i]) << '\n';
        for (int i = 0; i < 5; ++i)
            out << "e2_edges," << kE2Labels[i] << ',' << st.e2_count[i] << ','
                << detail::fmt(st.e2_share[i]) << '\n';
    });
}

inline void write_fcore_report(const std::string& path, const Graph& g, const Cover& cover, double f,
                               unsigned workers = 1) {
    const auto& comms = cover.communities();
    struct Row {
        bool verified = false;
        std::vector<VertexId> peeled;
        std::vector<VertexId> boundary;
    };
    std::vector<Row> rows(comms.size());
    parallel_for(comms.size(), workers, [&](std::size_t i) {
        const auto& members = comms[i].members;
        if (members.size() < 2) return;
        rows[i].verified = verify_fcore(g, members, f);
        rows[i].peeled = peel_fcore(g, members, f);
        if (!rows[i].peeled.empty()) rows[i].boundary = fcore_boundary(g, rows[i].peeled, f);
    });
    write_file(path, [&](std::ostream& out) {
        out << "# egomerge " << kVersion << " f-core report, f=" << detail::fmt(f) << '\n';
        out << "# community_id verified peeled_size boundary_size : peeled_members | boundary_vertices\n";
        for (std::size_t i = 0; i < comms.size(); ++i) {
            const auto& r = rows[i];
            out << comms[i].id << ' ' << (r.verified ? 1 : 0) << ' ' << r.peeled.size() << ' '
                << r.boundary.size() << " :";
            for (VertexId v : r.peeled) out << ' ' << g.orig_id(v);
            out << " |";
            for (VertexId v : r.boundary) out << ' ' << g.orig_id(v);
            out << '\n';
        }
    });
}

}  // namespace egomerge
