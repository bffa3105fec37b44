// egomerge: overlapping community detection and analysis for large
// undirected social graphs. Subcommands cover the full pipeline: ingest,
// detect, analyze, edges, fcore, synth, score.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "egomerge/cover.hpp"
#include "egomerge/detect.hpp"
#include "egomerge/fcore.hpp"
#include "egomerge/graph.hpp"
#include "egomerge/metrics.hpp"
#include "egomerge/reports.hpp"
#include "egomerge/synth.hpp"
#include "egomerge/version.hpp"

namespace fs = std::filesystem;
using namespace egomerge;

namespace {

struct CommonOpts {
    std::string input;
    std::string output_dir = ".";
    bool mutual_only = false;
    unsigned workers = 0;  // 0 = all hardware threads
};

std::string out_path(const CommonOpts& o, const char* name) {
    return (fs::path(o.output_dir) / name).string();
}

void ensure_output_dir(const CommonOpts& o) {
    fs::create_directories(o.output_dir);
}

Graph load_input(const CommonOpts& o) {
    return load_graph_auto(o.input, o.mutual_only);
}

// key=value lines, '#' comments; unknown keys are an error
void apply_config_file(const std::string& path, DetectParams& params) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv{line};
        while (!sv.empty() && (sv.front() == ' ' || sv.front() == '\t')) sv.remove_prefix(1);
        if (sv.empty() || sv.front() == '#') continue;
        const auto eq = sv.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected key=value", lineno);
        const std::string key{sv.substr(0, eq)};
        const std::string value{sv.substr(eq + 1)};
        try {
            if (key == "s_min") params.min_partial_size = std::stoul(value);
            else if (key == "k_min") params.min_overlap_to_merge = std::stoul(value);
            else if (key == "s_sim") params.min_similarity = std::stod(value);
            else if (key == "b_min") params.belongingness_floor = std::stod(value);
            else if (key == "n_min") params.min_community_size = std::stoul(value);
            else if (key == "l_strict") params.strict_support = std::stoul(value);
            else if (key == "l_soft_low") params.soft_support_low = std::stoul(value);
            else if (key == "g_coeff") params.density_coefficient = std::stod(value);
            else throw std::runtime_error("unknown config key: " + key);
        } catch (const std::invalid_argument&) {
            throw ParseError("bad value for " + key, lineno);
        }
    }
}

void write_analysis_reports(const CommonOpts& opts, const Graph& g, const Cover& cover, double alpha) {
    const unsigned workers = resolve_workers(opts.workers);
    const auto tables = histograms(g, cover, alpha, workers);
    write_membership_csv(out_path(opts, "membership_dist.csv"), tables.membership);
    write_belongingness_csv(out_path(opts, "belongingness_hist.csv"), tables);
    write_neighbors_by_size_csv(out_path(opts, "neighbors_vs_size.csv"),
                                out_path(opts, "neighbors_by_size.csv"), tables);
    write_hist2d_csv(out_path(opts, "degrees_per_member.csv"), tables.degrees_per_member,
                     "k_int_bin,k_out_bin,count,normalized");
    write_hist2d_csv(out_path(opts, "e1_vs_e2.csv"), tables.e1_vs_e2, "e1_bin,e2_bin,count,share");
    write_size_distribution_csv(out_path(opts, "size_dist.csv"), tables);
    write_hist2d_csv(out_path(opts, "density_vs_size.csv"), tables.density_vs_size,
                     "n_c,density_bin,count,rescaled");
    write_profiles_csv(out_path(opts, "community_profiles.csv"), g, cover, alpha, workers);

    const auto records = overlaps(cover, g, workers);
    write_overlaps_csv(out_path(opts, "overlaps.csv"), records);
    write_overlap_stats_csv(out_path(opts, "overlap_stats.csv"), overlap_stats(records));

    const auto tally = classify_network_edges(g, cover, workers);
    write_json_file(out_path(opts, "edge_types.json"), to_json(tally, g.vertex_count()));

    Json summary = json_header();
    summary["n"] = g.vertex_count();
    summary["m"] = g.edge_count();
    summary["communities"] = cover.community_count();
    summary["covered_vertices"] = cover.covered_vertex_count();
    summary["total_memberships"] = cover.total_slots();
    summary["mean_m"] = tables.membership.mean_m;
    summary["mean_m_community"] = tables.membership.mean_m_community;
    summary["p1"] = tables.membership.p(1);
    summary["slot_p1"] = tables.membership.slot_p(1);
    summary["overlaps"] = records.size();
    summary["zero_outbound_communities"] = tables.zero_outbound_communities;
    write_json_file(out_path(opts, "summary.json"), summary);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"overlapping community toolkit"};
    app.set_version_flag("--version", std::string("egomerge ") + kVersion);
    app.require_subcommand(1);

    CommonOpts opts;
    DetectParams params;
    FCoreParams fparams;
    double alpha = 1.0;
    double jaccard = 0.8;
    std::uint64_t seed = 42;
    bool seed_given = false;
    std::string cover_path, truth_path, detected_path, spec_path, config_path;

    auto add_common = [&](CLI::App* cmd, bool needs_input) {
        auto* in = cmd->add_option("--input", opts.input, "input graph (edge list or binary cache)");
        if (needs_input) in->required();
        cmd->add_option("--output-dir", opts.output_dir, "directory for artifacts");
        cmd->add_option("--workers", opts.workers, "worker threads (0 = all cores)");
    };
    auto add_detect_params = [&](CLI::App* cmd) {
        cmd->add_option("--l-strict", params.strict_support, "support count accepted outright");
        cmd->add_option("--l-soft-low", params.soft_support_low, "lowest support considered");
        cmd->add_option("--g-coeff", params.density_coefficient, "density rule coefficient");
        cmd->add_option("--s-min", params.min_partial_size, "minimum partial community size");
        cmd->add_option("--k-min", params.min_overlap_to_merge, "minimum overlap to merge");
        cmd->add_option("--s-sim", params.min_similarity, "minimum similarity to merge");
        cmd->add_option("--b-min", params.belongingness_floor, "belongingness floor in cleanup");
        cmd->add_option("--n-min", params.min_community_size, "minimum community size");
        cmd->add_option("--config", config_path, "key=value parameter file");
    };

    auto* ingest = app.add_subcommand("ingest", "parse an edge list into a binary cache with stats");
    add_common(ingest, true);
    ingest->add_flag("--mutual-only", opts.mutual_only, "keep only reciprocated directed edges");

    auto* detect_cmd = app.add_subcommand("detect", "detect overlapping communities");
    add_common(detect_cmd, true);
    detect_cmd->add_flag("--mutual-only", opts.mutual_only, "keep only reciprocated directed edges");
    add_detect_params(detect_cmd);

    auto* analyze = app.add_subcommand("analyze", "compute all metrics for a cover");
    add_common(analyze, true);
    analyze->add_option("--cover", cover_path, "cover file")->required();
    analyze->add_option("--alpha", alpha, "fitness exponent");

    auto* edges_cmd = app.add_subcommand("edges", "edge-type tally and overlap report");
    add_common(edges_cmd, true);
    edges_cmd->add_option("--cover", cover_path, "cover file")->required();

    auto* fcore_cmd = app.add_subcommand("fcore", "verify and peel f-cores of a cover");
    add_common(fcore_cmd, true);
    fcore_cmd->add_option("--cover", cover_path, "cover file")->required();
    fcore_cmd->add_option("--f", fparams.f, "belongingness fraction f (default 0.5, no canonical value)");

    auto* synth = app.add_subcommand("synth", "generate a planted-overlap benchmark");
    add_common(synth, false);
    synth->add_option("--spec", spec_path, "planted spec JSON (defaults used otherwise)");
    synth->add_option("--seed", seed, "rng seed (overrides the spec file)")
        ->each([&](const std::string&) { seed_given = true; });

    auto* score_cmd = app.add_subcommand("score", "score a detected cover against ground truth");
    add_common(score_cmd, true);
    score_cmd->add_option("--detected", detected_path, "detected cover file")->required();
    score_cmd->add_option("--truth", truth_path, "ground-truth cover file")->required();
    score_cmd->add_option("--jaccard", jaccard, "match threshold");

    CLI11_PARSE(app, argc, argv);

    try {
        const unsigned workers = resolve_workers(opts.workers);
        if (app.got_subcommand(ingest)) {
            ensure_output_dir(opts);
            const Graph g = load_input(opts);
            write_file(out_path(opts, "graph.bin"),
                       [&](std::ostream& os) { write_graph_binary(g, os); });
            write_json_file(out_path(opts, "stats.json"), to_json(stats(g, workers)));
        } else if (app.got_subcommand(detect_cmd)) {
            if (!config_path.empty()) apply_config_file(config_path, params);
            params.validate();
            ensure_output_dir(opts);
            const Graph g = load_input(opts);
            const DetectResult result = detect(g, params, workers);
            write_file(out_path(opts, "cover.txt"),
                       [&](std::ostream& os) { write_cover(result.cover, g, os); });
            write_json_file(out_path(opts, "rejections.json"), to_json(result.stats));
        } else if (app.got_subcommand(analyze)) {
            ensure_output_dir(opts);
            const Graph g = load_input(opts);
            const Cover cover = read_cover_file(cover_path, g);
            write_analysis_reports(opts, g, cover, alpha);
        } else if (app.got_subcommand(edges_cmd)) {
            ensure_output_dir(opts);
            const Graph g = load_input(opts);
            const Cover cover = read_cover_file(cover_path, g);
            const auto tally = classify_network_edges(g, cover, workers);
            write_json_file(out_path(opts, "edge_types.json"), to_json(tally, g.vertex_count()));
            write_overlaps_csv(out_path(opts, "overlaps.csv"), overlaps(cover, g, workers));
        } else if (app.got_subcommand(fcore_cmd)) {
            fparams.validate();
            ensure_output_dir(opts);
            const Graph g = load_input(opts);
            const Cover cover = read_cover_file(cover_path, g);
            write_fcore_report(out_path(opts, "fcore_report.txt"), g, cover, fparams.f, workers);
        } else if (app.got_subcommand(synth)) {
            PlantedSpec spec;
            if (!spec_path.empty()) spec = load_planted_spec(spec_path);
            if (seed_given || spec_path.empty()) spec.seed = seed;
            spec.validate();
            ensure_output_dir(opts);
            const GroundTruth truth = generate(spec);
            write_file(out_path(opts, "graph.txt"),
                       [&](std::ostream& os) { write_edge_list(truth.graph, os); });
            write_file(out_path(opts, "truth_cover.txt"),
                       [&](std::ostream& os) { write_cover(truth.cover, truth.graph, os); });
            write_json_file(out_path(opts, "spec.json"), to_json(spec));
        } else if (app.got_subcommand(score_cmd)) {
            ensure_output_dir(opts);
            const Graph g = load_input(opts);
            const Cover detected = read_cover_file(detected_path, g);
            const Cover truth = read_cover_file(truth_path, g);
            write_json_file(out_path(opts, "score.json"), to_json(score(detected, truth, jaccard)));
        }
    } catch (const std::exception& e) {
        std::cerr << "egomerge: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
