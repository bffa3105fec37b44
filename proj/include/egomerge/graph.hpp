#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "egomerge/parallel.hpp"
#include "egomerge/setops.hpp"

namespace egomerge {

using VertexId = std::uint32_t;
using OrigId = std::uint64_t;

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Immutable simple undirected graph in CSR form. Vertex ids are dense
/// (0..n-1, assigned by ascending external id at load time); edge counters
/// are 64-bit throughout. Safe for concurrent reads once built.
class Graph {
public:
    Graph() = default;

    // edges must use dense ids < n; self-loops and duplicates are removed here.
    // orig maps dense id -> external id and defaults to the identity.
    static Graph build(std::size_t n, std::vector<std::pair<VertexId, VertexId>> edges,
                       std::vector<OrigId> orig = {}) {
        Graph g;
        if (orig.empty()) {
            orig.resize(n);
            for (std::size_t v = 0; v < n; ++v) orig[v] = static_cast<OrigId>(v);
        }
        if (orig.size() != n) throw std::invalid_argument("orig id table size mismatch");
        for (auto& e : edges) {
            if (e.first >= n || e.second >= n) throw std::invalid_argument("edge endpoint out of range");
            if (e.first > e.second) std::swap(e.first, e.second);
        }
        std::erase_if(edges, [](const auto& e) { return e.first == e.second; });
        sort_unique(edges);

        g.orig_ = std::move(orig);
        g.m_ = edges.size();
        g.offsets_.assign(n + 1, 0);
        for (const auto& [u, v] : edges) {
            ++g.offsets_[u + 1];
            ++g.offsets_[v + 1];
        }
        for (std::size_t v = 0; v < n; ++v) g.offsets_[v + 1] += g.offsets_[v];
        g.nbrs_.resize(2 * edges.size());
        std::vector<std::uint64_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
        for (const auto& [u, v] : edges) {
            g.nbrs_[cursor[u]++] = v;
            g.nbrs_[cursor[v]++] = u;
        }
        // edges were sorted by (u, v); the second endpoints still need ordering
        for (std::size_t v = 0; v < n; ++v)
            std::sort(g.nbrs_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]),
                      g.nbrs_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]));
        return g;
    }

    std::size_t vertex_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::uint64_t edge_count() const noexcept { return m_; }

    std::size_t degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }

    std::span<const VertexId> neighbors(VertexId v) const {
        return {nbrs_.data() + offsets_[v], nbrs_.data() + offsets_[v + 1]};
    }

    bool has_edge(VertexId u, VertexId v) const { return sorted_contains(neighbors(u), v); }

    OrigId orig_id(VertexId v) const { return orig_[v]; }
    const std::vector<OrigId>& orig_ids() const noexcept { return orig_; }

    bool has_orig(OrigId id) const {
        return std::binary_search(orig_.begin(), orig_.end(), id);
    }

    // dense id for an external id; orig_ is ascending so this is a binary search
    VertexId dense_id(OrigId id) const {
        auto it = std::lower_bound(orig_.begin(), orig_.end(), id);
        if (it == orig_.end() || *it != id) throw std::out_of_range("unknown vertex id " + std::to_string(id));
        return static_cast<VertexId>(it - orig_.begin());
    }

    bool operator==(const Graph&) const = default;

private:
    std::vector<std::uint64_t> offsets_;
    std::vector<VertexId> nbrs_;
    std::vector<OrigId> orig_;
    std::uint64_t m_ = 0;
};

namespace detail {

inline bool parse_u64(std::string_view token, std::uint64_t& out) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) tokens.push_back(line.substr(i, j - i));
        i = j;
    }
    return tokens;
}

}  // namespace detail

/// Loads a whitespace-separated edge list ("u v" per line, '#' comments);
/// byte-compatible with SNAP dataset files. Duplicate edges, reversed
/// duplicates and self-loops are dropped. With mutual_only the input is
/// treated as directed and only reciprocated pairs become edges. Every id
/// that appears in the input gets a vertex, so degree-0 vertices survive.
/// Lines of the form "#v <id>" declare isolated vertices; other tools see
/// them as plain comments, which keeps round-trips lossless.
inline Graph load_edge_list(std::istream& in, bool mutual_only = false) {
    std::vector<std::pair<OrigId, OrigId>> raw;
    std::vector<OrigId> ids;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv{line};
        if (!sv.empty() && sv.front() == '#') {
            auto tokens = detail::split_ws(sv.substr(1));
            if (tokens.size() == 2 && tokens[0] == "v") {
                std::uint64_t id;
                if (!detail::parse_u64(tokens[1], id)) throw ParseError("malformed vertex declaration", lineno);
                ids.push_back(id);
            }
            continue;
        }
        auto tokens = detail::split_ws(sv);
        if (tokens.empty()) continue;
        std::uint64_t a, b;
        if (tokens.size() != 2 || !detail::parse_u64(tokens[0], a) || !detail::parse_u64(tokens[1], b))
            throw ParseError("malformed edge line", lineno);
        raw.emplace_back(a, b);
        ids.push_back(a);
        ids.push_back(b);
    }
    sort_unique(ids);

    auto dense = [&ids](OrigId id) {
        return static_cast<VertexId>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
    };

    std::vector<std::pair<VertexId, VertexId>> edges;
    if (mutual_only) {
        std::vector<std::pair<VertexId, VertexId>> directed;
        directed.reserve(raw.size());
        for (const auto& [a, b] : raw) {
            if (a == b) continue;
            directed.emplace_back(dense(a), dense(b));
        }
        sort_unique(directed);
        for (const auto& [u, v] : directed) {
            if (u < v && std::binary_search(directed.begin(), directed.end(), std::make_pair(v, u)))
                edges.emplace_back(u, v);
        }
    } else {
        edges.reserve(raw.size());
        for (const auto& [a, b] : raw) {
            if (a == b) continue;
            edges.emplace_back(dense(a), dense(b));
        }
    }
    const std::size_t n = ids.size();
    return Graph::build(n, std::move(edges), std::move(ids));
}

inline Graph load_edge_list_file(const std::string& path, bool mutual_only = false) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open edge list: " + path);
    return load_edge_list(in, mutual_only);
}

inline void write_edge_list(const Graph& g, std::ostream& out) {
    const std::size_t n = g.vertex_count();
    for (VertexId v = 0; v < n; ++v)
        if (g.degree(v) == 0) out << "#v " << g.orig_id(v) << '\n';
    for (VertexId v = 0; v < n; ++v)
        for (VertexId w : g.neighbors(v))
            if (w > v) out << g.orig_id(v) << ' ' << g.orig_id(w) << '\n';
}

// Binary cache for fast re-analysis of big graphs; the edge list stays the
// interchange format.
inline constexpr char kGraphMagic[8] = {'E', 'G', 'O', 'M', 'R', 'G', '0', '1'};

inline void write_graph_binary(const Graph& g, std::ostream& out) {
    const std::uint64_t n = g.vertex_count();
    const std::uint64_t m = g.edge_count();
    out.write(kGraphMagic, sizeof(kGraphMagic));
    out.write(reinterpret_cast<const char*>(&n), sizeof(n));
    out.write(reinterpret_cast<const char*>(&m), sizeof(m));
    for (VertexId v = 0; v < n; ++v) {
        const OrigId id = g.orig_id(v);
        out.write(reinterpret_cast<const char*>(&id), sizeof(id));
    }
    for (VertexId v = 0; v < n; ++v) {
        const std::uint64_t deg = g.degree(v);
        out.write(reinterpret_cast<const char*>(&deg), sizeof(deg));
        out.write(reinterpret_cast<const char*>(g.neighbors(v).data()),
                  static_cast<std::streamsize>(deg * sizeof(VertexId)));
    }
}

inline void save_graph_binary(const Graph& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write graph cache: " + path);
    write_graph_binary(g, out);
    if (!out.flush()) throw std::runtime_error("write failed: " + path);
}

inline Graph load_graph_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open graph cache: " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || !std::equal(magic, magic + 8, kGraphMagic))
        throw std::runtime_error("not an egomerge graph cache: " + path);
    std::uint64_t n = 0, m = 0;
    in.read(reinterpret_cast<char*>(&n), sizeof(n));
    in.read(reinterpret_cast<char*>(&m), sizeof(m));
    std::vector<OrigId> orig(n);
    in.read(reinterpret_cast<char*>(orig.data()), static_cast<std::streamsize>(n * sizeof(OrigId)));
    std::vector<std::pair<VertexId, VertexId>> edges;
    edges.reserve(m);
    std::vector<VertexId> adj;
    for (VertexId v = 0; v < n; ++v) {
        std::uint64_t deg = 0;
        in.read(reinterpret_cast<char*>(&deg), sizeof(deg));
        adj.resize(deg);
        in.read(reinterpret_cast<char*>(adj.data()), static_cast<std::streamsize>(deg * sizeof(VertexId)));
        for (VertexId w : adj)
            if (w > v) edges.emplace_back(v, w);
    }
    if (!in) throw std::runtime_error("truncated graph cache: " + path);
    Graph g = Graph::build(n, std::move(edges), std::move(orig));
    if (g.edge_count() != m) throw std::runtime_error("corrupt graph cache: " + path);
    return g;
}

inline bool is_graph_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    char magic[8];
    in.read(magic, sizeof(magic));
    return in && std::equal(magic, magic + 8, kGraphMagic);
}

inline Graph load_graph_auto(const std::string& path, bool mutual_only = false) {
    if (is_graph_binary(path)) {
        if (mutual_only) throw std::invalid_argument("mutual-only applies to edge-list input only");
        return load_graph_binary(path);
    }
    return load_edge_list_file(path, mutual_only);
}

struct GraphStats {
    std::size_t n = 0;
    std::uint64_t m = 0;
    double mean_degree = 0.0;            // 2m/n
    double mean_local_clustering = 0.0;  // C_WS; degree < 2 contributes 0
};

inline double local_clustering(const Graph& g, VertexId v) {
    const std::size_t d = g.degree(v);
    if (d < 2) return 0.0;
    const auto nv = g.neighbors(v);
    std::uint64_t closed = 0;  // ordered pairs of adjacent neighbors; equals 2*tri(v)
    for (VertexId u : nv) closed += intersection_count(nv, g.neighbors(u));
    return static_cast<double>(closed) / (static_cast<double>(d) * static_cast<double>(d - 1));
}

inline GraphStats stats(const Graph& g, unsigned workers = 1) {
    GraphStats s;
    s.n = g.vertex_count();
    s.m = g.edge_count();
    s.mean_degree = s.n > 0 ? 2.0 * static_cast<double>(s.m) / static_cast<double>(s.n) : 0.0;
    if (s.n == 0) return s;
    std::vector<double> lc(s.n);
    parallel_for(s.n, workers, [&](std::size_t v) { lc[v] = local_clustering(g, static_cast<VertexId>(v)); });
    double sum = 0.0;
    for (double c : lc) sum += c;
    s.mean_local_clustering = sum / static_cast<double>(s.n);
    return s;
}

/// Induced subgraph on the neighbors of a focal vertex (the ego itself is
/// excluded). Local ids are positions in the sorted neighbor list.
struct EgoGraph {
    std::vector<VertexId> global;  // local id -> global id, ascending
    std::vector<std::uint32_t> offsets;
    std::vector<std::uint32_t> nbrs;

    std::size_t vertex_count() const noexcept { return global.size(); }
    std::uint64_t edge_count() const noexcept { return nbrs.size() / 2; }
    std::span<const std::uint32_t> neighbors(std::uint32_t local) const {
        return {nbrs.data() + offsets[local], nbrs.data() + offsets[local + 1]};
    }
};

inline EgoGraph ego_subgraph(const Graph& g, VertexId v) {
    if (v >= g.vertex_count()) throw std::out_of_range("ego vertex out of range");
    EgoGraph ego;
    const auto nv = g.neighbors(v);
    ego.global.assign(nv.begin(), nv.end());
    ego.offsets.assign(nv.size() + 1, 0);
    for (std::size_t i = 0; i < nv.size(); ++i)
        ego.offsets[i + 1] = ego.offsets[i] + static_cast<std::uint32_t>(intersection_count(g.neighbors(nv[i]), nv));
    ego.nbrs.resize(ego.offsets.back());
    for (std::size_t i = 0; i < nv.size(); ++i) {
        const auto nu = g.neighbors(nv[i]);
        std::uint32_t* out = ego.nbrs.data() + ego.offsets[i];
        std::size_t a = 0, b = 0;
        while (a < nu.size() && b < nv.size()) {
            if (nu[a] < nv[b]) {
                ++a;
            } else if (nv[b] < nu[a]) {
                ++b;
            } else {
                *out++ = static_cast<std::uint32_t>(b);
                ++a;
                ++b;
            }
        }
    }
    return ego;
}

}  // namespace egomerge
