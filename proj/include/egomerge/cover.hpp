#pragma once

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "egomerge/graph.hpp"
#include "egomerge/parallel.hpp"
#include "egomerge/setops.hpp"
#include "egomerge/version.hpp"

namespace egomerge {

struct Community {
    std::uint32_t id = 0;
    std::vector<VertexId> members;  // sorted, distinct
    std::uint32_t merge_count = 1;  // l: partials absorbed when detected
    double density = 0.0;           // g: intra-community edge density

    std::size_t size() const noexcept { return members.size(); }
    bool contains(VertexId v) const { return sorted_contains(std::span<const VertexId>{members}, v); }
};

/// A set of (possibly overlapping) communities plus the inverse membership
/// index: vertex -> sorted community ids. Vertices with no membership are
/// simply absent from the index. Immutable after construction.
class Cover {
public:
    Cover() = default;

    explicit Cover(std::vector<Community> communities) : comms_(std::move(communities)) {
        id_index_.reserve(comms_.size());
        VertexId max_v = 0;
        for (std::size_t i = 0; i < comms_.size(); ++i) {
            auto& c = comms_[i];
            sort_unique(c.members);
            if (c.members.empty()) throw std::invalid_argument("empty community " + std::to_string(c.id));
            if (!id_index_.emplace(c.id, static_cast<std::uint32_t>(i)).second)
                throw std::invalid_argument("duplicate community id " + std::to_string(c.id));
            max_v = std::max(max_v, c.members.back());
        }
        if (comms_.empty()) return;

        std::vector<std::pair<VertexId, std::uint32_t>> incidence;
        for (const auto& c : comms_)
            for (VertexId v : c.members) incidence.emplace_back(v, c.id);
        std::sort(incidence.begin(), incidence.end());
        moff_.assign(static_cast<std::size_t>(max_v) + 2, 0);
        mcid_.resize(incidence.size());
        for (std::size_t i = 0; i < incidence.size(); ++i) {
            ++moff_[incidence[i].first + 1];
            mcid_[i] = incidence[i].second;
        }
        for (std::size_t v = 1; v < moff_.size(); ++v) moff_[v] += moff_[v - 1];
    }

    const std::vector<Community>& communities() const noexcept { return comms_; }
    std::size_t community_count() const noexcept { return comms_.size(); }

    bool has_community(std::uint32_t id) const { return id_index_.count(id) != 0; }

    const Community& community(std::uint32_t id) const {
        auto it = id_index_.find(id);
        if (it == id_index_.end()) throw std::out_of_range("unknown community id " + std::to_string(id));
        return comms_[it->second];
    }

    /// Sorted ids of the communities vertex v belongs to; m_v is the length.
    std::span<const std::uint32_t> memberships(VertexId v) const {
        if (static_cast<std::size_t>(v) + 1 >= moff_.size()) return {};
        return {mcid_.data() + moff_[v], mcid_.data() + moff_[v + 1]};
    }

    std::size_t membership_count(VertexId v) const { return memberships(v).size(); }

    std::uint64_t total_slots() const noexcept { return mcid_.size(); }

    std::uint64_t covered_vertex_count() const {
        std::uint64_t n = 0;
        for (std::size_t v = 0; v + 1 < moff_.size(); ++v)
            if (moff_[v + 1] > moff_[v]) ++n;
        return n;
    }

    VertexId max_vertex() const {
        return moff_.size() >= 2 ? static_cast<VertexId>(moff_.size() - 2) : 0;
    }

private:
    std::vector<Community> comms_;
    std::unordered_map<std::uint32_t, std::uint32_t> id_index_;
    std::vector<std::uint64_t> moff_;
    std::vector<std::uint32_t> mcid_;
};

struct OverlapRecord {
    std::uint32_t a = 0;  // a < b
    std::uint32_t b = 0;
    std::vector<VertexId> shared;  // sorted
    std::uint64_t e2_count = 0;    // edges between a-only and b-only members
};

/// Distinct neighbor community ids of a community (shares >= 1 vertex).
inline std::vector<std::uint32_t> neighbor_ids(const Cover& cover, std::uint32_t id) {
    const Community& c = cover.community(id);
    std::vector<std::uint32_t> out;
    for (VertexId v : c.members) {
        auto ms = cover.memberships(v);
        out.insert(out.end(), ms.begin(), ms.end());
    }
    sort_unique(out);
    std::erase(out, id);
    return out;
}

inline std::size_t neighbor_count(const Cover& cover, std::uint32_t id) {
    return neighbor_ids(cover, id).size();
}

/// One record per unordered pair of communities sharing at least one vertex,
/// enumerated through the membership index (never all-pairs), sorted by
/// (a, b). e2_count follows the E2 definition: edges {u,w} with u in A\B and
/// w in B\A.
inline std::vector<OverlapRecord> overlaps(const Cover& cover, const Graph& g, unsigned workers = 1) {
    struct Hit {
        std::uint32_t a, b;
        VertexId v;
        bool operator<(const Hit& o) const {
            return a != o.a ? a < o.a : (b != o.b ? b < o.b : v < o.v);
        }
    };
    std::vector<Hit> hits;
    for (VertexId v = 0; v <= cover.max_vertex(); ++v) {
        auto ms = cover.memberships(v);
        for (std::size_t i = 0; i < ms.size(); ++i)
            for (std::size_t j = i + 1; j < ms.size(); ++j) hits.push_back({ms[i], ms[j], v});
    }
    std::sort(hits.begin(), hits.end());

    std::vector<OverlapRecord> records;
    for (std::size_t i = 0; i < hits.size();) {
        OverlapRecord rec;
        rec.a = hits[i].a;
        rec.b = hits[i].b;
        std::size_t j = i;
        while (j < hits.size() && hits[j].a == rec.a && hits[j].b == rec.b) rec.shared.push_back(hits[j++].v);
        records.push_back(std::move(rec));
        i = j;
    }

    parallel_for(records.size(), workers, [&](std::size_t i) {
        OverlapRecord& rec = records[i];
        const auto& ma = cover.community(rec.a).members;
        const auto& mb = cover.community(rec.b).members;
        const auto a_only = difference<VertexId>(ma, mb);
        const auto b_only = difference<VertexId>(mb, ma);
        std::uint64_t e2 = 0;
        if (a_only.size() <= b_only.size()) {
            for (VertexId u : a_only) e2 += intersection_count(g.neighbors(u), std::span<const VertexId>{b_only});
        } else {
            for (VertexId u : b_only) e2 += intersection_count(g.neighbors(u), std::span<const VertexId>{a_only});
        }
        rec.e2_count = e2;
    });
    return records;
}

// Cover file: one community per line, "id l g n_C: v1 v2 ..." with sorted
// external vertex ids. '#' lines are comments.

inline void write_cover(const Cover& cover, const Graph& g, std::ostream& out) {
    out << "# egomerge cover " << kVersion << '\n';
    char buf[64];
    for (const auto& c : cover.communities()) {
        std::snprintf(buf, sizeof(buf), "%.17g", c.density);
        out << c.id << ' ' << c.merge_count << ' ' << buf << ' ' << c.members.size() << ':';
        for (VertexId v : c.members) out << ' ' << g.orig_id(v);
        out << '\n';
    }
}

inline void write_cover_file(const Cover& cover, const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write cover file: " + path);
    write_cover(cover, g, out);
    if (!out.flush()) throw std::runtime_error("write failed: " + path);
}

inline Cover read_cover(std::istream& in, const Graph& g) {
    std::vector<Community> comms;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv{line};
        if (sv.empty() || sv.front() == '#') continue;
        auto colon = sv.find(':');
        if (colon == std::string_view::npos) throw ParseError("missing ':' in community line", lineno);
        auto head = detail::split_ws(sv.substr(0, colon));
        if (head.size() != 4) throw ParseError("malformed community header", lineno);
        Community c;
        std::uint64_t id, l, n_c;
        if (!detail::parse_u64(head[0], id) || !detail::parse_u64(head[1], l) || !detail::parse_u64(head[3], n_c))
            throw ParseError("malformed community header", lineno);
        const std::string gtok(head[2]);
        char* endp = nullptr;
        c.density = std::strtod(gtok.c_str(), &endp);
        if (endp == gtok.c_str() || *endp != '\0') throw ParseError("malformed density value", lineno);
        c.id = static_cast<std::uint32_t>(id);
        c.merge_count = static_cast<std::uint32_t>(l);
        auto tail = detail::split_ws(sv.substr(colon + 1));
        if (tail.size() != n_c) throw ParseError("member count mismatch", lineno);
        c.members.reserve(tail.size());
        for (auto tok : tail) {
            std::uint64_t v;
            if (!detail::parse_u64(tok, v)) throw ParseError("malformed member id", lineno);
            if (!g.has_orig(v)) throw ParseError("member id not in graph: " + std::to_string(v), lineno);
            c.members.push_back(g.dense_id(v));
        }
        comms.push_back(std::move(c));
    }
    return Cover(std::move(comms));
}

inline Cover read_cover_file(const std::string& path, const Graph& g) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open cover file: " + path);
    return read_cover(in, g);
}

}  // namespace egomerge
