#include "dforest/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <zlib.h>

namespace dforest {

std::vector<VertexId> DirectedGraph::neighbors(VertexId v, NeighborMode mode) const {
    check_vertex(v);
    switch (mode) {
        case NeighborMode::out:
            return out_adj_[v];
        case NeighborMode::in:
            return in_adj_[v];
        case NeighborMode::undirected: {
            std::vector<VertexId> both;
            both.reserve(out_adj_[v].size() + in_adj_[v].size());
            both.insert(both.end(), out_adj_[v].begin(), out_adj_[v].end());
            both.insert(both.end(), in_adj_[v].begin(), in_adj_[v].end());
            return both;
        }
    }
    throw Error("invalid neighbor mode");
}

bool DirectedGraph::has_edge(VertexId u, VertexId v) const {
    check_vertex(u);
    check_vertex(v);
    const auto& adj = out_adj_[u];
    return std::binary_search(adj.begin(), adj.end(), v);
}

std::optional<VertexId> DirectedGraph::find_label(std::string_view label) const {
    auto it = label_index_.find(std::string(label));
    if (it == label_index_.end()) return std::nullopt;
    return it->second;
}

VertexId DirectedGraph::require_label(std::string_view label) const {
    auto id = find_label(label);
    if (!id) throw UnknownVertexError(std::string(label));
    return *id;
}

DirectedGraph DirectedGraph::induced_subgraph(std::span<const VertexId> s) const {
    std::vector<VertexId> members(s.begin(), s.end());
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());

    std::vector<std::int64_t> remap(vertex_count(), -1);
    DirectedGraph sub;
    sub.out_adj_.resize(members.size());
    sub.in_adj_.resize(members.size());
    sub.labels_.reserve(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
        check_vertex(members[i]);
        remap[members[i]] = static_cast<std::int64_t>(i);
        sub.labels_.push_back(labels_[members[i]]);
        sub.label_index_.emplace(labels_[members[i]], static_cast<VertexId>(i));
    }
    for (VertexId old : members) {
        VertexId u = static_cast<VertexId>(remap[old]);
        for (VertexId w : out_adj_[old]) {
            if (remap[w] >= 0) {
                sub.out_adj_[u].push_back(static_cast<VertexId>(remap[w]));
                ++sub.m_;
            }
        }
        for (VertexId w : in_adj_[old]) {
            if (remap[w] >= 0) sub.in_adj_[u].push_back(static_cast<VertexId>(remap[w]));
        }
        std::sort(sub.out_adj_[u].begin(), sub.out_adj_[u].end());
        std::sort(sub.in_adj_[u].begin(), sub.in_adj_[u].end());
    }
    return sub;
}

void DirectedGraph::write_edge_list(std::ostream& out) const {
    for (VertexId u = 0; u < out_adj_.size(); ++u)
        for (VertexId v : out_adj_[u]) out << labels_[u] << ' ' << labels_[v] << '\n';
}

VertexId DirectedGraph::add_vertex(std::string label) {
    if (label_index_.count(label)) throw Error("vertex label already present: " + label);
    VertexId id = static_cast<VertexId>(out_adj_.size());
    out_adj_.emplace_back();
    in_adj_.emplace_back();
    label_index_.emplace(label, id);
    labels_.push_back(std::move(label));
    return id;
}

namespace {

bool sorted_insert(std::vector<VertexId>& adj, VertexId v) {
    auto it = std::lower_bound(adj.begin(), adj.end(), v);
    if (it != adj.end() && *it == v) return false;
    adj.insert(it, v);
    return true;
}

bool sorted_erase(std::vector<VertexId>& adj, VertexId v) {
    auto it = std::lower_bound(adj.begin(), adj.end(), v);
    if (it == adj.end() || *it != v) return false;
    adj.erase(it);
    return true;
}

}  // namespace

bool DirectedGraph::add_edge(VertexId u, VertexId v) {
    check_vertex(u);
    check_vertex(v);
    if (u == v) return false;
    if (!sorted_insert(out_adj_[u], v)) return false;
    sorted_insert(in_adj_[v], u);
    ++m_;
    return true;
}

bool DirectedGraph::remove_edge(VertexId u, VertexId v) {
    check_vertex(u);
    check_vertex(v);
    if (!sorted_erase(out_adj_[u], v)) return false;
    sorted_erase(in_adj_[v], u);
    --m_;
    return true;
}

void DirectedGraph::remove_vertex(VertexId v) {
    check_vertex(v);
    for (VertexId w : out_adj_[v]) {
        sorted_erase(in_adj_[w], v);
        --m_;
    }
    for (VertexId w : in_adj_[v]) {
        sorted_erase(out_adj_[w], v);
        --m_;
    }
    out_adj_.erase(out_adj_.begin() + v);
    in_adj_.erase(in_adj_.begin() + v);
    label_index_.erase(labels_[v]);
    labels_.erase(labels_.begin() + v);
    // Compact: every id above v shifts down by one.
    auto shift = [v](std::vector<VertexId>& adj) {
        for (auto& w : adj)
            if (w > v) --w;
    };
    for (auto& adj : out_adj_) shift(adj);
    for (auto& adj : in_adj_) shift(adj);
    for (auto& [label, id] : label_index_)
        if (id > v) --id;
}

DirectedGraph load_edge_list(std::istream& in, LoadStats* stats) {
    DirectedGraph g;
    LoadStats local;
    std::vector<std::pair<VertexId, VertexId>> edges;

    auto intern = [&g](std::string&& token) {
        auto it = g.label_index_.find(token);
        if (it != g.label_index_.end()) return it->second;
        VertexId id = static_cast<VertexId>(g.labels_.size());
        g.label_index_.emplace(token, id);
        g.labels_.push_back(std::move(token));
        return id;
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        std::istringstream tokens(line);
        std::string a, b, extra;
        if (!(tokens >> a >> b) || (tokens >> extra))
            throw ParseError(line_no, "expected exactly two vertex tokens");
        VertexId u = intern(std::move(a));
        VertexId v = intern(std::move(b));
        if (u == v) {
            ++local.self_loops;
            continue;
        }
        edges.emplace_back(u, v);
    }

    g.out_adj_.resize(g.labels_.size());
    g.in_adj_.resize(g.labels_.size());
    std::sort(edges.begin(), edges.end());
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (i > 0 && edges[i] == edges[i - 1]) {
            ++local.duplicate_edges;
            continue;
        }
        auto [u, v] = edges[i];
        g.out_adj_[u].push_back(v);
        g.in_adj_[v].push_back(u);
        ++g.m_;
    }
    for (auto& adj : g.in_adj_) std::sort(adj.begin(), adj.end());

    if (stats) *stats = local;
    return g;
}

namespace {

std::string read_gzip_file(const std::string& path) {
    gzFile file = gzopen(path.c_str(), "rb");
    if (!file) throw Error("cannot open " + path);
    std::string content;
    char buffer[1 << 16];
    int got;
    while ((got = gzread(file, buffer, sizeof(buffer))) > 0)
        content.append(buffer, static_cast<std::size_t>(got));
    bool ok = got == 0;
    gzclose(file);
    if (!ok) throw Error("gzip read error in " + path);
    return content;
}

}  // namespace

DirectedGraph load_edge_list_file(const std::string& path, LoadStats* stats) {
    if (path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0) {
        std::istringstream in(read_gzip_file(path));
        return load_edge_list(in, stats);
    }
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    return load_edge_list(in, stats);
}

bool same_graph(const DirectedGraph& a, const DirectedGraph& b) {
    if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count()) return false;
    std::vector<std::pair<std::string, std::string>> ea, eb;
    ea.reserve(a.edge_count());
    eb.reserve(b.edge_count());
    for (VertexId u = 0; u < a.vertex_count(); ++u) {
        if (!b.find_label(a.label(u))) return false;
        for (VertexId v : a.out_neighbors(u)) ea.emplace_back(a.label(u), a.label(v));
    }
    for (VertexId u = 0; u < b.vertex_count(); ++u)
        for (VertexId v : b.out_neighbors(u)) eb.emplace_back(b.label(u), b.label(v));
    std::sort(ea.begin(), ea.end());
    std::sort(eb.begin(), eb.end());
    return ea == eb;
}

}  // namespace dforest
