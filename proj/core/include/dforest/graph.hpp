#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dforest {

// Dense vertex index in [0, n); bijective with the distinct labels seen at load time.
using VertexId = std::uint32_t;

enum class NeighborMode { out, in, undirected };

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input line; line numbers are 1-based.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Vertex label unknown to the graph/index. Distinct from a legitimate empty answer.
class UnknownVertexError : public Error {
public:
    explicit UnknownVertexError(const std::string& label)
        : Error("unknown vertex label: " + label) {}
};

struct LoadStats {
    std::size_t duplicate_edges = 0;
    std::size_t self_loops = 0;
};

// Simple directed graph: deduplicated edges, no self-loops, both adjacency
// directions kept sorted ascending. Immutable after load for unlimited
// concurrent readers; the mutators below are for exclusively-owned copies
// (index maintenance).
class DirectedGraph {
public:
    DirectedGraph() = default;

    std::size_t vertex_count() const { return out_adj_.size(); }
    std::size_t edge_count() const { return m_; }

    std::span<const VertexId> out_neighbors(VertexId v) const {
        check_vertex(v);
        return out_adj_[v];
    }
    std::span<const VertexId> in_neighbors(VertexId v) const {
        check_vertex(v);
        return in_adj_[v];
    }
    // undirected mode returns the multiset union: a mutual edge pair yields the
    // neighbor twice; callers treating the result as a set must dedupe.
    std::vector<VertexId> neighbors(VertexId v, NeighborMode mode) const;

    std::size_t out_degree(VertexId v) const { return out_adj_[v].size(); }
    std::size_t in_degree(VertexId v) const { return in_adj_[v].size(); }

    bool has_edge(VertexId u, VertexId v) const;

    const std::string& label(VertexId v) const {
        check_vertex(v);
        return labels_[v];
    }
    const std::vector<std::string>& labels() const { return labels_; }
    std::optional<VertexId> find_label(std::string_view label) const;
    // Throwing variant for query surfaces.
    VertexId require_label(std::string_view label) const;

    // Subgraph on S with all edges having both endpoints in S; original labels
    // preserved, ids re-densified in ascending order of the old ids.
    DirectedGraph induced_subgraph(std::span<const VertexId> s) const;

    void write_edge_list(std::ostream& out) const;

    // Mutators (exclusive ownership only).
    VertexId add_vertex(std::string label);       // throws Error if label exists
    bool add_edge(VertexId u, VertexId v);        // false if present or self-loop
    bool remove_edge(VertexId u, VertexId v);     // false if absent
    void remove_vertex(VertexId v);               // drops incident edges, compacts ids

    friend DirectedGraph load_edge_list(std::istream& in, LoadStats* stats);

private:
    void check_vertex(VertexId v) const {
        if (v >= out_adj_.size())
            throw Error("vertex id " + std::to_string(v) + " out of range");
    }

    std::size_t m_ = 0;
    std::vector<std::vector<VertexId>> out_adj_;
    std::vector<std::vector<VertexId>> in_adj_;
    std::vector<std::string> labels_;
    std::unordered_map<std::string, VertexId> label_index_;
};

// Edge-list text format: one "u v" pair of whitespace-separated tokens per
// line meaning u->v; '#' lines are comments; blank lines ignored. Duplicate
// edges are collapsed and self-loops dropped, both counted in stats.
DirectedGraph load_edge_list(std::istream& in, LoadStats* stats = nullptr);

// Reads a file, transparently inflating it when the name ends in ".gz".
DirectedGraph load_edge_list_file(const std::string& path, LoadStats* stats = nullptr);

// Equality under canonical vertex-label ordering (same label set, same edges
// up to renaming of dense ids by label).
bool same_graph(const DirectedGraph& a, const DirectedGraph& b);

}  // namespace dforest
