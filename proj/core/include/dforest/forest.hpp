#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "dforest/core_decomp.hpp"
#include "dforest/graph.hpp"

namespace dforest {

// One index node. In canonical form every non-root node holds exactly the
// vertices whose maximum l at this tree's k equals core_num, and core_num
// strictly increases along every root-to-leaf path (levels may be skipped).
struct TreeNode {
    int core_num = -1;                  // -1 only on the root sentinel
    std::int32_t parent = -1;           // node id, -1 on the root
    std::vector<std::int32_t> children;
    std::vector<VertexId> vset;         // sorted ascending in canonical form
};

// The tree for one in-degree threshold k. nodes[0] is always the root
// sentinel (core_num -1, empty vset); vertex_node maps each member of the
// (k,0)-core to the unique node whose vset contains it (-1 elsewhere).
struct KTree {
    int k = 0;
    std::vector<TreeNode> nodes;
    std::vector<std::int32_t> vertex_node;

    static constexpr std::int32_t root_id = 0;
    const TreeNode& root() const { return nodes[root_id]; }
};

struct IndexMeta {
    std::uint64_t n = 0;
    std::uint64_t m = 0;
    int k_max = -1;
    std::string builder;  // in-memory provenance only, never serialized
};

struct DForest {
    std::vector<KTree> trees;  // k = 0..k_max
    std::vector<std::string> labels;
    std::unordered_map<std::string, VertexId> label_index;
    IndexMeta meta;

    void rebuild_label_index();
    std::optional<VertexId> find_label(std::string_view label) const;
    VertexId require_label(std::string_view label) const;
};

struct CommunityResult {
    std::vector<VertexId> vertices;  // sorted ascending
    std::size_t nodes_visited = 0;
    std::chrono::nanoseconds elapsed{0};

    bool empty() const { return vertices.empty(); }
};

// The index query: locate q's node through the vertex-node map, ascend to the
// shallowest ancestor with core_num >= l, and collect that subtree. Touches
// only nodes inside the answer plus one terminator, so nodes_visited stays
// within |C| + 1.
CommunityResult query_csd(const DForest& f, VertexId q, int k, int l);

// Canonical form: vsets sorted, children ordered by minimum vertex id in
// their subtrees, node ids renumbered in preorder. Two forests over the same
// graph are equal iff their canonical serializations are byte-identical.
void canonicalize(KTree& tree);
void canonicalize(DForest& f);

bool canonical_equal(const DForest& a, const DForest& b);

// Number of (vertex, tree) incidences counted twice (vset entry + map entry).
std::uint64_t total_vertex_entries(const DForest& f);

// Structural validation against the graph it was built from: vsets partition
// the (k,0)-core and agree with per-level decomposition, the map is exact,
// core_num is strictly increasing, and every subtree spans exactly one weak
// component of the corresponding core. Returns the first violation.
std::optional<std::string> validate(const DForest& f, const DirectedGraph& g);

// Debug dump, one node per line: depth, core_num, sorted labels.
void dump_text(const DForest& f, std::ostream& out);

// Orders labels numerically when every label parses as an unsigned integer,
// lexicographically otherwise.
std::vector<std::string> sorted_labels(const DForest& f, std::span<const VertexId> vertices);
std::vector<std::string> sort_label_tokens(std::vector<std::string> tokens);

}  // namespace dforest
