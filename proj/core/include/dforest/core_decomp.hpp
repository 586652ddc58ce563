#pragma once

#include <span>
#include <vector>

#include "dforest/graph.hpp"

namespace dforest {

// Per-vertex maximum l for a fixed k: max_l[v] is the largest l with
// v in the (k,l)-core, or -1 when v is outside the (k,0)-core.
struct CoreLevels {
    int k = 0;
    std::vector<int> max_l;
    int l_max = -1;

    bool in_core(VertexId v, int l) const { return max_l[v] >= l; }
};

// The unique maximal vertex set whose induced subgraph keeps every in-degree
// >= k and out-degree >= l. May be empty or disconnected. Sorted ascending.
std::vector<VertexId> kl_core(const DirectedGraph& g, int k, int l);

// max_l[v] = max{ l : v in kl_core(g,k,l) } via a single O(m) min-out-degree
// bucket peel with immediate in-degree cascade. The overload taking in-core
// numbers skips the (k,0)-core peel: that core is exactly { v : kin[v] >= k }.
CoreLevels decompose_for_k(const DirectedGraph& g, int k);
CoreLevels decompose_for_k(const DirectedGraph& g, int k, std::span<const int> in_core);

// Per-vertex max k with v in the (k,0)-core (-1 never happens for existing
// vertices: every vertex is in the (0,0)-core).
std::vector<int> in_core_numbers(const DirectedGraph& g);

// Largest k with a nonempty (k,0)-core; -1 for an empty graph.
int max_k(const DirectedGraph& g);

// V_l = { v : max_l[v] = l } for l = 0..l_max; empty list when nothing is in
// the (k,0)-core.
std::vector<std::vector<VertexId>> group_by_level(const CoreLevels& levels);

// { v : max_l[v] >= l }, i.e. the (k,l)-core implied by a decomposition.
std::vector<VertexId> core_members(const CoreLevels& levels, int l);

// Maximal subsets of S connected through undirected-view edges inside the
// induced subgraph. Each component sorted ascending.
std::vector<std::vector<VertexId>> weak_components(const DirectedGraph& g,
                                                   std::span<const VertexId> s);

// Index-free CSD baseline: the weak component of q inside kl_core(g,k,l);
// empty when q is peeled out. Sorted ascending.
std::vector<VertexId> online_csd(const DirectedGraph& g, VertexId q, int k, int l);

// Reusable scratch for peeling/connectivity restricted to vertex subsets.
// One instance per thread; all methods are O(edges touched), not O(n).
class PeelingEngine {
public:
    explicit PeelingEngine(const DirectedGraph& g);

    // Cascading peel of the induced subgraph on `scope` down to its (k,l)-core.
    std::vector<VertexId> core_within(std::span<const VertexId> scope, int k, int l);

    // Weak components of the induced subgraph on `scope`.
    std::vector<std::vector<VertexId>> components_within(std::span<const VertexId> scope);

    // Weak component of q inside the (k,l)-core of the induced subgraph.
    std::vector<VertexId> community_within(std::span<const VertexId> scope, VertexId q,
                                           int k, int l);

    std::uint64_t edge_touches() const { return edge_touches_; }

private:
    bool in_scope(VertexId v) const { return stamp_[v] == epoch_; }

    const DirectedGraph& g_;
    std::vector<std::uint32_t> stamp_;
    std::uint32_t epoch_ = 0;
    std::vector<int> in_deg_;
    std::vector<int> out_deg_;
    std::vector<VertexId> queue_;
    std::uint64_t edge_touches_ = 0;
};

}  // namespace dforest
