#pragma once

#include <cassert>
#include <cstdint>
#include <span>
#include <vector>

#include "dforest/graph.hpp"

namespace dforest {

// Union-find with union by rank and path compression, extended with two
// elements per entry:
//   hook  - a vertex of minimal level in the component; the vertex-node map
//           at that vertex names the component's current subtree-root node.
//   group - the component label memorized from the previous, larger-k build
//           iteration; quick_reset() preserves it across iterations.
// Entries are Theta(n); entries of vertices never touched in the current
// iteration hold stale data, which is safe because every caller gates on
// level values first.
class CoreUnionFind {
public:
    explicit CoreUnionFind(std::size_t n)
        : rank_(n, 0), parent_(n), hook_(n), group_(n), round_(n, 0) {
        for (std::size_t v = 0; v < n; ++v)
            parent_[v] = hook_[v] = group_[v] = static_cast<VertexId>(v);
    }

    // Marks the start of a build iteration; entries initialized in earlier
    // rounds count as uninitialized again.
    void begin_round() { ++current_round_; }

    void make_set(VertexId v) {
        rank_[v] = 0;
        parent_[v] = v;
        hook_[v] = v;
        group_[v] = v;
        round_[v] = current_round_;
    }

    // Re-initializes parent/hook/rank but keeps group: the entry still names
    // its component from the previous iteration.
    void quick_reset(VertexId v) {
        rank_[v] = 0;
        parent_[v] = v;
        hook_[v] = v;
        round_[v] = current_round_;
    }

    VertexId find(VertexId v) {
        assert(round_[v] == current_round_ && "find on an uninitialized entry");
        VertexId root = v;
        while (parent_[root] != root) {
            root = parent_[root];
            ++parent_steps_;
        }
        while (parent_[v] != root) {
            VertexId next = parent_[v];
            parent_[v] = root;
            v = next;
            ++parent_steps_;
        }
        return root;
    }

    // Merge by rank; the surviving root adopts the other root's group when
    // that group vertex has strictly larger level.
    void unite(VertexId u, VertexId v, std::span<const int> cur) {
        VertexId ru = find(u);
        VertexId rv = find(v);
        if (ru == rv) return;
        if (rank_[ru] < rank_[rv]) std::swap(ru, rv);
        parent_[rv] = ru;
        if (rank_[ru] == rank_[rv]) ++rank_[ru];
        if (cur[group_[ru]] < cur[group_[rv]]) group_[ru] = group_[rv];
    }

    // After a component is finalized at a level: propagate the root's group to
    // the given members and point the root's hook at a minimal-level vertex.
    void refresh(std::span<const VertexId> members, std::span<const int> cur) {
        for (VertexId v : members) {
            VertexId r = find(v);
            group_[v] = group_[r];
            if (cur[hook_[r]] > cur[v]) hook_[r] = v;
        }
    }

    VertexId hook(VertexId v) const { return hook_[v]; }
    VertexId group(VertexId v) const { return group_[v]; }
    int rank_of(VertexId v) const { return rank_[v]; }
    bool initialized(VertexId v) const { return round_[v] == current_round_; }

    // Total parent-chain steps taken by find(); proxy for the amortized
    // alpha(n) bound.
    std::uint64_t parent_steps() const { return parent_steps_; }
    void reset_parent_steps() { parent_steps_ = 0; }

private:
    std::vector<int> rank_;
    std::vector<VertexId> parent_;
    std::vector<VertexId> hook_;
    std::vector<VertexId> group_;
    std::vector<std::uint32_t> round_;
    std::uint32_t current_round_ = 1;
    std::uint64_t parent_steps_ = 0;
};

}  // namespace dforest
