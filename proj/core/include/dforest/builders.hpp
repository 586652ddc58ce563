#pragma once

#include <chrono>
#include <cstdint>
#include <vector>

#include "dforest/forest.hpp"
#include "dforest/graph.hpp"

namespace dforest {

struct BuildStats {
    std::chrono::nanoseconds elapsed{0};
    std::size_t peak_node_count = 0;        // nodes across all trees, sentinels included
    std::uint64_t edge_touches = 0;         // adjacency entries visited
    std::vector<std::uint64_t> per_k_edge_touches;
    std::uint64_t parent_steps = 0;         // union-find chain steps (bottom-up only)
};

// Baseline builder: per k from 0 to kmax, extract (k,l)-cores level by level
// from the previous level's components. Output is canonical.
DForest build_topdown(const DirectedGraph& g, BuildStats* stats = nullptr);

// CUF-based builder: per k from kmax down to 0, build each tree leaf-first,
// reusing connectivity memorized from the (k+1)-tree. Output is canonical and
// equal to build_topdown's.
DForest build_bottomup(const DirectedGraph& g, BuildStats* stats = nullptr);

// One tree built in isolation (no cross-k reuse); used by index maintenance.
KTree build_single_ktree(const DirectedGraph& g, const CoreLevels& cur);

}  // namespace dforest
