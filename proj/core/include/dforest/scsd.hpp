#pragma once

#include <span>
#include <vector>

#include "dforest/forest.hpp"
#include "dforest/graph.hpp"

namespace dforest {

// Strongly connected component of q within the subgraph induced by `scope`,
// via Kosaraju's two-pass DFS (iterative). q must be a member of scope.
std::vector<VertexId> scc_of(const DirectedGraph& g, std::span<const VertexId> scope,
                             VertexId q);

// Index-backed strongly-connected community search: retrieve the weakly
// connected (k,l)-core community of q, then alternate SCC extraction with
// degree-constrained peeling until the component is degree-feasible. Empty
// when q drops out at any stage.
CommunityResult query_scsd(const DirectedGraph& g, const DForest& f, VertexId q, int k, int l);

}  // namespace dforest
