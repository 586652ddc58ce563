#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dforest/graph.hpp"

namespace dforest::testkit {

struct Fixture {
    std::string name;
    std::vector<std::pair<std::string, std::string>> edges;
    std::string commentary;

    DirectedGraph graph() const;
};

// Embedded constants, never regenerated:
//   F1 3-cycle, F2 two disjoint 3-cycles, F3 bidirected K4,
//   F4 K4 plus pendant (4->0, 0->4), F5 path 0->1->2,
//   F7 F2 plus bridge 2->3.
const std::vector<Fixture>& fixtures();
const Fixture& fixture(const std::string& name);

enum class GraphKind { uniform, power_law };

// Deterministic for fixed arguments (the generator avoids distribution
// classes whose output varies across standard libraries).
//   uniform:   every ordered pair (u,v), u != v, kept with probability param.
//   power_law: preferential attachment, round(param) edges per new vertex,
//              each edge oriented by a coin flip.
DirectedGraph random_digraph(GraphKind kind, std::size_t n, double param, std::uint64_t seed);

// Exhaustive maximality oracle: union of all vertex subsets whose induced
// subgraph meets both degree bounds. Rejects n > 8. Shares no code with the
// peeling paths.
std::vector<VertexId> subset_core_oracle(const DirectedGraph& g, int k, int l);

// Independent fixpoint oracle for strongly-connected community search:
// alternates naive full-rescan peeling with reachability-based SCC extraction
// from scratch. Shares no code with the index or Kosaraju paths.
std::vector<VertexId> scsd_fixpoint_oracle(const DirectedGraph& g, VertexId q, int k, int l);

}  // namespace dforest::testkit
