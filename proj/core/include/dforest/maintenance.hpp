#pragma once

#include <chrono>
#include <iosfwd>
#include <string>
#include <vector>

#include "dforest/builders.hpp"
#include "dforest/core_decomp.hpp"
#include "dforest/forest.hpp"
#include "dforest/graph.hpp"

namespace dforest {

// Update stream, one op per line:
//   "+ u v"     insert edge u->v       "- u v"     delete edge u->v
//   "+v label"  add vertex             "-v label"  remove vertex
struct UpdateOp {
    enum class Kind { insert_edge, delete_edge, add_vertex, remove_vertex };
    Kind kind;
    std::string u;
    std::string v;  // empty for vertex ops
};

std::vector<UpdateOp> parse_update_stream(std::istream& in);

struct MaintenanceReport {
    bool applied = false;     // false for reported no-ops and contract violations
    std::string note;         // reason when not applied
    std::vector<int> rebuilt_trees;
    std::vector<int> fast_path_trees;
    std::chrono::nanoseconds elapsed{0};

    std::size_t affected_tree_count() const {
        return rebuilt_trees.size() + fast_path_trees.size();
    }
};

// Keeps a forest consistent under graph updates. Detection is an exact per-k
// decomposition diff over the affected-k prefix; vertices that descend one
// level into an existing node move in place, everything structural falls back
// to rebuilding the affected tree. After every operation the forest is
// canonical-equal to a from-scratch build on the current graph.
class MaintainableIndex {
public:
    explicit MaintainableIndex(DirectedGraph graph);
    // Adopts a prebuilt index; throws when it does not belong to the graph.
    MaintainableIndex(DirectedGraph graph, DForest forest);

    const DirectedGraph& graph() const { return graph_; }
    const DForest& forest() const { return forest_; }
    const CoreLevels& levels(int k) const { return levels_[static_cast<std::size_t>(k)]; }

    MaintenanceReport insert_edge(const std::string& u, const std::string& v);
    MaintenanceReport delete_edge(const std::string& u, const std::string& v);
    MaintenanceReport add_vertex(const std::string& label);
    MaintenanceReport remove_vertex(const std::string& label);
    MaintenanceReport apply(const UpdateOp& op);

    // Test hook: canonical equality with a fresh bottom-up build.
    bool matches_rebuild() const;

private:
    void rebuild_all();
    void register_vertex(const std::string& label, MaintenanceReport& report);
    void apply_edge_change(VertexId u, VertexId v, bool inserted, MaintenanceReport& report);
    bool try_fast_path(int k, const CoreLevels& fresh, VertexId u, VertexId v);
    std::int32_t subtree_root_at(const KTree& tree, VertexId v, int level) const;

    DirectedGraph graph_;
    DForest forest_;
    std::vector<CoreLevels> levels_;  // retained decomposition per k
    std::vector<int> in_core_;        // per-vertex max k with v in the (k,0)-core
};

}  // namespace dforest
