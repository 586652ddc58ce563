#include <algorithm>

#include "dforest/builders.hpp"
#include "dforest/core_decomp.hpp"

namespace dforest {

namespace {

// Refine one weak component of the (k,l)-core. Creates a node only when some
// vertex of the component tops out at this level; when the (k,l+1)-core keeps
// the whole component, the level is skipped and refinement continues under
// the same parent.
struct PendingComponent {
    std::int32_t parent;
    std::vector<VertexId> vertices;  // sorted
    int level;
};

KTree build_ktree_topdown(const DirectedGraph& g, int k, PeelingEngine& engine,
                          const std::vector<VertexId>& k0_core) {
    KTree tree;
    tree.k = k;
    tree.nodes.push_back(TreeNode{});  // root sentinel
    tree.vertex_node.assign(g.vertex_count(), -1);

    std::vector<PendingComponent> work;
    for (auto& component : engine.components_within(k0_core))
        work.push_back({KTree::root_id, std::move(component), 0});

    while (!work.empty()) {
        PendingComponent item = std::move(work.back());
        work.pop_back();
        std::vector<VertexId> deeper =
            engine.core_within(item.vertices, k, item.level + 1);
        if (deeper.size() == item.vertices.size()) {
            // Whole component survives the next level: skip node creation.
            work.push_back({item.parent, std::move(item.vertices), item.level + 1});
            continue;
        }
        std::int32_t id = static_cast<std::int32_t>(tree.nodes.size());
        TreeNode node;
        node.core_num = item.level;
        node.parent = item.parent;
        tree.nodes[static_cast<std::size_t>(item.parent)].children.push_back(id);
        // vset = component minus what survives deeper.
        std::set_difference(item.vertices.begin(), item.vertices.end(), deeper.begin(),
                            deeper.end(), std::back_inserter(node.vset));
        for (VertexId v : node.vset) tree.vertex_node[v] = id;
        tree.nodes.push_back(std::move(node));
        if (!deeper.empty())
            for (auto& component : engine.components_within(deeper))
                work.push_back({id, std::move(component), item.level + 1});
    }
    return tree;
}

}  // namespace

DForest build_topdown(const DirectedGraph& g, BuildStats* stats) {
    auto started = std::chrono::steady_clock::now();
    DForest f;
    f.labels = g.labels();
    f.rebuild_label_index();
    f.meta.n = g.vertex_count();
    f.meta.m = g.edge_count();
    f.meta.k_max = max_k(g);
    f.meta.builder = "topdown";

    PeelingEngine engine(g);
    BuildStats local;
    for (int k = 0; k <= f.meta.k_max; ++k) {
        std::uint64_t touches_before = engine.edge_touches();
        std::vector<VertexId> k0_core = kl_core(g, k, 0);
        f.trees.push_back(build_ktree_topdown(g, k, engine, k0_core));
        local.per_k_edge_touches.push_back(engine.edge_touches() - touches_before +
                                           2 * g.edge_count());
    }
    canonicalize(f);

    local.edge_touches = engine.edge_touches();
    for (const KTree& tree : f.trees) local.peak_node_count += tree.nodes.size();
    local.elapsed = std::chrono::steady_clock::now() - started;
    if (stats) *stats = local;
    return f;
}

}  // namespace dforest
