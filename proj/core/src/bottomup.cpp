#include <algorithm>
#include <cassert>
#include <unordered_map>

#include "dforest/builders.hpp"
#include "dforest/core_decomp.hpp"
#include "dforest/cuf.hpp"

namespace dforest {

namespace {

struct ChildRef {
    std::int32_t node;   // subtree root to link below the new level
    VertexId witness;    // deeper vertex inside that subtree's component
};

struct LevelScratch {
    std::vector<std::vector<ChildRef>> children;  // indexed by position in V_l
    std::vector<char> carried;                    // V' membership per position
};

// Builds one k-tree from the deepest level up. `pre` holds the previous
// (k+1)-iteration levels and may be null, in which case every vertex is
// treated as fresh (the k = kmax iteration and isolated single-tree builds).
KTree build_ktree(const DirectedGraph& g, const CoreLevels& cur, const std::vector<int>* pre,
                  CoreUnionFind& cuf, std::uint64_t* edge_touches) {
    KTree tree;
    tree.k = cur.k;
    tree.nodes.push_back(TreeNode{});  // root sentinel
    tree.vertex_node.assign(g.vertex_count(), -1);

    cuf.begin_round();
    std::vector<std::vector<VertexId>> by_level = group_by_level(cur);
    std::vector<std::int32_t> pending;  // parentless subtree roots, creation order
    std::vector<char> is_pending;
    std::uint64_t touches = 0;
    LevelScratch scratch;

    const std::span<const int> levels(cur.max_l);

    for (int l = static_cast<int>(by_level.size()) - 1; l >= 0; --l) {
        const std::vector<VertexId>& members = by_level[static_cast<std::size_t>(l)];
        if (members.empty()) continue;

        // Phase 1: locate the subtree roots hanging below this level, before
        // any reset disturbs the finished (k,l+1) partition.
        scratch.children.assign(members.size(), {});
        scratch.carried.assign(members.size(), 0);
        for (std::size_t idx = 0; idx < members.size(); ++idx) {
            VertexId v = members[idx];
            auto discover = [&](VertexId u) {
                ++touches;
                if (cur.max_l[u] <= l) return;
                VertexId root = cuf.find(u);
                std::int32_t child = tree.vertex_node[cuf.hook(root)];
                assert(child >= 0 && "hook does not name a mapped vertex");
                auto& refs = scratch.children[idx];
                for (const ChildRef& ref : refs)
                    if (ref.node == child) return;
                refs.push_back({child, u});
                if (is_pending[static_cast<std::size_t>(child)])
                    is_pending[static_cast<std::size_t>(child)] = 0;
            };
            for (VertexId u : g.out_neighbors(v)) discover(u);
            for (VertexId u : g.in_neighbors(v)) discover(u);
        }

        // Phase 2: connectivity. Vertices whose level is unchanged from the
        // previous iteration reuse their memorized component label instead of
        // rescanning same-level edges.
        for (std::size_t idx = 0; idx < members.size(); ++idx) {
            VertexId v = members[idx];
            if (pre && (*pre)[v] == l) {
                cuf.quick_reset(v);
                scratch.carried[idx] = 1;
            } else {
                cuf.make_set(v);
            }
        }
        for (std::size_t idx = 0; idx < members.size(); ++idx) {
            if (scratch.carried[idx]) continue;
            VertexId v = members[idx];
            auto join = [&](VertexId u) {
                ++touches;
                if (cur.max_l[u] >= l) cuf.unite(u, v, levels);
            };
            for (VertexId u : g.out_neighbors(v)) join(u);
            for (VertexId u : g.in_neighbors(v)) join(u);
        }
        for (std::size_t idx = 0; idx < members.size(); ++idx) {
            if (!scratch.carried[idx]) continue;
            VertexId v = members[idx];
            cuf.unite(v, cuf.group(v), levels);
        }

        // Phase 3: materialize. First glue every member to the child subtrees
        // it discovered: connectivity that runs through deeper vertices is not
        // covered by memorized labels (fresh deeper bridges, and components
        // with several child subtrees), and without the glue the partition
        // restricted to {cur >= l} would fall short of the (k,l)-core's weak
        // components.
        for (std::size_t idx = 0; idx < members.size(); ++idx)
            for (const ChildRef& ref : scratch.children[idx])
                cuf.unite(members[idx], ref.witness, levels);

        std::unordered_map<VertexId, std::int32_t> node_of_root;
        std::vector<std::int32_t> created;
        for (VertexId v : members) {
            VertexId root = cuf.find(v);
            auto [it, fresh] = node_of_root.try_emplace(root, 0);
            if (fresh) {
                it->second = static_cast<std::int32_t>(tree.nodes.size());
                TreeNode node;
                node.core_num = l;
                tree.nodes.push_back(std::move(node));
                pending.push_back(it->second);
                is_pending.resize(tree.nodes.size(), 0);
                is_pending[static_cast<std::size_t>(it->second)] = 1;
                created.push_back(it->second);
            }
            tree.nodes[static_cast<std::size_t>(it->second)].vset.push_back(v);
            tree.vertex_node[v] = it->second;
        }
        for (std::size_t idx = 0; idx < members.size(); ++idx) {
            std::int32_t parent = tree.vertex_node[members[idx]];
            for (const ChildRef& ref : scratch.children[idx]) {
                TreeNode& child = tree.nodes[static_cast<std::size_t>(ref.node)];
                if (child.parent == parent) continue;
                assert(child.parent == -1 && "child subtree linked to two parents");
                child.parent = parent;
                tree.nodes[static_cast<std::size_t>(parent)].children.push_back(ref.node);
            }
        }
        for (std::int32_t id : created)
            cuf.refresh(tree.nodes[static_cast<std::size_t>(id)].vset, levels);
    }

    for (std::int32_t id : pending) {
        if (!is_pending[static_cast<std::size_t>(id)]) continue;
        tree.nodes[static_cast<std::size_t>(id)].parent = KTree::root_id;
        tree.nodes[KTree::root_id].children.push_back(id);
    }
    if (edge_touches) *edge_touches += touches;
    return tree;
}

}  // namespace

DForest build_bottomup(const DirectedGraph& g, BuildStats* stats) {
    auto started = std::chrono::steady_clock::now();
    DForest f;
    f.labels = g.labels();
    f.rebuild_label_index();
    f.meta.n = g.vertex_count();
    f.meta.m = g.edge_count();
    f.meta.builder = "bottomup";

    // One in-coreness pass serves every iteration's (k,0)-core.
    std::vector<int> in_core = in_core_numbers(g);
    f.meta.k_max = g.vertex_count() == 0
                       ? -1
                       : *std::max_element(in_core.begin(), in_core.end());

    BuildStats local;
    CoreUnionFind cuf(g.vertex_count());
    std::vector<int> pre;
    f.trees.resize(static_cast<std::size_t>(f.meta.k_max + 1));
    for (int k = f.meta.k_max; k >= 0; --k) {
        CoreLevels cur = decompose_for_k(g, k, in_core);
        std::uint64_t touches = 2 * g.edge_count();  // decomposition pass
        f.trees[static_cast<std::size_t>(k)] =
            build_ktree(g, cur, pre.empty() ? nullptr : &pre, cuf, &touches);
        local.per_k_edge_touches.push_back(touches);
        local.edge_touches += touches;
        pre = std::move(cur.max_l);
    }
    std::reverse(local.per_k_edge_touches.begin(), local.per_k_edge_touches.end());
    canonicalize(f);

    local.parent_steps = cuf.parent_steps();
    for (const KTree& tree : f.trees) local.peak_node_count += tree.nodes.size();
    local.elapsed = std::chrono::steady_clock::now() - started;
    if (stats) *stats = local;
    return f;
}

KTree build_single_ktree(const DirectedGraph& g, const CoreLevels& cur) {
    CoreUnionFind cuf(g.vertex_count());
    KTree tree = build_ktree(g, cur, nullptr, cuf, nullptr);
    canonicalize(tree);
    return tree;
}

}  // namespace dforest
