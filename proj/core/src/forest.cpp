#include "dforest/forest.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <ostream>

namespace dforest {

void DForest::rebuild_label_index() {
    label_index.clear();
    label_index.reserve(labels.size());
    for (VertexId v = 0; v < labels.size(); ++v) label_index.emplace(labels[v], v);
}

std::optional<VertexId> DForest::find_label(std::string_view label) const {
    auto it = label_index.find(std::string(label));
    if (it == label_index.end()) return std::nullopt;
    return it->second;
}

VertexId DForest::require_label(std::string_view label) const {
    auto id = find_label(label);
    if (!id) throw UnknownVertexError(std::string(label));
    return *id;
}

CommunityResult query_csd(const DForest& f, VertexId q, int k, int l) {
    auto started = std::chrono::steady_clock::now();
    CommunityResult result;
    if (k < 0 || l < 0) throw Error("negative core thresholds");
    if (q >= f.meta.n) throw Error("query vertex out of range");
    if (k > f.meta.k_max) {
        result.elapsed = std::chrono::steady_clock::now() - started;
        return result;
    }
    const KTree& tree = f.trees[static_cast<std::size_t>(k)];
    std::int32_t node_id = tree.vertex_node[q];
    if (node_id < 0 || tree.nodes[static_cast<std::size_t>(node_id)].core_num < l) {
        result.elapsed = std::chrono::steady_clock::now() - started;
        return result;
    }

    // Ascend while the parent is a real node still satisfying the bound.
    std::int32_t top = node_id;
    while (true) {
        std::int32_t parent = tree.nodes[static_cast<std::size_t>(top)].parent;
        if (parent < 0 || tree.nodes[static_cast<std::size_t>(parent)].core_num < l) break;
        top = parent;
    }
    // One terminator node was inspected to stop the walk (the root sentinel at
    // the latest); the ascent itself stays inside the answer subtree.
    result.nodes_visited = 1;

    std::vector<std::int32_t> stack{top};
    while (!stack.empty()) {
        std::int32_t id = stack.back();
        stack.pop_back();
        const TreeNode& node = tree.nodes[static_cast<std::size_t>(id)];
        ++result.nodes_visited;
        result.vertices.insert(result.vertices.end(), node.vset.begin(), node.vset.end());
        for (std::int32_t child : node.children) stack.push_back(child);
    }
    std::sort(result.vertices.begin(), result.vertices.end());
    result.elapsed = std::chrono::steady_clock::now() - started;
    return result;
}

namespace {

// Minimum vertex id in each subtree; drives the canonical child order.
std::vector<VertexId> subtree_minima(const KTree& tree) {
    const auto none = std::numeric_limits<VertexId>::max();
    std::vector<VertexId> minimum(tree.nodes.size(), none);
    // Children always have larger ids than their parent in build output? Not
    // guaranteed; process in reverse topological order via an explicit
    // post-order walk.
    std::vector<std::int32_t> order;
    order.reserve(tree.nodes.size());
    std::vector<std::int32_t> stack{KTree::root_id};
    while (!stack.empty()) {
        std::int32_t id = stack.back();
        stack.pop_back();
        order.push_back(id);
        for (std::int32_t child : tree.nodes[static_cast<std::size_t>(id)].children)
            stack.push_back(child);
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const TreeNode& node = tree.nodes[static_cast<std::size_t>(*it)];
        VertexId m = minimum[static_cast<std::size_t>(*it)];
        for (VertexId v : node.vset) m = std::min(m, v);
        minimum[static_cast<std::size_t>(*it)] = m;
        if (node.parent >= 0)
            minimum[static_cast<std::size_t>(node.parent)] =
                std::min(minimum[static_cast<std::size_t>(node.parent)], m);
    }
    return minimum;
}

}  // namespace

void canonicalize(KTree& tree) {
    for (TreeNode& node : tree.nodes) std::sort(node.vset.begin(), node.vset.end());
    std::vector<VertexId> minimum = subtree_minima(tree);
    for (TreeNode& node : tree.nodes)
        std::sort(node.children.begin(), node.children.end(),
                  [&minimum](std::int32_t a, std::int32_t b) {
                      return minimum[static_cast<std::size_t>(a)] <
                             minimum[static_cast<std::size_t>(b)];
                  });

    // Renumber in preorder.
    std::vector<std::int32_t> new_id(tree.nodes.size(), -1);
    std::vector<std::int32_t> preorder;
    preorder.reserve(tree.nodes.size());
    std::vector<std::int32_t> stack{KTree::root_id};
    while (!stack.empty()) {
        std::int32_t id = stack.back();
        stack.pop_back();
        new_id[static_cast<std::size_t>(id)] = static_cast<std::int32_t>(preorder.size());
        preorder.push_back(id);
        const auto& children = tree.nodes[static_cast<std::size_t>(id)].children;
        for (auto it = children.rbegin(); it != children.rend(); ++it) stack.push_back(*it);
    }
    std::vector<TreeNode> nodes;
    nodes.reserve(tree.nodes.size());
    for (std::int32_t old : preorder) {
        TreeNode node = std::move(tree.nodes[static_cast<std::size_t>(old)]);
        if (node.parent >= 0) node.parent = new_id[static_cast<std::size_t>(node.parent)];
        for (std::int32_t& child : node.children)
            child = new_id[static_cast<std::size_t>(child)];
        nodes.push_back(std::move(node));
    }
    tree.nodes = std::move(nodes);
    for (auto& mapped : tree.vertex_node)
        if (mapped >= 0) mapped = new_id[static_cast<std::size_t>(mapped)];
}

void canonicalize(DForest& f) {
    for (KTree& tree : f.trees) canonicalize(tree);
}

bool canonical_equal(const DForest& a, const DForest& b) {
    if (a.meta.n != b.meta.n || a.meta.m != b.meta.m || a.meta.k_max != b.meta.k_max)
        return false;
    if (a.labels != b.labels) return false;
    if (a.trees.size() != b.trees.size()) return false;
    for (std::size_t k = 0; k < a.trees.size(); ++k) {
        const KTree& ta = a.trees[k];
        const KTree& tb = b.trees[k];
        if (ta.nodes.size() != tb.nodes.size()) return false;
        for (std::size_t i = 0; i < ta.nodes.size(); ++i) {
            const TreeNode& na = ta.nodes[i];
            const TreeNode& nb = tb.nodes[i];
            if (na.core_num != nb.core_num || na.parent != nb.parent || na.vset != nb.vset)
                return false;
        }
    }
    return true;
}

std::uint64_t total_vertex_entries(const DForest& f) {
    std::uint64_t entries = 0;
    for (const KTree& tree : f.trees)
        for (const TreeNode& node : tree.nodes) entries += 2 * node.vset.size();
    return entries;
}

namespace {

std::string describe(int k, std::size_t node, const std::string& what) {
    return "tree " + std::to_string(k) + ", node " + std::to_string(node) + ": " + what;
}

}  // namespace

std::optional<std::string> validate(const DForest& f, const DirectedGraph& g) {
    if (f.meta.n != g.vertex_count() || f.meta.m != g.edge_count())
        return "meta does not match graph";
    int kmax = max_k(g);
    if (f.meta.k_max != kmax)
        return "k_max " + std::to_string(f.meta.k_max) + " != " + std::to_string(kmax);
    if (f.trees.size() != static_cast<std::size_t>(kmax + 1)) return "tree count mismatch";

    for (const KTree& tree : f.trees) {
        const int k = tree.k;
        CoreLevels levels = decompose_for_k(g, k);
        if (tree.nodes.empty() || tree.root().core_num != -1 || !tree.root().vset.empty() ||
            tree.root().parent != -1)
            return describe(k, 0, "bad root sentinel");

        std::vector<std::int32_t> owner(g.vertex_count(), -1);
        for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
            const TreeNode& node = tree.nodes[id];
            if (id != KTree::root_id) {
                if (node.vset.empty()) return describe(k, id, "empty vset");
                if (node.parent < 0 || node.parent >= static_cast<std::int32_t>(tree.nodes.size()))
                    return describe(k, id, "dangling parent");
                const TreeNode& parent = tree.nodes[static_cast<std::size_t>(node.parent)];
                if (parent.core_num >= node.core_num)
                    return describe(k, id, "core_num not strictly increasing");
                if (!std::is_sorted(node.vset.begin(), node.vset.end()))
                    return describe(k, id, "vset not sorted");
            }
            for (VertexId v : node.vset) {
                if (owner[v] != -1) return describe(k, id, "vertex in two vsets");
                owner[v] = static_cast<std::int32_t>(id);
                if (levels.max_l[v] != node.core_num)
                    return describe(k, id, "vset member level != core_num");
            }
        }
        for (VertexId v = 0; v < g.vertex_count(); ++v) {
            bool in_core = levels.max_l[v] >= 0;
            if (in_core != (owner[v] != -1))
                return describe(k, 0, "vsets do not partition the (k,0)-core");
            if (tree.vertex_node[v] != owner[v]) return describe(k, 0, "vertex-node map wrong");
        }

        // Every subtree must span exactly one weak component of the core at
        // its level.
        std::vector<std::vector<VertexId>> subtree(tree.nodes.size());
        std::vector<std::int32_t> order;
        std::vector<std::int32_t> stack{KTree::root_id};
        while (!stack.empty()) {
            std::int32_t id = stack.back();
            stack.pop_back();
            order.push_back(id);
            for (std::int32_t child : tree.nodes[static_cast<std::size_t>(id)].children)
                stack.push_back(child);
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const TreeNode& node = tree.nodes[static_cast<std::size_t>(*it)];
            auto& mine = subtree[static_cast<std::size_t>(*it)];
            mine.insert(mine.end(), node.vset.begin(), node.vset.end());
            if (node.parent >= 0) {
                auto& up = subtree[static_cast<std::size_t>(node.parent)];
                up.insert(up.end(), mine.begin(), mine.end());
            }
        }
        PeelingEngine engine(g);
        for (std::size_t id = 1; id < tree.nodes.size(); ++id) {
            const TreeNode& node = tree.nodes[id];
            std::vector<VertexId> span = subtree[id];
            std::sort(span.begin(), span.end());
            std::vector<VertexId> expected = engine.community_within(
                core_members(levels, node.core_num), span.front(), k, node.core_num);
            if (expected != span) return describe(k, id, "subtree is not one weak core component");
        }
    }
    return std::nullopt;
}

void dump_text(const DForest& f, std::ostream& out) {
    for (const KTree& tree : f.trees) {
        out << "k=" << tree.k << '\n';
        std::vector<std::pair<std::int32_t, int>> stack{{KTree::root_id, 0}};
        while (!stack.empty()) {
            auto [id, depth] = stack.back();
            stack.pop_back();
            const TreeNode& node = tree.nodes[static_cast<std::size_t>(id)];
            out << depth << ' ' << node.core_num;
            for (const std::string& label : sorted_labels(f, node.vset)) out << ' ' << label;
            out << '\n';
            for (auto it = node.children.rbegin(); it != node.children.rend(); ++it)
                stack.push_back({*it, depth + 1});
        }
    }
}

std::vector<std::string> sort_label_tokens(std::vector<std::string> tokens) {
    bool all_numeric = true;
    std::vector<std::uint64_t> numeric(tokens.size());
    for (std::size_t i = 0; i < tokens.size() && all_numeric; ++i) {
        const std::string& t = tokens[i];
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), numeric[i]);
        all_numeric = ec == std::errc() && ptr == t.data() + t.size() && !t.empty();
    }
    if (all_numeric) {
        std::vector<std::size_t> idx(tokens.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(),
                  [&numeric](std::size_t a, std::size_t b) { return numeric[a] < numeric[b]; });
        std::vector<std::string> sorted;
        sorted.reserve(tokens.size());
        for (std::size_t i : idx) sorted.push_back(std::move(tokens[i]));
        return sorted;
    }
    std::sort(tokens.begin(), tokens.end());
    return tokens;
}

std::vector<std::string> sorted_labels(const DForest& f, std::span<const VertexId> vertices) {
    std::vector<std::string> tokens;
    tokens.reserve(vertices.size());
    for (VertexId v : vertices) tokens.push_back(f.labels[v]);
    return sort_label_tokens(std::move(tokens));
}

}  // namespace dforest
