#include "dforest/maintenance.hpp"

#include <algorithm>
#include <istream>
#include <sstream>

namespace dforest {

std::vector<UpdateOp> parse_update_stream(std::istream& in) {
    std::vector<UpdateOp> ops;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        std::istringstream tokens(line);
        std::string op, a, b, extra;
        tokens >> op;
        if (op == "+" || op == "-") {
            if (!(tokens >> a >> b) || (tokens >> extra))
                throw ParseError(line_no, "expected '" + op + " u v'");
            ops.push_back({op == "+" ? UpdateOp::Kind::insert_edge : UpdateOp::Kind::delete_edge,
                           a, b});
        } else if (op == "+v" || op == "-v") {
            if (!(tokens >> a) || (tokens >> extra))
                throw ParseError(line_no, "expected '" + op + " label'");
            ops.push_back({op == "+v" ? UpdateOp::Kind::add_vertex : UpdateOp::Kind::remove_vertex,
                           a, ""});
        } else {
            throw ParseError(line_no, "unknown op '" + op + "'");
        }
    }
    return ops;
}

MaintainableIndex::MaintainableIndex(DirectedGraph graph) : graph_(std::move(graph)) {
    rebuild_all();
}

MaintainableIndex::MaintainableIndex(DirectedGraph graph, DForest forest)
    : graph_(std::move(graph)), forest_(std::move(forest)) {
    if (forest_.meta.n != graph_.vertex_count() || forest_.meta.m != graph_.edge_count() ||
        forest_.labels != graph_.labels())
        throw Error("index does not match graph");
    in_core_ = in_core_numbers(graph_);
    int kmax = graph_.vertex_count() == 0
                   ? -1
                   : *std::max_element(in_core_.begin(), in_core_.end());
    if (forest_.meta.k_max != kmax) throw Error("index does not match graph");
    for (int k = 0; k <= kmax; ++k) levels_.push_back(decompose_for_k(graph_, k, in_core_));
}

void MaintainableIndex::rebuild_all() {
    forest_ = build_bottomup(graph_);
    in_core_ = in_core_numbers(graph_);
    levels_.clear();
    for (int k = 0; k <= forest_.meta.k_max; ++k)
        levels_.push_back(decompose_for_k(graph_, k, in_core_));
}

bool MaintainableIndex::matches_rebuild() const {
    return canonical_equal(forest_, build_bottomup(graph_));
}

std::int32_t MaintainableIndex::subtree_root_at(const KTree& tree, VertexId v, int level) const {
    std::int32_t id = tree.vertex_node[v];
    while (id >= 0) {
        std::int32_t parent = tree.nodes[static_cast<std::size_t>(id)].parent;
        if (parent < 0 || tree.nodes[static_cast<std::size_t>(parent)].core_num < level) break;
        id = parent;
    }
    return id;
}

MaintenanceReport MaintainableIndex::apply(const UpdateOp& op) {
    switch (op.kind) {
        case UpdateOp::Kind::insert_edge:
            return insert_edge(op.u, op.v);
        case UpdateOp::Kind::delete_edge:
            return delete_edge(op.u, op.v);
        case UpdateOp::Kind::add_vertex:
            return add_vertex(op.u);
        case UpdateOp::Kind::remove_vertex:
            return remove_vertex(op.u);
    }
    throw Error("invalid update op");
}

void MaintainableIndex::register_vertex(const std::string& label, MaintenanceReport& report) {
    graph_.add_vertex(label);
    forest_.labels.push_back(label);
    forest_.label_index.emplace(label, static_cast<VertexId>(forest_.labels.size() - 1));
    forest_.meta.n = graph_.vertex_count();
    in_core_.push_back(0);
    for (KTree& tree : forest_.trees) tree.vertex_node.push_back(-1);
    for (CoreLevels& levels : levels_) levels.max_l.push_back(-1);

    // The new vertex is isolated: only the 0-tree gains a singleton component.
    if (forest_.trees.empty()) {
        // First vertex ever: the forest grows its 0-tree.
        forest_.meta.k_max = 0;
        levels_.push_back(decompose_for_k(graph_, 0));
        forest_.trees.push_back(build_single_ktree(graph_, levels_[0]));
        report.rebuilt_trees.push_back(0);
        return;
    }
    CoreLevels& zero = levels_[0];
    VertexId v = static_cast<VertexId>(graph_.vertex_count() - 1);
    zero.max_l[v] = 0;
    zero.l_max = std::max(zero.l_max, 0);
    KTree& tree = forest_.trees[0];
    TreeNode node;
    node.core_num = 0;
    node.parent = KTree::root_id;
    node.vset.push_back(v);
    tree.nodes.push_back(std::move(node));
    std::int32_t id = static_cast<std::int32_t>(tree.nodes.size() - 1);
    tree.nodes[KTree::root_id].children.push_back(id);
    tree.vertex_node[v] = id;
    canonicalize(tree);
    report.fast_path_trees.push_back(0);
}

MaintenanceReport MaintainableIndex::add_vertex(const std::string& label) {
    auto started = std::chrono::steady_clock::now();
    MaintenanceReport report;
    if (graph_.find_label(label)) {
        report.note = "vertex already present: " + label;
        report.elapsed = std::chrono::steady_clock::now() - started;
        return report;
    }
    register_vertex(label, report);
    report.applied = true;
    report.elapsed = std::chrono::steady_clock::now() - started;
    return report;
}

MaintenanceReport MaintainableIndex::remove_vertex(const std::string& label) {
    auto started = std::chrono::steady_clock::now();
    MaintenanceReport report;
    auto id = graph_.find_label(label);
    if (!id) {
        report.note = "unknown vertex: " + label;
        report.elapsed = std::chrono::steady_clock::now() - started;
        return report;
    }
    // Sequentially delete the incident edges, then excise the isolated vertex.
    std::vector<std::pair<std::string, std::string>> incident;
    for (VertexId w : graph_.out_neighbors(*id)) incident.emplace_back(label, graph_.label(w));
    for (VertexId w : graph_.in_neighbors(*id)) incident.emplace_back(graph_.label(w), label);
    for (const auto& [u, v] : incident) {
        MaintenanceReport sub = delete_edge(u, v);
        for (int k : sub.rebuilt_trees) report.rebuilt_trees.push_back(k);
        for (int k : sub.fast_path_trees) report.fast_path_trees.push_back(k);
    }
    // Vertex ids compact on removal, so every id-indexed structure is re-derived.
    graph_.remove_vertex(*id);
    rebuild_all();
    report.rebuilt_trees.push_back(0);
    std::sort(report.rebuilt_trees.begin(), report.rebuilt_trees.end());
    report.rebuilt_trees.erase(
        std::unique(report.rebuilt_trees.begin(), report.rebuilt_trees.end()),
        report.rebuilt_trees.end());
    report.applied = true;
    report.elapsed = std::chrono::steady_clock::now() - started;
    return report;
}

MaintenanceReport MaintainableIndex::insert_edge(const std::string& lu, const std::string& lv) {
    auto started = std::chrono::steady_clock::now();
    MaintenanceReport report;
    if (lu == lv) {
        report.note = "self-loop dropped";
        report.elapsed = std::chrono::steady_clock::now() - started;
        return report;
    }
    if (!graph_.find_label(lu)) register_vertex(lu, report);
    if (!graph_.find_label(lv)) register_vertex(lv, report);
    VertexId u = *graph_.find_label(lu);
    VertexId v = *graph_.find_label(lv);
    if (graph_.has_edge(u, v)) {
        report.note = "edge already present";
        report.elapsed = std::chrono::steady_clock::now() - started;
        return report;
    }
    graph_.add_edge(u, v);
    apply_edge_change(u, v, true, report);
    report.applied = true;
    report.elapsed = std::chrono::steady_clock::now() - started;
    return report;
}

MaintenanceReport MaintainableIndex::delete_edge(const std::string& lu, const std::string& lv) {
    auto started = std::chrono::steady_clock::now();
    MaintenanceReport report;
    auto u = graph_.find_label(lu);
    auto v = graph_.find_label(lv);
    if (!u || !v || !graph_.has_edge(*u, *v)) {
        report.note = "edge not present";
        report.elapsed = std::chrono::steady_clock::now() - started;
        return report;
    }
    graph_.remove_edge(*u, *v);
    apply_edge_change(*u, *v, false, report);
    report.applied = true;
    report.elapsed = std::chrono::steady_clock::now() - started;
    return report;
}

void MaintainableIndex::apply_edge_change(VertexId u, VertexId v, bool inserted,
                                          MaintenanceReport& report) {
    // A tree k can only change when the edge lies inside the new (insert) or
    // old (delete) (k,0)-core, and one update shifts any in-core number by at
    // most one; trees above this prefix are untouched.
    const int bound = 1 + std::max(in_core_[u], in_core_[v]);
    const int old_kmax = forest_.meta.k_max;

    in_core_ = in_core_numbers(graph_);
    const int new_kmax =
        graph_.vertex_count() == 0 ? -1 : *std::max_element(in_core_.begin(), in_core_.end());

    const int probe_to = std::min(bound, std::max(old_kmax, new_kmax));
    for (int k = 0; k <= probe_to; ++k) {
        if (k > new_kmax) break;  // trees beyond new_kmax are dropped below
        CoreLevels fresh = decompose_for_k(graph_, k, in_core_);
        if (k > old_kmax) {
            forest_.trees.push_back(build_single_ktree(graph_, fresh));
            levels_.push_back(std::move(fresh));
            report.rebuilt_trees.push_back(k);
            continue;
        }
        const CoreLevels& old = levels_[static_cast<std::size_t>(k)];
        bool level_diff = fresh.max_l != old.max_l;
        if (!level_diff) {
            // Levels intact; the edge can still merge or split components when
            // both endpoints live in this tree.
            int common = std::min(fresh.max_l[u], fresh.max_l[v]);
            if (common < 0) continue;
            const KTree& tree = forest_.trees[static_cast<std::size_t>(k)];
            bool same_component =
                subtree_root_at(tree, u, common) == subtree_root_at(tree, v, common);
            if (inserted && same_component) continue;  // edge inside one community
            if (inserted || same_component) {
                forest_.trees[static_cast<std::size_t>(k)] = build_single_ktree(graph_, fresh);
                levels_[static_cast<std::size_t>(k)] = std::move(fresh);
                report.rebuilt_trees.push_back(k);
            }
            // delete with different components cannot happen: the edge linked them
            continue;
        }
        if (inserted && try_fast_path(k, fresh, u, v)) {
            levels_[static_cast<std::size_t>(k)] = std::move(fresh);
            report.fast_path_trees.push_back(k);
            continue;
        }
        forest_.trees[static_cast<std::size_t>(k)] = build_single_ktree(graph_, fresh);
        levels_[static_cast<std::size_t>(k)] = std::move(fresh);
        report.rebuilt_trees.push_back(k);
    }
    for (int k = new_kmax + 1; k <= old_kmax; ++k) report.rebuilt_trees.push_back(k);
    forest_.trees.resize(static_cast<std::size_t>(new_kmax + 1));
    levels_.resize(static_cast<std::size_t>(new_kmax + 1));
    forest_.meta.k_max = new_kmax;
    forest_.meta.m = graph_.edge_count();
    forest_.meta.n = graph_.vertex_count();
}

bool MaintainableIndex::try_fast_path(int k, const CoreLevels& fresh, VertexId u, VertexId v) {
    const CoreLevels& old = levels_[static_cast<std::size_t>(k)];
    KTree& tree = forest_.trees[static_cast<std::size_t>(k)];

    std::vector<VertexId> moved;
    for (VertexId x = 0; x < fresh.max_l.size(); ++x) {
        if (fresh.max_l[x] == old.max_l[x]) continue;
        if (x != u && x != v) return false;           // cascade beyond the endpoints
        if (old.max_l[x] < 0 || fresh.max_l[x] != old.max_l[x] + 1) return false;
        moved.push_back(x);
    }
    if (moved.empty()) return false;

    // The edge itself must not bridge communities at the untouched levels.
    int common = std::min(old.max_l[u], old.max_l[v]);
    if (common >= 0 &&
        subtree_root_at(tree, u, common) != subtree_root_at(tree, v, common))
        return false;

    struct Move {
        VertexId x;
        std::int32_t from;
        std::int32_t to;
    };
    std::vector<Move> plan;
    for (VertexId x : moved) {
        const int target_level = fresh.max_l[x];
        std::int32_t source = tree.vertex_node[x];
        std::size_t departures = 1;
        for (const Move& earlier : plan) departures += earlier.from == source;
        if (tree.nodes[static_cast<std::size_t>(source)].vset.size() < departures + 1)
            return false;  // node would empty out
        std::int32_t target = -1;
        auto consider = [&](VertexId w) {
            if (target == -2 || w == u || w == v) return;
            if (fresh.max_l[w] < target_level) return;
            std::int32_t root = subtree_root_at(tree, w, target_level);
            if (target == -1) target = root;
            else if (target != root) target = -2;  // ambiguous: communities merge
        };
        for (VertexId w : graph_.out_neighbors(x)) consider(w);
        for (VertexId w : graph_.in_neighbors(x)) consider(w);
        if (target < 0) return false;
        const TreeNode& t = tree.nodes[static_cast<std::size_t>(target)];
        if (t.core_num != target_level || t.parent != source) return false;
        plan.push_back({x, source, target});
    }

    // The edge may newly tie its endpoints at min(fresh[u], fresh[v]); both
    // must land in the same community there or the move is structural.
    int new_common = std::min(fresh.max_l[u], fresh.max_l[v]);
    if (new_common > common) {
        auto post_root = [&](VertexId x) {
            for (const Move& move : plan)
                if (move.x == x && fresh.max_l[x] == new_common) return move.to;
            // Unmoved chains, and moved chains above the target, are intact.
            return subtree_root_at(tree, x, new_common);
        };
        if (post_root(u) != post_root(v)) return false;
    }

    for (const Move& move : plan) {
        TreeNode& from = tree.nodes[static_cast<std::size_t>(move.from)];
        from.vset.erase(std::find(from.vset.begin(), from.vset.end(), move.x));
        tree.nodes[static_cast<std::size_t>(move.to)].vset.push_back(move.x);
        tree.vertex_node[move.x] = move.to;
    }
    canonicalize(tree);
    return true;
}

}  // namespace dforest
