#include "dforest/scsd.hpp"

#include <algorithm>

#include "dforest/core_decomp.hpp"

namespace dforest {

namespace {

// Iterative DFS recording finish order over the induced subgraph.
void dfs_finish_order(const DirectedGraph& g, const std::vector<char>& in_scope,
                      std::span<const VertexId> scope, std::vector<VertexId>& order) {
    std::vector<char> visited(g.vertex_count(), 0);
    std::vector<std::pair<VertexId, std::size_t>> stack;
    for (VertexId start : scope) {
        if (visited[start]) continue;
        visited[start] = 1;
        stack.emplace_back(start, 0);
        while (!stack.empty()) {
            auto& [v, next] = stack.back();
            auto out = g.out_neighbors(v);
            bool descended = false;
            while (next < out.size()) {
                VertexId w = out[next++];
                if (in_scope[w] && !visited[w]) {
                    visited[w] = 1;
                    stack.emplace_back(w, 0);
                    descended = true;
                    break;
                }
            }
            if (!descended) {
                order.push_back(stack.back().first);
                stack.pop_back();
            }
        }
    }
}

}  // namespace

std::vector<VertexId> scc_of(const DirectedGraph& g, std::span<const VertexId> scope,
                             VertexId q) {
    std::vector<char> in_scope(g.vertex_count(), 0);
    for (VertexId v : scope) in_scope[v] = 1;
    if (q >= g.vertex_count() || !in_scope[q]) throw Error("scc query vertex outside scope");

    std::vector<VertexId> finish;
    finish.reserve(scope.size());
    dfs_finish_order(g, in_scope, scope, finish);

    // Second pass on the transpose in reverse finish order; the pass that
    // collects q is q's SCC.
    std::vector<char> assigned(g.vertex_count(), 0);
    for (auto it = finish.rbegin(); it != finish.rend(); ++it) {
        if (assigned[*it]) continue;
        std::vector<VertexId> component{*it};
        assigned[*it] = 1;
        bool holds_q = (*it == q);
        for (std::size_t head = 0; head < component.size(); ++head) {
            for (VertexId w : g.in_neighbors(component[head])) {
                if (in_scope[w] && !assigned[w]) {
                    assigned[w] = 1;
                    component.push_back(w);
                    holds_q |= (w == q);
                }
            }
        }
        if (holds_q) {
            std::sort(component.begin(), component.end());
            return component;
        }
    }
    return {q};  // unreachable: q is in scope, so some pass collects it
}

CommunityResult query_scsd(const DirectedGraph& g, const DForest& f, VertexId q, int k, int l) {
    auto started = std::chrono::steady_clock::now();
    CommunityResult result = query_csd(f, q, k, l);
    std::vector<VertexId> working = std::move(result.vertices);
    result.vertices.clear();

    PeelingEngine engine(g);
    while (!working.empty()) {
        std::vector<VertexId> component = scc_of(g, working, q);
        // Degree feasibility inside the component.
        std::vector<char> member(g.vertex_count(), 0);
        for (VertexId v : component) member[v] = 1;
        bool feasible = true;
        for (VertexId v : component) {
            int din = 0, dout = 0;
            for (VertexId w : g.out_neighbors(v)) dout += member[w];
            for (VertexId w : g.in_neighbors(v)) din += member[w];
            if (din < k || dout < l) {
                feasible = false;
                break;
            }
        }
        if (feasible) {
            result.vertices = std::move(component);
            break;
        }
        // Peel the component back to a (k,l)-core community of q; every
        // iteration strictly shrinks the working set.
        working = engine.community_within(component, q, k, l);
    }
    result.elapsed = std::chrono::steady_clock::now() - started;
    return result;
}

}  // namespace dforest
