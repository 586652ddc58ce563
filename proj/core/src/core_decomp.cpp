#include "dforest/core_decomp.hpp"

#include <algorithm>

namespace dforest {

namespace {

// Cascading peel over the whole graph. Returns the alive flags.
std::vector<char> peel_to_core(const DirectedGraph& g, int k, int l) {
    const std::size_t n = g.vertex_count();
    std::vector<int> in_deg(n), out_deg(n);
    std::vector<char> alive(n, 1);
    std::vector<VertexId> queue;
    for (VertexId v = 0; v < n; ++v) {
        in_deg[v] = static_cast<int>(g.in_degree(v));
        out_deg[v] = static_cast<int>(g.out_degree(v));
        if (in_deg[v] < k || out_deg[v] < l) {
            alive[v] = 0;
            queue.push_back(v);
        }
    }
    while (!queue.empty()) {
        VertexId v = queue.back();
        queue.pop_back();
        for (VertexId w : g.out_neighbors(v)) {
            if (alive[w] && --in_deg[w] < k) {
                alive[w] = 0;
                queue.push_back(w);
            }
        }
        for (VertexId w : g.in_neighbors(v)) {
            if (alive[w] && --out_deg[w] < l) {
                alive[w] = 0;
                queue.push_back(w);
            }
        }
    }
    return alive;
}

}  // namespace

std::vector<VertexId> kl_core(const DirectedGraph& g, int k, int l) {
    std::vector<char> alive = peel_to_core(g, k, l);
    std::vector<VertexId> core;
    for (VertexId v = 0; v < g.vertex_count(); ++v)
        if (alive[v]) core.push_back(v);
    return core;
}

namespace {

// Shared second stage: min-out-degree peel over a precomputed (k,0)-core.
CoreLevels decompose_on_core(const DirectedGraph& g, int k, std::vector<char> alive) {
    const std::size_t n = g.vertex_count();
    CoreLevels levels;
    levels.k = k;
    levels.max_l.assign(n, -1);

    std::vector<int> in_deg(n), out_deg(n);
    std::size_t remaining = 0;
    int max_out = 0;
    for (VertexId v = 0; v < n; ++v) {
        if (!alive[v]) continue;
        ++remaining;
        int din = 0, dout = 0;
        for (VertexId w : g.out_neighbors(v))
            if (alive[w]) ++dout;
        for (VertexId w : g.in_neighbors(v))
            if (alive[w]) ++din;
        in_deg[v] = din;
        out_deg[v] = dout;
        max_out = std::max(max_out, dout);
    }
    if (remaining == 0) return levels;

    // Min-out-degree peel with lazy buckets. Entries go stale when a vertex's
    // out-degree drops or it dies; staleness is re-checked at pop time. When a
    // removal pushes a neighbor's in-degree below k, the neighbor is removed
    // immediately at the current level (the cascade inherits the level).
    std::vector<std::vector<VertexId>> buckets(static_cast<std::size_t>(max_out) + 1);
    for (VertexId v = 0; v < n; ++v)
        if (alive[v]) buckets[static_cast<std::size_t>(out_deg[v])].push_back(v);

    std::vector<VertexId> cascade;
    int level = 0;
    int cursor = 0;

    auto kill = [&](VertexId v, int at_level) {
        alive[v] = 0;
        levels.max_l[v] = at_level;
        --remaining;
        for (VertexId w : g.out_neighbors(v)) {
            if (alive[w] && --in_deg[w] < k) cascade.push_back(w);
        }
        for (VertexId w : g.in_neighbors(v)) {
            if (!alive[w]) continue;
            int d = --out_deg[w];
            buckets[static_cast<std::size_t>(d)].push_back(w);
            if (d < cursor) cursor = d;
        }
    };

    while (remaining > 0) {
        bool drained = false;
        while (!cascade.empty()) {
            VertexId v = cascade.back();
            cascade.pop_back();
            if (!alive[v]) continue;
            kill(v, level);
            drained = true;
        }
        if (drained || remaining == 0) continue;
        while (cursor <= max_out) {
            auto& bucket = buckets[static_cast<std::size_t>(cursor)];
            bool popped = false;
            while (!bucket.empty()) {
                VertexId v = bucket.back();
                bucket.pop_back();
                if (!alive[v] || out_deg[v] != cursor) continue;  // stale entry
                level = std::max(level, cursor);
                kill(v, level);
                popped = true;
                break;
            }
            if (popped) break;
            ++cursor;
        }
    }
    levels.l_max = *std::max_element(levels.max_l.begin(), levels.max_l.end());
    return levels;
}

}  // namespace

CoreLevels decompose_for_k(const DirectedGraph& g, int k) {
    return decompose_on_core(g, k, peel_to_core(g, k, 0));
}

CoreLevels decompose_for_k(const DirectedGraph& g, int k, std::span<const int> in_core) {
    std::vector<char> alive(g.vertex_count());
    for (VertexId v = 0; v < g.vertex_count(); ++v) alive[v] = in_core[v] >= k;
    return decompose_on_core(g, k, std::move(alive));
}

std::vector<int> in_core_numbers(const DirectedGraph& g) {
    // Min-in-degree peel; the out-degree constraint never binds at l = 0.
    // Lazy buckets: every decrement pushes a fresh entry, pops re-check
    // validity, the cursor rolls back when a push lands below it.
    const std::size_t n = g.vertex_count();
    std::vector<int> core(n, 0), in_deg(n);
    std::vector<char> done(n, 0);
    int max_in = 0;
    for (VertexId v = 0; v < n; ++v) {
        in_deg[v] = static_cast<int>(g.in_degree(v));
        max_in = std::max(max_in, in_deg[v]);
    }
    std::vector<std::vector<VertexId>> buckets(static_cast<std::size_t>(max_in) + 1);
    for (VertexId v = 0; v < n; ++v) buckets[static_cast<std::size_t>(in_deg[v])].push_back(v);
    int level = 0;
    int cursor = 0;
    std::size_t remaining = n;
    while (remaining > 0) {
        auto& bucket = buckets[static_cast<std::size_t>(cursor)];
        if (bucket.empty()) {
            ++cursor;
            continue;
        }
        VertexId v = bucket.back();
        bucket.pop_back();
        if (done[v] || in_deg[v] != cursor) continue;  // stale entry
        done[v] = 1;
        level = std::max(level, cursor);
        core[v] = level;
        --remaining;
        for (VertexId w : g.out_neighbors(v)) {
            if (done[w]) continue;
            int dw = --in_deg[w];
            buckets[static_cast<std::size_t>(dw)].push_back(w);
            if (dw < cursor) cursor = dw;
        }
    }
    return core;
}

int max_k(const DirectedGraph& g) {
    if (g.vertex_count() == 0) return -1;
    std::vector<int> kin = in_core_numbers(g);
    return *std::max_element(kin.begin(), kin.end());
}

std::vector<std::vector<VertexId>> group_by_level(const CoreLevels& levels) {
    std::vector<std::vector<VertexId>> groups;
    if (levels.l_max < 0) return groups;
    groups.resize(static_cast<std::size_t>(levels.l_max) + 1);
    for (VertexId v = 0; v < levels.max_l.size(); ++v)
        if (levels.max_l[v] >= 0) groups[static_cast<std::size_t>(levels.max_l[v])].push_back(v);
    return groups;
}

std::vector<VertexId> core_members(const CoreLevels& levels, int l) {
    std::vector<VertexId> members;
    for (VertexId v = 0; v < levels.max_l.size(); ++v)
        if (levels.max_l[v] >= l) members.push_back(v);
    return members;
}

std::vector<std::vector<VertexId>> weak_components(const DirectedGraph& g,
                                                   std::span<const VertexId> s) {
    PeelingEngine engine(g);
    return engine.components_within(s);
}

std::vector<VertexId> online_csd(const DirectedGraph& g, VertexId q, int k, int l) {
    if (q >= g.vertex_count()) throw Error("query vertex out of range");
    std::vector<char> alive = peel_to_core(g, k, l);
    if (!alive[q]) return {};
    std::vector<VertexId> component{q};
    std::vector<char> seen(g.vertex_count(), 0);
    seen[q] = 1;
    for (std::size_t head = 0; head < component.size(); ++head) {
        VertexId v = component[head];
        auto visit = [&](VertexId w) {
            if (alive[w] && !seen[w]) {
                seen[w] = 1;
                component.push_back(w);
            }
        };
        for (VertexId w : g.out_neighbors(v)) visit(w);
        for (VertexId w : g.in_neighbors(v)) visit(w);
    }
    std::sort(component.begin(), component.end());
    return component;
}

PeelingEngine::PeelingEngine(const DirectedGraph& g)
    : g_(g),
      stamp_(g.vertex_count(), 0),
      in_deg_(g.vertex_count(), 0),
      out_deg_(g.vertex_count(), 0) {}

std::vector<VertexId> PeelingEngine::core_within(std::span<const VertexId> scope, int k, int l) {
    ++epoch_;
    queue_.clear();
    for (VertexId v : scope) stamp_[v] = epoch_;
    // Degrees against the full scope first; removals must not overlap the
    // degree scan or edges get discounted twice.
    for (VertexId v : scope) {
        int din = 0, dout = 0;
        for (VertexId w : g_.out_neighbors(v)) {
            ++edge_touches_;
            if (in_scope(w)) ++dout;
        }
        for (VertexId w : g_.in_neighbors(v)) {
            ++edge_touches_;
            if (in_scope(w)) ++din;
        }
        in_deg_[v] = din;
        out_deg_[v] = dout;
    }
    for (VertexId v : scope) {
        if (in_deg_[v] < k || out_deg_[v] < l) {
            stamp_[v] = 0;
            queue_.push_back(v);
        }
    }
    while (!queue_.empty()) {
        VertexId v = queue_.back();
        queue_.pop_back();
        for (VertexId w : g_.out_neighbors(v)) {
            ++edge_touches_;
            if (in_scope(w) && --in_deg_[w] < k) {
                stamp_[w] = 0;
                queue_.push_back(w);
            }
        }
        for (VertexId w : g_.in_neighbors(v)) {
            ++edge_touches_;
            if (in_scope(w) && --out_deg_[w] < l) {
                stamp_[w] = 0;
                queue_.push_back(w);
            }
        }
    }
    std::vector<VertexId> core;
    for (VertexId v : scope)
        if (in_scope(v)) core.push_back(v);
    return core;
}

std::vector<std::vector<VertexId>> PeelingEngine::components_within(
    std::span<const VertexId> scope) {
    ++epoch_;
    for (VertexId v : scope) stamp_[v] = epoch_;
    std::vector<std::vector<VertexId>> components;
    for (VertexId start : scope) {
        if (!in_scope(start)) continue;
        std::vector<VertexId> component{start};
        stamp_[start] = 0;
        for (std::size_t head = 0; head < component.size(); ++head) {
            VertexId v = component[head];
            auto visit = [&](VertexId w) {
                ++edge_touches_;
                if (in_scope(w)) {
                    stamp_[w] = 0;
                    component.push_back(w);
                }
            };
            for (VertexId w : g_.out_neighbors(v)) visit(w);
            for (VertexId w : g_.in_neighbors(v)) visit(w);
        }
        std::sort(component.begin(), component.end());
        components.push_back(std::move(component));
    }
    return components;
}

std::vector<VertexId> PeelingEngine::community_within(std::span<const VertexId> scope,
                                                      VertexId q, int k, int l) {
    std::vector<VertexId> core = core_within(scope, k, l);
    if (!std::binary_search(core.begin(), core.end(), q)) return {};
    ++epoch_;
    for (VertexId v : core) stamp_[v] = epoch_;
    std::vector<VertexId> component{q};
    stamp_[q] = 0;
    for (std::size_t head = 0; head < component.size(); ++head) {
        VertexId v = component[head];
        auto visit = [&](VertexId w) {
            ++edge_touches_;
            if (in_scope(w)) {
                stamp_[w] = 0;
                component.push_back(w);
            }
        };
        for (VertexId w : g_.out_neighbors(v)) visit(w);
        for (VertexId w : g_.in_neighbors(v)) visit(w);
    }
    std::sort(component.begin(), component.end());
    return component;
}

}  // namespace dforest
