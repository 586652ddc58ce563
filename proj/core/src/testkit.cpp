#include "dforest/testkit.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace dforest::testkit {

DirectedGraph Fixture::graph() const {
    std::ostringstream text;
    for (const auto& [u, v] : edges) text << u << ' ' << v << '\n';
    std::istringstream in(text.str());
    return load_edge_list(in);
}

const std::vector<Fixture>& fixtures() {
    static const std::vector<Fixture> all = [] {
        std::vector<Fixture> f;
        f.push_back({"F1",
                     {{"0", "1"}, {"1", "2"}, {"2", "0"}},
                     "directed 3-cycle"});
        f.push_back({"F2",
                     {{"0", "1"}, {"1", "2"}, {"2", "0"},
                      {"3", "4"}, {"4", "5"}, {"5", "3"}},
                     "two disjoint 3-cycles"});
        Fixture k4{"F3", {}, "bidirected K4"};
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                if (a != b) k4.edges.emplace_back(std::to_string(a), std::to_string(b));
        f.push_back(k4);
        Fixture pendant = k4;
        pendant.name = "F4";
        pendant.commentary = "bidirected K4 plus pendant vertex 4";
        pendant.edges.emplace_back("4", "0");
        pendant.edges.emplace_back("0", "4");
        f.push_back(pendant);
        f.push_back({"F5", {{"0", "1"}, {"1", "2"}}, "path 0->1->2"});
        Fixture bridged{"F7",
                        {{"0", "1"}, {"1", "2"}, {"2", "0"},
                         {"3", "4"}, {"4", "5"}, {"5", "3"},
                         {"2", "3"}},
                        "two 3-cycles joined by one bridge edge"};
        f.push_back(bridged);
        return f;
    }();
    return all;
}

const Fixture& fixture(const std::string& name) {
    for (const Fixture& f : fixtures())
        if (f.name == name) return f;
    throw Error("no fixture named " + name);
}

namespace {

// 53-bit mantissa draw; bit-identical on every platform for a given seed.
double unit_draw(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

DirectedGraph random_digraph(GraphKind kind, std::size_t n, double param, std::uint64_t seed) {
    if (param < 0) throw Error("negative generator parameter");
    std::mt19937_64 rng(seed);
    DirectedGraph g;
    for (std::size_t v = 0; v < n; ++v) g.add_vertex(std::to_string(v));

    if (kind == GraphKind::uniform) {
        if (param > 1) throw Error("edge probability above 1");
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = 0; v < n; ++v) {
                if (u == v) continue;
                if (unit_draw(rng) < param)
                    g.add_edge(static_cast<VertexId>(u), static_cast<VertexId>(v));
            }
        return g;
    }

    // Preferential attachment with random edge orientation: endpoints are
    // sampled from a repeated-endpoint list so attachment is proportional to
    // total degree.
    std::size_t attach = static_cast<std::size_t>(param + 0.5);
    if (attach == 0) throw Error("power-law attachment count must be >= 1");
    std::vector<std::size_t> endpoints;
    std::size_t start = std::min(n, attach + 1);
    for (std::size_t u = 0; u < start; ++u)
        for (std::size_t v = u + 1; v < start; ++v) {
            bool forward = (rng() & 1) != 0;
            g.add_edge(static_cast<VertexId>(forward ? u : v),
                       static_cast<VertexId>(forward ? v : u));
            endpoints.push_back(u);
            endpoints.push_back(v);
        }
    for (std::size_t v = start; v < n; ++v) {
        std::vector<std::size_t> chosen;
        while (chosen.size() < std::min(attach, v)) {
            std::size_t target = endpoints[rng() % endpoints.size()];
            if (target == v) continue;
            if (std::find(chosen.begin(), chosen.end(), target) != chosen.end()) continue;
            chosen.push_back(target);
        }
        for (std::size_t target : chosen) {
            bool forward = (rng() & 1) != 0;
            g.add_edge(static_cast<VertexId>(forward ? v : target),
                       static_cast<VertexId>(forward ? target : v));
            endpoints.push_back(v);
            endpoints.push_back(target);
        }
    }
    return g;
}

std::vector<VertexId> subset_core_oracle(const DirectedGraph& g, int k, int l) {
    const std::size_t n = g.vertex_count();
    if (n > 8) throw Error("subset oracle is capped at n <= 8");
    std::uint32_t best = 0;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        bool ok = true;
        for (std::size_t v = 0; v < n && ok; ++v) {
            if (!(mask & (1u << v))) continue;
            int din = 0, dout = 0;
            for (VertexId w : g.out_neighbors(static_cast<VertexId>(v)))
                if (mask & (1u << w)) ++dout;
            for (VertexId w : g.in_neighbors(static_cast<VertexId>(v)))
                if (mask & (1u << w)) ++din;
            ok = din >= k && dout >= l;
        }
        if (ok) best |= mask;
    }
    std::vector<VertexId> core;
    for (std::size_t v = 0; v < n; ++v)
        if (best & (1u << v)) core.push_back(static_cast<VertexId>(v));
    return core;
}

namespace {

// Naive peel: rescan every member until a full pass removes nothing.
std::vector<char> oracle_peel(const DirectedGraph& g, std::vector<char> member, int k, int l) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (VertexId v = 0; v < g.vertex_count(); ++v) {
            if (!member[v]) continue;
            int din = 0, dout = 0;
            for (VertexId w : g.out_neighbors(v)) dout += member[w];
            for (VertexId w : g.in_neighbors(v)) din += member[w];
            if (din < k || dout < l) {
                member[v] = 0;
                changed = true;
            }
        }
    }
    return member;
}

std::vector<char> oracle_weak_component(const DirectedGraph& g, const std::vector<char>& member,
                                        VertexId q) {
    std::vector<char> seen(g.vertex_count(), 0);
    std::vector<VertexId> queue{q};
    seen[q] = 1;
    while (!queue.empty()) {
        VertexId v = queue.back();
        queue.pop_back();
        for (VertexId w : g.out_neighbors(v))
            if (member[w] && !seen[w]) seen[w] = 1, queue.push_back(w);
        for (VertexId w : g.in_neighbors(v))
            if (member[w] && !seen[w]) seen[w] = 1, queue.push_back(w);
    }
    return seen;
}

std::vector<char> oracle_reach(const DirectedGraph& g, const std::vector<char>& member,
                               VertexId q, bool forward) {
    std::vector<char> seen(g.vertex_count(), 0);
    std::vector<VertexId> queue{q};
    seen[q] = 1;
    while (!queue.empty()) {
        VertexId v = queue.back();
        queue.pop_back();
        auto step = forward ? g.out_neighbors(v) : g.in_neighbors(v);
        for (VertexId w : step)
            if (member[w] && !seen[w]) seen[w] = 1, queue.push_back(w);
    }
    return seen;
}

}  // namespace

std::vector<VertexId> scsd_fixpoint_oracle(const DirectedGraph& g, VertexId q, int k, int l) {
    const std::size_t n = g.vertex_count();
    if (q >= n) throw Error("oracle query vertex out of range");
    std::vector<char> working(n, 1);
    while (true) {
        working = oracle_peel(g, std::move(working), k, l);
        if (!working[q]) return {};
        std::vector<char> community = oracle_weak_component(g, working, q);
        for (VertexId v = 0; v < n; ++v) community[v] = community[v] && working[v];

        // SCC of q by mutual reachability inside the community.
        std::vector<char> fwd = oracle_reach(g, community, q, true);
        std::vector<char> bwd = oracle_reach(g, community, q, false);
        std::vector<char> scc(n, 0);
        for (VertexId v = 0; v < n; ++v) scc[v] = fwd[v] && bwd[v] && community[v];

        bool feasible = true;
        for (VertexId v = 0; v < n && feasible; ++v) {
            if (!scc[v]) continue;
            int din = 0, dout = 0;
            for (VertexId w : g.out_neighbors(v)) dout += scc[w];
            for (VertexId w : g.in_neighbors(v)) din += scc[w];
            feasible = din >= k && dout >= l;
        }
        if (feasible) {
            std::vector<VertexId> answer;
            for (VertexId v = 0; v < n; ++v)
                if (scc[v]) answer.push_back(v);
            return answer;
        }
        working = std::move(scc);
    }
}

}  // namespace dforest::testkit
