// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are fixed here, not configurable.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "dforest/builders.hpp"
#include "dforest/core_decomp.hpp"
#include "dforest/cuf.hpp"
#include "dforest/index_io.hpp"
#include "dforest/maintenance.hpp"
#include "dforest/scsd.hpp"
#include "dforest/testkit.hpp"

using namespace dforest;
using Clock = std::chrono::steady_clock;

namespace {

struct Harness {
    int failures = 0;

    void report(int criterion, bool pass, const std::string& detail) {
        std::printf("%-4s criterion-%02d: %s\n", pass ? "PASS" : "FAIL", criterion,
                    detail.c_str());
        std::fflush(stdout);
        failures += !pass;
    }
};

// Criterion-1 corpus: 30 seeded random digraphs across n in {20,50,200},
// uniform and power-law, plus every fixture.
std::vector<DirectedGraph> corpus() {
    std::vector<DirectedGraph> graphs;
    for (const auto& fixture : testkit::fixtures()) graphs.push_back(fixture.graph());
    struct Recipe {
        testkit::GraphKind kind;
        std::size_t n;
        double param;
    };
    const Recipe recipes[] = {
        {testkit::GraphKind::uniform, 20, 0.20},
        {testkit::GraphKind::uniform, 50, 0.10},
        {testkit::GraphKind::uniform, 200, 0.03},
        {testkit::GraphKind::power_law, 20, 2},
        {testkit::GraphKind::power_law, 50, 3},
        {testkit::GraphKind::power_law, 200, 4},
    };
    std::uint64_t seed = 1;
    for (const Recipe& recipe : recipes)
        for (int i = 0; i < 5; ++i)
            graphs.push_back(testkit::random_digraph(recipe.kind, recipe.n, recipe.param, seed++));
    return graphs;
}

double us(Clock::duration d) { return std::chrono::duration<double, std::micro>(d).count(); }

}  // namespace

// 1. query_csd == online_csd for every vertex and threshold pair, plus
// 4. nodes_visited <= |C| + 1 on every nonempty answer.
static void criteria_1_and_4(Harness& h, const std::vector<DirectedGraph>& graphs,
                             std::vector<DForest>& forests) {
    auto started = Clock::now();
    std::size_t queries = 0;
    std::size_t visit_violations = 0;
    std::string mismatch;
    for (const DirectedGraph& g : graphs) {
        DForest f = build_bottomup(g);
        for (int k = 0; k <= f.meta.k_max && mismatch.empty(); ++k) {
            CoreLevels levels = decompose_for_k(g, k);
            for (int l = 0; l <= levels.l_max; ++l) {
                std::vector<VertexId> core = core_members(levels, l);
                auto components = weak_components(g, core);
                std::vector<std::int32_t> component_of(g.vertex_count(), -1);
                for (std::size_t c = 0; c < components.size(); ++c)
                    for (VertexId v : components[c]) component_of[v] = static_cast<std::int32_t>(c);
                for (VertexId q = 0; q < g.vertex_count(); ++q) {
                    CommunityResult got = query_csd(f, q, k, l);
                    const std::vector<VertexId> empty;
                    const std::vector<VertexId>& want =
                        component_of[q] >= 0 ? components[static_cast<std::size_t>(component_of[q])]
                                             : empty;
                    ++queries;
                    if (got.vertices != want) {
                        std::ostringstream what;
                        what << "mismatch n=" << g.vertex_count() << " q=" << q << " k=" << k
                             << " l=" << l;
                        mismatch = what.str();
                        break;
                    }
                    if (!got.vertices.empty() && got.nodes_visited > got.vertices.size() + 1)
                        ++visit_violations;
                }
            }
        }
        forests.push_back(std::move(f));
    }
    double seconds = std::chrono::duration<double>(Clock::now() - started).count();
    {
        std::ostringstream detail;
        detail << queries << " queries against online_csd";
        if (!mismatch.empty()) detail << "; first " << mismatch;
        detail << " (" << seconds << "s, budget 300s)";
        h.report(1, mismatch.empty() && seconds < 300.0, detail.str());
    }
    {
        std::ostringstream detail;
        detail << visit_violations << " nodes_visited violations over " << queries << " queries";
        h.report(4, visit_violations == 0, detail.str());
    }
}

// 2. kl_core == subset enumeration on 200 seeded graphs with n <= 8.
static void criterion_2(Harness& h) {
    std::size_t graphs = 0, mismatches = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        std::size_t n = 4 + seed % 5;
        double p = 0.15 + 0.05 * static_cast<double>(seed % 5);
        DirectedGraph g = testkit::random_digraph(testkit::GraphKind::uniform, n, p, 1000 + seed);
        ++graphs;
        for (int k = 0; k <= 4; ++k)
            for (int l = 0; l <= 4; ++l)
                if (kl_core(g, k, l) != testkit::subset_core_oracle(g, k, l)) ++mismatches;
    }
    std::ostringstream detail;
    detail << graphs << " graphs exhaustively enumerated, " << mismatches << " mismatches";
    h.report(2, graphs == 200 && mismatches == 0, detail.str());
}

// 3. TopDown and BottomUp canonical bytes are identical on the whole corpus.
static void criterion_3(Harness& h, const std::vector<DirectedGraph>& graphs,
                        const std::vector<DForest>& forests) {
    std::size_t disagreements = 0;
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        DForest top = build_topdown(graphs[i]);
        if (index_bytes(top) != index_bytes(forests[i])) ++disagreements;
    }
    std::ostringstream detail;
    detail << graphs.size() << " corpus graphs, " << disagreements << " builder disagreements";
    h.report(3, disagreements == 0, detail.str());
}

// 5. Serialized size stays within a 3x bytes-per-edge band over m in
// {1e4, 1e5, 1e6}, and stored vertex entries stay within 2m.
static void criterion_5(Harness& h) {
    struct Point {
        std::size_t n;
        double bytes_per_edge;
        bool entries_ok;
        std::size_t m;
    };
    std::vector<Point> points;
    for (std::size_t n : {2500u, 25000u, 250000u}) {
        DirectedGraph g = testkit::random_digraph(testkit::GraphKind::power_law, n, 4, 77);
        DForest f = build_bottomup(g);
        std::string bytes = index_bytes(f);
        std::uint64_t entries = total_vertex_entries(f);
        points.push_back({n, static_cast<double>(bytes.size()) / static_cast<double>(g.edge_count()),
                          entries <= 2 * g.edge_count(), g.edge_count()});
    }
    double low = points[0].bytes_per_edge, high = points[0].bytes_per_edge;
    bool entries_ok = true;
    std::ostringstream detail;
    detail << "bytes/m:";
    for (const Point& point : points) {
        low = std::min(low, point.bytes_per_edge);
        high = std::max(high, point.bytes_per_edge);
        entries_ok = entries_ok && point.entries_ok;
        detail << ' ' << point.bytes_per_edge << "@m=" << point.m;
    }
    detail << " ratio " << high / low << " (<3), entries<=2m " << (entries_ok ? "yes" : "no");
    h.report(5, high / low < 3.0 && entries_ok, detail.str());
}

// 6. kmax and l_max within (sqrt(4m+1)-1)/2 on the whole corpus.
static void criterion_6(Harness& h, const std::vector<DirectedGraph>& graphs) {
    std::size_t violations = 0, checked = 0;
    for (const DirectedGraph& g : graphs) {
        double cap = (std::sqrt(4.0 * static_cast<double>(g.edge_count()) + 1.0) - 1.0) / 2.0;
        int kmax = max_k(g);
        ++checked;
        if (kmax > cap) ++violations;
        for (int k = 0; k <= kmax; ++k)
            if (decompose_for_k(g, k).l_max > cap) ++violations;
    }
    std::ostringstream detail;
    detail << checked << " graphs, " << violations << " degeneracy-bound violations";
    h.report(6, violations == 0, detail.str());
}

// 7. BottomUp wall time at most half of TopDown on an m ~= 1e6 power-law graph.
// 8. Mean IDX-Q time at least 5x under the online oracle on the same graph.
static void criteria_7_and_8(Harness& h) {
    DirectedGraph g = testkit::random_digraph(testkit::GraphKind::power_law, 125000, 8, 2024);

    BuildStats top_stats, bottom_stats;
    DForest bottom = build_bottomup(g, &bottom_stats);
    DForest top = build_topdown(g, &top_stats);
    bool equal = index_bytes(top) == index_bytes(bottom);
    double top_s = std::chrono::duration<double>(top_stats.elapsed).count();
    double bottom_s = std::chrono::duration<double>(bottom_stats.elapsed).count();
    {
        std::ostringstream detail;
        detail << "m=" << g.edge_count() << " topdown " << top_s << "s / bottomup " << bottom_s
               << "s = " << top_s / bottom_s << " (need >=2, builders "
               << (equal ? "equal" : "DIFFER") << ")";
        h.report(7, equal && bottom_s * 2.0 <= top_s, detail.str());
    }

    int k = 8;
    std::vector<VertexId> pool = kl_core(g, k, k);
    while (pool.empty() && k > 0) {
        --k;
        pool = kl_core(g, k, k);
    }
    std::mt19937_64 rng(42);
    double idx_total_us = 0, oracle_total_us = 0;
    const int query_count = 200;
    bool agree = true;
    for (int i = 0; i < query_count; ++i) {
        VertexId q = pool[rng() % pool.size()];
        auto t0 = Clock::now();
        CommunityResult idx = query_csd(bottom, q, k, k);
        auto t1 = Clock::now();
        std::vector<VertexId> oracle = online_csd(g, q, k, k);
        auto t2 = Clock::now();
        idx_total_us += us(t1 - t0);
        oracle_total_us += us(t2 - t1);
        agree = agree && idx.vertices == oracle;
    }
    std::ostringstream detail;
    detail << "k=l=" << k << " mean idx " << idx_total_us / query_count << "us vs oracle "
           << oracle_total_us / query_count << "us, ratio "
           << oracle_total_us / std::max(idx_total_us, 1e-9) << " (need >=5, answers "
           << (agree ? "equal" : "DIFFER") << ")";
    h.report(8, agree && idx_total_us * 5.0 <= oracle_total_us, detail.str());
}

// 9. query_scsd equals the independent fixpoint oracle, and nonempty answers
// pass the SCC + feasibility + fixpoint triple check.
static void criterion_9(Harness& h, const std::vector<DirectedGraph>& graphs) {
    std::size_t checked = 0, mismatches = 0, triple_failures = 0;
    for (const DirectedGraph& g : graphs) {
        if (g.vertex_count() > 100 || g.vertex_count() == 0) continue;
        DForest f = build_bottomup(g);
        int reach = std::min(f.meta.k_max + 1, 4);
        for (int k = 0; k <= reach; ++k)
            for (int l = 0; l <= reach; ++l)
                for (VertexId q = 0; q < g.vertex_count(); ++q) {
                    CommunityResult got = query_scsd(g, f, q, k, l);
                    std::vector<VertexId> want = testkit::scsd_fixpoint_oracle(g, q, k, l);
                    ++checked;
                    if (got.vertices != want) {
                        ++mismatches;
                        continue;
                    }
                    if (got.vertices.empty()) continue;
                    if (scc_of(g, got.vertices, q) != got.vertices) ++triple_failures;
                    std::vector<char> member(g.vertex_count(), 0);
                    for (VertexId v : got.vertices) member[v] = 1;
                    for (VertexId v : got.vertices) {
                        int din = 0, dout = 0;
                        for (VertexId w : g.out_neighbors(v)) dout += member[w];
                        for (VertexId w : g.in_neighbors(v)) din += member[w];
                        if (din < k || dout < l) ++triple_failures;
                    }
                    DirectedGraph sub = g.induced_subgraph(got.vertices);
                    VertexId sub_q = sub.require_label(g.label(q));
                    if (testkit::scsd_fixpoint_oracle(sub, sub_q, k, l).size() !=
                        got.vertices.size())
                        ++triple_failures;
                }
    }
    std::ostringstream detail;
    detail << checked << " scsd queries, " << mismatches << " oracle mismatches, "
           << triple_failures << " triple-check failures";
    h.report(9, mismatches == 0 && triple_failures == 0, detail.str());
}

// 10. 1000 seeded edge updates on G(100, 0.05): canonical equality with a
// fresh rebuild after every op.
static void criterion_10(Harness& h) {
    auto started = Clock::now();
    DirectedGraph g = testkit::random_digraph(testkit::GraphKind::uniform, 100, 0.05, 3);
    MaintainableIndex ix(std::move(g));
    std::mt19937_64 rng(3);
    std::size_t divergences = 0, applied = 0;
    for (int op = 0; op < 1000; ++op) {
        std::string u = std::to_string(rng() % 100);
        std::string v = std::to_string(rng() % 100);
        MaintenanceReport report =
            (rng() & 1) ? ix.insert_edge(u, v) : ix.delete_edge(u, v);
        applied += report.applied;
        if (!ix.matches_rebuild()) ++divergences;
    }
    double seconds = std::chrono::duration<double>(Clock::now() - started).count();
    std::ostringstream detail;
    detail << "1000 ops (" << applied << " applied), " << divergences << " divergences ("
           << seconds << "s, budget 600s)";
    h.report(10, divergences == 0 && seconds < 600.0, detail.str());
}

// 11. CUF partitions equal a naive reference over 1e5 random ops; chain steps
// stay within 5 per operation.
static void criterion_11(Harness& h) {
    const std::size_t n = 1000;
    std::vector<std::size_t> naive(n);
    for (std::size_t i = 0; i < n; ++i) naive[i] = i;
    auto naive_unite = [&naive](std::size_t u, std::size_t v) {
        std::size_t from = naive[v], to = naive[u];
        if (from == to) return;
        for (auto& c : naive)
            if (c == from) c = to;
    };

    std::vector<int> cur(n, 0);
    CoreUnionFind cuf(n);
    for (VertexId v = 0; v < n; ++v) cuf.make_set(v);
    std::mt19937_64 rng(5);
    std::uint64_t ops = n;
    cuf.reset_parent_steps();
    std::size_t partition_mismatches = 0;
    for (int op = 0; op < 100000; ++op) {
        VertexId u = static_cast<VertexId>(rng() % n);
        VertexId v = static_cast<VertexId>(rng() % n);
        if (op % 2 == 0) {
            cuf.unite(u, v, cur);
            naive_unite(u, v);
            ops += 3;  // one union costs two finds plus the link
        } else {
            if ((cuf.find(u) == cuf.find(v)) != (naive[u] == naive[v])) ++partition_mismatches;
            ops += 2;
        }
    }
    for (VertexId v = 1; v < n; ++v)
        if ((cuf.find(v) == cuf.find(0)) != (naive[v] == naive[0])) ++partition_mismatches;
    double steps_per_op = static_cast<double>(cuf.parent_steps()) / static_cast<double>(ops);
    std::ostringstream detail;
    detail << "1e5 ops, " << partition_mismatches << " partition mismatches, "
           << steps_per_op << " chain steps/op (<=5)";
    h.report(11, partition_mismatches == 0 && steps_per_op <= 5.0, detail.str());
}

int main() {
    Harness h;
    std::vector<DirectedGraph> graphs = corpus();
    std::vector<DForest> forests;
    criteria_1_and_4(h, graphs, forests);
    criterion_2(h);
    criterion_3(h, graphs, forests);
    criterion_5(h);
    criterion_6(h, graphs);
    criteria_7_and_8(h);
    criterion_9(h, graphs);
    criterion_10(h);
    criterion_11(h);
    if (h.failures) {
        std::printf("%d criterion(s) failed\n", h.failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
