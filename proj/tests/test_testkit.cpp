#include <doctest.h>

#include "dforest/core_decomp.hpp"
#include "dforest/testkit.hpp"

using namespace dforest;

TEST_CASE("fixtures carry the pinned shapes") {
    DirectedGraph f1 = testkit::fixture("F1").graph();
    CHECK(f1.vertex_count() == 3);
    CHECK(f1.edge_count() == 3);

    DirectedGraph f3 = testkit::fixture("F3").graph();
    CHECK(f3.edge_count() == 12);

    DirectedGraph f7 = testkit::fixture("F7").graph();
    CHECK(weak_components(f7, kl_core(f7, 0, 0)).size() == 1);
    // weakly connected but not strongly: 3 cannot reach 0
    std::vector<char> seen(f7.vertex_count(), 0);
    std::vector<VertexId> queue{3};
    seen[3] = 1;
    while (!queue.empty()) {
        VertexId v = queue.back();
        queue.pop_back();
        for (VertexId w : f7.out_neighbors(v))
            if (!seen[w]) seen[w] = 1, queue.push_back(w);
    }
    CHECK(!seen[0]);

    CHECK(testkit::fixtures().size() == 6);
    CHECK_THROWS_AS(testkit::fixture("F6"), Error);
}

TEST_CASE("generators are deterministic per seed") {
    DirectedGraph a = testkit::random_digraph(testkit::GraphKind::uniform, 50, 0.1, 42);
    DirectedGraph b = testkit::random_digraph(testkit::GraphKind::uniform, 50, 0.1, 42);
    CHECK(same_graph(a, b));
    DirectedGraph c = testkit::random_digraph(testkit::GraphKind::uniform, 50, 0.1, 43);
    CHECK(!same_graph(a, c));

    DirectedGraph p = testkit::random_digraph(testkit::GraphKind::power_law, 300, 4, 9);
    DirectedGraph q = testkit::random_digraph(testkit::GraphKind::power_law, 300, 4, 9);
    CHECK(same_graph(p, q));
    CHECK(testkit::random_digraph(testkit::GraphKind::uniform, 0, 0.5, 1).vertex_count() == 0);
}

TEST_CASE("power-law graphs skew their degree distributions") {
    DirectedGraph g = testkit::random_digraph(testkit::GraphKind::power_law, 400, 3, 5);
    std::size_t max_total = 0;
    for (VertexId v = 0; v < g.vertex_count(); ++v)
        max_total = std::max(max_total, g.in_degree(v) + g.out_degree(v));
    // Preferential attachment concentrates degree well above the mean.
    double mean = 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(g.vertex_count());
    CHECK(static_cast<double>(max_total) > 4 * mean);
}

TEST_CASE("the subset oracle rejects graphs beyond its cap") {
    DirectedGraph big = testkit::random_digraph(testkit::GraphKind::uniform, 9, 0.3, 1);
    CHECK_THROWS_AS(testkit::subset_core_oracle(big, 1, 1), Error);
}

TEST_CASE("subset oracle agrees with definition corners") {
    CHECK(testkit::subset_core_oracle(testkit::fixture("F1").graph(), 1, 1) ==
          std::vector<VertexId>{0, 1, 2});
    CHECK(testkit::subset_core_oracle(testkit::fixture("F5").graph(), 1, 1).empty());
}
