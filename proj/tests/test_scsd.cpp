#include <doctest.h>

#include <algorithm>

#include "dforest/builders.hpp"
#include "dforest/scsd.hpp"
#include "dforest/testkit.hpp"

using namespace dforest;

TEST_CASE("scc_of on the pinned shapes") {
    DirectedGraph cycle = testkit::fixture("F1").graph();
    std::vector<VertexId> all{0, 1, 2};
    CHECK(scc_of(cycle, all, 0) == std::vector<VertexId>{0, 1, 2});

    DirectedGraph path = testkit::fixture("F5").graph();
    std::vector<VertexId> everything{0, 1, 2};
    CHECK(scc_of(path, everything, 1) == std::vector<VertexId>{1});

    DirectedGraph joined = testkit::fixture("F7").graph();
    std::vector<VertexId> six{0, 1, 2, 3, 4, 5};
    CHECK(scc_of(joined, six, 0) == std::vector<VertexId>{0, 1, 2});
    CHECK_THROWS_AS(scc_of(joined, std::vector<VertexId>{0, 1}, 4), Error);
}

TEST_CASE("scsd on the joined cycles resolves in one split") {
    DirectedGraph g = testkit::fixture("F7").graph();
    DForest f = build_bottomup(g);
    CHECK(query_scsd(g, f, 0, 1, 1).vertices == std::vector<VertexId>{0, 1, 2});
    CHECK(query_scsd(g, f, 3, 1, 1).vertices == std::vector<VertexId>{3, 4, 5});
    // CSD sees all six as one community.
    CHECK(query_csd(f, 0, 1, 1).vertices.size() == 6);
}

TEST_CASE("scsd equals the independent fixpoint oracle on random graphs") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        DirectedGraph g =
            testkit::random_digraph(testkit::GraphKind::uniform, 40 + 10 * (seed % 3), 0.08, seed);
        DForest f = build_bottomup(g);
        for (int k = 0; k <= f.meta.k_max + 1; ++k)
            for (int l = 0; l <= f.meta.k_max + 1; ++l)
                for (VertexId q = 0; q < g.vertex_count(); q += 3) {
                    CommunityResult got = query_scsd(g, f, q, k, l);
                    std::vector<VertexId> want = testkit::scsd_fixpoint_oracle(g, q, k, l);
                    REQUIRE(got.vertices == want);
                }
    }
}

TEST_CASE("every nonempty scsd answer passes the triple check") {
    DirectedGraph g = testkit::random_digraph(testkit::GraphKind::uniform, 60, 0.09, 17);
    DForest f = build_bottomup(g);
    int nonempty = 0;
    for (int k = 1; k <= 2; ++k)
        for (int l = 1; l <= 2; ++l)
            for (VertexId q = 0; q < g.vertex_count(); ++q) {
                CommunityResult r = query_scsd(g, f, q, k, l);
                if (r.vertices.empty()) continue;
                ++nonempty;
                // contains q
                CHECK(std::binary_search(r.vertices.begin(), r.vertices.end(), q));
                // strongly connected
                CHECK(scc_of(g, r.vertices, q) == r.vertices);
                // degree-feasible
                std::vector<char> member(g.vertex_count(), 0);
                for (VertexId v : r.vertices) member[v] = 1;
                for (VertexId v : r.vertices) {
                    int din = 0, dout = 0;
                    for (VertexId w : g.out_neighbors(v)) dout += member[w];
                    for (VertexId w : g.in_neighbors(v)) din += member[w];
                    CHECK(din >= k);
                    CHECK(dout >= l);
                }
                // answers are subsets of the CSD community
                CommunityResult csd = query_csd(f, q, k, l);
                CHECK(std::includes(csd.vertices.begin(), csd.vertices.end(),
                                    r.vertices.begin(), r.vertices.end()));
                // fixpoint: a second pass returns the same set
                DirectedGraph sub = g.induced_subgraph(r.vertices);
                DForest sub_forest = build_bottomup(sub);
                VertexId sub_q = sub.require_label(g.label(q));
                CommunityResult again = query_scsd(sub, sub_forest, sub_q, k, l);
                CHECK(again.vertices.size() == r.vertices.size());
            }
    CHECK(nonempty > 0);
}
