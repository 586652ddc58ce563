#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dforest/builders.hpp"
#include "dforest/core_decomp.hpp"
#include "dforest/index_io.hpp"
#include "dforest/maintenance.hpp"
#include "dforest/scsd.hpp"
#include "dforest/testkit.hpp"

namespace {

using nlohmann::json;
using namespace dforest;

constexpr int kExitOk = 0;
constexpr int kExitIo = 2;
constexpr int kExitUnknownVertex = 3;
constexpr int kExitVerifyFailed = 4;

double to_us(std::chrono::nanoseconds d) {
    return std::chrono::duration<double, std::micro>(d).count();
}

struct BuildOptions {
    std::string graph_path;
    std::string index_path;
    std::string method = "bottomup";
    std::string format = "text";
};

int run_build(const BuildOptions& opt) {
    LoadStats stats;
    DirectedGraph g = load_edge_list_file(opt.graph_path, &stats);
    BuildStats build_stats;
    DForest f = opt.method == "topdown" ? build_topdown(g, &build_stats)
                                        : build_bottomup(g, &build_stats);
    if (!opt.index_path.empty()) save_index_file(f, opt.index_path);

    json out{{"n", f.meta.n},
             {"m", f.meta.m},
             {"kmax", f.meta.k_max},
             {"build_time_us", to_us(build_stats.elapsed)},
             {"peak_node_count", build_stats.peak_node_count},
             {"method", opt.method},
             {"duplicate_edges", stats.duplicate_edges},
             {"self_loops", stats.self_loops}};
    if (opt.format == "json") {
        std::cout << out.dump() << '\n';
    } else if (opt.format == "csv") {
        std::cout << "n,m,kmax,build_time_us,peak_node_count,method\n"
                  << f.meta.n << ',' << f.meta.m << ',' << f.meta.k_max << ','
                  << to_us(build_stats.elapsed) << ',' << build_stats.peak_node_count << ','
                  << opt.method << '\n';
    } else {
        std::cout << "n: " << f.meta.n << "\nm: " << f.meta.m << "\nkmax: " << f.meta.k_max
                  << "\nbuild_time_us: " << to_us(build_stats.elapsed)
                  << "\npeak_node_count: " << build_stats.peak_node_count
                  << "\nmethod: " << opt.method << '\n';
        if (stats.self_loops || stats.duplicate_edges)
            std::cout << "dropped: " << stats.self_loops << " self-loops, "
                      << stats.duplicate_edges << " duplicate edges\n";
    }
    return kExitOk;
}

struct QueryOptions {
    std::string index_path;
    std::string graph_path;
    std::string vertex;
    int k = 1;
    int l = 1;
    bool scsd = false;
    std::string format = "text";
};

int run_query(const QueryOptions& opt) {
    DForest f = load_index_file(opt.index_path);
    auto q = f.find_label(opt.vertex);
    if (!q) {
        std::cerr << "unknown vertex label: " << opt.vertex << '\n';
        return kExitUnknownVertex;
    }
    CommunityResult result;
    if (opt.scsd) {
        if (opt.graph_path.empty()) {
            std::cerr << "--scsd requires --graph\n";
            return kExitIo;
        }
        DirectedGraph g = load_edge_list_file(opt.graph_path);
        if (g.vertex_count() != f.meta.n || g.edge_count() != f.meta.m) {
            std::cerr << "index does not match graph\n";
            return kExitIo;
        }
        result = query_scsd(g, f, *q, opt.k, opt.l);
    } else {
        result = query_csd(f, *q, opt.k, opt.l);
    }

    std::vector<std::string> labels = sorted_labels(f, result.vertices);
    if (opt.format == "json") {
        json out{{"community", labels},
                 {"size", result.vertices.size()},
                 {"nodes_visited", result.nodes_visited},
                 {"time_us", to_us(result.elapsed)}};
        std::cout << out.dump() << '\n';
    } else {
        std::cout << "community:";
        if (labels.empty()) std::cout << " (empty)";
        for (const std::string& label : labels) std::cout << ' ' << label;
        std::cout << "\nsize: " << result.vertices.size()
                  << "\nnodes_visited: " << result.nodes_visited
                  << "\ntime_us: " << to_us(result.elapsed) << '\n';
    }
    return kExitOk;
}

struct VerifyOptions {
    std::string graph_path;
    std::string index_path;
    std::size_t max_queries = 0;  // 0 = unlimited
};

int run_verify(const VerifyOptions& opt) {
    DirectedGraph g = load_edge_list_file(opt.graph_path);

    auto fail = [](const std::string& what) {
        std::cout << "verify: FAIL " << what << '\n';
        return kExitVerifyFailed;
    };

    BuildStats td_stats, bu_stats;
    DForest top = build_topdown(g, &td_stats);
    DForest bottom = build_bottomup(g, &bu_stats);
    if (!canonical_equal(top, bottom)) return fail("builders disagree");
    if (index_bytes(top) != index_bytes(bottom)) return fail("canonical bytes differ");
    std::cout << "builders: equal (" << bottom.meta.k_max + 1 << " trees)\n";

    if (!opt.index_path.empty()) {
        DForest loaded = load_index_file(opt.index_path);
        if (!canonical_equal(loaded, bottom)) return fail("stored index does not match graph");
        std::cout << "stored index: matches\n";
    }

    if (auto violation = validate(bottom, g)) return fail(*violation);
    std::cout << "structure: valid\n";

    double degeneracy_cap = (std::sqrt(4.0 * static_cast<double>(g.edge_count()) + 1.0) - 1.0) / 2.0;
    if (bottom.meta.k_max > degeneracy_cap) return fail("kmax above degeneracy bound");

    std::size_t checked = 0;
    bool budget_hit = false;
    for (int k = 0; k <= bottom.meta.k_max && !budget_hit; ++k) {
        CoreLevels levels = decompose_for_k(g, k);
        if (levels.l_max > degeneracy_cap) return fail("lmax above degeneracy bound");
        for (int l = 0; l <= levels.l_max && !budget_hit; ++l) {
            std::vector<VertexId> core = kl_core(g, k, l);
            auto components = weak_components(g, core);
            std::vector<std::int32_t> component_of(g.vertex_count(), -1);
            for (std::size_t c = 0; c < components.size(); ++c)
                for (VertexId v : components[c]) component_of[v] = static_cast<std::int32_t>(c);
            for (VertexId q = 0; q < g.vertex_count(); ++q) {
                CommunityResult got = query_csd(bottom, q, k, l);
                const std::vector<VertexId>* want = nullptr;
                std::vector<VertexId> empty;
                want = component_of[q] >= 0
                           ? &components[static_cast<std::size_t>(component_of[q])]
                           : &empty;
                if (got.vertices != *want) {
                    std::ostringstream what;
                    what << "query mismatch at q=" << g.label(q) << " k=" << k << " l=" << l;
                    return fail(what.str());
                }
                if (!got.vertices.empty() && got.nodes_visited > got.vertices.size() + 1) {
                    std::ostringstream what;
                    what << "nodes_visited bound broken at q=" << g.label(q) << " k=" << k
                         << " l=" << l;
                    return fail(what.str());
                }
                ++checked;
                if (opt.max_queries && checked >= opt.max_queries) {
                    budget_hit = true;
                    break;
                }
            }
        }
    }
    std::cout << "queries: " << checked << " checked against the online oracle\n";

    if (g.vertex_count() <= 100) {
        std::size_t scsd_checked = 0;
        for (int k = 0; k <= bottom.meta.k_max + 1 && !budget_hit; ++k)
            for (int l = 0; l <= bottom.meta.k_max + 1 && !budget_hit; ++l)
                for (VertexId q = 0; q < g.vertex_count(); ++q) {
                    CommunityResult got = query_scsd(g, bottom, q, k, l);
                    std::vector<VertexId> want = testkit::scsd_fixpoint_oracle(g, q, k, l);
                    if (got.vertices != want) {
                        std::ostringstream what;
                        what << "scsd mismatch at q=" << g.label(q) << " k=" << k << " l=" << l;
                        return fail(what.str());
                    }
                    ++scsd_checked;
                    if (opt.max_queries && checked + scsd_checked >= 2 * opt.max_queries) {
                        budget_hit = true;
                        break;
                    }
                }
        std::cout << "scsd: " << scsd_checked << " checked against the fixpoint oracle\n";
    }

    std::cout << "verify: PASS\n";
    return kExitOk;
}

struct BenchOptions {
    std::string graph_path;
    std::size_t queries = 200;
    int k = 8;
    std::uint64_t seed = 1;
    std::string format = "csv";
};

int run_bench(const BenchOptions& opt) {
    DirectedGraph g = load_edge_list_file(opt.graph_path);
    DForest f = build_bottomup(g);

    int k = opt.k;
    std::vector<VertexId> pool = kl_core(g, k, k);
    while (pool.empty() && k > 0) {
        --k;
        pool = kl_core(g, k, k);
    }
    if (k != opt.k)
        std::cerr << "warning: (" << opt.k << "," << opt.k << ")-core is empty, using k=l=" << k
                  << '\n';

    std::mt19937_64 rng(opt.seed);
    std::vector<VertexId> picks;
    for (std::size_t i = 0; i < opt.queries && !pool.empty(); ++i)
        picks.push_back(pool[rng() % pool.size()]);

    auto median3 = [](auto&& run) {
        std::array<double, 3> us{};
        for (double& sample : us) {
            auto before = std::chrono::steady_clock::now();
            run();
            sample = to_us(std::chrono::steady_clock::now() - before);
        }
        std::sort(us.begin(), us.end());
        return us[1];
    };

    json rows = json::array();
    std::ostringstream csv;
    csv << "query,community_size,idx_us,oracle_us,nodes_visited\n";
    for (VertexId q : picks) {
        CommunityResult idx_result;
        double idx_us = median3([&] { idx_result = query_csd(f, q, k, k); });
        std::vector<VertexId> oracle_result;
        double oracle_us = median3([&] { oracle_result = online_csd(g, q, k, k); });
        if (idx_result.vertices != oracle_result) {
            std::cerr << "index/oracle mismatch at q=" << g.label(q) << '\n';
            return kExitVerifyFailed;
        }
        csv << g.label(q) << ',' << idx_result.vertices.size() << ',' << idx_us << ','
            << oracle_us << ',' << idx_result.nodes_visited << '\n';
        rows.push_back({{"query", g.label(q)},
                        {"community_size", idx_result.vertices.size()},
                        {"idx_us", idx_us},
                        {"oracle_us", oracle_us},
                        {"nodes_visited", idx_result.nodes_visited}});
    }
    if (opt.format == "json")
        std::cout << rows.dump() << '\n';
    else
        std::cout << csv.str();
    return kExitOk;
}

int run_dump(const std::string& index_path) {
    DForest f = load_index_file(index_path);
    dump_text(f, std::cout);
    return kExitOk;
}

struct MaintainOptions {
    std::string index_path;
    std::string graph_path;
    std::string ops_path;
    std::string output_path;
    bool check_rebuild = false;
};

int run_maintain(const MaintainOptions& opt) {
    DirectedGraph g = load_edge_list_file(opt.graph_path);
    DForest f = load_index_file(opt.index_path);
    std::ifstream ops_in(opt.ops_path);
    if (!ops_in) {
        std::cerr << "cannot open " << opt.ops_path << '\n';
        return kExitIo;
    }
    // The whole stream parses before anything is applied: a malformed op must
    // not leave a half-updated index behind.
    std::vector<UpdateOp> ops = parse_update_stream(ops_in);

    MaintainableIndex index(std::move(g), std::move(f));
    std::size_t applied = 0;
    for (std::size_t i = 0; i < ops.size(); ++i) {
        MaintenanceReport report = index.apply(ops[i]);
        std::cout << "op " << (i + 1) << ": "
                  << (report.applied ? "applied" : "no-op: " + report.note)
                  << " time_us=" << to_us(report.elapsed)
                  << " affected_trees=" << report.affected_tree_count();
        if (!report.rebuilt_trees.empty()) {
            std::cout << " rebuilt=[";
            for (std::size_t j = 0; j < report.rebuilt_trees.size(); ++j)
                std::cout << (j ? "," : "") << report.rebuilt_trees[j];
            std::cout << ']';
        }
        if (!report.fast_path_trees.empty()) {
            std::cout << " moved=[";
            for (std::size_t j = 0; j < report.fast_path_trees.size(); ++j)
                std::cout << (j ? "," : "") << report.fast_path_trees[j];
            std::cout << ']';
        }
        std::cout << '\n';
        applied += report.applied;
        if (opt.check_rebuild && !index.matches_rebuild()) {
            std::cerr << "maintained forest diverged from rebuild after op " << (i + 1) << '\n';
            return kExitVerifyFailed;
        }
    }
    if (!opt.output_path.empty()) save_index_file(index.forest(), opt.output_path);
    std::cout << "applied " << applied << " of " << ops.size() << " ops\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"D-Forest community search over directed graphs"};
    app.require_subcommand(1);

    BuildOptions build_opt;
    CLI::App* build = app.add_subcommand("build", "build an index from an edge list");
    build->add_option("--graph", build_opt.graph_path, "edge-list file (.gz ok)")->required();
    build->add_option("--output,-o", build_opt.index_path, "index file to write");
    build->add_option("--method", build_opt.method, "builder")
        ->check(CLI::IsMember({"topdown", "bottomup"}));
    build->add_option("--format", build_opt.format, "output format")
        ->check(CLI::IsMember({"text", "csv", "json"}));

    QueryOptions query_opt;
    CLI::App* query = app.add_subcommand("query", "answer a community query");
    query->add_option("--index", query_opt.index_path, "index file")->required();
    query->add_option("--q", query_opt.vertex, "query vertex label")->required();
    query->add_option("--k", query_opt.k, "in-degree bound")->required();
    query->add_option("--l", query_opt.l, "out-degree bound")->required();
    query->add_flag("--scsd", query_opt.scsd, "strongly connected variant");
    query->add_option("--graph", query_opt.graph_path, "edge list (required with --scsd)");
    query->add_option("--format", query_opt.format, "output format")
        ->check(CLI::IsMember({"text", "json"}));

    VerifyOptions verify_opt;
    CLI::App* verify = app.add_subcommand("verify", "check builders, index and oracles");
    verify->add_option("--graph", verify_opt.graph_path, "edge-list file")->required();
    verify->add_option("--index", verify_opt.index_path, "stored index to cross-check");
    verify->add_option("--max-queries", verify_opt.max_queries, "query budget (0 = all)");

    BenchOptions bench_opt;
    CLI::App* bench = app.add_subcommand("bench", "time index queries against the online oracle");
    bench->add_option("--graph", bench_opt.graph_path, "edge-list file")->required();
    bench->add_option("--queries", bench_opt.queries, "number of query vertices");
    bench->add_option("--k", bench_opt.k, "k = l threshold (falls back when core is empty)");
    bench->add_option("--seed", bench_opt.seed, "sampling seed");
    bench->add_option("--format", bench_opt.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));

    std::string dump_index_path;
    CLI::App* dump = app.add_subcommand("dump", "print an index as diffable text");
    dump->add_option("--index", dump_index_path, "index file")->required();

    MaintainOptions maintain_opt;
    CLI::App* maintain = app.add_subcommand("maintain", "apply a graph update stream");
    maintain->add_option("--index", maintain_opt.index_path, "index file")->required();
    maintain->add_option("--graph", maintain_opt.graph_path, "edge-list file")->required();
    maintain->add_option("--ops", maintain_opt.ops_path, "update stream")->required();
    maintain->add_option("--output,-o", maintain_opt.output_path, "updated index to write");
    maintain->add_flag("--check-rebuild", maintain_opt.check_rebuild,
                       "verify against a rebuild after every op");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitIo;
    }

    try {
        if (build->parsed()) return run_build(build_opt);
        if (query->parsed()) return run_query(query_opt);
        if (verify->parsed()) return run_verify(verify_opt);
        if (bench->parsed()) return run_bench(bench_opt);
        if (dump->parsed()) return run_dump(dump_index_path);
        if (maintain->parsed()) return run_maintain(maintain_opt);
    } catch (const UnknownVertexError& e) {
        std::cerr << e.what() << '\n';
        return kExitUnknownVertex;
    } catch (const IndexIoError& e) {
        std::cerr << e.what() << '\n';
        return kExitIo;
    } catch (const ParseError& e) {
        std::cerr << e.what() << '\n';
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return kExitIo;
    }
    return kExitIo;
}
