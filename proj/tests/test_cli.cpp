#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "dforest/graph.hpp"
#include "dforest/testkit.hpp"

namespace {

struct RunResult {
    int exit_code;
    std::string output;  // stdout only
};

RunResult run_cli(const std::string& args) {
    std::string command = std::string(DFOREST_CLI_PATH) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buffer{};
    std::string output;
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::size_t got;
    while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
        output.append(buffer.data(), got);
    int status = pclose(pipe);
    int exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {exit_code, output};
}

struct TempFile {
    explicit TempFile(const std::string& name) : path("cli_tmp_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
    std::string path;
};

void write_fixture(const std::string& path, const std::string& name) {
    std::ofstream out(path);
    for (const auto& [u, v] : dforest::testkit::fixture(name).edges) out << u << ' ' << v << '\n';
}

}  // namespace

TEST_CASE("build, query and verify round-trip through the CLI") {
    TempFile graph("two_cycles.el");
    TempFile index("two_cycles.dfi");
    write_fixture(graph.path, "F2");

    RunResult build = run_cli("build --graph " + graph.path + " --output " + index.path);
    CHECK(build.exit_code == 0);
    CHECK(build.output.find("kmax: 1") != std::string::npos);

    RunResult query =
        run_cli("query --index " + index.path + " --q 0 --k 1 --l 1");
    CHECK(query.exit_code == 0);
    CHECK(query.output.find("community: 0 1 2") != std::string::npos);

    RunResult empty = run_cli("query --index " + index.path + " --q 0 --k 2 --l 1");
    CHECK(empty.exit_code == 0);
    CHECK(empty.output.find("community: (empty)") != std::string::npos);

    RunResult unknown = run_cli("query --index " + index.path + " --q zz --k 1 --l 1");
    CHECK(unknown.exit_code == 3);

    RunResult verify = run_cli("verify --graph " + graph.path + " --index " + index.path);
    CHECK(verify.exit_code == 0);
    CHECK(verify.output.find("verify: PASS") != std::string::npos);
}

TEST_CASE("both builders write byte-identical index files") {
    TempFile graph("pendant.el");
    TempFile top("pendant_top.dfi");
    TempFile bottom("pendant_bottom.dfi");
    write_fixture(graph.path, "F4");

    CHECK(run_cli("build --graph " + graph.path + " --method topdown --output " + top.path)
              .exit_code == 0);
    CHECK(run_cli("build --graph " + graph.path + " --method bottomup --output " + bottom.path)
              .exit_code == 0);

    std::ifstream a(top.path, std::ios::binary), b(bottom.path, std::ios::binary);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
    CHECK(!sa.str().empty());
}

TEST_CASE("missing and corrupt inputs exit with the io code") {
    RunResult missing = run_cli("build --graph does_not_exist.el");
    CHECK(missing.exit_code == 2);

    TempFile graph("cycle.el");
    TempFile index("corrupt.dfi");
    write_fixture(graph.path, "F1");
    REQUIRE(run_cli("build --graph " + graph.path + " --output " + index.path).exit_code == 0);
    {
        std::fstream f(index.path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(0);
        f.put('X');  // break the magic
    }
    RunResult corrupt =
        run_cli("verify --graph " + graph.path + " --index " + index.path);
    CHECK(corrupt.exit_code == 2);

    RunResult usage = run_cli("build");
    CHECK(usage.exit_code == 2);
}

TEST_CASE("dump prints one node per line") {
    TempFile graph("dump.el");
    TempFile index("dump.dfi");
    write_fixture(graph.path, "F4");
    REQUIRE(run_cli("build --graph " + graph.path + " --output " + index.path).exit_code == 0);
    RunResult dump = run_cli("dump --index " + index.path);
    CHECK(dump.exit_code == 0);
    CHECK(dump.output.find("k=1\n0 -1\n1 1 4\n2 3 0 1 2 3\n") != std::string::npos);
}

TEST_CASE("scsd queries resolve through the graph") {
    TempFile graph("joined.el");
    TempFile index("joined.dfi");
    write_fixture(graph.path, "F7");
    REQUIRE(run_cli("build --graph " + graph.path + " --output " + index.path).exit_code == 0);

    RunResult scsd = run_cli("query --index " + index.path + " --graph " + graph.path +
                             " --q 0 --k 1 --l 1 --scsd");
    CHECK(scsd.exit_code == 0);
    CHECK(scsd.output.find("community: 0 1 2") != std::string::npos);
}

TEST_CASE("bench emits deterministic csv per seed") {
    TempFile graph("bench.el");
    {
        std::ofstream out(graph.path);
        dforest::testkit::random_digraph(dforest::testkit::GraphKind::uniform, 40, 0.15, 4)
            .write_edge_list(out);
    }
    RunResult empty = run_cli("bench --graph " + graph.path + " --queries 0");
    CHECK(empty.exit_code == 0);
    CHECK(empty.output == "query,community_size,idx_us,oracle_us,nodes_visited\n");

    RunResult a = run_cli("bench --graph " + graph.path + " --queries 5 --k 2 --seed 7");
    RunResult b = run_cli("bench --graph " + graph.path + " --queries 5 --k 2 --seed 7");
    CHECK(a.exit_code == 0);
    // Same query column both runs; timing columns may differ.
    auto queries_of = [](const std::string& csv) {
        std::istringstream in(csv);
        std::string line, queries;
        std::getline(in, line);  // header
        while (std::getline(in, line)) queries += line.substr(0, line.find(',')) + ";";
        return queries;
    };
    CHECK(queries_of(a.output) == queries_of(b.output));
}

TEST_CASE("maintain applies ops and can check against rebuilds") {
    TempFile graph("path.el");
    TempFile index("path.dfi");
    TempFile ops("path.ops");
    TempFile updated("path_updated.dfi");
    write_fixture(graph.path, "F5");
    REQUIRE(run_cli("build --graph " + graph.path + " --output " + index.path).exit_code == 0);
    {
        std::ofstream out(ops.path);
        out << "+ 2 0\n";
    }
    RunResult maintain = run_cli("maintain --index " + index.path + " --graph " + graph.path +
                                 " --ops " + ops.path + " --check-rebuild --output " +
                                 updated.path);
    CHECK(maintain.exit_code == 0);
    CHECK(maintain.output.find("applied 1 of 1 ops") != std::string::npos);

    RunResult query = run_cli("query --index " + updated.path + " --q 0 --k 1 --l 1");
    CHECK(query.output.find("community: 0 1 2") != std::string::npos);

    {
        std::ofstream out(ops.path);
        out << "+ 1\n";  // malformed
    }
    RunResult bad = run_cli("maintain --index " + index.path + " --graph " + graph.path +
                            " --ops " + ops.path + " --output " + updated.path);
    CHECK(bad.exit_code == 2);
}
