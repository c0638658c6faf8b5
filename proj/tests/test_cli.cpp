#include <doctest.h>

#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "rangereach/reach_index.hpp"
#include "rangereach/workload.hpp"
#include "support.hpp"

using namespace rangereach;
using namespace rangereach::testing;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "rangereach");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::string> csv_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    return lines;
}

std::vector<std::string> fields(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    for (std::string f; std::getline(in, f, ',');) out.push_back(f);
    return out;
}

const std::string kEdges = data_path("toy.edges").string();
const std::string kCoords = data_path("toy.coords").string();

}  // namespace

TEST_CASE("build on the toy graph reports two social components") {
    TempDir dir;
    const auto r = run_cli({"build", "--edges", kEdges, "--coords", kCoords, "--variant", "comp",
                            "--repeats", "3", "--index", (dir / "x.idx").string()});
    REQUIRE(r.code == 0);
    const auto lines = csv_lines(r.out);
    REQUIRE(lines.size() == 2);
    const auto head = fields(lines[0]);
    const auto row = fields(lines[1]);
    REQUIRE(head.size() == row.size());
    CHECK(row[0] == "comp");
    const auto col = std::find(head.begin(), head.end(), "components") - head.begin();
    CHECK(row[static_cast<std::size_t>(col)] == "2");
    CHECK(std::filesystem::exists(dir / "x.idx"));
}

TEST_CASE("building twice gives byte-identical index files") {
    TempDir dir;
    for (const char* v : {"standard", "comp", "pointer"}) {
        REQUIRE(run_cli({"build", "--edges", kEdges, "--coords", kCoords, "--variant", v, "--repeats", "1",
                         "--index", (dir / "a.idx").string()}).code == 0);
        REQUIRE(run_cli({"build", "--edges", kEdges, "--coords", kCoords, "--variant", v, "--repeats", "1",
                         "--index", (dir / "b.idx").string()}).code == 0);
        CHECK(slurp(dir / "a.idx") == slurp(dir / "b.idx"));
    }
}

TEST_CASE("missing input file") {
    TempDir dir;
    const auto r = run_cli({"build", "--edges", (dir / "nope").string(), "--coords", kCoords, "--index",
                            (dir / "x.idx").string()});
    CHECK(r.code != 0);
    CHECK(r.err.find("error") != std::string::npos);
}

TEST_CASE("query") {
    TempDir dir;
    const auto idx = (dir / "x.idx").string();
    REQUIRE(run_cli({"build", "--edges", kEdges, "--coords", kCoords, "--variant", "pointer", "--repeats", "1",
                     "--index", idx}).code == 0);
    auto r = run_cli({"query", "--index", idx, "--edges", kEdges, "--coords", kCoords, "--vertex", "0", "--rect",
                      "2,1,4.5,3.5"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("TRUE elapsed_ns=", 0) == 0);

    r = run_cli({"query", "--index", idx, "--edges", kEdges, "--coords", kCoords, "--vertex", "1", "--rect",
                 "10,10,11,11"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("FALSE", 0) == 0);

    r = run_cli({"query", "--index", idx, "--edges", kEdges, "--coords", kCoords, "--vertex", "99", "--rect",
                 "0,0,1,1"});
    CHECK(r.code != 0);

    r = run_cli({"query", "--index", idx, "--edges", kEdges, "--coords", kCoords, "--vertex", "0", "--rect",
                 "3,0,1,1"});
    CHECK(r.code != 0);
}

TEST_CASE("query against the wrong graph") {
    TempDir dir;
    REQUIRE(run_cli({"gen-graph", "--users", "20", "--venues", "20", "--social-density", "1", "--checkin-density",
                     "1", "--edges-out", (dir / "g.e").string(), "--coords-out", (dir / "g.c").string()})
                .code == 0);
    REQUIRE(run_cli({"build", "--edges", kEdges, "--coords", kCoords, "--repeats", "1", "--index",
                     (dir / "x.idx").string()}).code == 0);
    const auto r = run_cli({"query", "--index", (dir / "x.idx").string(), "--edges", (dir / "g.e").string(),
                            "--coords", (dir / "g.c").string(), "--vertex", "0", "--rect", "0,0,1,1"});
    CHECK(r.code != 0);
    CHECK(r.err.find("fingerprint") != std::string::npos);
}

TEST_CASE("bench: variants agree and full-box workloads match the oracle count") {
    TempDir dir;
    const auto e = (dir / "g.e").string();
    const auto c = (dir / "g.c").string();
    REQUIRE(run_cli({"gen-graph", "--users", "150", "--venues", "100", "--social-density", "1",
                     "--checkin-density", "0.7", "--seed", "5", "--edges-out", e, "--coords-out", c}).code == 0);
    std::vector<std::string> indexes;
    for (const char* v : {"standard", "comp", "pointer"}) {
        indexes.push_back((dir / (std::string(v) + ".idx")).string());
        REQUIRE(run_cli({"build", "--edges", e, "--coords", c, "--variant", v, "--repeats", "1", "--index",
                         indexes.back()}).code == 0);
    }
    const auto wl = (dir / "w.csv").string();
    REQUIRE(run_cli({"gen-workload", "--edges", e, "--coords", c, "--value", "1.0", "--count", "300", "--out", wl})
                .code == 0);
    const auto r = run_cli({"bench", "--index", indexes[0], "--index", indexes[1], "--index", indexes[2],
                            "--workload", wl, "--repeats", "2", "--latency-dump", (dir / "lat.csv").string()});
    REQUIRE(r.code == 0);
    const auto lines = csv_lines(r.out);
    REQUIRE(lines.size() == 4);
    const auto head = fields(lines[0]);
    const auto col = static_cast<std::size_t>(std::find(head.begin(), head.end(), "true_answers") - head.begin());
    const std::string first = fields(lines[1])[col];
    CHECK(fields(lines[2])[col] == first);
    CHECK(fields(lines[3])[col] == first);

    // oracle: query vertices that reach at least one located vertex
    const auto g = load_graph(e, c);
    const auto w = load_workload(wl);
    std::size_t reaching = 0;
    for (const auto& q : w.queries) {
        const auto reach = closure(g)[q.vertex];
        bool any = false;
        for (VertexId v : g.spatial_ids()) any |= static_cast<bool>(reach[v]);
        reaching += any ? 1 : 0;
    }
    CHECK(first == std::to_string(reaching));
    CHECK(csv_lines(slurp(dir / "lat.csv")).size() == 1 + 3 * 300);
}

TEST_CASE("bench errors") {
    TempDir dir;
    const auto idx = (dir / "x.idx").string();
    REQUIRE(run_cli({"build", "--edges", kEdges, "--coords", kCoords, "--repeats", "1", "--index", idx}).code == 0);
    save_workload(QueryWorkload{}, dir / "empty.csv");
    auto r = run_cli({"bench", "--index", idx, "--workload", (dir / "empty.csv").string()});
    CHECK(r.code != 0);

    // workload generated on a different graph
    const auto g = generate_graph(30, 30, 1, 1, 1);
    write_graph(g, dir / "g.e", dir / "g.c");
    REQUIRE(run_cli({"gen-workload", "--edges", (dir / "g.e").string(), "--coords", (dir / "g.c").string(),
                     "--count", "5", "--out", (dir / "w.csv").string()}).code == 0);
    r = run_cli({"bench", "--index", idx, "--workload", (dir / "w.csv").string()});
    CHECK(r.code != 0);
    CHECK(r.err.find("different graphs") != std::string::npos);
}

TEST_CASE("verify subcommand") {
    TempDir dir;
    auto r = run_cli({"verify", "--trials", "0"});
    CHECK(r.code == 0);
    CHECK(r.out.find("PASS") != std::string::npos);
    r = run_cli({"verify", "--trials", "20", "--max-n", "60", "--seed", "3"});
    CHECK(r.code == 0);
    r = run_cli({"verify", "--trials", "3", "--inject-fault", "--repro", (dir / "f").string()});
    CHECK(r.code == 1);
    CHECK(r.out.find("FAIL") != std::string::npos);
    CHECK(std::filesystem::exists(dir / "f.query.txt"));
}

TEST_CASE("usage errors") {
    CHECK(run_cli({}).code != 0);
    CHECK(run_cli({"build", "--edges", kEdges}).code != 0);
    CHECK(run_cli({"build", "--edges", kEdges, "--coords", kCoords, "--index", "x", "--variant", "bogus"}).code != 0);
    CHECK(run_cli({"--help"}).code == 0);
}
