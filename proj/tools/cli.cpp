#include "cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rangereach/bench.hpp"
#include "rangereach/graph.hpp"
#include "rangereach/reach_index.hpp"
#include "rangereach/verify.hpp"
#include "rangereach/workload.hpp"

namespace rangereach::cli {

namespace {

struct GraphArgs {
    std::string edges;
    std::string coords;
};

void add_graph_options(CLI::App* cmd, GraphArgs& g) {
    cmd->add_option("--edges", g.edges, "Edge file (src dst per line)")->required();
    cmd->add_option("--coords", g.coords, "Coordinate file (id x y per line)")->required();
}

GeosocialGraph load(const GraphArgs& args, std::ostream& err) {
    LoadReport report;
    GeosocialGraph g = load_graph(args.edges, args.coords, &report);
    err << "# loaded n=" << g.vertex_count() << " m=" << g.edge_count() << " p=" << g.spatial_count()
        << " dropped_self_loops=" << report.dropped_self_loops
        << " dropped_duplicate_edges=" << report.dropped_duplicate_edges
        << " repeated_coords=" << report.repeated_coords << '\n';
    return g;
}

/// Writes to --out when given, otherwise to `fallback`.
class ReportSink {
public:
    ReportSink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw InputError("cannot write " + path);
            stream_ = &file_;
        }
    }
    std::ostream& get() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_;
};

Rect2D parse_rect(const std::vector<double>& v) {
    if (v.size() != 4) throw InputError("--rect takes four numbers: min_x min_y max_x max_y");
    return Rect2D::make(v[0], v[1], v[2], v[3]);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Geosocial reachability (RangeReach) indexes: build, query, benchmark, verify"};
    app.require_subcommand(1);

    // build
    GraphArgs build_graph;
    std::string build_variant = "standard";
    std::size_t build_fanout = kDefaultFanout;
    std::size_t build_repeats = 10;
    std::string build_out;
    std::string build_report;
    auto* build = app.add_subcommand("build", "Build an index and print its statistics as CSV");
    add_graph_options(build, build_graph);
    build->add_option("--variant", build_variant, "standard, comp or pointer")
        ->check(CLI::IsMember({"standard", "comp", "compressed", "pointer"}));
    build->add_option("--fanout", build_fanout, "Maximum R-tree entries per node")->check(CLI::Range(2, 1 << 20));
    build->add_option("--repeats", build_repeats, "Builds to time; the median is reported")->check(CLI::PositiveNumber);
    build->add_option("--index", build_out, "Output index file")->required();
    build->add_option("--out", build_report, "Write the CSV report here instead of standard output");

    // query
    std::string query_index;
    GraphArgs query_graph;
    std::uint64_t query_vertex = 0;
    std::vector<double> query_rect;
    auto* query = app.add_subcommand("query", "Answer one RangeReach query");
    query->add_option("--index", query_index, "Index file")->required();
    add_graph_options(query, query_graph);
    query->add_option("--vertex", query_vertex, "Query vertex (id as used in the edge file)")->required();
    query->add_option("--rect", query_rect, "min_x min_y max_x max_y")->required()->expected(4)->delimiter(',');

    // bench
    std::vector<std::string> bench_indexes;
    std::string bench_workload;
    std::size_t bench_repeats = 10;
    int bench_threads = 1;
    std::string bench_latency;
    std::string bench_out;
    auto* bench = app.add_subcommand("bench", "Run a workload against one or more indexes");
    bench->add_option("--index", bench_indexes, "Index file (repeatable)")->required();
    bench->add_option("--workload", bench_workload, "Workload CSV")->required();
    bench->add_option("--repeats", bench_repeats, "Timed runs; the median is reported")->check(CLI::PositiveNumber);
    bench->add_option("--threads", bench_threads, "Query threads (1 = sequential)")->check(CLI::PositiveNumber);
    bench->add_option("--latency-dump", bench_latency, "Write per-query latencies (ns) as CSV");
    bench->add_option("--out", bench_out, "Write the CSV report here instead of standard output");

    // verify
    VerifyOptions verify_opts;
    std::string verify_repro = "verify-failure";
    auto* verify = app.add_subcommand("verify", "Compare all variants with the traversal oracle on random graphs");
    verify->add_option("--trials", verify_opts.trials, "Random graphs to test");
    verify->add_option("--min-n", verify_opts.min_vertices, "Smallest vertex count");
    verify->add_option("--max-n", verify_opts.max_vertices, "Largest vertex count");
    verify->add_option("--queries", verify_opts.queries_per_trial, "Random queries per graph");
    verify->add_option("--seed", verify_opts.seed, "Random seed");
    verify->add_option("--repro", verify_repro, "Prefix for reproduction files on failure");
    verify->add_flag("--inject-fault", verify_opts.inject_fault, "Test only: corrupt one answer")
        ->group("");

    // gen-graph
    std::string gen_mode = "lbsn";
    std::size_t gen_users = 1000;
    std::size_t gen_venues = 1000;
    double gen_social = 4.0;
    double gen_checkin = 4.0;
    std::size_t gen_vertices = 1000;
    std::size_t gen_edge_count = 3000;
    double gen_spatial_fraction = 0.5;
    unsigned gen_grid = 0;
    std::uint64_t gen_seed = 42;
    std::string gen_edges_out;
    std::string gen_coords_out;
    auto* gen_graph = app.add_subcommand("gen-graph", "Write a synthetic geosocial graph");
    gen_graph->add_option("--mode", gen_mode, "lbsn (users and venue sinks) or general")
        ->check(CLI::IsMember({"lbsn", "general"}));
    gen_graph->add_option("--users", gen_users, "lbsn: number of users");
    gen_graph->add_option("--venues", gen_venues, "lbsn: number of venues");
    gen_graph->add_option("--social-density", gen_social, "lbsn: user->user edges per user");
    gen_graph->add_option("--checkin-density", gen_checkin, "lbsn: user->venue edges per user");
    gen_graph->add_option("--vertices", gen_vertices, "general: number of vertices");
    gen_graph->add_option("--edge-count", gen_edge_count, "general: number of edges");
    gen_graph->add_option("--spatial-fraction", gen_spatial_fraction, "general: share of spatial vertices");
    gen_graph->add_option("--grid", gen_grid, "general: snap coordinates to a grid (0 = off)");
    gen_graph->add_option("--seed", gen_seed, "Random seed");
    gen_graph->add_option("--edges-out", gen_edges_out, "Edge file to write")->required();
    gen_graph->add_option("--coords-out", gen_coords_out, "Coordinate file to write")->required();

    // gen-workload
    GraphArgs wl_graph;
    std::string wl_kind = "region-extent";
    double wl_value = kDefaultRegionExtent;
    std::string wl_degree = DegreeBucket{}.to_string();
    WorkloadSpec wl_spec;
    std::string wl_out;
    auto* gen_workload = app.add_subcommand("gen-workload", "Write a query workload CSV");
    add_graph_options(gen_workload, wl_graph);
    gen_workload->add_option("--kind", wl_kind, "region-extent, vertex-degree or selectivity");
    gen_workload->add_option("--value", wl_value, "Extent or selectivity ratio in (0, 1]");
    gen_workload->add_option("--degree", wl_degree, "Out-degree bucket LO-HI or LO-");
    gen_workload->add_option("--count", wl_spec.query_count, "Number of queries");
    gen_workload->add_option("--seed", wl_spec.seed, "Random seed");
    gen_workload->add_flag("--users-only", wl_spec.users_only, "Only non-spatial query vertices");
    gen_workload->add_option("--out", wl_out, "Workload CSV to write")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*build) {
            const GeosocialGraph g = load(build_graph, err);
            const Variant variant = parse_variant(build_variant);
            std::vector<double> times;
            ReachIndex idx;
            for (std::size_t r = 0; r < build_repeats; ++r) {
                idx = ReachIndex::build(g, variant, build_fanout);
                times.push_back(idx.build_seconds());
            }
            idx.save(build_out);
            IndexStats stats = index_stats(idx);
            stats.build_seconds = median(times);
            ReportSink sink(build_report, out);
            write_stats_header(sink.get());
            write_stats_row(sink.get(), stats);
            return 0;
        }

        if (*query) {
            const GeosocialGraph g = load(query_graph, err);
            const ReachIndex idx = ReachIndex::load(query_index, &g);
            const auto dense = g.dense_id(query_vertex);
            if (!dense) {
                err << "error: vertex " << query_vertex << " does not occur in the graph\n";
                return 1;
            }
            const Rect2D r = parse_rect(query_rect);
            const auto start = std::chrono::steady_clock::now();
            const bool answer = idx.query(*dense, r);
            const auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                                std::chrono::steady_clock::now() - start)
                                .count();
            out << (answer ? "TRUE" : "FALSE") << " elapsed_ns=" << ns << '\n';
            return 0;
        }

        if (*bench) {
            const QueryWorkload workload = load_workload(bench_workload);
            if (workload.queries.empty()) throw InputError("workload " + bench_workload + " is empty");
            const auto expected = workload.fingerprint();
            ReportSink sink(bench_out, out);
            write_bench_header(sink.get());
            std::ofstream latency;
            if (!bench_latency.empty()) {
                latency.open(bench_latency);
                if (!latency) throw InputError("cannot write " + bench_latency);
                latency << "index,qid,latency_ns\n";
            }
            for (const auto& path : bench_indexes) {
                const ReachIndex idx = ReachIndex::load(path);
                if (expected && *expected != idx.fingerprint()) {
                    throw FingerprintMismatch("fingerprint mismatch: index " + path + " and the workload come from different graphs");
                }
                std::vector<double> latencies;
                BenchRow row = run_bench(idx, workload, bench_repeats, bench_threads,
                                         bench_latency.empty() ? nullptr : &latencies);
                row.index_path = path;
                write_bench_row(sink.get(), row);
                for (std::size_t i = 0; i < latencies.size(); ++i) {
                    latency << path << ',' << i << ',' << latencies[i] << '\n';
                }
            }
            return 0;
        }

        if (*verify) {
            verify_opts.repro_prefix = verify_repro;
            const VerifyReport report = run_verify(verify_opts);
            out << "trials=" << report.trials_run << " lbsn=" << report.lbsn_trials
                << " general=" << report.general_trials << " queries=" << report.queries_checked
                << '\n';
            if (report.passed) {
                out << "PASS\n";
                return 0;
            }
            out << "FAIL " << report.failure << '\n';
            for (const auto& f : report.repro_files) out << "repro " << f.string() << '\n';
            return 1;
        }

        if (*gen_graph) {
            const GeosocialGraph g =
                gen_mode == "lbsn"
                    ? generate_graph(gen_users, gen_venues, gen_social, gen_checkin, gen_seed)
                    : generate_general_graph(gen_vertices, gen_edge_count, gen_spatial_fraction, gen_seed, gen_grid);
            write_graph(g, gen_edges_out, gen_coords_out);
            out << "n=" << g.vertex_count() << " m=" << g.edge_count() << " p=" << g.spatial_count() << '\n';
            return 0;
        }

        if (*gen_workload) {
            const GeosocialGraph g = load(wl_graph, err);
            wl_spec.kind = parse_workload_kind(wl_kind);
            wl_spec.value = wl_value;
            wl_spec.bucket = DegreeBucket::parse(wl_degree);
            const QueryWorkload w = generate_workload(g, wl_spec);
            save_workload(w, wl_out);
            out << "queries=" << w.queries.size() << " vertex_pool=" << w.meta_value("vertex_pool").value_or("")
                << '\n';
            return 0;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace rangereach::cli
