#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "dualmind/bellman.hpp"
#include "dualmind/bench.hpp"
#include "dualmind/perft.hpp"
#include "dualmind/san.hpp"
#include "dualmind/uci.hpp"
#include "dualmind/winprob.hpp"

using namespace dualmind;

namespace {

Position position_from_arg(const std::string& arg) {
    if (arg == "startpos") return Position::startpos();
    return Position::from_fen(arg);
}

int cmd_analyze(const std::string& fen, const std::string& engine_name,
                int depth, int sims, std::int64_t movetime, int multipv,
                std::uint64_t seed) {
    Position p = position_from_arg(fen);
    auto engine = make_internal_engine(engine_name);
    if (engine_name == "mcts" && seed)
        engine->apply_option("Seed", std::to_string(seed));

    SearchLimits limits;
    limits.multipv = multipv;
    if (engine_name == "mcts") {
        limits.max_nodes = sims;
    } else {
        limits.max_depth = depth;
        limits.max_time_ms = movetime;
        if (!limits.max_depth && !limits.max_time_ms) limits.max_depth = 12;
    }

    SearchResult r = engine->analyze(p, limits, nullptr);
    std::cout << "position: " << p.fen() << "\n"
              << "engine: " << engine->id() << "  "
              << (engine_name == "mcts" ? "simulations " : "depth ")
              << r.nominal_depth << "  nodes " << r.nodes << "  time "
              << r.elapsed_ms << " ms\n\n";
    std::printf("%-8s %-8s %-7s %s\n", "move", "Q", "win%", "pv");
    for (const auto& line : r.lines) {
        std::string pv;
        Position q = p;
        for (Move m : line.pv) {
            if (!pv.empty()) pv += ' ';
            pv += to_san(q, m);
            q = q.apply(m);
        }
        char winp[16];
        std::snprintf(winp, sizeof winp, "%.3g",
                      100.0 * cp_to_winprob(line.score));
        std::printf("%-8s %-8s %-7s %s\n", to_san(p, line.move).c_str(),
                    score_to_string(line.score).c_str(), winp, pv.c_str());
    }
    return 0;
}

int cmd_bench(const std::string& suite_path, const std::string& manifest_path,
              const std::string& format, int depth, std::uint64_t nodes,
              std::int64_t movetime, int multipv, const std::string& out_path) {
    StudySuite suite = load_suite_file(suite_path);
    auto specs = parse_manifest_file(manifest_path);

    SearchLimits limits;
    limits.max_depth = depth;
    limits.max_nodes = nodes;
    limits.max_time_ms = movetime;
    limits.multipv = multipv;
    if (!limits.max_depth && !limits.max_nodes && !limits.max_time_ms)
        limits.max_depth = 7;

    std::vector<SuiteRecord> records;
    for (const auto& spec : specs) {
        auto engine = make_engine(spec);
        auto batch = run_suite(*engine, suite, limits);
        records.insert(records.end(), batch.begin(), batch.end());
    }

    std::string report = format == "csv" ? render_report_csv(records)
                                         : render_report_markdown(records);
    if (out_path.empty()) {
        std::cout << report;
    } else {
        std::ofstream out(out_path);
        if (!out) throw BenchError("cannot write report to " + out_path);
        out << report;
    }
    for (const auto& r : records)
        if (r.failed) {
            std::cerr << "trial failed: " << r.study << " / " << r.engine
                      << ": " << r.diagnostic << "\n";
            return 1;
        }
    return 0;
}

int cmd_oracle(const std::string& fen, int horizon, std::uint64_t budget) {
    Position p = position_from_arg(fen);
    BellmanSolver solver(budget);
    ExactSolution sol = solver.solve(p, horizon);
    std::cout << "move,q,resolved\n";
    for (const auto& [m, q] : sol.q) {
        char line[64];
        std::snprintf(line, sizeof line, "%s,%.6f,%d\n", to_uci(m).c_str(), q,
                      sol.resolved ? 1 : 0);
        std::cout << line;
    }
    std::cerr << "value " << sol.value << " nodes " << solver.nodes_used()
              << "\n";
    return 0;
}

int cmd_ratio(double sf_nps, double lc_nps, double sf_nodes, double lc_nodes) {
    double f = leela_factor(sf_nps, lc_nps);
    double r = leela_ratio(f, lc_nodes, sf_nodes);
    std::printf("F = %.2f\nR = %.1f\n%s\n", f, r,
                leela_interpretation(r).c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DualMind chess engine suite"};
    app.require_subcommand(1);

    std::string fen, engine_name = "ab", suite_path, manifest_path;
    std::string format = "markdown", out_path;
    int depth = 0, sims = 10000, multipv = 1, horizon = 5, perft_depth = 1;
    std::int64_t movetime = 0;
    std::uint64_t nodes = 0, budget = 100'000'000, seed = 0;
    double sf_nps = 0, lc_nps = 0, sf_nodes = 0, lc_nodes = 0;

    auto* analyze = app.add_subcommand("analyze", "Search one position");
    analyze->add_option("fen", fen, "FEN or 'startpos'")->required();
    analyze->add_option("--engine", engine_name, "ab or mcts")
        ->check(CLI::IsMember({"ab", "mcts"}));
    analyze->add_option("--depth", depth, "search depth (ab)");
    analyze->add_option("--sims", sims, "simulations (mcts)");
    analyze->add_option("--movetime", movetime, "time budget in ms (ab)");
    analyze->add_option("--multipv", multipv, "lines to report");
    analyze->add_option("--seed", seed, "deterministic seed");

    auto* bench = app.add_subcommand("bench", "Run a study suite");
    bench->add_option("--suite", suite_path, "EPD suite file")->required();
    bench->add_option("--manifest", manifest_path, "engine manifest")->required();
    bench->add_option("--report", format, "markdown or csv")
        ->check(CLI::IsMember({"markdown", "csv"}));
    bench->add_option("--depth", depth, "depth limit");
    bench->add_option("--nodes", nodes, "node / simulation limit");
    bench->add_option("--movetime", movetime, "time limit ms");
    bench->add_option("--multipv", multipv, "lines to record");
    bench->add_option("--out", out_path, "write report to a file");

    auto* oracle = app.add_subcommand("oracle", "Exact horizon-bounded solve");
    oracle->add_option("fen", fen, "FEN or 'startpos'")->required();
    oracle->add_option("--horizon", horizon, "ply horizon")->required();
    oracle->add_option("--budget", budget, "node budget");

    auto* ratio = app.add_subcommand("ratio", "Leela Ratio arithmetic");
    ratio->add_option("--sf-nps", sf_nps)->required();
    ratio->add_option("--lc-nps", lc_nps)->required();
    ratio->add_option("--sf-nodes", sf_nodes)->required();
    ratio->add_option("--lc-nodes", lc_nodes)->required();

    auto* perft_cmd = app.add_subcommand("perft", "Legal move tree count");
    perft_cmd->add_option("fen", fen, "FEN or 'startpos'")->required();
    perft_cmd->add_option("depth", perft_depth, "depth")->required();

    auto* serve = app.add_subcommand("serve-uci", "Speak UCI on stdin/stdout");
    serve->add_option("--engine", engine_name, "ab or mcts")
        ->check(CLI::IsMember({"ab", "mcts"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*analyze)
            return cmd_analyze(fen, engine_name, depth, sims, movetime,
                               multipv, seed);
        if (*bench)
            return cmd_bench(suite_path, manifest_path, format, depth, nodes,
                             movetime, multipv, out_path);
        if (*oracle) return cmd_oracle(fen, horizon, budget);
        if (*ratio) return cmd_ratio(sf_nps, lc_nps, sf_nodes, lc_nodes);
        if (*perft_cmd) {
            std::cout << perft(position_from_arg(fen), perft_depth) << "\n";
            return 0;
        }
        if (*serve) {
            UciSession session(std::cin, std::cout, engine_name);
            return session.run();
        }
    } catch (const FenError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
