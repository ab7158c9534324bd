#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include "dualmind/bench.hpp"

namespace dualmind {

namespace {

// Percent with three significant figures: 16.3, 8.23, 90.9.
std::string percent3(double winprob) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", winprob * 100.0);
    return buf;
}

}  // namespace

std::string render_report_csv(const std::vector<SuiteRecord>& records) {
    std::ostringstream out;
    out << "study,engine,move,q_pawns,winprob,nodes,ms,depth,solved\n";
    for (const auto& r : records) {
        if (r.failed) {
            out << r.study << ',' << r.engine << ",,,,,,,error\n";
            continue;
        }
        out << r.study << ',' << r.engine << ',' << to_uci(r.solution_move)
            << ',' << score_to_string(r.score) << ',' << percent3(r.winprob)
            << ',' << r.nodes << ',' << r.elapsed_ms << ',' << r.depth << ','
            << (r.solved ? 1 : 0) << '\n';
    }
    return out.str();
}

std::string render_report_markdown(const std::vector<SuiteRecord>& records) {
    std::ostringstream out;
    out << "# Benchmark report\n";
    if (records.empty()) {
        out << "\nno trials\n";
        return out.str();
    }

    // Per-study tables, in first-appearance order.
    std::vector<std::string> studies;
    for (const auto& r : records)
        if (std::find(studies.begin(), studies.end(), r.study) == studies.end())
            studies.push_back(r.study);

    for (const auto& study : studies) {
        out << "\n## " << study << "\n\n"
            << "| engine | move | Q | win% | nodes | ms | depth | solved |\n"
            << "|---|---|---|---|---|---|---|---|\n";
        for (const auto& r : records) {
            if (r.study != study) continue;
            if (r.failed) {
                out << "| " << r.engine << " | - | - | - | - | - | - | error |\n";
                continue;
            }
            out << "| " << r.engine << " | " << to_uci(r.solution_move)
                << " | " << score_to_string(r.score) << " | "
                << percent3(r.winprob) << " | " << r.nodes << " | "
                << r.elapsed_ms << " | " << r.depth << " | "
                << (r.solved ? "yes" : "no") << " |\n";
        }
    }

    out << "\n## Summary\n\n";
    struct Agg {
        int solved = 0, total = 0, failed = 0;
        std::uint64_t nodes = 0;
        std::int64_t ms = 0;
        std::string family;
    };
    std::map<std::string, Agg> by_engine;
    for (const auto& r : records) {
        Agg& a = by_engine[r.engine];
        a.total += 1;
        a.solved += r.solved ? 1 : 0;
        a.failed += r.failed ? 1 : 0;
        a.nodes += r.nodes;
        a.ms += r.elapsed_ms;
        a.family = r.family;
    }
    out << "| engine | solved | failed | nodes | ms |\n|---|---|---|---|---|\n";
    for (const auto& [id, a] : by_engine)
        out << "| " << id << " | " << a.solved << "/" << a.total << " | "
            << a.failed << " | " << a.nodes << " | " << a.ms << " |\n";

    // Aggregate Leela Ratio when one engine of each family ran with usable
    // node and time accounting. Internal and external node counters are not
    // distinguished here; mixing across hardware needs care.
    const Agg* ab = nullptr;
    const Agg* mc = nullptr;
    for (const auto& [id, a] : by_engine) {
        if (a.family == "ab" && !ab) ab = &a;
        if (a.family == "mcts" && !mc) mc = &a;
    }
    if (ab && mc && ab->nodes && mc->nodes && ab->ms > 0 && mc->ms > 0) {
        double f = leela_factor(1000.0 * ab->nodes / ab->ms,
                                1000.0 * mc->nodes / mc->ms);
        double r = leela_ratio(f, static_cast<double>(mc->nodes),
                               static_cast<double>(ab->nodes));
        char line[160];
        std::snprintf(line, sizeof line,
                      "\nLeela Ratio: F = %.2f, R = %.2f (%s)\n", f, r,
                      leela_interpretation(r).c_str());
        out << line;
    }
    return out.str();
}

}  // namespace dualmind
