#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>

#include "dualmind/ab_search.hpp"
#include "dualmind/epd.hpp"
#include "dualmind/position.hpp"

namespace dualmind {

struct BenchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Compute-fairness arithmetic. Both quotients are exact; rounding happens
// only at display time.
double leela_factor(double sf_nps, double lc_nps);
double leela_ratio(double factor, double lc_nodes, double sf_nodes);
std::string leela_interpretation(double ratio);

struct StudyEntry {
    std::string id;
    Position position;
    std::vector<Move> best_moves;
    std::optional<int> mate_distance;
};

struct StudySuite {
    std::vector<StudyEntry> entries;
};

// EPD suite with bm/dm/id opcodes; ids must be unique, every bm legal.
StudySuite load_suite(std::istream& in, const std::string& name = "suite");
StudySuite load_suite_file(const std::string& path);

// Engine manifest: one engine per `id = target` line, where target is
// either `internal:ab`, `internal:mcts`, or a path to a UCI binary;
// following `option NAME=VALUE` lines attach to the most recent engine.
struct EngineSpec {
    std::string id;
    std::string target;
    std::vector<std::pair<std::string, std::string>> options;

    bool is_internal() const { return target.rfind("internal:", 0) == 0; }
};

std::vector<EngineSpec> parse_manifest(std::istream& in);
std::vector<EngineSpec> parse_manifest_file(const std::string& path);

// One engine trial on one study.
struct SuiteRecord {
    std::string study;
    std::string engine;
    std::string family;  // "ab" or "mcts"
    bool solved = false;
    bool failed = false;        // engine error; diagnostic holds the reason
    std::string diagnostic;
    Move solution_move{};
    Score score = Score::cp(0);
    double winprob = 0.5;
    std::uint64_t nodes = 0;
    std::int64_t elapsed_ms = 0;
    int depth = 0;              // nominal depth or simulation count
    std::vector<SearchLine> top_lines;
};

struct SolveRule {
    int stable_iterations = 3;  // bm ranked first this many times in a row
    bool accept_mate = true;    // or a reported mate within dm
};

// A uniform driver for internal searchers and external UCI processes.
// `family` feeds the aggregate Leela Ratio ("cpu" alpha-beta style vs
// "mcts" style accounting of nodes).
class EngineHandle {
public:
    virtual ~EngineHandle() = default;
    virtual std::string id() const = 0;
    virtual std::string family() const = 0;  // "ab" or "mcts"
    virtual void apply_option(const std::string& name,
                              const std::string& value) = 0;
    // Zobrist keys of positions preceding the root, oldest first; searchers
    // that track repetitions consult them, others may ignore the call.
    virtual void set_history(std::vector<std::uint64_t>) {}
    // Runs one search, invoking the callback per completed iteration.
    virtual SearchResult analyze(const Position& p, const SearchLimits& limits,
                                 const AlphaBetaSearcher::IterationCallback&
                                     on_iteration) = 0;
    // Safe to call from another thread while analyze() runs.
    virtual void request_stop() = 0;
};

std::unique_ptr<EngineHandle> make_internal_engine(const std::string& name,
                                                   const std::string& id = "");
std::unique_ptr<EngineHandle> make_engine(const EngineSpec& spec);

SuiteRecord run_trial(EngineHandle& engine, const StudyEntry& study,
                      const SearchLimits& limits, const SolveRule& rule = {});

std::vector<SuiteRecord> run_suite(EngineHandle& engine,
                                   const StudySuite& suite,
                                   const SearchLimits& limits,
                                   const SolveRule& rule = {});

// Reports regenerate byte-identically from identical records.
std::string render_report_markdown(const std::vector<SuiteRecord>& records);
std::string render_report_csv(const std::vector<SuiteRecord>& records);

}  // namespace dualmind
