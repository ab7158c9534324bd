#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <vector>

#include "dualmind/position.hpp"
#include "dualmind/score.hpp"

namespace dualmind {

struct SearchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// 0 means "no limit"; at least one of depth/nodes/time must be set.
struct SearchLimits {
    int max_depth = 0;
    std::uint64_t max_nodes = 0;
    std::int64_t max_time_ms = 0;
    int multipv = 1;
};

struct HeuristicToggles {
    bool futility = true;
    bool lmr = true;
    bool tt = true;
    bool quiescence = true;
};

struct SearchLine {
    Move move;
    Score score = Score::cp(0);
    std::vector<Move> pv;
};

struct SearchResult {
    std::vector<SearchLine> lines;  // sorted by score, best first
    int nominal_depth = 0;
    std::uint64_t nodes = 0;
    std::int64_t elapsed_ms = 0;

    const SearchLine& best() const { return lines.at(0); }
};

// Stand-alone pruning arithmetic, kept pure so the constants are testable.
inline int futility_margin(int depth) { return 150 * depth; }
constexpr int kFutilityMaxDepth = 8;

bool futility_prune(int static_eval, int depth, int alpha);
int lmr_reduction(int move_index, int depth, bool is_quiet);

class TranspositionTable {
public:
    enum class Bound : std::uint8_t { Exact, Lower, Upper };

    struct Entry {
        std::uint64_t key = 0;
        int value = 0;  // internal units, ply-adjusted for mates
        std::int16_t depth = -1;
        Bound bound = Bound::Exact;
        Move best{};
        bool used = false;
    };

    explicit TranspositionTable(std::size_t mib = 64);

    void clear();
    const Entry* probe(std::uint64_t key) const;
    void store(std::uint64_t key, int value, int depth, Bound bound, Move best);

private:
    std::vector<Entry> slots_;
};

class AlphaBetaSearcher {
public:
    // Evaluator returns centipawns from the side to move's perspective.
    using Evaluator = std::function<int(const Position&)>;

    explicit AlphaBetaSearcher(HeuristicToggles toggles = {},
                               std::size_t tt_mib = 64,
                               Evaluator evaluator = nullptr);

    // Called after every completed iteration with the depth-d result.
    using IterationCallback = std::function<void(const SearchResult&)>;

    // `history` holds zobrist keys of positions already on the game path
    // (for repetition detection across the UCI move list).
    SearchResult search(const Position& p, const SearchLimits& limits,
                        const std::vector<std::uint64_t>& history = {},
                        const IterationCallback& on_iteration = nullptr);

    void request_stop() { stop_.store(true, std::memory_order_relaxed); }
    void new_game() { tt_.clear(); }

    std::uint64_t nodes() const { return nodes_; }

private:
    struct StopSearch {};

    int negamax(const Position& p, int depth, int alpha, int beta, int ply,
                std::vector<std::uint64_t>& path, std::vector<Move>& pv);
    int quiescence(const Position& p, int alpha, int beta, int ply);
    void check_limits();
    void order_moves(const Position& p, std::vector<Move>& moves, Move tt_move,
                     int ply) const;
    bool is_capture(const Position& p, Move m) const;

    HeuristicToggles toggles_;
    Evaluator evaluator_;
    TranspositionTable tt_;

    std::atomic<bool> stop_{false};
    std::uint64_t nodes_ = 0;
    std::uint64_t node_limit_ = 0;
    std::int64_t deadline_ms_ = 0;  // steady-clock ms, 0 = none
    Move killers_[128][2] = {};
    int history_heuristic_[2][64][64] = {};
};

}  // namespace dualmind
