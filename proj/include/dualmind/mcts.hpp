#pragma once

#include <atomic>
#include <functional>
#include <memory>

#include "dualmind/position.hpp"

namespace dualmind {

struct MctsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PuctParams {
    double c_base = 19652.0;
    double c_init = 1.25;
    double fpu = 0.2;  // unvisited children score parent Q minus this
    std::uint64_t seed = 0;
};

// Leaf evaluation: value in [-1, 1] from the side to move's perspective plus
// a prior per legal move (normalized over legal moves only).
struct Evaluation {
    double value = 0.0;
    std::vector<std::pair<Move, double>> policy;
};

using EvaluationProvider = std::function<Evaluation(const Position&)>;

struct MctsNode {
    struct Edge {
        Move move;
        double prior = 0.0;
        int visits = 0;
        double total_value = 0.0;  // from this node's side to move
        std::unique_ptr<MctsNode> child;

        double q() const { return visits ? total_value / visits : 0.0; }
    };

    std::vector<Edge> edges;
    bool expanded = false;
    bool terminal = false;
    double terminal_value = 0.0;
    int visits = 0;
    double value_sum = 0.0;  // accumulated backups, own side to move

    double q() const { return visits ? value_sum / visits : 0.0; }
    int child_visit_sum() const;
};

// argmax over Q + U per the PUCT rule; ties go to the lowest edge index.
// C(s) = ln((1 + sum_b N(s,b) + c_base) / c_base) + c_init and
// U(s,a) = C(s) P(s,a) sqrt(sum_b N(s,b)) / (1 + N(s,a)).
std::size_t puct_select(const MctsNode& node, const PuctParams& params);

struct RootStat {
    Move move;
    int visits = 0;
    double fraction = 0.0;
    double q = 0.0;
    double prior = 0.0;
};

struct MctsResult {
    Move best;
    std::vector<RootStat> stats;  // sorted by visits descending
    std::vector<Move> pv;
    int simulations = 0;
    double root_value = 0.0;  // root Q in [-1, 1]
    std::int64_t elapsed_ms = 0;
};

// CSV dump of the root visit distribution: move,visits,fraction,Q,prior.
std::string root_stats_csv(const MctsResult& r);

class MctsSearcher {
public:
    explicit MctsSearcher(PuctParams params = {}) : params_(params) {}

    using ProgressCallback = std::function<void(const MctsResult&)>;

    // Runs `simulations` playouts; when `report_every` > 0, snapshots the
    // root statistics every that many simulations through the callback.
    MctsResult run(const Position& p, int simulations,
                   const EvaluationProvider& provider, int report_every = 0,
                   const ProgressCallback& on_progress = nullptr);

    void request_stop() { stop_.store(true, std::memory_order_relaxed); }

private:
    double simulate(MctsNode& node, const Position& p,
                    const EvaluationProvider& provider);

    PuctParams params_;
    std::atomic<bool> stop_{false};
};

// Classical evaluation squashed to [-1, 1] through the win-probability
// logistic; priors are a temperature-1 softmax over one-ply values.
EvaluationProvider make_classical_evaluator();

// Exact horizon-bounded oracle values; the solver (and its memo) is shared
// across calls, so the provider is stateful and single-threaded.
EvaluationProvider make_oracle_evaluator(int horizon,
                                         std::uint64_t node_budget = 100'000'000);

}  // namespace dualmind
