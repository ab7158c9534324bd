#pragma once

#include <map>
#include <unordered_map>

#include "dualmind/position.hpp"

namespace dualmind {

struct OracleBudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exhaustive horizon-bounded solution. Values are win probabilities for the
// side to move: mate delivered = 1, being mated = 0, draws = 0.5. A horizon
// cutoff also yields 0.5 but clears `resolved`.
struct ExactSolution {
    double value = 0.5;
    std::map<Move, double> q;      // value of each move, mover's perspective
    std::vector<Move> optimal;     // argmax set of q
    int horizon = 0;
    bool resolved = false;         // value independent of the horizon cutoff
};

// Backward-induction solver. Desk scale only: exhaustive game-tree walk with
// a hard node budget, where a node is a position actually expanded (memo
// hits are free). The memo and the budget both span the solver's lifetime,
// so repeated solves on overlapping subtrees are cheap.
class BellmanSolver {
public:
    explicit BellmanSolver(std::uint64_t node_budget = 100'000'000)
        : node_budget_(node_budget) {}

    ExactSolution solve(const Position& p, int horizon);
    std::map<Move, double> q_values(const Position& p, int horizon);

    std::uint64_t nodes_used() const { return nodes_; }

private:
    struct Entry {
        double value;
        bool resolved;
    };

    std::pair<double, bool> value_of(const Position& p, int horizon,
                                     std::vector<std::uint64_t>& path);

    std::uint64_t node_budget_;
    std::uint64_t nodes_ = 0;
    // Keyed by the zobrist/horizon/halfmove mix; collisions are as unlikely
    // as zobrist collisions and accepted on the same terms.
    std::unordered_map<std::uint64_t, Entry> memo_;
};

}  // namespace dualmind
