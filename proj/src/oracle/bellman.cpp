#include "dualmind/bellman.hpp"

namespace dualmind {

namespace {

// Memo key mixes the remaining horizon and the 50-move clock into the
// position hash; repetition stays path-dependent and is not memo-safe in
// corner cases, which the desk-scale contract accepts.
std::uint64_t memo_key(const Position& p, int horizon) {
    std::uint64_t k = p.zobrist();
    k ^= 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(horizon + 1);
    k ^= 0xC2B2AE3D27D4EB4FULL * static_cast<std::uint64_t>(p.halfmove_clock() + 1);
    return k;
}

}  // namespace

std::pair<double, bool> BellmanSolver::value_of(const Position& p, int horizon,
                                                std::vector<std::uint64_t>& path) {
    if (p.is_repetition(path, 2)) return {0.5, true};

    // Memo hits are free: only positions that actually get expanded (a
    // move generation or evaluation) count against the node budget.
    // Terminal positions are never stored, so a hit implies a real entry.
    std::uint64_t key = memo_key(p, horizon);
    if (auto it = memo_.find(key); it != memo_.end())
        return {it->second.value, it->second.resolved};

    if (++nodes_ > node_budget_)
        throw OracleBudgetExceeded("oracle node budget exceeded (" +
                                   std::to_string(node_budget_) + ")");

    auto moves = p.legal_moves();
    if (moves.empty()) return {p.in_check() ? 0.0 : 0.5, true};
    if (p.halfmove_clock() >= 100) return {0.5, true};
    if (horizon <= 0) return {0.5, false};

    path.push_back(p.zobrist());
    double best = 0.0;
    bool best_resolved = false;
    bool all_resolved = true;
    for (Move m : moves) {
        auto [child_value, child_resolved] =
            value_of(p.apply_trusted(m), horizon - 1, path);
        double q = 1.0 - child_value;
        if (q > best || (q == best && child_resolved && !best_resolved)) {
            best = q;
            best_resolved = child_resolved;
        }
        all_resolved = all_resolved && child_resolved;
        if (best == 1.0 && best_resolved) break;  // nothing can beat a proven win
    }
    path.pop_back();

    bool resolved = all_resolved || (best == 1.0 && best_resolved);
    memo_[key] = Entry{best, resolved};
    return {best, resolved};
}

ExactSolution BellmanSolver::solve(const Position& p, int horizon) {
    if (horizon < 0) throw std::invalid_argument("horizon must be >= 0");

    ExactSolution sol;
    sol.horizon = horizon;

    auto moves = p.legal_moves();
    if (moves.empty()) {
        sol.value = p.in_check() ? 0.0 : 0.5;
        sol.resolved = true;
        return sol;
    }
    if (p.halfmove_clock() >= 100) {
        sol.value = 0.5;
        sol.resolved = true;
        return sol;
    }
    if (horizon == 0) {
        for (Move m : moves) sol.q[m] = 0.5;
        sol.value = 0.5;
        sol.resolved = false;
        sol.optimal = moves;
        return sol;
    }

    std::vector<std::uint64_t> path{p.zobrist()};
    bool all_resolved = true;
    bool best_resolved = false;
    sol.value = 0.0;
    for (Move m : moves) {
        auto [child_value, child_resolved] =
            value_of(p.apply_trusted(m), horizon - 1, path);
        double q = 1.0 - child_value;
        sol.q[m] = q;
        if (q > sol.value) {
            sol.value = q;
            best_resolved = child_resolved;
        } else if (q == sol.value && child_resolved) {
            best_resolved = best_resolved || child_resolved;
        }
        all_resolved = all_resolved && child_resolved;
    }
    for (const auto& [m, q] : sol.q)
        if (q == sol.value) sol.optimal.push_back(m);
    sol.resolved = all_resolved || (sol.value == 1.0 && best_resolved);
    return sol;
}

std::map<Move, double> BellmanSolver::q_values(const Position& p, int horizon) {
    return solve(p, horizon).q;
}

}  // namespace dualmind
