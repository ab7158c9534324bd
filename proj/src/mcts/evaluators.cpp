#include <algorithm>
#include <cmath>
#include <memory>

#include "dualmind/bellman.hpp"
#include "dualmind/classical_eval.hpp"
#include "dualmind/mcts.hpp"
#include "dualmind/winprob.hpp"

namespace dualmind {

namespace {

// Mover-perspective win probability of making move m, one ply deep.
double one_ply_winprob(const Position& p, Move m) {
    Position child = p.apply_trusted(m);
    auto moves = child.legal_moves();
    if (moves.empty()) return child.in_check() ? 1.0 : 0.5;
    if (child.result() != GameResult::Ongoing) return 0.5;
    return 1.0 - cp_to_winprob(evaluate_classical(child));
}

std::vector<std::pair<Move, double>> softmax_policy(
    const std::vector<Move>& moves, const std::vector<double>& scores,
    double temperature) {
    double max_score = *std::max_element(scores.begin(), scores.end());
    std::vector<std::pair<Move, double>> policy;
    double sum = 0.0;
    for (std::size_t i = 0; i < moves.size(); ++i) {
        double w = std::exp((scores[i] - max_score) / temperature);
        policy.emplace_back(moves[i], w);
        sum += w;
    }
    for (auto& [m, w] : policy) w /= sum;
    return policy;
}

}  // namespace

EvaluationProvider make_classical_evaluator() {
    return [](const Position& p) {
        Evaluation eval;
        eval.value = winprob_to_value(cp_to_winprob(evaluate_classical(p)));
        auto moves = p.legal_moves();
        std::vector<double> scores;
        scores.reserve(moves.size());
        // Sharpen uniform priors with one-ply values in [-1, 1].
        for (Move m : moves)
            scores.push_back(winprob_to_value(one_ply_winprob(p, m)));
        eval.policy = softmax_policy(moves, scores, 1.0);
        return eval;
    };
}

EvaluationProvider make_oracle_evaluator(int horizon,
                                         std::uint64_t node_budget) {
    auto solver = std::make_shared<BellmanSolver>(node_budget);
    return [solver, horizon](const Position& p) {
        // Deepen only while the value still depends on the cutoff; a
        // shallow resolved solve is already exact and much cheaper.
        ExactSolution sol = solver->solve(p, std::min(1, horizon));
        for (int h = 3; !sol.resolved && h <= horizon; h += 2)
            sol = solver->solve(p, h);
        if (!sol.resolved && horizon > 0 && horizon % 2 == 0)
            sol = solver->solve(p, horizon);
        Evaluation eval;
        eval.value = winprob_to_value(sol.value);
        std::vector<Move> moves;
        std::vector<double> scores;
        for (const auto& [m, q] : sol.q) {
            moves.push_back(m);
            scores.push_back(q);
        }
        if (!moves.empty()) eval.policy = softmax_policy(moves, scores, 0.25);
        return eval;
    };
}

}  // namespace dualmind
