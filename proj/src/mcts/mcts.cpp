#include "dualmind/mcts.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace dualmind {

int MctsNode::child_visit_sum() const {
    int n = 0;
    for (const Edge& e : edges) n += e.visits;
    return n;
}

std::size_t puct_select(const MctsNode& node, const PuctParams& params) {
    if (!node.expanded || node.edges.empty())
        throw MctsError("puct_select on an unexpanded node");

    int n_sum = node.child_visit_sum();
    double c = std::log((1.0 + n_sum + params.c_base) / params.c_base) +
               params.c_init;
    double sqrt_n = std::sqrt(static_cast<double>(n_sum));
    double parent_q = node.q();

    std::size_t best = 0;
    double best_score = -1e300;
    for (std::size_t i = 0; i < node.edges.size(); ++i) {
        const auto& e = node.edges[i];
        double q = e.visits ? e.q()
                            : std::clamp(parent_q - params.fpu, -1.0, 1.0);
        double u = c * e.prior * sqrt_n / (1.0 + e.visits);
        double score = q + u;
        if (score > best_score) {
            best_score = score;
            best = i;
        }
    }
    return best;
}

double MctsSearcher::simulate(MctsNode& node, const Position& p,
                              const EvaluationProvider& provider) {
    if (!node.expanded) {
        node.expanded = true;
        auto moves = p.legal_moves();
        GameResult res = p.result();
        if (res != GameResult::Ongoing) {
            node.terminal = true;
            node.terminal_value = moves.empty() && p.in_check() ? -1.0 : 0.0;
            node.visits = 1;
            node.value_sum = node.terminal_value;
            return node.terminal_value;
        }
        Evaluation eval = provider(p);
        node.edges.reserve(moves.size());
        double sum = 0.0;
        for (Move m : moves) {
            double prior = 0.0;
            for (const auto& [pm, pp] : eval.policy)
                if (pm == m) {
                    prior = pp;
                    break;
                }
            node.edges.push_back({m, prior, 0, 0.0, nullptr});
            sum += prior;
        }
        for (auto& e : node.edges)
            e.prior = sum > 0 ? e.prior / sum : 1.0 / node.edges.size();
        node.visits = 1;
        node.value_sum = eval.value;
        return eval.value;
    }

    if (node.terminal) {
        node.visits += 1;
        node.value_sum += node.terminal_value;
        return node.terminal_value;
    }

    std::size_t i = puct_select(node, params_);
    auto& edge = node.edges[i];
    if (!edge.child) edge.child = std::make_unique<MctsNode>();
    double v = -simulate(*edge.child, p.apply_trusted(edge.move), provider);
    edge.visits += 1;
    edge.total_value += v;
    node.visits += 1;
    node.value_sum += v;
    return v;
}

namespace {

MctsResult snapshot(const MctsNode& root, int done,
                    std::chrono::steady_clock::time_point start) {
    MctsResult r;
    r.simulations = done;
    r.root_value = root.q();
    for (const auto& e : root.edges)
        r.stats.push_back({e.move, e.visits,
                           root.visits > 1
                               ? static_cast<double>(e.visits) / (root.visits - 1)
                               : 0.0,
                           e.q(), e.prior});
    std::stable_sort(r.stats.begin(), r.stats.end(),
                     [](const RootStat& a, const RootStat& b) {
                         if (a.visits != b.visits) return a.visits > b.visits;
                         return a.q > b.q;
                     });

    // Visit-count argmax; with only the root expansion done, fall back to
    // the prior.
    if (root.child_visit_sum() == 0) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < root.edges.size(); ++i)
            if (root.edges[i].prior > root.edges[best].prior) best = i;
        r.best = root.edges[best].move;
    } else {
        r.best = r.stats.front().move;
    }

    const MctsNode* node = &root;
    while (node && node->expanded && !node->terminal && !node->edges.empty()) {
        const MctsNode::Edge* best_edge = nullptr;
        for (const auto& e : node->edges)
            if (e.visits > 0 && (!best_edge || e.visits > best_edge->visits))
                best_edge = &e;
        if (!best_edge) break;
        r.pv.push_back(best_edge->move);
        node = best_edge->child.get();
    }
    if (r.pv.empty()) r.pv.push_back(r.best);

    r.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    return r;
}

}  // namespace

MctsResult MctsSearcher::run(const Position& p, int simulations,
                             const EvaluationProvider& provider,
                             int report_every,
                             const ProgressCallback& on_progress) {
    if (simulations < 1) throw MctsError("simulations must be >= 1");
    if (p.result() != GameResult::Ongoing)
        throw MctsError("cannot search a terminal position");

    stop_.store(false, std::memory_order_relaxed);
    auto start = std::chrono::steady_clock::now();

    MctsNode root;
    int done = 0;
    for (; done < simulations; ++done) {
        if (done > 0 && stop_.load(std::memory_order_relaxed)) break;
        simulate(root, p, provider);
        if (report_every > 0 && on_progress && (done + 1) % report_every == 0 &&
            done + 1 < simulations)
            on_progress(snapshot(root, done + 1, start));
    }
    return snapshot(root, done, start);
}

std::string root_stats_csv(const MctsResult& r) {
    std::ostringstream out;
    out << "move,visits,fraction,Q,prior\n";
    for (const auto& s : r.stats) {
        char line[128];
        std::snprintf(line, sizeof line, "%s,%d,%.6f,%.6f,%.6f\n",
                      to_uci(s.move).c_str(), s.visits, s.fraction, s.q,
                      s.prior);
        out << line;
    }
    return out.str();
}

}  // namespace dualmind
