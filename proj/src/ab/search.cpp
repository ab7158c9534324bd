#include "dualmind/ab_search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "dualmind/classical_eval.hpp"

namespace dualmind {

namespace {

std::int64_t now_ms() {
    using namespace std::chrono;
    return duration_cast<milliseconds>(steady_clock::now().time_since_epoch())
        .count();
}

int piece_value_of(PieceKind k) {
    switch (k) {
        case PieceKind::Pawn: return 1;
        case PieceKind::Knight: return 3;
        case PieceKind::Bishop: return 3;
        case PieceKind::Rook: return 5;
        case PieceKind::Queen: return 9;
        case PieceKind::King: return 20;
    }
    return 0;
}

}  // namespace

bool futility_prune(int static_eval, int depth, int alpha) {
    if (depth >= kFutilityMaxDepth) return false;
    if (std::abs(alpha) >= kMateThreshold) return false;
    return static_eval + futility_margin(depth) <= alpha;
}

int lmr_reduction(int move_index, int depth, bool is_quiet) {
    if (!is_quiet || move_index < 3 || depth < 2) return 0;
    int r = static_cast<int>(
        std::floor(0.5 + std::log(depth) * std::log(move_index) / 2.25));
    return std::clamp(r, 0, depth - 1);
}

TranspositionTable::TranspositionTable(std::size_t mib) {
    std::size_t n = std::max<std::size_t>(1024, mib * 1024 * 1024 / sizeof(Entry));
    slots_.resize(n);
}

void TranspositionTable::clear() {
    std::fill(slots_.begin(), slots_.end(), Entry{});
}

const TranspositionTable::Entry* TranspositionTable::probe(
    std::uint64_t key) const {
    const Entry& e = slots_[key % slots_.size()];
    return e.used && e.key == key ? &e : nullptr;
}

void TranspositionTable::store(std::uint64_t key, int value, int depth,
                               Bound bound, Move best) {
    Entry& e = slots_[key % slots_.size()];
    if (e.used && e.key == key && e.depth > depth) return;
    if (e.used && e.key != key && e.depth > depth) return;  // replace-by-depth
    e = Entry{key, value, static_cast<std::int16_t>(depth), bound, best, true};
}

AlphaBetaSearcher::AlphaBetaSearcher(HeuristicToggles toggles,
                                     std::size_t tt_mib, Evaluator evaluator)
    : toggles_(toggles),
      evaluator_(std::move(evaluator)),
      tt_(toggles.tt ? tt_mib : 1) {
    if (!evaluator_)
        evaluator_ = [](const Position& p) {
            return evaluate_classical(p).value;
        };
}

bool AlphaBetaSearcher::is_capture(const Position& p, Move m) const {
    if (p.piece_on(m.to)) return true;
    auto moved = p.piece_on(m.from);
    return moved && moved->kind == PieceKind::Pawn &&
           file_of(m.from) != file_of(m.to);  // en passant
}

void AlphaBetaSearcher::check_limits() {
    if (node_limit_ && nodes_ >= node_limit_) throw StopSearch{};
    if ((nodes_ & 63) == 0) {
        if (stop_.load(std::memory_order_relaxed)) throw StopSearch{};
        if (deadline_ms_ && now_ms() >= deadline_ms_) throw StopSearch{};
    }
}

void AlphaBetaSearcher::order_moves(const Position& p, std::vector<Move>& moves,
                                    Move tt_move, int ply) const {
    int stm = static_cast<int>(p.side_to_move());
    std::vector<std::pair<int, Move>> scored;
    scored.reserve(moves.size());
    for (Move m : moves) {
        int s = 0;
        if (m == tt_move) {
            s = 1 << 24;
        } else if (auto victim = p.piece_on(m.to)) {
            s = (1 << 20) + 16 * piece_value_of(victim->kind) -
                piece_value_of(p.piece_on(m.from)->kind);
        } else if (m.promotion != Promotion::None) {
            s = (1 << 19) + static_cast<int>(m.promotion);
        } else if (ply < 128 &&
                   (m == killers_[ply][0] || m == killers_[ply][1])) {
            s = 1 << 18;
        } else {
            s = history_heuristic_[stm][m.from][m.to];
        }
        scored.emplace_back(s, m);
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; i < moves.size(); ++i) moves[i] = scored[i].second;
}

int AlphaBetaSearcher::quiescence(const Position& p, int alpha, int beta,
                                  int ply) {
    ++nodes_;
    check_limits();

    auto moves = p.legal_moves();
    if (moves.empty()) return p.in_check() ? -(kMateValue - ply) : 0;

    bool in_check = p.in_check();
    int best = -kScoreInfinite;
    if (!in_check) {
        int stand = evaluator_(p);
        if (stand >= beta) return stand;
        best = stand;
        alpha = std::max(alpha, stand);
    }

    order_moves(p, moves, Move{}, ply);
    for (Move m : moves) {
        if (!in_check && !is_capture(p, m) && m.promotion == Promotion::None)
            continue;
        int v = -quiescence(p.apply_trusted(m), -beta, -alpha, ply + 1);
        if (v > best) best = v;
        if (v > alpha) alpha = v;
        if (alpha >= beta) break;
    }
    return best;
}

int AlphaBetaSearcher::negamax(const Position& p, int depth, int alpha,
                               int beta, int ply,
                               std::vector<std::uint64_t>& path,
                               std::vector<Move>& pv) {
    pv.clear();
    bool is_pv = beta - alpha > 1;

    if (p.halfmove_clock() >= 100 &&
        !(p.in_check() && p.legal_moves().empty()))
        return 0;
    if (std::find(path.begin(), path.end(), p.zobrist()) != path.end())
        return 0;

    if (depth <= 0 && toggles_.quiescence)
        return quiescence(p, alpha, beta, ply);

    ++nodes_;
    check_limits();

    Move tt_move{};
    if (toggles_.tt) {
        if (const auto* e = tt_.probe(p.zobrist())) {
            tt_move = e->best;
            if (e->depth >= depth && !is_pv) {
                int v = e->value;
                if (v >= kMateThreshold) v -= ply;
                if (v <= -kMateThreshold) v += ply;
                switch (e->bound) {
                    case TranspositionTable::Bound::Exact: return v;
                    case TranspositionTable::Bound::Lower:
                        if (v >= beta) return v;
                        break;
                    case TranspositionTable::Bound::Upper:
                        if (v <= alpha) return v;
                        break;
                }
            }
        }
    }

    auto moves = p.legal_moves();
    if (moves.empty()) return p.in_check() ? -(kMateValue - ply) : 0;
    if (depth <= 0) return evaluator_(p);

    bool in_check = p.in_check();
    int static_eval = 0;
    bool have_static = false;
    if (toggles_.futility && !in_check && depth < kFutilityMaxDepth) {
        static_eval = evaluator_(p);
        have_static = true;
    }

    order_moves(p, moves, tt_move, ply);

    int alpha0 = alpha;
    int best = -kScoreInfinite;
    Move best_move{};
    std::vector<Move> child_pv;
    path.push_back(p.zobrist());
    int searched = 0;
    for (std::size_t i = 0; i < moves.size(); ++i) {
        Move m = moves[i];
        bool quiet = !is_capture(p, m) && m.promotion == Promotion::None;

        if (toggles_.futility && have_static && quiet && !p.gives_check(m) &&
            searched > 0 && futility_prune(static_eval, depth, alpha)) {
            // The pruned move cannot raise alpha; its bound is the eval.
            if (static_eval > best) best = static_eval;
            continue;
        }

        Position child = p.apply_trusted(m);
        int v;
        if (searched == 0) {
            v = -negamax(child, depth - 1, -beta, -alpha, ply + 1, path,
                         child_pv);
        } else {
            // Later moves get a zero-window probe (reduced when LMR
            // applies); anything that beats alpha is re-searched in full.
            int r = toggles_.lmr && !in_check
                        ? lmr_reduction(static_cast<int>(i), depth, quiet)
                        : 0;
            v = -negamax(child, depth - 1 - r, -alpha - 1, -alpha, ply + 1,
                         path, child_pv);
            if (v > alpha && (r > 0 || v < beta))
                v = -negamax(child, depth - 1, -beta, -alpha, ply + 1, path,
                             child_pv);
        }
        ++searched;

        if (v > best) {
            best = v;
            best_move = m;
            pv.clear();
            pv.push_back(m);
            pv.insert(pv.end(), child_pv.begin(), child_pv.end());
        }
        if (v > alpha) alpha = v;
        if (alpha >= beta) {
            if (quiet) {
                if (ply < 128 && !(killers_[ply][0] == m)) {
                    killers_[ply][1] = killers_[ply][0];
                    killers_[ply][0] = m;
                }
                int stm = static_cast<int>(p.side_to_move());
                history_heuristic_[stm][m.from][m.to] += depth * depth;
            }
            break;
        }
    }
    path.pop_back();

    if (toggles_.tt) {
        int stored = best;
        if (stored >= kMateThreshold) stored += ply;
        if (stored <= -kMateThreshold) stored -= ply;
        auto bound = best <= alpha0 ? TranspositionTable::Bound::Upper
                     : best >= beta ? TranspositionTable::Bound::Lower
                                    : TranspositionTable::Bound::Exact;
        tt_.store(p.zobrist(), stored, depth, bound, best_move);
    }
    return best;
}

SearchResult AlphaBetaSearcher::search(const Position& p,
                                       const SearchLimits& limits,
                                       const std::vector<std::uint64_t>& history,
                                       const IterationCallback& on_iteration) {
    if (limits.max_depth <= 0 && limits.max_nodes == 0 &&
        limits.max_time_ms <= 0)
        throw SearchError("at least one search limit must be set");
    if (limits.multipv < 1) throw SearchError("multipv must be >= 1");

    auto root_moves = p.legal_moves();
    if (root_moves.empty()) throw SearchError("cannot search a terminal position");

    stop_.store(false, std::memory_order_relaxed);
    nodes_ = 0;
    std::fill(&killers_[0][0], &killers_[0][0] + 128 * 2, Move{});
    std::fill(&history_heuristic_[0][0][0],
              &history_heuristic_[0][0][0] + 2 * 64 * 64, 0);

    std::int64_t start = now_ms();
    int multipv = std::min<int>(limits.multipv, root_moves.size());

    SearchResult last{};
    int max_depth = limits.max_depth > 0 ? limits.max_depth : 512;
    for (int d = 1; d <= max_depth; ++d) {
        // The first iteration always completes so a bestmove always exists.
        node_limit_ = d == 1 ? 0 : limits.max_nodes;
        deadline_ms_ = d == 1 || limits.max_time_ms <= 0
                           ? 0
                           : start + limits.max_time_ms;
        bool stopped = false;
        SearchResult cur;
        cur.nominal_depth = d;
        try {
            std::vector<Move> excluded;
            auto ordered = root_moves;
            Move prev_best = last.lines.empty() ? Move{} : last.lines[0].move;
            order_moves(p, ordered, prev_best, 0);
            for (int k = 0; k < multipv; ++k) {
                int alpha = -kScoreInfinite;
                Move best_move{};
                std::vector<Move> best_pv;
                std::vector<Move> child_pv;
                for (Move m : ordered) {
                    if (std::find(excluded.begin(), excluded.end(), m) !=
                        excluded.end())
                        continue;
                    std::vector<std::uint64_t> path = history;
                    path.push_back(p.zobrist());
                    int v = -negamax(p.apply_trusted(m), d - 1, -kScoreInfinite,
                                     -alpha, 1, path, child_pv);
                    if (v > alpha || best_move == Move{}) {
                        alpha = v;
                        best_move = m;
                        best_pv.clear();
                        best_pv.push_back(m);
                        best_pv.insert(best_pv.end(), child_pv.begin(),
                                       child_pv.end());
                    }
                }
                cur.lines.push_back(
                    {best_move, score_from_internal(alpha), best_pv});
                excluded.push_back(best_move);
            }
        } catch (StopSearch&) {
            stopped = true;
        }
        if (!stopped) {
            cur.nodes = nodes_;
            cur.elapsed_ms = now_ms() - start;
            last = cur;
            if (on_iteration) on_iteration(last);
        }
        last.nodes = nodes_;
        last.elapsed_ms = now_ms() - start;
        if (stopped) break;
        if (limits.max_nodes && nodes_ >= limits.max_nodes) break;
        if (limits.max_time_ms > 0 && now_ms() - start >= limits.max_time_ms)
            break;
    }
    return last;
}

}  // namespace dualmind
