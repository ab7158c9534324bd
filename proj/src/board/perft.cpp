#include "dualmind/perft.hpp"

namespace dualmind {

std::uint64_t perft(const Position& p, int depth) {
    if (depth <= 0) return 1;
    auto moves = p.legal_moves();
    if (depth == 1) return moves.size();
    std::uint64_t nodes = 0;
    for (Move m : moves) nodes += perft(p.apply_trusted(m), depth - 1);
    return nodes;
}

}  // namespace dualmind
