#pragma once

#include <optional>

#include "dualmind/position.hpp"

namespace dualmind {

// 8x8x73 move encoding, side-to-move relative (ranks are flipped for Black).
// Planes 0-55: queen-like moves, 8 directions x 7 distances (N, NE, E, SE,
// S, SW, W, NW; distance-1 first). Planes 56-63: knight moves. Planes 64-72:
// underpromotions, 3 capture directions x {Knight, Bishop, Rook}. Queen
// promotions ride the queen-like planes. Index = plane * 64 + from-square.
constexpr int kPolicyPlanes = 73;
constexpr int kPolicyIndices = kPolicyPlanes * 64;  // 4672

struct PolicyPlaneIndex {
    int plane;   // 0-72
    int square;  // oriented from-square, 0-63
    int index() const { return plane * 64 + square; }
    bool operator==(const PolicyPlaneIndex&) const = default;
};

PolicyPlaneIndex encode_move(const Position& p, Move m);

// Inverse of encode_move for the same side to move. Returns nullopt when the
// index walks off the board; the result is not legality-checked.
std::optional<Move> decode_move(const Position& p, int index);

// Softmax over the raw plane scores restricted to the given legal moves.
// Returned probabilities are aligned with `legal` and sum to 1.
std::vector<double> mask_and_normalize(const std::vector<double>& raw,
                                       const std::vector<Move>& legal,
                                       const Position& p);

}  // namespace dualmind
