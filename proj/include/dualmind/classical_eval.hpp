#pragma once

#include <filesystem>

#include "dualmind/position.hpp"
#include "dualmind/score.hpp"

namespace dualmind {

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Material values in centipawns: P, N, B, R, Q.
constexpr std::array<int, 5> kPieceValues = {100, 320, 330, 500, 900};

// Tapered middlegame/endgame piece-square tables, loaded from the committed
// data/pst.txt (an identical copy is compiled in as the default).
class PieceSquareTables {
public:
    static const PieceSquareTables& builtin();
    static PieceSquareTables from_file(const std::filesystem::path& path);
    static PieceSquareTables from_text(std::string_view text);

    // White-perspective value for (kind, square); phase 0 = mg, 1 = eg.
    int get(PieceKind kind, Square sq, int phase) const {
        return table_[phase][static_cast<int>(kind)][sq];
    }

private:
    std::array<std::array<std::array<int, 64>, 6>, 2> table_{};
};

// Hand-crafted evaluation: material plus tapered piece-square terms,
// centipawns from the side-to-move perspective. Rejects terminal positions.
Score evaluate_classical(const Position& p, const PieceSquareTables& pst);
Score evaluate_classical(const Position& p);  // builtin tables

}  // namespace dualmind
