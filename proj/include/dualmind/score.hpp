#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace dualmind {

constexpr int kScoreInfinite = 32001;
constexpr int kMateValue = 32000;       // mate at the root, in internal units
constexpr int kMaxMatePly = 1000;
constexpr int kMateThreshold = kMateValue - kMaxMatePly;
constexpr int kMaxEval = 30000;         // static evals are clamped inside this

// Engine score: either centipawns or a mate distance in full moves, both
// from the side-to-move perspective (positive = side to move is better).
struct Score {
    enum class Kind : std::uint8_t { Centipawns, MateIn };
    Kind kind = Kind::Centipawns;
    int value = 0;

    static Score cp(int v) { return {Kind::Centipawns, v}; }
    static Score mate_in(int full_moves) { return {Kind::MateIn, full_moves}; }

    bool is_mate() const { return kind == Kind::MateIn; }
    bool operator==(const Score&) const = default;
};

// Internal search units <-> Score. A search value of kMateValue - ply means
// the mover mates in `ply` plies.
inline Score score_from_internal(int v) {
    if (v >= kMateThreshold) return Score::mate_in((kMateValue - v + 1) / 2);
    if (v <= -kMateThreshold) return Score::mate_in(-((kMateValue + v + 1) / 2));
    return Score::cp(v);
}

inline int internal_from_score(Score s) {
    if (!s.is_mate()) return s.value;
    // Mating in n moves takes 2n-1 plies; being mated in n takes 2n plies.
    if (s.value > 0) return kMateValue - (2 * s.value - 1);
    return -kMateValue + 2 * -s.value;
}

// "+3.99", "-2.84", "#15", "#-4" -- pawns with two decimals, mates as moves.
inline std::string score_to_string(Score s) {
    if (s.is_mate()) return "#" + std::to_string(s.value);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%+.2f", s.value / 100.0);
    return buf;
}

// UCI wire form: "cp 123" or "mate -4".
inline std::string score_to_uci(Score s) {
    return s.is_mate() ? "mate " + std::to_string(s.value)
                       : "cp " + std::to_string(s.value);
}

}  // namespace dualmind
