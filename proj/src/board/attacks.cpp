#include "dualmind/attacks.hpp"

namespace dualmind {
namespace {

// Ray directions: N, NE, E, SE, S, SW, W, NW.
constexpr std::array<std::pair<int, int>, 8> kRayDeltas = {{
    {0, 1}, {1, 1}, {1, 0}, {1, -1}, {0, -1}, {-1, -1}, {-1, 0}, {-1, 1},
}};

struct Tables {
    std::array<std::array<Bitboard, 64>, 8> rays{};
    std::array<Bitboard, 64> knight{};
    std::array<Bitboard, 64> king{};
    std::array<std::array<Bitboard, 64>, 2> pawn{};

    Tables() {
        for (Square s = 0; s < 64; ++s) {
            int f = file_of(s), r = rank_of(s);
            for (int d = 0; d < 8; ++d) {
                auto [df, dr] = kRayDeltas[d];
                int nf = f + df, nr = r + dr;
                while (nf >= 0 && nf < 8 && nr >= 0 && nr < 8) {
                    rays[d][s] |= square_bb(make_square(nf, nr));
                    nf += df;
                    nr += dr;
                }
            }
            constexpr std::array<std::pair<int, int>, 8> knight_deltas = {{
                {1, 2}, {2, 1}, {2, -1}, {1, -2}, {-1, -2}, {-2, -1}, {-2, 1}, {-1, 2},
            }};
            for (auto [df, dr] : knight_deltas) {
                int nf = f + df, nr = r + dr;
                if (nf >= 0 && nf < 8 && nr >= 0 && nr < 8)
                    knight[s] |= square_bb(make_square(nf, nr));
            }
            for (auto [df, dr] : kRayDeltas) {
                int nf = f + df, nr = r + dr;
                if (nf >= 0 && nf < 8 && nr >= 0 && nr < 8)
                    king[s] |= square_bb(make_square(nf, nr));
            }
            for (int side = 0; side < 2; ++side) {
                int dr = side == 0 ? 1 : -1;
                for (int df : {-1, 1}) {
                    int nf = f + df, nr = r + dr;
                    if (nf >= 0 && nf < 8 && nr >= 0 && nr < 8)
                        pawn[side][s] |= square_bb(make_square(nf, nr));
                }
            }
        }
    }
};

const Tables& tables() {
    static const Tables t;
    return t;
}

// Positive rays (toward higher square index) use the lowest blocker,
// negative rays the highest.
Bitboard ray_attack(int dir, Square s, Bitboard occupied) {
    Bitboard attacks = tables().rays[dir][s];
    Bitboard blockers = attacks & occupied;
    if (blockers) {
        bool positive = dir == 0 || dir == 1 || dir == 2 || dir == 7;
        Square first = positive ? lsb(blockers) : msb(blockers);
        attacks ^= tables().rays[dir][first];
    }
    return attacks;
}

}  // namespace

Bitboard knight_attacks(Square s) { return tables().knight[s]; }
Bitboard king_attacks(Square s) { return tables().king[s]; }

Bitboard pawn_attacks(Color c, Square s) {
    return tables().pawn[static_cast<int>(c)][s];
}

Bitboard bishop_attacks(Square s, Bitboard occupied) {
    return ray_attack(1, s, occupied) | ray_attack(3, s, occupied) |
           ray_attack(5, s, occupied) | ray_attack(7, s, occupied);
}

Bitboard rook_attacks(Square s, Bitboard occupied) {
    return ray_attack(0, s, occupied) | ray_attack(2, s, occupied) |
           ray_attack(4, s, occupied) | ray_attack(6, s, occupied);
}

Bitboard queen_attacks(Square s, Bitboard occupied) {
    return bishop_attacks(s, occupied) | rook_attacks(s, occupied);
}

}  // namespace dualmind
