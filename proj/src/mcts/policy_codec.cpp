#include "dualmind/policy_codec.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace dualmind {

namespace {

// N NE E SE S SW W NW in oriented (side-to-move) coordinates.
constexpr int kQueenDf[8] = {0, 1, 1, 1, 0, -1, -1, -1};
constexpr int kQueenDr[8] = {1, 1, 0, -1, -1, -1, 0, 1};

constexpr int kKnightDf[8] = {1, 2, 2, 1, -1, -2, -2, -1};
constexpr int kKnightDr[8] = {2, 1, -1, -2, -2, -1, 1, 2};

Square orient(Color stm, Square sq) {
    return stm == Color::White ? sq : flip_rank(sq);
}

int underpromo_piece_index(Promotion p) {
    switch (p) {
        case Promotion::Knight: return 0;
        case Promotion::Bishop: return 1;
        case Promotion::Rook: return 2;
        default: return -1;
    }
}

}  // namespace

PolicyPlaneIndex encode_move(const Position& p, Move m) {
    Color stm = p.side_to_move();
    Square from = orient(stm, m.from);
    Square to = orient(stm, m.to);
    int df = file_of(to) - file_of(from);
    int dr = rank_of(to) - rank_of(from);

    int piece = underpromo_piece_index(m.promotion);
    if (piece >= 0) {
        if (dr != 1 || df < -1 || df > 1)
            throw std::invalid_argument("unencodable underpromotion");
        return {64 + (df + 1) * 3 + piece, from};
    }

    for (int k = 0; k < 8; ++k)
        if (df == kKnightDf[k] && dr == kKnightDr[k]) return {56 + k, from};

    for (int d = 0; d < 8; ++d) {
        if ((df == 0) != (kQueenDf[d] == 0)) continue;
        if ((dr == 0) != (kQueenDr[d] == 0)) continue;
        if (df * kQueenDf[d] < 0 || dr * kQueenDr[d] < 0) continue;
        int dist = std::max(std::abs(df), std::abs(dr));
        if (df == kQueenDf[d] * dist && dr == kQueenDr[d] * dist)
            return {d * 7 + dist - 1, from};
    }
    throw std::invalid_argument("unencodable move " + to_uci(m));
}

std::optional<Move> decode_move(const Position& p, int index) {
    if (index < 0 || index >= kPolicyIndices) return std::nullopt;
    Color stm = p.side_to_move();
    int plane = index / 64;
    Square from_oriented = index % 64;
    int f = file_of(from_oriented), r = rank_of(from_oriented);

    int df, dr;
    Promotion promo = Promotion::None;
    if (plane < 56) {
        int dir = plane / 7, dist = plane % 7 + 1;
        df = kQueenDf[dir] * dist;
        dr = kQueenDr[dir] * dist;
    } else if (plane < 64) {
        df = kKnightDf[plane - 56];
        dr = kKnightDr[plane - 56];
    } else {
        int k = plane - 64;
        df = k / 3 - 1;
        dr = 1;
        promo = std::array{Promotion::Knight, Promotion::Bishop,
                           Promotion::Rook}[k % 3];
    }

    int tf = f + df, tr = r + dr;
    if (tf < 0 || tf > 7 || tr < 0 || tr > 7) return std::nullopt;
    Square to_oriented = make_square(tf, tr);

    Move m{static_cast<std::uint8_t>(orient(stm, from_oriented)),
           static_cast<std::uint8_t>(orient(stm, to_oriented)), promo};
    if (plane < 56 && tr == 7) {
        auto pc = p.piece_on(m.from);
        if (pc && pc->kind == PieceKind::Pawn) m.promotion = Promotion::Queen;
    }
    return m;
}

std::vector<double> mask_and_normalize(const std::vector<double>& raw,
                                       const std::vector<Move>& legal,
                                       const Position& p) {
    if (legal.empty()) throw std::invalid_argument("no legal moves to mask to");
    std::vector<double> scores(legal.size());
    double max_score = -1e300;
    for (std::size_t i = 0; i < legal.size(); ++i) {
        int idx = encode_move(p, legal[i]).index();
        scores[i] = idx < static_cast<int>(raw.size()) ? raw[idx] : 0.0;
        max_score = std::max(max_score, scores[i]);
    }
    double sum = 0.0;
    for (double& s : scores) {
        s = std::exp(s - max_score);
        sum += s;
    }
    for (double& s : scores) s /= sum;
    return scores;
}

}  // namespace dualmind
