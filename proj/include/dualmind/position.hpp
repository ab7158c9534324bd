#pragma once

#include <span>
#include <vector>

#include "dualmind/types.hpp"

namespace dualmind {

struct FenError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IllegalMoveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class GameResult : std::uint8_t {
    Ongoing,
    WhiteMates,
    BlackMates,
    Stalemate,
    DrawByRule,  // 50-move rule
};

// Castling right bits.
enum : std::uint8_t {
    kCastleWK = 1,
    kCastleWQ = 2,
    kCastleBK = 4,
    kCastleBQ = 8,
};

// Immutable full game state. All operations are pure; apply() returns a
// fresh Position. Safe to share read-only across threads.
class Position {
public:
    Position() = default;

    static Position startpos();
    static Position from_fen(std::string_view fen);  // throws FenError
    std::string fen() const;

    Color side_to_move() const { return stm_; }
    std::uint8_t castling_rights() const { return castling_; }
    std::optional<Square> en_passant() const {
        return ep_ < 0 ? std::nullopt : std::optional<Square>(ep_);
    }
    int halfmove_clock() const { return halfmove_; }
    int fullmove_number() const { return fullmove_; }
    std::uint64_t zobrist() const { return zobrist_; }

    std::optional<Piece> piece_on(Square s) const;
    Bitboard pieces(Color c) const { return by_color_[static_cast<int>(c)]; }
    Bitboard pieces(PieceKind k) const { return by_kind_[static_cast<int>(k)]; }
    Bitboard pieces(Color c, PieceKind k) const {
        return by_color_[static_cast<int>(c)] & by_kind_[static_cast<int>(k)];
    }
    Bitboard occupied() const { return by_color_[0] | by_color_[1]; }
    Square king_square(Color c) const { return lsb(pieces(c, PieceKind::King)); }

    bool is_attacked(Square s, Color by) const;
    bool in_check() const { return is_attacked(king_square(stm_), opposite(stm_)); }
    bool gives_check(Move m) const;

    // Exactly the FIDE-legal moves, sorted by (from, to, promotion).
    std::vector<Move> legal_moves() const;
    bool is_legal(Move m) const;

    Position apply(Move m) const;  // throws IllegalMoveError

    // Precondition: m came from legal_moves(). Skips the legality re-check;
    // this is what the searchers and perft use on their hot path.
    Position apply_trusted(Move m) const { return apply_unchecked(m); }

    // Checkmate / stalemate / 50-move rule. Repetition needs a history and
    // lives with the callers (see is_repetition).
    GameResult result() const;

    // True when this position's key occurs in `history` (prior keys on the
    // game path) often enough that, counting this occurrence, it has been
    // seen `times` times.
    bool is_repetition(std::span<const std::uint64_t> history, int times = 2) const;

    // Mirror ranks and swap colors; evaluation symmetry helper.
    Position color_flipped() const;

    std::uint64_t compute_zobrist() const;  // from scratch, for verification

    bool operator==(const Position& other) const;

private:
    friend class PositionBuilder;

    void put_piece(Color c, PieceKind k, Square s);
    void remove_piece(Color c, PieceKind k, Square s);
    void generate_pseudo_legal(std::vector<Move>& out) const;
    Position apply_unchecked(Move m) const;
    void validate() const;  // throws FenError on invariant breaks

    std::array<Bitboard, 2> by_color_{};
    std::array<Bitboard, 6> by_kind_{};
    // -1 empty, else color*6+kind
    std::array<std::int8_t, 64> mailbox_ = [] {
        std::array<std::int8_t, 64> m{};
        m.fill(-1);
        return m;
    }();
    Color stm_ = Color::White;
    std::uint8_t castling_ = 0;
    std::int8_t ep_ = -1;
    std::uint16_t halfmove_ = 0;
    std::uint16_t fullmove_ = 1;
    std::uint64_t zobrist_ = 0;
};

}  // namespace dualmind
