#pragma once

#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dualmind {

using Bitboard = std::uint64_t;

// Squares are 0..63, a1 = 0, h8 = 63.
using Square = int;

constexpr int kNumSquares = 64;

constexpr int file_of(Square s) { return s & 7; }
constexpr int rank_of(Square s) { return s >> 3; }
constexpr Square make_square(int file, int rank) { return rank * 8 + file; }
constexpr bool square_ok(Square s) { return s >= 0 && s < 64; }

// Vertical mirror (a1 <-> a8), used for black-perspective lookups.
constexpr Square flip_rank(Square s) { return s ^ 56; }

inline std::string square_name(Square s) {
    return {static_cast<char>('a' + file_of(s)), static_cast<char>('1' + rank_of(s))};
}

inline std::optional<Square> parse_square(std::string_view text) {
    if (text.size() != 2 || text[0] < 'a' || text[0] > 'h' || text[1] < '1' || text[1] > '8')
        return std::nullopt;
    return make_square(text[0] - 'a', text[1] - '1');
}

enum class Color : std::uint8_t { White, Black };

constexpr Color opposite(Color c) { return c == Color::White ? Color::Black : Color::White; }

enum class PieceKind : std::uint8_t { Pawn, Knight, Bishop, Rook, Queen, King };

struct Piece {
    Color color;
    PieceKind kind;
    bool operator==(const Piece&) const = default;
};

constexpr char kind_char(PieceKind k) {
    constexpr const char* chars = "PNBRQK";
    return chars[static_cast<int>(k)];
}

inline std::optional<PieceKind> kind_from_char(char c) {
    switch (c) {
        case 'P': return PieceKind::Pawn;
        case 'N': return PieceKind::Knight;
        case 'B': return PieceKind::Bishop;
        case 'R': return PieceKind::Rook;
        case 'Q': return PieceKind::Queen;
        case 'K': return PieceKind::King;
        default: return std::nullopt;
    }
}

// Promotion piece; None for ordinary moves.
enum class Promotion : std::uint8_t { None = 0, Knight, Bishop, Rook, Queen };

constexpr PieceKind promotion_kind(Promotion p) {
    switch (p) {
        case Promotion::Knight: return PieceKind::Knight;
        case Promotion::Bishop: return PieceKind::Bishop;
        case Promotion::Rook: return PieceKind::Rook;
        default: return PieceKind::Queen;
    }
}

struct Move {
    std::uint8_t from = 0;
    std::uint8_t to = 0;
    Promotion promotion = Promotion::None;

    auto operator<=>(const Move&) const = default;
};

// Long algebraic text, e.g. "g4f6", "d7d8n".
inline std::string to_uci(Move m) {
    std::string s = square_name(m.from) + square_name(m.to);
    switch (m.promotion) {
        case Promotion::Knight: s += 'n'; break;
        case Promotion::Bishop: s += 'b'; break;
        case Promotion::Rook: s += 'r'; break;
        case Promotion::Queen: s += 'q'; break;
        case Promotion::None: break;
    }
    return s;
}

inline std::optional<Move> move_from_uci(std::string_view text) {
    if (text.size() < 4 || text.size() > 5) return std::nullopt;
    auto from = parse_square(text.substr(0, 2));
    auto to = parse_square(text.substr(2, 2));
    if (!from || !to) return std::nullopt;
    Promotion promo = Promotion::None;
    if (text.size() == 5) {
        switch (text[4]) {
            case 'n': promo = Promotion::Knight; break;
            case 'b': promo = Promotion::Bishop; break;
            case 'r': promo = Promotion::Rook; break;
            case 'q': promo = Promotion::Queen; break;
            default: return std::nullopt;
        }
    }
    return Move{static_cast<std::uint8_t>(*from), static_cast<std::uint8_t>(*to), promo};
}

constexpr Bitboard square_bb(Square s) { return 1ULL << s; }

constexpr int popcount(Bitboard b) { return std::popcount(b); }
constexpr Square lsb(Bitboard b) { return std::countr_zero(b); }
constexpr Square msb(Bitboard b) { return 63 - std::countl_zero(b); }

inline Square pop_lsb(Bitboard& b) {
    Square s = lsb(b);
    b &= b - 1;
    return s;
}

}  // namespace dualmind
