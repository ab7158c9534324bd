#include "dualmind/position.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "dualmind/attacks.hpp"
#include "dualmind/zobrist.hpp"

namespace dualmind {

namespace {

constexpr Bitboard kRank1 = 0xFFULL;
constexpr Bitboard kRank8 = kRank1 << 56;
constexpr Bitboard kBackRanks = kRank1 | kRank8;

int pawn_push(Color c) { return c == Color::White ? 8 : -8; }

// Castling rights cleared when a piece moves from / captures on a square.
constexpr std::array<std::uint8_t, 64> rights_mask_table = [] {
    std::array<std::uint8_t, 64> t{};
    for (auto& v : t) v = 0xFF;
    t[0] = static_cast<std::uint8_t>(~kCastleWQ);   // a1
    t[7] = static_cast<std::uint8_t>(~kCastleWK);   // h1
    t[4] = static_cast<std::uint8_t>(~(kCastleWK | kCastleWQ));  // e1
    t[56] = static_cast<std::uint8_t>(~kCastleBQ);  // a8
    t[63] = static_cast<std::uint8_t>(~kCastleBK);  // h8
    t[60] = static_cast<std::uint8_t>(~(kCastleBK | kCastleBQ));  // e8
    return t;
}();

}  // namespace

std::optional<Piece> Position::piece_on(Square s) const {
    std::int8_t v = mailbox_[s];
    if (v < 0) return std::nullopt;
    return Piece{static_cast<Color>(v / 6), static_cast<PieceKind>(v % 6)};
}

void Position::put_piece(Color c, PieceKind k, Square s) {
    Bitboard bb = square_bb(s);
    by_color_[static_cast<int>(c)] |= bb;
    by_kind_[static_cast<int>(k)] |= bb;
    mailbox_[s] = static_cast<std::int8_t>(static_cast<int>(c) * 6 + static_cast<int>(k));
    zobrist_ ^= zobrist::piece_key(c, k, s);
}

void Position::remove_piece(Color c, PieceKind k, Square s) {
    Bitboard bb = square_bb(s);
    by_color_[static_cast<int>(c)] &= ~bb;
    by_kind_[static_cast<int>(k)] &= ~bb;
    mailbox_[s] = -1;
    zobrist_ ^= zobrist::piece_key(c, k, s);
}

bool Position::is_attacked(Square s, Color by) const {
    Bitboard occ = occupied();
    if (pawn_attacks(opposite(by), s) & pieces(by, PieceKind::Pawn)) return true;
    if (knight_attacks(s) & pieces(by, PieceKind::Knight)) return true;
    if (king_attacks(s) & pieces(by, PieceKind::King)) return true;
    Bitboard diag = pieces(by, PieceKind::Bishop) | pieces(by, PieceKind::Queen);
    if (diag && (bishop_attacks(s, occ) & diag)) return true;
    Bitboard line = pieces(by, PieceKind::Rook) | pieces(by, PieceKind::Queen);
    if (line && (rook_attacks(s, occ) & line)) return true;
    return false;
}

void Position::generate_pseudo_legal(std::vector<Move>& out) const {
    const Color us = stm_;
    const Color them = opposite(us);
    const Bitboard own = pieces(us);
    const Bitboard enemy = pieces(them);
    const Bitboard occ = own | enemy;

    auto push_move = [&out](Square from, Square to) {
        out.push_back(Move{static_cast<std::uint8_t>(from),
                           static_cast<std::uint8_t>(to)});
    };
    auto push_pawn = [&out](Square from, Square to) {
        if (square_bb(to) & kBackRanks) {
            for (Promotion p : {Promotion::Knight, Promotion::Bishop,
                                Promotion::Rook, Promotion::Queen})
                out.push_back(Move{static_cast<std::uint8_t>(from),
                                   static_cast<std::uint8_t>(to), p});
        } else {
            out.push_back(Move{static_cast<std::uint8_t>(from),
                               static_cast<std::uint8_t>(to)});
        }
    };

    Bitboard pawns = pieces(us, PieceKind::Pawn);
    const int up = pawn_push(us);
    const int start_rank = us == Color::White ? 1 : 6;
    for (Bitboard b = pawns; b;) {
        Square from = pop_lsb(b);
        Square one = from + up;
        if (!(occ & square_bb(one))) {
            push_pawn(from, one);
            if (rank_of(from) == start_rank) {
                Square two = one + up;
                if (!(occ & square_bb(two))) push_move(from, two);
            }
        }
        Bitboard caps = pawn_attacks(us, from) & enemy;
        while (caps) push_pawn(from, pop_lsb(caps));
        if (ep_ >= 0 && (pawn_attacks(us, from) & square_bb(ep_)))
            push_move(from, ep_);
    }

    for (Bitboard b = pieces(us, PieceKind::Knight); b;) {
        Square from = pop_lsb(b);
        Bitboard targets = knight_attacks(from) & ~own;
        while (targets) push_move(from, pop_lsb(targets));
    }
    for (Bitboard b = pieces(us, PieceKind::Bishop); b;) {
        Square from = pop_lsb(b);
        Bitboard targets = bishop_attacks(from, occ) & ~own;
        while (targets) push_move(from, pop_lsb(targets));
    }
    for (Bitboard b = pieces(us, PieceKind::Rook); b;) {
        Square from = pop_lsb(b);
        Bitboard targets = rook_attacks(from, occ) & ~own;
        while (targets) push_move(from, pop_lsb(targets));
    }
    for (Bitboard b = pieces(us, PieceKind::Queen); b;) {
        Square from = pop_lsb(b);
        Bitboard targets = queen_attacks(from, occ) & ~own;
        while (targets) push_move(from, pop_lsb(targets));
    }

    Square ksq = king_square(us);
    Bitboard targets = king_attacks(ksq) & ~own;
    while (targets) push_move(ksq, pop_lsb(targets));

    // Castling: rights present, path empty, king squares not attacked.
    if (us == Color::White) {
        if ((castling_ & kCastleWK) && !(occ & (square_bb(5) | square_bb(6))) &&
            !is_attacked(4, them) && !is_attacked(5, them) && !is_attacked(6, them))
            push_move(4, 6);
        if ((castling_ & kCastleWQ) &&
            !(occ & (square_bb(1) | square_bb(2) | square_bb(3))) &&
            !is_attacked(4, them) && !is_attacked(3, them) && !is_attacked(2, them))
            push_move(4, 2);
    } else {
        if ((castling_ & kCastleBK) && !(occ & (square_bb(61) | square_bb(62))) &&
            !is_attacked(60, Color::White) && !is_attacked(61, Color::White) &&
            !is_attacked(62, Color::White))
            push_move(60, 62);
        if ((castling_ & kCastleBQ) &&
            !(occ & (square_bb(57) | square_bb(58) | square_bb(59))) &&
            !is_attacked(60, Color::White) && !is_attacked(59, Color::White) &&
            !is_attacked(58, Color::White))
            push_move(60, 58);
    }
}

std::vector<Move> Position::legal_moves() const {
    std::vector<Move> pseudo;
    pseudo.reserve(48);
    generate_pseudo_legal(pseudo);
    std::vector<Move> legal;
    legal.reserve(pseudo.size());
    for (Move m : pseudo) {
        Position next = apply_unchecked(m);
        if (!next.is_attacked(next.king_square(stm_), next.stm_)) legal.push_back(m);
    }
    std::sort(legal.begin(), legal.end());
    return legal;
}

bool Position::is_legal(Move m) const {
    std::vector<Move> pseudo;
    generate_pseudo_legal(pseudo);
    if (std::find(pseudo.begin(), pseudo.end(), m) == pseudo.end()) return false;
    Position next = apply_unchecked(m);
    return !next.is_attacked(next.king_square(stm_), next.stm_);
}

Position Position::apply_unchecked(Move m) const {
    Position p = *this;
    const Color us = stm_;
    const Color them = opposite(us);
    const Square from = m.from;
    const Square to = m.to;
    const Piece mover = *piece_on(from);

    p.ep_ = -1;
    p.halfmove_ = static_cast<std::uint16_t>(halfmove_ + 1);

    // Capture, including en passant.
    if (auto captured = piece_on(to)) {
        p.remove_piece(captured->color, captured->kind, to);
        p.halfmove_ = 0;
    } else if (mover.kind == PieceKind::Pawn && to == ep_) {
        Square cap_sq = to - pawn_push(us);
        p.remove_piece(them, PieceKind::Pawn, cap_sq);
        p.halfmove_ = 0;
    }

    p.remove_piece(us, mover.kind, from);
    if (m.promotion != Promotion::None)
        p.put_piece(us, promotion_kind(m.promotion), to);
    else
        p.put_piece(us, mover.kind, to);

    if (mover.kind == PieceKind::Pawn) {
        p.halfmove_ = 0;
        if (to - from == 2 * pawn_push(us)) {
            Square ep_sq = from + pawn_push(us);
            // Record only when an enemy pawn could pseudo-capture there;
            // keeps FEN output and hashing canonical.
            if (pawn_attacks(us, ep_sq) & p.pieces(them, PieceKind::Pawn))
                p.ep_ = static_cast<std::int8_t>(ep_sq);
        }
    }

    if (mover.kind == PieceKind::King && std::abs(to - from) == 2) {
        // Move the castling rook.
        Square rook_from, rook_to;
        if (to > from) {  // king side
            rook_from = make_square(7, rank_of(from));
            rook_to = to - 1;
        } else {
            rook_from = make_square(0, rank_of(from));
            rook_to = to + 1;
        }
        p.remove_piece(us, PieceKind::Rook, rook_from);
        p.put_piece(us, PieceKind::Rook, rook_to);
    }

    std::uint8_t new_rights =
        castling_ & rights_mask_table[from] & rights_mask_table[to];
    if (new_rights != castling_) {
        p.zobrist_ ^= zobrist::castling_key(castling_);
        p.zobrist_ ^= zobrist::castling_key(new_rights);
        p.castling_ = new_rights;
    }

    if (ep_ >= 0) p.zobrist_ ^= zobrist::en_passant_key(file_of(ep_));
    if (p.ep_ >= 0) p.zobrist_ ^= zobrist::en_passant_key(file_of(p.ep_));

    p.stm_ = them;
    p.zobrist_ ^= zobrist::side_key();
    if (us == Color::Black) p.fullmove_ = static_cast<std::uint16_t>(fullmove_ + 1);
    return p;
}

Position Position::apply(Move m) const {
    if (!is_legal(m))
        throw IllegalMoveError("illegal move " + to_uci(m) + " in " + fen());
    return apply_unchecked(m);
}

bool Position::gives_check(Move m) const {
    Position next = apply_unchecked(m);
    return next.in_check();
}

GameResult Position::result() const {
    if (legal_moves().empty()) {
        if (in_check())
            return stm_ == Color::White ? GameResult::BlackMates : GameResult::WhiteMates;
        return GameResult::Stalemate;
    }
    if (halfmove_ >= 100) return GameResult::DrawByRule;
    return GameResult::Ongoing;
}

bool Position::is_repetition(std::span<const std::uint64_t> history, int times) const {
    int seen = 1;
    for (std::uint64_t key : history)
        if (key == zobrist_ && ++seen >= times) return true;
    return false;
}

Position Position::color_flipped() const {
    Position p;
    for (Square s = 0; s < 64; ++s) {
        if (auto piece = piece_on(s))
            p.put_piece(opposite(piece->color), piece->kind, flip_rank(s));
    }
    p.stm_ = opposite(stm_);
    std::uint8_t rights = 0;
    if (castling_ & kCastleWK) rights |= kCastleBK;
    if (castling_ & kCastleWQ) rights |= kCastleBQ;
    if (castling_ & kCastleBK) rights |= kCastleWK;
    if (castling_ & kCastleBQ) rights |= kCastleWQ;
    p.castling_ = rights;
    if (ep_ >= 0) p.ep_ = static_cast<std::int8_t>(flip_rank(ep_));
    p.halfmove_ = halfmove_;
    p.fullmove_ = fullmove_;
    p.zobrist_ = p.compute_zobrist();
    return p;
}

std::uint64_t Position::compute_zobrist() const {
    std::uint64_t key = 0;
    for (Square s = 0; s < 64; ++s)
        if (auto piece = piece_on(s))
            key ^= zobrist::piece_key(piece->color, piece->kind, s);
    key ^= zobrist::castling_key(castling_);
    if (ep_ >= 0) key ^= zobrist::en_passant_key(file_of(ep_));
    if (stm_ == Color::Black) key ^= zobrist::side_key();
    return key;
}

bool Position::operator==(const Position& other) const {
    return by_color_ == other.by_color_ && by_kind_ == other.by_kind_ &&
           stm_ == other.stm_ && castling_ == other.castling_ && ep_ == other.ep_ &&
           halfmove_ == other.halfmove_ && fullmove_ == other.fullmove_;
}

void Position::validate() const {
    if (popcount(pieces(Color::White, PieceKind::King)) != 1 ||
        popcount(pieces(Color::Black, PieceKind::King)) != 1)
        throw FenError("illegal piece counts: need exactly one king per side");
    if (pieces(PieceKind::Pawn) & kBackRanks)
        throw FenError("illegal piece counts: pawn on first or last rank");
    for (Color c : {Color::White, Color::Black})
        if (popcount(pieces(c, PieceKind::Pawn)) > 8)
            throw FenError("illegal piece counts: more than 8 pawns");
    Color mover = stm_;
    Color idle = opposite(mover);
    if (is_attacked(king_square(idle), mover))
        throw FenError("side not to move is in check");
    if (halfmove_ > 150) throw FenError("halfmove clock above 150");
}

Position Position::from_fen(std::string_view fen) {
    std::istringstream in{std::string(fen)};
    std::string placement, stm, castling, ep, halfmove, fullmove;
    if (!(in >> placement >> stm >> castling >> ep))
        throw FenError("malformed FEN: need at least 4 fields");
    if (!(in >> halfmove)) halfmove = "0";
    if (!(in >> fullmove)) fullmove = "1";

    Position p;
    p.mailbox_.fill(-1);
    int rank = 7, file = 0;
    for (char c : placement) {
        if (c == '/') {
            if (file != 8 || rank == 0) throw FenError("malformed placement field");
            --rank;
            file = 0;
        } else if (c >= '1' && c <= '8') {
            file += c - '0';
            if (file > 8) throw FenError("malformed placement field");
        } else {
            auto kind = kind_from_char(static_cast<char>(std::toupper(c)));
            if (!kind || file > 7) throw FenError("malformed placement field");
            Color color = std::isupper(c) ? Color::White : Color::Black;
            p.put_piece(color, *kind, make_square(file, rank));
            ++file;
        }
    }
    if (rank != 0 || file != 8) throw FenError("malformed placement field");

    if (stm == "w")
        p.stm_ = Color::White;
    else if (stm == "b")
        p.stm_ = Color::Black;
    else
        throw FenError("malformed side-to-move field");
    if (p.stm_ == Color::Black) p.zobrist_ ^= zobrist::side_key();

    if (castling != "-") {
        for (char c : castling) {
            switch (c) {
                case 'K': p.castling_ |= kCastleWK; break;
                case 'Q': p.castling_ |= kCastleWQ; break;
                case 'k': p.castling_ |= kCastleBK; break;
                case 'q': p.castling_ |= kCastleBQ; break;
                default: throw FenError("malformed castling field");
            }
        }
    }
    // Rights must match rook/king placement.
    auto check_right = [&](std::uint8_t bit, Color c, Square ksq, Square rsq) {
        if (!(p.castling_ & bit)) return;
        if (p.piece_on(ksq) != Piece{c, PieceKind::King} ||
            p.piece_on(rsq) != Piece{c, PieceKind::Rook})
            p.castling_ &= static_cast<std::uint8_t>(~bit);
    };
    check_right(kCastleWK, Color::White, 4, 7);
    check_right(kCastleWQ, Color::White, 4, 0);
    check_right(kCastleBK, Color::Black, 60, 63);
    check_right(kCastleBQ, Color::Black, 60, 56);
    p.zobrist_ ^= zobrist::castling_key(p.castling_);

    if (ep != "-") {
        auto sq = parse_square(ep);
        if (!sq) throw FenError("malformed en-passant field");
        int expected_rank = p.stm_ == Color::White ? 5 : 2;
        if (rank_of(*sq) != expected_rank) throw FenError("malformed en-passant field");
        // Keep only when a capture is actually available (canonical form).
        if (pawn_attacks(opposite(p.stm_), *sq) & p.pieces(p.stm_, PieceKind::Pawn)) {
            p.ep_ = static_cast<std::int8_t>(*sq);
            p.zobrist_ ^= zobrist::en_passant_key(file_of(*sq));
        }
    }

    try {
        p.halfmove_ = static_cast<std::uint16_t>(std::stoi(halfmove));
        p.fullmove_ = static_cast<std::uint16_t>(std::stoi(fullmove));
    } catch (const std::exception&) {
        throw FenError("malformed clock field");
    }
    if (p.fullmove_ < 1) throw FenError("malformed clock field");

    p.validate();
    return p;
}

std::string Position::fen() const {
    std::string out;
    for (int rank = 7; rank >= 0; --rank) {
        int empty = 0;
        for (int file = 0; file < 8; ++file) {
            auto piece = piece_on(make_square(file, rank));
            if (!piece) {
                ++empty;
                continue;
            }
            if (empty) {
                out += static_cast<char>('0' + empty);
                empty = 0;
            }
            char c = kind_char(piece->kind);
            out += piece->color == Color::White ? c
                                               : static_cast<char>(std::tolower(c));
        }
        if (empty) out += static_cast<char>('0' + empty);
        if (rank) out += '/';
    }
    out += stm_ == Color::White ? " w " : " b ";
    if (!castling_) {
        out += '-';
    } else {
        if (castling_ & kCastleWK) out += 'K';
        if (castling_ & kCastleWQ) out += 'Q';
        if (castling_ & kCastleBK) out += 'k';
        if (castling_ & kCastleBQ) out += 'q';
    }
    out += ' ';
    out += ep_ < 0 ? "-" : square_name(ep_);
    out += ' ' + std::to_string(halfmove_) + ' ' + std::to_string(fullmove_);
    return out;
}

Position Position::startpos() {
    return from_fen("rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1");
}

}  // namespace dualmind
