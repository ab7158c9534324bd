#include "dualmind/san.hpp"

#include <algorithm>

namespace dualmind {

namespace {

std::string strip_suffix(std::string_view token, int& check_kind) {
    std::string body(token);
    check_kind = 0;
    while (!body.empty() && (body.back() == '+' || body.back() == '#' ||
                             body.back() == '!' || body.back() == '?')) {
        if (body.back() == '+') check_kind = std::max(check_kind, 1);
        if (body.back() == '#') check_kind = 2;
        body.pop_back();
    }
    return body;
}

}  // namespace

Move parse_san(const Position& p, std::string_view token) {
    int check_kind = 0;
    std::string body = strip_suffix(token, check_kind);
    if (body.empty()) throw SanError("empty SAN token");

    auto moves = p.legal_moves();
    std::vector<Move> matches;

    if (body == "O-O" || body == "0-0" || body == "O-O-O" || body == "0-0-0") {
        bool king_side = body == "O-O" || body == "0-0";
        for (Move m : moves) {
            if (p.piece_on(m.from)->kind != PieceKind::King) continue;
            int delta = m.to - m.from;
            if ((king_side && delta == 2) || (!king_side && delta == -2))
                matches.push_back(m);
        }
    } else {
        PieceKind kind = PieceKind::Pawn;
        std::size_t i = 0;
        if (auto k = kind_from_char(body[0]); k && body[0] != 'P' && *k != PieceKind::Pawn) {
            kind = *k;
            i = 1;
        }
        Promotion promo = Promotion::None;
        if (body.size() >= 2 && body[body.size() - 2] == '=') {
            switch (body.back()) {
                case 'N': promo = Promotion::Knight; break;
                case 'B': promo = Promotion::Bishop; break;
                case 'R': promo = Promotion::Rook; break;
                case 'Q': promo = Promotion::Queen; break;
                default: throw SanError("bad promotion piece in '" + std::string(token) + "'");
            }
            body.resize(body.size() - 2);
        }
        if (body.size() < i + 2) throw SanError("malformed SAN token '" + std::string(token) + "'");
        auto dest = parse_square(std::string_view(body).substr(body.size() - 2));
        if (!dest) throw SanError("malformed SAN destination in '" + std::string(token) + "'");
        std::string middle = body.substr(i, body.size() - 2 - i);
        int from_file = -1, from_rank = -1;
        for (char c : middle) {
            if (c == 'x') continue;
            if (c >= 'a' && c <= 'h')
                from_file = c - 'a';
            else if (c >= '1' && c <= '8')
                from_rank = c - '1';
            else
                throw SanError("malformed SAN token '" + std::string(token) + "'");
        }
        for (Move m : moves) {
            if (m.to != *dest || m.promotion != promo) continue;
            if (p.piece_on(m.from)->kind != kind) continue;
            if (from_file >= 0 && file_of(m.from) != from_file) continue;
            if (from_rank >= 0 && rank_of(m.from) != from_rank) continue;
            matches.push_back(m);
        }
        // Pawn captures must name the source file ("exd5", not "d5").
        if (kind == PieceKind::Pawn && from_file < 0)
            std::erase_if(matches, [&](Move m) { return file_of(m.from) != file_of(m.to); });
    }

    if (matches.empty())
        throw SanError("no legal move matches '" + std::string(token) + "'");
    if (matches.size() > 1)
        throw SanError("ambiguous SAN token '" + std::string(token) + "'");

    Move m = matches.front();
    if (check_kind > 0) {
        Position next = p.apply(m);
        if (!next.in_check())
            throw SanError("'" + std::string(token) + "' claims check but gives none");
        if (check_kind == 2) {
            GameResult r = next.result();
            if (r != GameResult::WhiteMates && r != GameResult::BlackMates)
                throw SanError("'" + std::string(token) + "' claims mate but is not mate");
        }
    }
    return m;
}

std::string to_san(const Position& p, Move m) {
    if (!p.is_legal(m)) throw SanError("to_san of illegal move " + to_uci(m));
    const Piece mover = *p.piece_on(m.from);
    std::string out;

    if (mover.kind == PieceKind::King && std::abs(m.to - m.from) == 2) {
        out = m.to > m.from ? "O-O" : "O-O-O";
    } else {
        bool capture = p.piece_on(m.to).has_value() ||
                       (mover.kind == PieceKind::Pawn && p.en_passant() == m.to);
        if (mover.kind == PieceKind::Pawn) {
            if (capture) out += static_cast<char>('a' + file_of(m.from));
        } else {
            out += kind_char(mover.kind);
            // Disambiguate against other same-kind pieces reaching the target.
            bool need_file = false, need_rank = false, ambiguous = false;
            for (Move other : p.legal_moves()) {
                if (other == m || other.to != m.to) continue;
                if (p.piece_on(other.from)->kind != mover.kind) continue;
                ambiguous = true;
                if (file_of(other.from) == file_of(m.from)) need_rank = true;
                if (rank_of(other.from) == rank_of(m.from)) need_file = true;
            }
            if (ambiguous && !need_file && !need_rank) need_file = true;
            if (need_file) out += static_cast<char>('a' + file_of(m.from));
            if (need_rank) out += static_cast<char>('1' + rank_of(m.from));
        }
        if (capture) out += 'x';
        out += square_name(m.to);
        if (m.promotion != Promotion::None) {
            out += '=';
            out += kind_char(promotion_kind(m.promotion));
        }
    }

    Position next = p.apply(m);
    if (next.in_check()) {
        GameResult r = next.result();
        out += (r == GameResult::WhiteMates || r == GameResult::BlackMates) ? '#' : '+';
    }
    return out;
}

}  // namespace dualmind
