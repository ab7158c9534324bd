#include <random>
#include <sstream>

#include "doctest.h"
#include "dualmind/epd.hpp"
#include "dualmind/perft.hpp"
#include "dualmind/position.hpp"
#include "dualmind/san.hpp"
#include "slow_movegen.hpp"

using namespace dualmind;

namespace {

const char* kPlaskettOriginal = "8/3P3k/n2K3p/2p3n1/1b4N1/2p1p1P1/8/3B4 w - - 0 1";
const char* kPlaskettH8 = "7n/3P3k/n2K3p/2p5/1b4N1/2p1p1P1/8/3B4 w - - 0 1";
const char* kPlaskettE5 = "8/3P3k/n2K3p/2p1n3/1b4N1/2p1p1P1/8/3B4 w - - 0 1";
const char* kStartFen = "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1";

std::vector<std::string> split_tokens(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string t;
    while (in >> t) out.push_back(t);
    return out;
}

}  // namespace

TEST_CASE("FEN round trip is canonical") {
    for (const char* fen : {kStartFen, kPlaskettOriginal, kPlaskettH8, kPlaskettE5,
                            "6k1/5ppp/8/8/8/8/8/4R2K w - - 0 1",
                            "r3k2r/8/8/8/8/8/8/R3K2R w KQkq - 3 17"}) {
        Position p = Position::from_fen(fen);
        CHECK(p.fen() == fen);
        CHECK(Position::from_fen(p.fen()).fen() == p.fen());
    }
}

TEST_CASE("FEN canonicalization drops a dead en-passant square") {
    // No black pawn can capture on e3.
    Position p = Position::from_fen(
        "rnbqkbnr/pppppppp/8/8/4P3/8/PPPP1PPP/RNBQKBNR b KQkq e3 0 1");
    CHECK(!p.en_passant().has_value());
    CHECK(p.fen() ==
          "rnbqkbnr/pppppppp/8/8/4P3/8/PPPP1PPP/RNBQKBNR b KQkq - 0 1");
}

TEST_CASE("FEN errors carry distinct diagnostics") {
    CHECK_THROWS_WITH_AS(Position::from_fen("8/8/8/8 w - -"),
                         doctest::Contains("placement"), FenError);
    CHECK_THROWS_WITH_AS(Position::from_fen("8/8/8/8/8/8/8/8 w - - 0 1"),
                         doctest::Contains("king"), FenError);
    CHECK_THROWS_WITH_AS(
        Position::from_fen("k6R/8/8/8/8/8/8/K7 w - - 0 1"),
        doctest::Contains("side not to move"), FenError);
    CHECK_THROWS_AS(Position::from_fen("k7/8/8/8/8/8/8/K7 x - - 0 1"), FenError);
    CHECK_THROWS_AS(Position::from_fen(""), FenError);
}

TEST_CASE("Plaskett positions have the expected material") {
    Position p = Position::from_fen(kPlaskettOriginal);
    CHECK(popcount(p.pieces(Color::White)) == 5);
    CHECK(popcount(p.pieces(Color::Black)) == 8);
    CHECK(p.piece_on(*parse_square("d7")) == Piece{Color::White, PieceKind::Pawn});
    CHECK(p.piece_on(*parse_square("d6")) == Piece{Color::White, PieceKind::King});
    CHECK(p.piece_on(*parse_square("g4")) == Piece{Color::White, PieceKind::Knight});
    CHECK(p.piece_on(*parse_square("g3")) == Piece{Color::White, PieceKind::Pawn});
    CHECK(p.piece_on(*parse_square("d1")) == Piece{Color::White, PieceKind::Bishop});
    CHECK(p.piece_on(*parse_square("g5")) == Piece{Color::Black, PieceKind::Knight});

    Position h8 = Position::from_fen(kPlaskettH8);
    CHECK(h8.piece_on(*parse_square("h8")) == Piece{Color::Black, PieceKind::Knight});
    CHECK(!h8.piece_on(*parse_square("g5")).has_value());
}

TEST_CASE("legal move basics") {
    CHECK(Position::startpos().legal_moves().size() == 20);

    // Underpromotions are distinct moves in the Plaskett position.
    Position p = Position::from_fen(kPlaskettOriginal);
    auto moves = p.legal_moves();
    Square d7 = *parse_square("d7"), d8 = *parse_square("d8");
    for (Promotion promo : {Promotion::Knight, Promotion::Bishop, Promotion::Rook,
                            Promotion::Queen}) {
        Move m{static_cast<std::uint8_t>(d7), static_cast<std::uint8_t>(d8), promo};
        CHECK(std::find(moves.begin(), moves.end(), m) != moves.end());
    }

    // Stalemate position: no moves.
    Position stale = Position::from_fen("7k/5Q2/6K1/8/8/8/8/8 b - - 0 1");
    CHECK(stale.legal_moves().empty());
    CHECK(stale.result() == GameResult::Stalemate);

    // Generator order is sorted by (from, to, promotion).
    auto sorted = moves;
    std::sort(sorted.begin(), sorted.end());
    CHECK(moves == sorted);
}

TEST_CASE("apply updates state and rejects illegal moves") {
    Position p = Position::from_fen(kPlaskettOriginal);
    Move nf6 = parse_san(p, "Nf6+");
    CHECK(to_uci(nf6) == "g4f6");
    Position after = p.apply(nf6);
    CHECK(after.side_to_move() == Color::Black);
    CHECK(after.in_check());
    CHECK(after.zobrist() == after.compute_zobrist());

    CHECK_THROWS_AS(p.apply(Move{0, 1}), IllegalMoveError);
}

TEST_CASE("the mate line from the original study replays to checkmate") {
    // 1.Nf6+ Kg7 2.Nh5+ Kg6 3.Bc2+ Kxh5 4.d8=Q Nf7+ 5.Ke6 Nxd8+ 6.Kf5 e2
    // 7.Be4 e1=N 8.Bd5 c2 9.Bc4 c1=N 10.Bb5 Nc7 11.Ba4 Ne2 12.Bd1 Nf3
    // 13.Bxe2 Nce6 14.Bxf3#
    const std::string line =
        "Nf6+ Kg7 Nh5+ Kg6 Bc2+ Kxh5 d8=Q Nf7+ Ke6 Nxd8+ Kf5 e2 Be4 e1=N "
        "Bd5 c2 Bc4 c1=N Bb5 Nc7 Ba4 Ne2 Bd1 Nf3 Bxe2 Nce6 Bxf3#";
    Position p = Position::from_fen(kPlaskettOriginal);
    for (const auto& token : split_tokens(line)) {
        Move m = parse_san(p, token);
        p = p.apply(m);
        CHECK(p.zobrist() == p.compute_zobrist());
    }
    CHECK(p.result() == GameResult::WhiteMates);
}

TEST_CASE("SAN parsing") {
    Position start = Position::startpos();
    CHECK(to_uci(parse_san(start, "e4")) == "e2e4");
    CHECK(to_uci(parse_san(start, "Nf3")) == "g1f3");

    Position h8 = Position::from_fen(kPlaskettH8);
    CHECK(to_uci(parse_san(h8, "Nf6+")) == "g4f6");
    // 3.d8=N from the corrected-study continuation.
    Position before_promo = h8.apply(parse_san(h8, "Nf6+"));
    before_promo = before_promo.apply(parse_san(before_promo, "Kg7"));
    before_promo = before_promo.apply(parse_san(before_promo, "Nh5+"));
    before_promo = before_promo.apply(parse_san(before_promo, "Kg6"));
    Move promo = parse_san(before_promo, "d8=N");
    CHECK(to_uci(promo) == "d7d8n");

    CHECK_THROWS_AS(parse_san(start, "Ke4"), SanError);
    CHECK_THROWS_AS(parse_san(start, "e5"), SanError);
    // Two knights could reach d2 after 1.e4 e5 2.Ne2?? no -- build a real
    // ambiguous case: rooks on a1 and h1 with an empty first rank.
    Position rooks = Position::from_fen("7k/8/8/8/8/8/4K1pp/R6R w - - 0 1");
    CHECK_THROWS_AS(parse_san(rooks, "Rd1"), SanError);
    CHECK(to_uci(parse_san(rooks, "Rad1")) == "a1d1");
    // Claiming check where there is none is rejected.
    CHECK_THROWS_AS(parse_san(start, "e4+"), SanError);
}

TEST_CASE("to_san round trips through parse_san") {
    std::mt19937_64 rng(7);
    Position p = Position::startpos();
    std::vector<std::uint64_t> seen;
    for (int ply = 0; ply < 300; ++ply) {
        auto moves = p.legal_moves();
        if (moves.empty() || p.result() != GameResult::Ongoing) {
            p = Position::startpos();
            continue;
        }
        for (Move m : moves) {
            std::string san = to_san(p, m);
            CHECK(parse_san(p, san) == m);
        }
        p = p.apply_trusted(moves[rng() % moves.size()]);
    }
}

TEST_CASE("perft matches the independent slow generator") {
    const char* fens[] = {
        kStartFen,
        kPlaskettOriginal,
        kPlaskettH8,
        kPlaskettE5,
        // Kiwipete: castling, pins, en passant, promotions all in play.
        "r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - 0 1",
        "8/2p5/3p4/KP5r/1R3p1k/8/4P1P1/8 w - - 0 1",
        "r3k2r/Pppp1ppp/1b3nbN/nP6/BBP1P3/q4N2/Pp1P2PP/R2Q1RK1 w kq - 0 1",
        "rnbq1k1r/pp1Pbppp/2p5/8/2B5/8/PPP1NnPP/RNBQK2R w KQ - 1 8",
        "r4rk1/1pp1qppp/p1np1n2/2b1p1B1/2B1P1b1/P1NP1N2/1PP1QPPP/R4RK1 w - - 0 10",
        "6k1/5ppp/8/8/8/8/8/4R2K w - - 0 1",
        "8/8/8/8/k2Pp3/8/8/4K3 b - d3 0 1",
    };
    for (const char* fen : fens) {
        Position fast = Position::from_fen(fen);
        auto slow = slowgen::SlowBoard::from_fen(fen);
        for (int depth = 1; depth <= 4; ++depth) {
            INFO(fen << " depth " << depth);
            CHECK(perft(fast, depth) == slow.perft(depth));
        }
    }
}

TEST_CASE("perft known values") {
    Position start = Position::startpos();
    CHECK(perft(start, 0) == 1);
    CHECK(perft(start, 1) == 20);
    CHECK(perft(start, 2) == 400);
    CHECK(perft(start, 3) == 8902);
}

TEST_CASE("incremental zobrist equals recomputation over random playouts") {
    std::mt19937_64 rng(42);
    Position p = Position::startpos();
    int checked = 0;
    while (checked < 100000) {
        auto moves = p.legal_moves();
        if (moves.empty() || p.halfmove_clock() >= 100) {
            p = Position::startpos();
            continue;
        }
        p = p.apply_trusted(moves[rng() % moves.size()]);
        ++checked;
        if (p.zobrist() != p.compute_zobrist()) {
            REQUIRE(p.zobrist() == p.compute_zobrist());  // report and stop
        }
    }
    CHECK(checked == 100000);
}

TEST_CASE("legal_moves never leaves own king in check") {
    std::mt19937_64 rng(9);
    Position p = Position::startpos();
    for (int ply = 0; ply < 2000; ++ply) {
        auto moves = p.legal_moves();
        if (moves.empty()) {
            p = Position::startpos();
            continue;
        }
        Color us = p.side_to_move();
        for (Move m : moves) {
            Position next = p.apply_trusted(m);
            CHECK(!next.is_attacked(next.king_square(us), next.side_to_move()));
        }
        p = p.apply_trusted(moves[rng() % moves.size()]);
    }
}

TEST_CASE("repetition detection over a shuffle sequence") {
    Position p = Position::startpos();
    std::vector<std::uint64_t> history;
    const char* moves[] = {"g1f3", "g8f6", "f3g1", "f6g8"};
    for (const char* u : moves) {
        history.push_back(p.zobrist());
        p = p.apply(*move_from_uci(u));
    }
    CHECK(p.is_repetition(history, 2));
    CHECK(!p.is_repetition(history, 3));
}

TEST_CASE("color_flipped is an involution and swaps the mover") {
    for (const char* fen : {kStartFen, kPlaskettOriginal, kPlaskettH8}) {
        Position p = Position::from_fen(fen);
        Position f = p.color_flipped();
        CHECK(f.side_to_move() == opposite(p.side_to_move()));
        CHECK(f.zobrist() == f.compute_zobrist());
        CHECK(f.color_flipped() == p);
    }
}

TEST_CASE("EPD parsing") {
    auto rec = parse_epd(
        "7n/3P3k/n2K3p/2p5/1b4N1/2p1p1P1/8/3B4 w - - bm Nf6+; dm 15; "
        "id \"plaskett-corrected\";");
    CHECK(rec.position.fen() == kPlaskettH8);
    REQUIRE(rec.best_moves.size() == 1);
    CHECK(to_uci(rec.best_moves[0]) == "g4f6");
    CHECK(rec.mate_distance == 15);
    CHECK(rec.id == "plaskett-corrected");

    auto bare = parse_epd("7n/3P3k/n2K3p/2p5/1b4N1/2p1p1P1/8/3B4 w - -");
    CHECK(bare.opcodes.empty());
    CHECK(bare.best_moves.empty());

    auto multi = parse_epd(
        "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - id \"x\"; bm e4 d4;");
    CHECK(multi.best_moves.size() == 2);
    CHECK(multi.id == "x");
    CHECK(multi.opcodes.count("bm") == 1);

    CHECK_THROWS_AS(parse_epd("8/8/8/8 w - -"), EpdError);
    CHECK_THROWS_AS(
        parse_epd("rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - bm e5;"),
        EpdError);
    CHECK_THROWS_AS(
        parse_epd("rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - bm e4"),
        EpdError);
}

TEST_CASE("unknown EPD opcodes are preserved raw") {
    auto rec = parse_epd(
        "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - acd 30; c0 \"note\";");
    CHECK(rec.opcodes.at("acd") == "30");
    CHECK(rec.opcodes.at("c0") == "\"note\"");
}
