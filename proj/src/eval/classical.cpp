#include "dualmind/classical_eval.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace dualmind {

namespace {

const char kDefaultPstText[] =
#include "pst_default.inc"
    ;

const std::map<std::string, PieceKind> kPieceNames = {
    {"pawn", PieceKind::Pawn},     {"knight", PieceKind::Knight},
    {"bishop", PieceKind::Bishop}, {"rook", PieceKind::Rook},
    {"queen", PieceKind::Queen},   {"king", PieceKind::King},
};

// Game phase from non-pawn material: N/B = 1, R = 2, Q = 4; 24 = full board.
constexpr int kMaxPhase = 24;

int game_phase(const Position& p) {
    int phase = popcount(p.pieces(PieceKind::Knight)) +
                popcount(p.pieces(PieceKind::Bishop)) +
                2 * popcount(p.pieces(PieceKind::Rook)) +
                4 * popcount(p.pieces(PieceKind::Queen));
    return std::min(phase, kMaxPhase);
}

}  // namespace

PieceSquareTables PieceSquareTables::from_text(std::string_view text) {
    PieceSquareTables pst;
    std::array<std::array<bool, 6>, 2> seen{};
    std::istringstream in{std::string(text)};
    std::string line;
    std::string piece_name, phase_name;
    int row = -1;
    int piece = -1, phase = -1;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream fields(line);
        if (row < 0) {
            if (!(fields >> piece_name >> phase_name)) continue;  // blank line
            auto it = kPieceNames.find(piece_name);
            if (it == kPieceNames.end())
                throw EvalError("unknown piece in PST data: " + piece_name);
            piece = static_cast<int>(it->second);
            phase = phase_name == "mg" ? 0 : phase_name == "eg" ? 1 : -1;
            if (phase < 0) throw EvalError("unknown phase in PST data: " + phase_name);
            row = 0;
        } else {
            // Rows run from rank 8 down to rank 1.
            int rank = 7 - row;
            for (int file = 0; file < 8; ++file) {
                int v;
                if (!(fields >> v)) throw EvalError("short PST row for " + piece_name);
                pst.table_[phase][piece][make_square(file, rank)] = v;
            }
            if (++row == 8) {
                seen[phase][piece] = true;
                row = -1;
            }
        }
    }
    if (row >= 0) throw EvalError("truncated PST table for " + piece_name);
    for (int ph = 0; ph < 2; ++ph)
        for (const auto& [name, kind] : kPieceNames)
            if (!seen[ph][static_cast<int>(kind)])
                throw EvalError("missing PST table for " + name);
    return pst;
}

PieceSquareTables PieceSquareTables::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw EvalError("cannot open PST file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return from_text(buf.str());
}

const PieceSquareTables& PieceSquareTables::builtin() {
    static const PieceSquareTables pst = from_text(kDefaultPstText);
    return pst;
}

Score evaluate_classical(const Position& p, const PieceSquareTables& pst) {
    if (p.result() != GameResult::Ongoing)
        throw EvalError("evaluate_classical on a terminal position");

    int mg = 0, eg = 0;
    for (Square s = 0; s < 64; ++s) {
        auto piece = p.piece_on(s);
        if (!piece) continue;
        int sign = piece->color == Color::White ? 1 : -1;
        Square sq = piece->color == Color::White ? s : flip_rank(s);
        int kind = static_cast<int>(piece->kind);
        int material = piece->kind == PieceKind::King ? 0 : kPieceValues[kind];
        mg += sign * (material + pst.get(piece->kind, sq, 0));
        eg += sign * (material + pst.get(piece->kind, sq, 1));
    }
    int phase = game_phase(p);
    int white_score = (mg * phase + eg * (kMaxPhase - phase)) / kMaxPhase;
    int score = p.side_to_move() == Color::White ? white_score : -white_score;
    return Score::cp(std::clamp(score, -kMaxEval, kMaxEval));
}

Score evaluate_classical(const Position& p) {
    return evaluate_classical(p, PieceSquareTables::builtin());
}

}  // namespace dualmind
