#include "dualmind/epd.hpp"

#include <sstream>

#include "dualmind/san.hpp"

namespace dualmind {

namespace {

std::string trim(std::string_view s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string_view::npos) return {};
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(a, b - a + 1));
}

}  // namespace

EpdRecord parse_epd(std::string_view line) {
    std::istringstream in{std::string(line)};
    std::string placement, stm, castling, ep;
    if (!(in >> placement >> stm >> castling >> ep))
        throw EpdError("EPD line needs 4 FEN fields");

    EpdRecord rec;
    try {
        rec.position =
            Position::from_fen(placement + ' ' + stm + ' ' + castling + ' ' + ep + " 0 1");
    } catch (const FenError& e) {
        throw EpdError(std::string("bad EPD position: ") + e.what());
    }

    std::string rest;
    std::getline(in, rest);
    rest = trim(rest);

    while (!rest.empty()) {
        std::size_t end = rest.find(';');
        if (end == std::string::npos)
            throw EpdError("opcode not terminated by ';': " + rest);
        std::string clause = trim(rest.substr(0, end));
        rest = trim(rest.substr(end + 1));
        if (clause.empty()) throw EpdError("empty opcode clause");

        std::size_t space = clause.find_first_of(" \t");
        std::string name = space == std::string::npos ? clause : clause.substr(0, space);
        std::string operand =
            space == std::string::npos ? std::string() : trim(clause.substr(space + 1));
        rec.opcodes[name] = operand;

        if (name == "bm") {
            if (operand.empty()) throw EpdError("bm opcode needs at least one move");
            std::istringstream ops(operand);
            std::string token;
            while (ops >> token) {
                try {
                    rec.best_moves.push_back(parse_san(rec.position, token));
                } catch (const SanError& e) {
                    throw EpdError(std::string("bad bm operand: ") + e.what());
                }
            }
        } else if (name == "dm") {
            try {
                rec.mate_distance = std::stoi(operand);
            } catch (const std::exception&) {
                throw EpdError("bad dm operand: " + operand);
            }
            if (*rec.mate_distance < 1) throw EpdError("dm must be >= 1");
        } else if (name == "id") {
            std::string v = operand;
            if (v.size() >= 2 && v.front() == '"' && v.back() == '"')
                v = v.substr(1, v.size() - 2);
            rec.id = v;
        }
    }
    return rec;
}

}  // namespace dualmind
