#pragma once

#include <map>

#include "dualmind/position.hpp"

namespace dualmind {

struct EpdError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One EPD line: 4 FEN fields plus semicolon-terminated opcodes.
// `bm`, `dm` and `id` are decoded; everything else is kept raw.
struct EpdRecord {
    Position position;
    std::vector<Move> best_moves;         // from `bm`, SAN-resolved
    std::optional<int> mate_distance;     // from `dm`, full moves
    std::string id;                       // from `id`, quotes removed
    std::map<std::string, std::string> opcodes;  // all opcodes, raw operand text
};

EpdRecord parse_epd(std::string_view line);

}  // namespace dualmind
