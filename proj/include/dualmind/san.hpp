#pragma once

#include "dualmind/position.hpp"

namespace dualmind {

struct SanError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Resolves a SAN token ("Nf6+", "d8=N", "exd5", "O-O") to the unique legal
// move. Trailing "+"/"#" are accepted after being checked against the board.
Move parse_san(const Position& p, std::string_view token);

// Canonical SAN for a legal move, with "+"/"#" suffix.
std::string to_san(const Position& p, Move m);

}  // namespace dualmind
