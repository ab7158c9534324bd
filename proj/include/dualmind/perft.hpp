#pragma once

#include "dualmind/position.hpp"

namespace dualmind {

// Leaf count of the legal move tree at exactly `depth` ply.
std::uint64_t perft(const Position& p, int depth);

}  // namespace dualmind
