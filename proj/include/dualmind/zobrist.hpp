#pragma once

#include "dualmind/types.hpp"

namespace dualmind::zobrist {

// Keys come from a SplitMix64 stream with fixed seed 0xDA1A11D5EED5EEDULL,
// so hashes are identical across builds and platforms.
std::uint64_t piece_key(Color c, PieceKind k, Square s);
std::uint64_t castling_key(int rights_mask);  // 4-bit mask, see Position
std::uint64_t en_passant_key(int file);
std::uint64_t side_key();

}  // namespace dualmind::zobrist
