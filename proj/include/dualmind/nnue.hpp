#pragma once

#include <iosfwd>
#include <vector>

#include "dualmind/position.hpp"
#include "dualmind/score.hpp"

namespace dualmind {

struct NnueError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// HalfKP-style network: 40960 binary (king square x piece x square) features
// per side feed a 256-wide accumulator per perspective; the concatenated and
// clipped accumulators pass through 32 -> 32 -> 1. Integer arithmetic only.
//
// Weight file, little-endian: magic "DMND", u32 version (1), u32 dims[4]
// = {40960, 256, 32, 32}, then ft_bias i16[256], ft_weights i16[40960*256]
// (feature-major), l1_bias i32[32], l1_weights i8[32*512], l2_bias i32[32],
// l2_weights i8[32*32], out_bias i32, out_weights i8[32], and a closing u64
// FNV-1a checksum over every preceding byte.
class NnueNetwork {
public:
    static constexpr int kFeatures = 40960;
    static constexpr int kAccWidth = 256;
    static constexpr int kHidden1 = 32;
    static constexpr int kHidden2 = 32;
    static constexpr std::uint32_t kVersion = 1;

    std::vector<std::int16_t> ft_bias;     // [kAccWidth]
    std::vector<std::int16_t> ft_weights;  // [kFeatures][kAccWidth]
    std::vector<std::int32_t> l1_bias;     // [kHidden1]
    std::vector<std::int8_t> l1_weights;   // [kHidden1][2*kAccWidth]
    std::vector<std::int32_t> l2_bias;     // [kHidden2]
    std::vector<std::int8_t> l2_weights;   // [kHidden2][kHidden1]
    std::int32_t out_bias = 0;
    std::vector<std::int8_t> out_weights;  // [kHidden2]

    static NnueNetwork zero();
    static NnueNetwork random(std::uint64_t seed);  // small bounded weights
    static NnueNetwork load(std::istream& in);
    static NnueNetwork load_file(const std::string& path);
    void save(std::ostream& out) const;
    void save_file(const std::string& path) const;

    const std::int16_t* ft_column(int feature) const {
        return ft_weights.data() + static_cast<std::size_t>(feature) * kAccWidth;
    }
};

// Per-side first-layer sums. accumulator[c] is the perspective of color c.
struct NnueAccumulator {
    std::array<std::array<std::int16_t, NnueNetwork::kAccWidth>, 2> v{};
    bool operator==(const NnueAccumulator&) const = default;
};

// Feature index of (perspective, own king square, piece, square); kings are
// never features themselves. Exposed for tests.
int nnue_feature_index(Color perspective, Square king_sq, Piece piece, Square sq);

// Full rebuild from the piece placement.
NnueAccumulator nnue_refresh(const Position& p, const NnueNetwork& net);

// Incremental update across a legal move; identical to refreshing after the
// move. A side whose king moves is rebuilt, everything else is column
// adds/removes.
NnueAccumulator nnue_apply(const NnueAccumulator& acc, const Position& before,
                           Move m, const NnueNetwork& net);

// Forward pass; `stm` picks which perspective leads the concatenation.
Score nnue_evaluate(const NnueAccumulator& acc, const NnueNetwork& net, Color stm);

}  // namespace dualmind
