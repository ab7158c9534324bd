#include "dualmind/zobrist.hpp"

namespace dualmind::zobrist {
namespace {

constexpr std::uint64_t kSeed = 0xDA1A11D5EED5EEDULL;

struct Keys {
    std::array<std::array<std::array<std::uint64_t, 64>, 6>, 2> piece{};
    std::array<std::uint64_t, 16> castling{};
    std::array<std::uint64_t, 8> ep_file{};
    std::uint64_t side = 0;

    Keys() {
        std::uint64_t state = kSeed;
        auto next = [&state] {
            state += 0x9E3779B97F4A7C15ULL;
            std::uint64_t z = state;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
            return z ^ (z >> 31);
        };
        for (auto& color : piece)
            for (auto& kind : color)
                for (auto& sq : kind) sq = next();
        for (auto& k : castling) k = next();
        for (auto& k : ep_file) k = next();
        side = next();
    }
};

const Keys& keys() {
    static const Keys k;
    return k;
}

}  // namespace

std::uint64_t piece_key(Color c, PieceKind k, Square s) {
    return keys().piece[static_cast<int>(c)][static_cast<int>(k)][s];
}

std::uint64_t castling_key(int rights_mask) { return keys().castling[rights_mask]; }
std::uint64_t en_passant_key(int file) { return keys().ep_file[file]; }
std::uint64_t side_key() { return keys().side; }

}  // namespace dualmind::zobrist
