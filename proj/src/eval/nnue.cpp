#include "dualmind/nnue.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace dualmind {

namespace {

constexpr char kMagic[4] = {'D', 'M', 'N', 'D'};
constexpr int kOutputScale = 16;  // final sum -> centipawns

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
    auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;

Square orient(Color perspective, Square s) {
    return perspective == Color::White ? s : flip_rank(s);
}

struct Writer {
    std::ostream& out;
    std::uint64_t hash = kFnvOffset;
    void bytes(const void* data, std::size_t n) {
        out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
        hash = fnv1a(hash, data, n);
    }
    template <typename T>
    void value(T v) {
        bytes(&v, sizeof v);
    }
    template <typename T>
    void vec(const std::vector<T>& v) {
        bytes(v.data(), v.size() * sizeof(T));
    }
};

struct Reader {
    std::istream& in;
    std::uint64_t hash = kFnvOffset;
    void bytes(void* data, std::size_t n) {
        in.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in.gcount()) != n)
            throw NnueError("truncated weight file");
        hash = fnv1a(hash, data, n);
    }
    template <typename T>
    T value() {
        T v;
        bytes(&v, sizeof v);
        return v;
    }
    template <typename T>
    void vec(std::vector<T>& v, std::size_t n) {
        v.resize(n);
        bytes(v.data(), n * sizeof(T));
    }
};

NnueNetwork make_sized() {
    NnueNetwork net;
    net.ft_bias.resize(NnueNetwork::kAccWidth);
    net.ft_weights.resize(static_cast<std::size_t>(NnueNetwork::kFeatures) *
                          NnueNetwork::kAccWidth);
    net.l1_bias.resize(NnueNetwork::kHidden1);
    net.l1_weights.resize(NnueNetwork::kHidden1 * 2 * NnueNetwork::kAccWidth);
    net.l2_bias.resize(NnueNetwork::kHidden2);
    net.l2_weights.resize(NnueNetwork::kHidden2 * NnueNetwork::kHidden1);
    net.out_weights.resize(NnueNetwork::kHidden2);
    return net;
}

}  // namespace

int nnue_feature_index(Color perspective, Square king_sq, Piece piece, Square sq) {
    // 10 piece channels: {P,N,B,R,Q} x {own, theirs}.
    int channel = static_cast<int>(piece.kind) * 2 + (piece.color == perspective ? 0 : 1);
    return (orient(perspective, king_sq) * 10 + channel) * 64 + orient(perspective, sq);
}

NnueNetwork NnueNetwork::zero() { return make_sized(); }

NnueNetwork NnueNetwork::random(std::uint64_t seed) {
    NnueNetwork net = make_sized();
    std::uint64_t state = seed;
    auto next = [&state] {
        state += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    };
    // Feature weights stay small so 32 active pieces cannot overflow the
    // 16-bit accumulator: |sum| <= 32*16 + 256.
    for (auto& w : net.ft_weights) w = static_cast<std::int16_t>(next() % 33) - 16;
    for (auto& b : net.ft_bias) b = static_cast<std::int16_t>(next() % 257) - 128;
    for (auto& w : net.l1_weights) w = static_cast<std::int8_t>(next() % 128) - 64;
    for (auto& b : net.l1_bias) b = static_cast<std::int32_t>(next() % 2001) - 1000;
    for (auto& w : net.l2_weights) w = static_cast<std::int8_t>(next() % 128) - 64;
    for (auto& b : net.l2_bias) b = static_cast<std::int32_t>(next() % 2001) - 1000;
    for (auto& w : net.out_weights) w = static_cast<std::int8_t>(next() % 128) - 64;
    net.out_bias = static_cast<std::int32_t>(next() % 2001) - 1000;
    return net;
}

void NnueNetwork::save(std::ostream& out) const {
    Writer w{out};
    w.bytes(kMagic, 4);
    w.value<std::uint32_t>(kVersion);
    for (std::uint32_t d : {static_cast<std::uint32_t>(kFeatures),
                            static_cast<std::uint32_t>(kAccWidth),
                            static_cast<std::uint32_t>(kHidden1),
                            static_cast<std::uint32_t>(kHidden2)})
        w.value(d);
    w.vec(ft_bias);
    w.vec(ft_weights);
    w.vec(l1_bias);
    w.vec(l1_weights);
    w.vec(l2_bias);
    w.vec(l2_weights);
    w.value(out_bias);
    w.vec(out_weights);
    std::uint64_t checksum = w.hash;
    out.write(reinterpret_cast<const char*>(&checksum), sizeof checksum);
}

NnueNetwork NnueNetwork::load(std::istream& in) {
    Reader r{in};
    char magic[4];
    r.bytes(magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0)
        throw NnueError("bad magic in weight file");
    auto version = r.value<std::uint32_t>();
    if (version != kVersion)
        throw NnueError("unsupported weight file version " + std::to_string(version));
    std::uint32_t dims[4];
    for (auto& d : dims) d = r.value<std::uint32_t>();
    if (dims[0] != kFeatures || dims[1] != kAccWidth || dims[2] != kHidden1 ||
        dims[3] != kHidden2)
        throw NnueError("unexpected network dimensions in weight file");

    NnueNetwork net;
    r.vec(net.ft_bias, kAccWidth);
    r.vec(net.ft_weights, static_cast<std::size_t>(kFeatures) * kAccWidth);
    r.vec(net.l1_bias, kHidden1);
    r.vec(net.l1_weights, static_cast<std::size_t>(kHidden1) * 2 * kAccWidth);
    r.vec(net.l2_bias, kHidden2);
    r.vec(net.l2_weights, static_cast<std::size_t>(kHidden2) * kHidden1);
    net.out_bias = r.value<std::int32_t>();
    r.vec(net.out_weights, kHidden2);

    std::uint64_t expected = r.hash;
    std::uint64_t stored;
    in.read(reinterpret_cast<char*>(&stored), sizeof stored);
    if (in.gcount() != sizeof stored) throw NnueError("truncated weight file");
    if (stored != expected) throw NnueError("weight file checksum mismatch");
    return net;
}

NnueNetwork NnueNetwork::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NnueError("cannot open weight file " + path);
    return load(in);
}

void NnueNetwork::save_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw NnueError("cannot write weight file " + path);
    save(out);
}

namespace {

void add_column(std::array<std::int16_t, NnueNetwork::kAccWidth>& acc,
                const NnueNetwork& net, int feature) {
    const std::int16_t* col = net.ft_column(feature);
    for (int i = 0; i < NnueNetwork::kAccWidth; ++i)
        acc[i] = static_cast<std::int16_t>(acc[i] + col[i]);
}

void sub_column(std::array<std::int16_t, NnueNetwork::kAccWidth>& acc,
                const NnueNetwork& net, int feature) {
    const std::int16_t* col = net.ft_column(feature);
    for (int i = 0; i < NnueNetwork::kAccWidth; ++i)
        acc[i] = static_cast<std::int16_t>(acc[i] - col[i]);
}

void refresh_side(NnueAccumulator& acc, const Position& p, const NnueNetwork& net,
                  Color perspective) {
    auto& half = acc.v[static_cast<int>(perspective)];
    for (int i = 0; i < NnueNetwork::kAccWidth; ++i) half[i] = net.ft_bias[i];
    Square ksq = p.king_square(perspective);
    for (Square s = 0; s < 64; ++s) {
        auto piece = p.piece_on(s);
        if (!piece || piece->kind == PieceKind::King) continue;
        add_column(half, net, nnue_feature_index(perspective, ksq, *piece, s));
    }
}

}  // namespace

NnueAccumulator nnue_refresh(const Position& p, const NnueNetwork& net) {
    NnueAccumulator acc;
    refresh_side(acc, p, net, Color::White);
    refresh_side(acc, p, net, Color::Black);
    return acc;
}

NnueAccumulator nnue_apply(const NnueAccumulator& acc, const Position& before,
                           Move m, const NnueNetwork& net) {
    const Color us = before.side_to_move();
    const Color them = opposite(us);
    const Piece mover = *before.piece_on(m.from);

    NnueAccumulator out = acc;

    // Collect the non-king piece deltas the move causes.
    struct Delta {
        Piece piece;
        Square sq;
        bool add;
    };
    std::array<Delta, 6> deltas;
    int n = 0;

    if (mover.kind != PieceKind::King) {
        deltas[n++] = {mover, m.from, false};
        Piece landed = mover;
        if (m.promotion != Promotion::None) landed.kind = promotion_kind(m.promotion);
        deltas[n++] = {landed, m.to, true};
    }
    if (auto captured = before.piece_on(m.to)) {
        deltas[n++] = {*captured, m.to, false};
    } else if (mover.kind == PieceKind::Pawn && before.en_passant() == m.to) {
        Square cap_sq = m.to + (us == Color::White ? -8 : 8);
        deltas[n++] = {Piece{them, PieceKind::Pawn}, cap_sq, false};
    }
    if (mover.kind == PieceKind::King && std::abs(m.to - m.from) == 2) {
        Square rook_from = m.to > m.from ? make_square(7, rank_of(m.from))
                                         : make_square(0, rank_of(m.from));
        Square rook_to = m.to > m.from ? m.to - 1 : m.to + 1;
        deltas[n++] = {Piece{us, PieceKind::Rook}, rook_from, false};
        deltas[n++] = {Piece{us, PieceKind::Rook}, rook_to, true};
    }

    for (Color perspective : {Color::White, Color::Black}) {
        if (mover.kind == PieceKind::King && perspective == us) {
            // King moved: this perspective's feature bucket changed entirely.
            Position after = before.apply_trusted(m);
            refresh_side(out, after, net, perspective);
            continue;
        }
        auto& half = out.v[static_cast<int>(perspective)];
        Square ksq = before.king_square(perspective);
        for (int i = 0; i < n; ++i) {
            int feature = nnue_feature_index(perspective, ksq, deltas[i].piece,
                                             deltas[i].sq);
            if (deltas[i].add)
                add_column(half, net, feature);
            else
                sub_column(half, net, feature);
        }
    }
    return out;
}

Score nnue_evaluate(const NnueAccumulator& acc, const NnueNetwork& net, Color stm) {
    constexpr int kAcc = NnueNetwork::kAccWidth;
    std::array<std::int8_t, 2 * kAcc> input;
    const auto& own = acc.v[static_cast<int>(stm)];
    const auto& other = acc.v[static_cast<int>(opposite(stm))];
    for (int i = 0; i < kAcc; ++i)
        input[i] = static_cast<std::int8_t>(std::clamp<int>(own[i], 0, 127));
    for (int i = 0; i < kAcc; ++i)
        input[kAcc + i] = static_cast<std::int8_t>(std::clamp<int>(other[i], 0, 127));

    std::array<std::int8_t, NnueNetwork::kHidden1> h1;
    for (int i = 0; i < NnueNetwork::kHidden1; ++i) {
        std::int32_t sum = net.l1_bias[i];
        const std::int8_t* row = net.l1_weights.data() + i * 2 * kAcc;
        for (int j = 0; j < 2 * kAcc; ++j) sum += row[j] * input[j];
        h1[i] = static_cast<std::int8_t>(std::clamp(sum >> 6, 0, 127));
    }
    std::array<std::int8_t, NnueNetwork::kHidden2> h2;
    for (int i = 0; i < NnueNetwork::kHidden2; ++i) {
        std::int32_t sum = net.l2_bias[i];
        const std::int8_t* row = net.l2_weights.data() + i * NnueNetwork::kHidden1;
        for (int j = 0; j < NnueNetwork::kHidden1; ++j) sum += row[j] * h1[j];
        h2[i] = static_cast<std::int8_t>(std::clamp(sum >> 6, 0, 127));
    }
    std::int32_t sum = net.out_bias;
    for (int j = 0; j < NnueNetwork::kHidden2; ++j) sum += net.out_weights[j] * h2[j];
    return Score::cp(std::clamp(sum / kOutputScale, -kMaxEval, kMaxEval));
}

}  // namespace dualmind
