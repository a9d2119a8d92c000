#include "goldbach/bit_vector.hpp"

#include <array>

namespace goldbach {

namespace {

constexpr std::array<std::uint8_t, 256> make_byte_reverse_table() {
    std::array<std::uint8_t, 256> t{};
    for (int b = 0; b < 256; ++b) {
        std::uint8_t r = 0;
        for (int i = 0; i < 8; ++i)
            if (b & (1 << i)) r |= std::uint8_t(1 << (7 - i));
        t[std::size_t(b)] = r;
    }
    return t;
}

constexpr auto kByteReverse = make_byte_reverse_table();

std::uint64_t bit_reverse64(std::uint64_t x) {
    std::uint64_t out = 0;
    for (int i = 0; i < 8; ++i) {
        out = (out << 8) | kByteReverse[(x >> (i * 8)) & 0xff];
    }
    return out;
}

} // namespace

BitVector reversed(const BitVector& in, std::uint64_t top) {
    assert(top < in.size());
    const std::uint64_t nwords = top / 64 + 1; // input words covering bits [0, top]

    // raw[b] = in[64*nwords - 1 - b]; then out[j] = raw[j + delta]
    // with delta = 64*nwords - 1 - top.
    std::vector<std::uint64_t> raw(nwords + 1, 0);
    auto in_words = in.words();
    for (std::uint64_t w = 0; w < nwords; ++w)
        raw[w] = bit_reverse64(in_words[nwords - 1 - w]);

    const std::uint64_t delta = nwords * 64 - 1 - top;
    const std::uint64_t ws = delta / 64, bs = delta % 64;

    BitVector out(top + 1, false);
    std::uint64_t* ow = out.word_data();
    const std::uint64_t out_words = top / 64 + 1;
    for (std::uint64_t w = 0; w < out_words; ++w) {
        std::uint64_t v = raw[w + ws] >> bs;
        if (bs != 0) v |= raw[w + ws + 1] << (64 - bs);
        ow[w] = v;
    }
    // Mask bits beyond top in the last word.
    const std::uint64_t r = (top + 1) % 64;
    if (r != 0) ow[out_words - 1] &= (1ULL << r) - 1;
    return out;
}

std::uint64_t shifted_and_popcount(const BitVector& f, const BitVector& g,
                                   std::uint64_t upper, std::uint64_t shift) {
    assert(upper < f.size());
    assert(upper + shift < g.size());

    const std::uint64_t nwords = upper / 64 + 1;
    const std::uint64_t ws = shift / 64, bs = shift % 64;
    const std::uint64_t* F = f.words().data();
    const std::uint64_t* G = g.words().data();

    const std::uint64_t r = upper % 64;
    const std::uint64_t last_mask = (r == 63) ? ~0ULL : ((1ULL << (r + 1)) - 1);

    std::uint64_t total = 0;
    if (bs == 0) {
        for (std::uint64_t w = 0; w < nwords; ++w) {
            std::uint64_t x = F[w] & G[w + ws];
            if (w == nwords - 1) x &= last_mask;
            total += std::uint64_t(std::popcount(x));
        }
    } else {
        for (std::uint64_t w = 0; w < nwords; ++w) {
            std::uint64_t gx = (G[w + ws] >> bs) | (G[w + ws + 1] << (64 - bs));
            std::uint64_t x = F[w] & gx;
            if (w == nwords - 1) x &= last_mask;
            total += std::uint64_t(std::popcount(x));
        }
    }
    return total;
}

} // namespace goldbach
