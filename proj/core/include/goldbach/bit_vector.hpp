// bit_vector.hpp
// Flat bit array with the three operations the sieves and pair counters
// need: stride clearing, whole-array bit reversal, and popcount of a
// shifted AND between two arrays.
//
// Storage is uint64_t words, LSB-first within a word. Every vector keeps
// two extra zero words past the end so the unaligned 64-bit window reads
// in shifted_and_popcount never run off the allocation.

#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <span>
#include <vector>

namespace goldbach {

class BitVector {
public:
    BitVector() = default;

    BitVector(std::uint64_t bit_count, bool value)
        : bits_(bit_count), words_(bit_count / 64 + 2, value ? ~0ULL : 0ULL) {
        if (value) trim_tail();
    }

    std::uint64_t size() const { return bits_; }

    bool test(std::uint64_t i) const {
        assert(i < bits_);
        return (words_[i / 64] >> (i % 64)) & 1ULL;
    }

    void set(std::uint64_t i) {
        assert(i < bits_);
        words_[i / 64] |= 1ULL << (i % 64);
    }

    void clear(std::uint64_t i) {
        assert(i < bits_);
        words_[i / 64] &= ~(1ULL << (i % 64));
    }

    // Clear bits first, first+step, first+2*step, ...
    void clear_stride(std::uint64_t first, std::uint64_t step) {
        assert(step > 0);
        for (std::uint64_t i = first; i < bits_; i += step) clear(i);
    }

    std::uint64_t count() const {
        std::uint64_t total = 0;
        for (std::uint64_t w : words_) total += std::popcount(w);
        return total;
    }

    std::span<const std::uint64_t> words() const { return words_; }
    std::uint64_t* word_data() { return words_.data(); }
    std::uint64_t word_count() const { return words_.size(); }

    std::uint64_t memory_bytes() const { return words_.size() * sizeof(std::uint64_t); }

private:
    void trim_tail() {
        std::uint64_t w = bits_ / 64;
        std::uint64_t r = bits_ % 64;
        if (w < words_.size()) {
            words_[w] = r ? (words_[w] & ((1ULL << r) - 1)) : 0;
            for (std::uint64_t k = w + 1; k < words_.size(); ++k) words_[k] = 0;
        }
    }

    std::uint64_t bits_ = 0;
    std::vector<std::uint64_t> words_;
};

// out[j] = in[top - j] for 0 <= j <= top. Requires top < in.size().
BitVector reversed(const BitVector& in, std::uint64_t top);

// Popcount of f[i] & g[i + shift] over 0 <= i <= upper.
// Requires upper < f.size() and upper + shift < g.size().
std::uint64_t shifted_and_popcount(const BitVector& f, const BitVector& g,
                                   std::uint64_t upper, std::uint64_t shift);

} // namespace goldbach
