// prime_table.hpp
// Prime production and queries: a monolithic bit-packed sieve with a
// cached prime list, segmented sieving for windows far beyond the table,
// and the two cutoff-prime rules used by the admissibility predicate and
// the partition-count bound.
//
// Bit encoding (odd numbers only, evens handled explicitly):
//   bit index i  <->  odd number 2*i + 3
//   odd number v <->  bit index (v - 3) / 2
// Memory ~ limit/16 bytes.
//
// A PrimeTable is immutable after build() and safe to share across
// threads. Segment construction is a pure function of (table, lo, hi);
// distinct segments may be built concurrently.

#pragma once

#include <cstdint>
#include <vector>

#include "goldbach/bit_vector.hpp"

namespace goldbach {

// Floor of sqrt(n), exact for all 64-bit n.
std::uint64_t isqrt(std::uint64_t n);

class PrimeTable {
public:
    // Sieve of Eratosthenes over [2, limit]. Throws std::invalid_argument
    // if limit < 2.
    static PrimeTable build(std::uint64_t limit);

    std::uint64_t limit() const { return limit_; }

    // Primality of k. Requires k <= limit().
    bool is_prime(std::uint64_t k) const {
        assert(k <= limit_);
        if (k < 2) return false;
        if (k == 2) return true;
        if (k % 2 == 0) return false;
        return odd_.test((k - 3) / 2);
    }

    // Ascending list of all primes <= limit(), starting at 2.
    const std::vector<std::uint64_t>& primes() const { return primes_; }

    const BitVector& odd_bits() const { return odd_; }

private:
    PrimeTable() = default;

    std::uint64_t limit_ = 0;
    BitVector odd_;
    std::vector<std::uint64_t> primes_;
};

// Primality over a window [lo, hi] that may lie far beyond the table,
// as long as the table's base primes cover sqrt(hi). lo is stored
// rounded down to even so the odd bit encoding lines up.
struct Segment {
    std::uint64_t lo = 0; // even, inclusive
    std::uint64_t hi = 0; // inclusive
    BitVector odd_bits;   // bit j <-> odd number lo + 1 + 2*j

    bool contains(std::uint64_t k) const { return k >= lo && k <= hi; }

    bool is_prime(std::uint64_t k) const {
        assert(contains(k));
        if (k < 2) return false;
        if (k == 2) return true;
        if (k % 2 == 0) return false;
        return odd_bits.test((k - lo - 1) / 2);
    }
};

// Sieve the window [lo, hi] using the table's primes as the base set.
// Pre: lo <= hi and table.limit()^2 >= hi; violations throw
// std::invalid_argument (the latter with an insufficient-base-primes
// message).
Segment sieve_segment(const PrimeTable& table, std::uint64_t lo, std::uint64_t hi);

// Odd primes p with p^2 + 3 <= q, ascending: the primes the partition
// bound takes into account. The last element is the bound's p_j. Empty
// for q < 12. Pre: q >= 6 even, table.limit() >= sqrt(q).
std::vector<std::uint64_t> cutoff_primes_for_bound(std::uint64_t q, const PrimeTable& table);

// Odd primes p with p^2 < q, ascending: every prime that can occur as
// the smallest odd factor of a composite part, which is what the
// admissibility predicate must exclude. Pre: q >= 6 even.
std::vector<std::uint64_t> cutoff_primes_for_predicate(std::uint64_t q, const PrimeTable& table);

} // namespace goldbach
