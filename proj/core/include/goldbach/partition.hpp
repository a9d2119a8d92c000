// partition.hpp
// Two-part partitions of an even q: the residue admissibility predicate,
// bad-residue sets, exact Goldbach partition counts (ordered and
// unordered) and the per-q profile used by reports.
//
// Conventions:
//   - A partition is an ordered pair (n1, n2) with n1 + n2 = q.
//   - Admissibility is defined for odd n1 in [3, q-3] only. It requires,
//     for every odd prime p with p^2 < q, that n1 mod p avoids both bad
//     residues {0, q mod p}. Admissible implies both parts prime; the
//     converse fails exactly when a part is a small prime p with p^2 < q.
//   - n1 = 2 is meaningful only inside the full prime-pair test (the
//     4 = 2 + 2 case; for even q > 4 the partner q - 2 is even).
//
// All operations are pure given an immutable PrimeTable; arbitrary
// concurrent invocation is safe.

#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "goldbach/prime_table.hpp"

namespace goldbach {

struct PartitionProfile {
    std::uint64_t q = 0;
    std::uint64_t n = 0; // count of ordered odd two-part compositions, q/2 - 2
    std::uint64_t goldbach_ordered = 0;
    std::uint64_t goldbach_unordered = 0;
    std::uint64_t admissible_count = 0;
    std::uint64_t predicate_cutoff = 0; // largest odd prime with p^2 < q, 0 if none
    bool special = false;               // q = 4
};

struct ResidueRow {
    std::uint64_t n1 = 0;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> residues; // (p, n1 mod p)
};

// The residues of n1 mod p that a Goldbach partition must avoid:
// 0 (else p divides n1) and q mod p (else p divides n2). The set has one
// element iff p divides q.
struct BadResidueSet {
    std::uint64_t q = 0;
    std::uint64_t p = 0;
    std::uint64_t q_mod_p = 0;

    bool contains(std::uint64_t r) const { return r == 0 || r == q_mod_p; }
    std::size_t size() const { return q_mod_p == 0 ? 1 : 2; }
};

struct GoldbachCount {
    std::uint64_t ordered = 0;
    std::uint64_t unordered = 0;
};

struct PartitionEntry {
    std::uint64_t n1 = 0;
    std::uint64_t n2 = 0;
    bool admissible = false;
    bool prime_pair = false;
};

// Number of ordered pairs of odd numbers >= 3 summing to q: q/2 - 2.
// Pre: q >= 6 even (throws std::invalid_argument).
std::uint64_t odd_partition_count(std::uint64_t q);

// Remainders of n1 modulo each given prime. Pre: n1 >= 3 odd; primes
// strictly ascending odd primes.
ResidueRow residue_row(std::uint64_t n1, std::span<const std::uint64_t> primes);

// Pre: q >= 6 even; p an odd prime.
BadResidueSet bad_residues(std::uint64_t q, std::uint64_t p);

// Pre: q >= 6 even; n1 odd in [3, q-3]; table covers sqrt(q).
bool is_admissible(std::uint64_t q, std::uint64_t n1, const PrimeTable& table);

// Count of admissible odd n1 in [3, q-3]. Pre: q >= 6 even.
std::uint64_t admissible_count(std::uint64_t q, const PrimeTable& table);

// Full Goldbach test: both n1 and q - n1 prime. Pre: q >= 4 even;
// 2 <= n1 <= q-2; table covers q - 2.
bool is_prime_pair(std::uint64_t q, std::uint64_t n1, const PrimeTable& table);

// Ordered counts every n1 with is_prime_pair (so 8 -> 2 via 3+5 and
// 5+3); unordered counts only n1 <= q/2. Pre: q >= 4 even.
GoldbachCount goldbach_count(std::uint64_t q, const PrimeTable& table);

// One entry per odd n1 in [3, q-3], plus a leading n1 = 2 entry when
// q - 2 is prime (in practice only q = 4). Pre: q >= 4 even.
std::vector<PartitionEntry> enumerate_partitions(std::uint64_t q, const PrimeTable& table);

// Assembled per-q record. q = 4 is degenerate: n and admissible_count
// are 0 and the profile is flagged special. Pre: q >= 4 even.
PartitionProfile partition_profile(std::uint64_t q, const PrimeTable& table);

} // namespace goldbach
