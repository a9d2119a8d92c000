// bounds.hpp
// Exact evaluation of the partition-count lower bounds: the worst-case
// shrink product over cutoff primes, the single-prime and two-prime
// specializations, the general conjectured bound A(q), its value at the
// local minima q = p_m^2 + 3 via two algebraically equal routes, and the
// closed-form floor 2 - 1/p_m those minima stay above.
//
// Everything is exact rational arithmetic; no operation here rounds.
// Pure functions over immutable inputs; safe under arbitrary concurrency.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "goldbach/prime_table.hpp"
#include "goldbach/rational.hpp"

namespace goldbach {

struct BoundBreakdown {
    std::uint64_t q = 0;
    std::vector<std::uint64_t> cutoff; // bound-rule primes, ascending
    Rational shrink;                   // prod (p-2)/p over cutoff; 1 if empty
    std::uint64_t n = 0;               // q/2 - 2
    std::uint64_t subtractive = 0;     // p_j - 2, or 0 when cutoff empty
    Rational A;                        // shrink * n - subtractive
};

struct MinimaRecord {
    std::uint64_t p_m = 0;
    std::uint64_t q = 0;             // p_m^2 + 3
    std::uint64_t n = 0;             // (p_m^2 - 1) / 2
    Rational A_eq5;                  // via bound_A at q
    std::optional<Rational> A_eq3bis; // telescoped route; engaged for p_m >= 11
    Rational lower_chain;            // 2 - 1/p_m
};

struct Eq4Bound {
    Rational value;
    bool in_scope = false; // the two-prime form is stated for q >= 28
};

// prod (p-2)/p over the given primes, exactly; 1 for an empty list.
// Entries must be strictly ascending odd primes (throws
// std::invalid_argument otherwise).
Rational shrink_product(std::span<const std::uint64_t> cutoff);

// The conjectured lower bound on the number of Goldbach partitions of q:
// A = shrink * (q/2 - 2) - (p_j - 2) with the bound cutoff rule; A = n
// when the cutoff is empty (q < 12). May be negative; never clamped.
// Pre: q >= 6 even, table covers sqrt(q).
BoundBreakdown bound_A(std::uint64_t q, const PrimeTable& table);

// Single-prime form: (n - 2)/3 with n = q/2 - 2. Pre: q >= 6 even.
Rational bound_A_three(std::uint64_t q);

// Two-prime form: (3/5)(n/3 - 1) - 2. Defined for q >= 6 even; flagged
// out of scope (reported, not fatal) below q = 28.
Eq4Bound bound_A_three_five(std::uint64_t q);

// Bound value at the local minimum q = p_m^2 + 3, via the direct route
// (bound_A) and, for p_m >= 11, the telescoped route
//   prod_{i=4..m} (p_i - 2)/p_{i-1} * (p_m^2 - 1)/(2 p_m) - (p_m - 2)
// with twin-prime unit factors retained. The two routes are equal as
// exact rationals. Pre: p_m an odd prime >= 3; table covers p_m.
MinimaRecord minima_record(std::uint64_t p_m, const PrimeTable& table);

// The five telescoped factors always present once p_m >= 37:
// (9/7)(15/13)(21/19)(27/23)(35/31), exactly.
Rational five_fraction_product();

// 2 - 1/p_m. Pre: p_m an odd prime >= 3.
Rational minima_lower_chain(std::uint64_t p_m);

} // namespace goldbach
