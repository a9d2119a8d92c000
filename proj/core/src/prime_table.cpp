#include "goldbach/prime_table.hpp"

#include <cmath>
#include <stdexcept>

namespace goldbach {

namespace {

using u128 = unsigned __int128;

std::uint64_t odd_index(std::uint64_t v) { return (v - 3) / 2; }

} // namespace

std::uint64_t isqrt(std::uint64_t n) {
    if (n == 0) return 0;
    auto r = std::uint64_t(std::sqrt(double(n)));
    while (r > 0 && u128(r) * r > n) --r;
    while (u128(r + 1) * (r + 1) <= n) ++r;
    return r;
}

PrimeTable PrimeTable::build(std::uint64_t limit) {
    if (limit < 2) throw std::invalid_argument("PrimeTable::build: limit must be >= 2");

    PrimeTable t;
    t.limit_ = limit;
    const std::uint64_t nbits = limit >= 3 ? (limit - 3) / 2 + 1 : 0;
    t.odd_ = BitVector(nbits, true);

    for (std::uint64_t p = 3; p * p <= limit; p += 2) {
        if (!t.odd_.test(odd_index(p))) continue;
        t.odd_.clear_stride(odd_index(p * p), p);
    }

    t.primes_.push_back(2);
    for (std::uint64_t i = 0; i < nbits; ++i)
        if (t.odd_.test(i)) t.primes_.push_back(2 * i + 3);
    return t;
}

Segment sieve_segment(const PrimeTable& table, std::uint64_t lo, std::uint64_t hi) {
    if (lo > hi) throw std::invalid_argument("sieve_segment: lo > hi");
    if (u128(table.limit()) * table.limit() < hi)
        throw std::invalid_argument(
            "sieve_segment: insufficient base primes (table.limit()^2 < hi)");

    Segment s;
    s.lo = lo - (lo % 2);
    s.hi = hi;

    const std::uint64_t first_odd = s.lo + 1;
    const std::uint64_t nbits = hi >= first_odd ? (hi - first_odd) / 2 + 1 : 0;
    s.odd_bits = BitVector(nbits, true);
    if (nbits == 0) return s;

    if (first_odd == 1) s.odd_bits.clear(0); // 1 is not prime

    const std::uint64_t root = isqrt(hi);
    for (std::uint64_t p : table.primes()) {
        if (p == 2) continue;
        if (p > root) break;
        // First odd multiple of p that is >= max(p^2, first_odd).
        std::uint64_t m = ((first_odd + p - 1) / p) * p;
        if (m < p * p) m = p * p;
        if (m % 2 == 0) m += p;
        if (m > hi) continue;
        s.odd_bits.clear_stride((m - first_odd) / 2, p);
    }
    return s;
}

namespace {

void check_cutoff_args(std::uint64_t q, const PrimeTable& table) {
    if (q < 6 || q % 2 != 0)
        throw std::invalid_argument("cutoff primes: q must be even and >= 6");
    if (table.limit() < isqrt(q))
        throw std::invalid_argument("cutoff primes: table does not cover sqrt(q)");
}

} // namespace

std::vector<std::uint64_t> cutoff_primes_for_bound(std::uint64_t q, const PrimeTable& table) {
    check_cutoff_args(q, table);
    std::vector<std::uint64_t> out;
    for (std::uint64_t p : table.primes()) {
        if (p == 2) continue;
        if (u128(p) * p + 3 > q) break;
        out.push_back(p);
    }
    return out;
}

std::vector<std::uint64_t> cutoff_primes_for_predicate(std::uint64_t q, const PrimeTable& table) {
    check_cutoff_args(q, table);
    std::vector<std::uint64_t> out;
    for (std::uint64_t p : table.primes()) {
        if (p == 2) continue;
        if (u128(p) * p >= q) break;
        out.push_back(p);
    }
    return out;
}

} // namespace goldbach
