#include "goldbach/partition.hpp"

#include <stdexcept>
#include <string>

namespace goldbach {

namespace {

bool trial_division_prime(std::uint64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

void check_even_q(std::uint64_t q, std::uint64_t min_q, const char* who) {
    if (q < min_q || q % 2 != 0)
        throw std::invalid_argument(std::string(who) + ": q must be even and >= " +
                                    std::to_string(min_q));
}

// Shared inner predicate once the cutoff primes and q's residues are known.
bool admissible_against(std::uint64_t n1, std::span<const std::uint64_t> cutoff,
                        std::span<const std::uint64_t> q_mod) {
    for (std::size_t i = 0; i < cutoff.size(); ++i) {
        const std::uint64_t r = n1 % cutoff[i];
        if (r == 0 || r == q_mod[i]) return false;
    }
    return true;
}

std::vector<std::uint64_t> q_residues(std::uint64_t q, std::span<const std::uint64_t> cutoff) {
    std::vector<std::uint64_t> q_mod(cutoff.size());
    for (std::size_t i = 0; i < cutoff.size(); ++i) q_mod[i] = q % cutoff[i];
    return q_mod;
}

} // namespace

std::uint64_t odd_partition_count(std::uint64_t q) {
    check_even_q(q, 6, "odd_partition_count");
    return q / 2 - 2;
}

ResidueRow residue_row(std::uint64_t n1, std::span<const std::uint64_t> primes) {
    if (n1 < 3 || n1 % 2 == 0)
        throw std::invalid_argument("residue_row: n1 must be odd and >= 3");
    ResidueRow row;
    row.n1 = n1;
    row.residues.reserve(primes.size());
    std::uint64_t prev = 0;
    for (std::uint64_t p : primes) {
        if (p <= prev || p % 2 == 0 || !trial_division_prime(p))
            throw std::invalid_argument("residue_row: primes must be ascending odd primes");
        prev = p;
        row.residues.emplace_back(p, n1 % p);
    }
    return row;
}

BadResidueSet bad_residues(std::uint64_t q, std::uint64_t p) {
    check_even_q(q, 6, "bad_residues");
    if (p < 3 || p % 2 == 0 || !trial_division_prime(p))
        throw std::invalid_argument("bad_residues: p must be an odd prime");
    return BadResidueSet{q, p, q % p};
}

bool is_admissible(std::uint64_t q, std::uint64_t n1, const PrimeTable& table) {
    check_even_q(q, 6, "is_admissible");
    if (n1 < 3 || n1 > q - 3 || n1 % 2 == 0)
        throw std::invalid_argument("is_admissible: n1 must be odd in [3, q-3]");
    const auto cutoff = cutoff_primes_for_predicate(q, table);
    const auto q_mod = q_residues(q, cutoff);
    return admissible_against(n1, cutoff, q_mod);
}

std::uint64_t admissible_count(std::uint64_t q, const PrimeTable& table) {
    check_even_q(q, 6, "admissible_count");
    const auto cutoff = cutoff_primes_for_predicate(q, table);
    const auto q_mod = q_residues(q, cutoff);
    std::uint64_t count = 0;
    for (std::uint64_t n1 = 3; n1 <= q - 3; n1 += 2)
        if (admissible_against(n1, cutoff, q_mod)) ++count;
    return count;
}

bool is_prime_pair(std::uint64_t q, std::uint64_t n1, const PrimeTable& table) {
    check_even_q(q, 4, "is_prime_pair");
    if (n1 < 2 || n1 > q - 2)
        throw std::invalid_argument("is_prime_pair: n1 must lie in [2, q-2]");
    if (table.limit() < q - 2)
        throw std::invalid_argument("is_prime_pair: table must cover q - 2");
    return table.is_prime(n1) && table.is_prime(q - n1);
}

GoldbachCount goldbach_count(std::uint64_t q, const PrimeTable& table) {
    check_even_q(q, 4, "goldbach_count");
    if (table.limit() < q - 2)
        throw std::invalid_argument("goldbach_count: table must cover q - 2");
    if (q == 4) return GoldbachCount{1, 1}; // 4 = 2 + 2
    GoldbachCount c;
    for (std::uint64_t n1 = 3; n1 <= q - 3; n1 += 2) {
        if (table.is_prime(n1) && table.is_prime(q - n1)) {
            ++c.ordered;
            if (n1 <= q / 2) ++c.unordered;
        }
    }
    return c;
}

std::vector<PartitionEntry> enumerate_partitions(std::uint64_t q, const PrimeTable& table) {
    check_even_q(q, 4, "enumerate_partitions");
    if (table.limit() < q - 2)
        throw std::invalid_argument("enumerate_partitions: table must cover q - 2");

    std::vector<PartitionEntry> out;
    if (table.is_prime(q - 2))
        out.push_back(PartitionEntry{2, q - 2, false, table.is_prime(2)});
    if (q < 6) return out;

    const auto cutoff = cutoff_primes_for_predicate(q, table);
    const auto q_mod = q_residues(q, cutoff);
    out.reserve(out.size() + (q / 2 - 2));
    for (std::uint64_t n1 = 3; n1 <= q - 3; n1 += 2) {
        PartitionEntry e;
        e.n1 = n1;
        e.n2 = q - n1;
        e.admissible = admissible_against(n1, cutoff, q_mod);
        e.prime_pair = table.is_prime(n1) && table.is_prime(q - n1);
        out.push_back(e);
    }
    return out;
}

PartitionProfile partition_profile(std::uint64_t q, const PrimeTable& table) {
    check_even_q(q, 4, "partition_profile");
    PartitionProfile pr;
    pr.q = q;
    if (q == 4) {
        pr.goldbach_ordered = pr.goldbach_unordered = 1;
        pr.special = true;
        return pr;
    }
    pr.n = q / 2 - 2;
    const auto counts = goldbach_count(q, table);
    pr.goldbach_ordered = counts.ordered;
    pr.goldbach_unordered = counts.unordered;
    pr.admissible_count = admissible_count(q, table);
    const auto cutoff = cutoff_primes_for_predicate(q, table);
    pr.predicate_cutoff = cutoff.empty() ? 0 : cutoff.back();
    return pr;
}

} // namespace goldbach
