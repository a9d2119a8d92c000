#include "goldbach/bounds.hpp"

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

void check_even_q(std::uint64_t q, const char* who) {
    if (q < 6 || q % 2 != 0)
        throw std::invalid_argument(std::string(who) + ": q must be even and >= 6");
}

// Odd primes <= p_m from the table, validated to end exactly at p_m.
std::vector<std::uint64_t> odd_primes_through(std::uint64_t p_m, const PrimeTable& table) {
    std::vector<std::uint64_t> odd;
    for (std::uint64_t p : table.primes()) {
        if (p == 2) continue;
        if (p > p_m) break;
        odd.push_back(p);
    }
    return odd;
}

} // namespace

Rational shrink_product(std::span<const std::uint64_t> cutoff) {
    BigInt num = 1, den = 1;
    std::uint64_t prev = 0;
    for (std::uint64_t p : cutoff) {
        if (p <= prev || p % 2 == 0 || !trial_division_prime(p))
            throw std::invalid_argument("shrink_product: entries must be ascending odd primes");
        prev = p;
        num *= p - 2;
        den *= p;
    }
    return Rational(num, den);
}

BoundBreakdown bound_A(std::uint64_t q, const PrimeTable& table) {
    check_even_q(q, "bound_A");
    BoundBreakdown b;
    b.q = q;
    b.cutoff = cutoff_primes_for_bound(q, table);
    b.shrink = shrink_product(b.cutoff);
    b.n = q / 2 - 2;
    b.subtractive = b.cutoff.empty() ? 0 : b.cutoff.back() - 2;
    // One canonicalization instead of one per arithmetic step; the
    // denominators get large (a product over every cutoff prime).
    const BigInt num = numerator(b.shrink) * b.n - b.subtractive * denominator(b.shrink);
    b.A = Rational(num, denominator(b.shrink));
    return b;
}

Rational bound_A_three(std::uint64_t q) {
    check_even_q(q, "bound_A_three");
    const BigInt n = q / 2 - 2;
    return Rational(n - 2, 3);
}

Eq4Bound bound_A_three_five(std::uint64_t q) {
    check_even_q(q, "bound_A_three_five");
    const BigInt n = q / 2 - 2;
    Eq4Bound out;
    out.value = Rational(3, 5) * (Rational(n, 3) - 1) - 2;
    out.in_scope = q >= 28;
    return out;
}

MinimaRecord minima_record(std::uint64_t p_m, const PrimeTable& table) {
    if (p_m < 3 || p_m % 2 == 0 || !trial_division_prime(p_m))
        throw std::invalid_argument("minima_record: p_m must be an odd prime");
    if (p_m >= (1ULL << 32))
        throw std::invalid_argument("minima_record: p_m^2 + 3 must fit in 64 bits");
    if (table.limit() < p_m)
        throw std::invalid_argument("minima_record: table must cover p_m");

    MinimaRecord r;
    r.p_m = p_m;
    r.q = p_m * p_m + 3;
    r.n = (p_m * p_m - 1) / 2;
    r.A_eq5 = bound_A(r.q, table).A;
    r.lower_chain = minima_lower_chain(p_m);

    if (p_m >= 11) {
        // Telescoped route: pair each (p_i - 2) with the previous prime's
        // denominator, leaving (p_m^2 - 1)/(2 p_m) as the tail factor.
        const auto odd = odd_primes_through(p_m, table);
        BigInt num = 1, den = 1;
        for (std::size_t i = 3; i < odd.size(); ++i) { // i >= 4 in 1-based prime indexing
            num *= odd[i] - 2;
            den *= odd[i - 1];
        }
        num *= BigInt(p_m) * p_m - 1;
        den *= BigInt(2) * p_m;
        r.A_eq3bis = Rational(num - (p_m - 2) * den, den);
    }
    return r;
}

Rational five_fraction_product() {
    return Rational(9, 7) * Rational(15, 13) * Rational(21, 19) * Rational(27, 23) *
           Rational(35, 31);
}

Rational minima_lower_chain(std::uint64_t p_m) {
    if (p_m < 3 || p_m % 2 == 0 || !trial_division_prime(p_m))
        throw std::invalid_argument("minima_lower_chain: p_m must be an odd prime");
    return 2 - Rational(1, p_m);
}

} // namespace goldbach
