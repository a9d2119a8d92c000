#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "goldbach/prime_table.hpp"
#include "support/oracle.hpp"

using goldbach::PrimeTable;
using goldbach::Segment;

TEST_CASE("isqrt is exact at perfect squares and their neighbours") {
    CHECK(goldbach::isqrt(0) == 0);
    CHECK(goldbach::isqrt(1) == 1);
    CHECK(goldbach::isqrt(2) == 1);
    CHECK(goldbach::isqrt(3) == 1);
    CHECK(goldbach::isqrt(4) == 2);
    for (std::uint64_t k : {3ULL, 31ULL, 997ULL, 65521ULL, 4294967291ULL}) {
        CHECK(goldbach::isqrt(k * k) == k);
        CHECK(goldbach::isqrt(k * k - 1) == k - 1);
        CHECK(goldbach::isqrt(k * k + 1) == k);
    }
}

TEST_CASE("build_table small prime lists") {
    CHECK(PrimeTable::build(10).primes() == std::vector<std::uint64_t>{2, 3, 5, 7});
    CHECK(PrimeTable::build(2).primes() == std::vector<std::uint64_t>{2});

    const auto primes31 = PrimeTable::build(31).primes();
    CHECK(primes31 ==
          std::vector<std::uint64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31});
}

TEST_CASE("build_table rejects limit < 2") {
    CHECK_THROWS_AS(PrimeTable::build(1), std::invalid_argument);
    CHECK_THROWS_AS(PrimeTable::build(0), std::invalid_argument);
}

TEST_CASE("table membership agrees with trial division up to 10^4") {
    const auto table = PrimeTable::build(10'000);
    for (std::uint64_t k = 2; k <= 10'000; ++k)
        REQUIRE(table.is_prime(k) == oracle::is_prime(k));
}

TEST_CASE("prime_list is strictly increasing and starts 2,3,5,7") {
    const auto table = PrimeTable::build(1000);
    const auto& ps = table.primes();
    REQUIRE(ps.size() >= 4);
    CHECK(ps[0] == 2);
    CHECK(ps[1] == 3);
    CHECK(ps[2] == 5);
    CHECK(ps[3] == 7);
    for (std::size_t i = 1; i < ps.size(); ++i) REQUIRE(ps[i] > ps[i - 1]);
}

TEST_CASE("segment [100,130] marks exactly the textbook primes") {
    const auto table = PrimeTable::build(100);
    const Segment s = goldbach::sieve_segment(table, 100, 130);
    std::vector<std::uint64_t> found;
    for (std::uint64_t k = 101; k <= 129; k += 2)
        if (s.is_prime(k)) found.push_back(k);
    CHECK(found == std::vector<std::uint64_t>{101, 103, 107, 109, 113, 127});
}

TEST_CASE("segment [3,31] agrees with the table on every odd value") {
    const auto table = PrimeTable::build(31);
    const Segment s = goldbach::sieve_segment(table, 3, 31);
    for (std::uint64_t k = 3; k <= 31; k += 2)
        REQUIRE(s.is_prime(k) == table.is_prime(k));
}

TEST_CASE("segment at 10^6 agrees with a trial-division oracle") {
    const auto table = PrimeTable::build(1001);
    const Segment s = goldbach::sieve_segment(table, 1'000'000, 1'000'100);
    for (std::uint64_t k = 1'000'001; k <= 1'000'099; k += 2)
        REQUIRE(s.is_prime(k) == oracle::is_prime(k));
}

TEST_CASE("segments agree with the table on random overlapping windows") {
    const auto table = PrimeTable::build(1'000'000);
    const auto base = PrimeTable::build(1001);
    std::mt19937_64 rng(12345);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::uint64_t lo = 2 + rng() % 999'000;
        const std::uint64_t hi = std::min<std::uint64_t>(lo + rng() % 997, 1'000'000);
        if (hi < lo) continue;
        const Segment s = goldbach::sieve_segment(base, lo, hi);
        const std::uint64_t first_odd = s.lo + 1;
        for (std::uint64_t k = first_odd; k <= hi; k += 2)
            REQUIRE(s.is_prime(k) == table.is_prime(k));
    }
}

TEST_CASE("segment requires enough base primes") {
    const auto table = PrimeTable::build(10);
    CHECK_THROWS_AS(goldbach::sieve_segment(table, 150, 200), std::invalid_argument);
    CHECK_THROWS_AS(goldbach::sieve_segment(table, 10, 4), std::invalid_argument);
    CHECK_NOTHROW(goldbach::sieve_segment(table, 90, 100)); // 10^2 = 100 is just enough
}

TEST_CASE("bound cutoff examples") {
    const auto table = PrimeTable::build(1000);
    CHECK(cutoff_primes_for_bound(28, table) == std::vector<std::uint64_t>{3, 5});
    CHECK(cutoff_primes_for_bound(26, table) == std::vector<std::uint64_t>{3});
    CHECK(cutoff_primes_for_bound(124, table) == std::vector<std::uint64_t>{3, 5, 7, 11});
    // empty below 12
    CHECK(cutoff_primes_for_bound(6, table).empty());
    CHECK(cutoff_primes_for_bound(10, table).empty());
    CHECK(cutoff_primes_for_bound(12, table) == std::vector<std::uint64_t>{3});
}

TEST_CASE("predicate cutoff examples") {
    const auto table = PrimeTable::build(1000);
    CHECK(cutoff_primes_for_predicate(10, table) == std::vector<std::uint64_t>{3});
    CHECK(cutoff_primes_for_predicate(8, table).empty());
    CHECK(cutoff_primes_for_predicate(50, table) == std::vector<std::uint64_t>{3, 5, 7});
    CHECK_THROWS_AS(cutoff_primes_for_predicate(9, table), std::invalid_argument);
    CHECK_THROWS_AS(cutoff_primes_for_predicate(4, table), std::invalid_argument);
}

TEST_CASE("bound cutoff is always a subset of the predicate cutoff") {
    const auto table = PrimeTable::build(200);
    for (std::uint64_t q = 6; q <= 20'000; q += 2) {
        const auto b = cutoff_primes_for_bound(q, table);
        const auto p = cutoff_primes_for_predicate(q, table);
        REQUIRE(b.size() <= p.size());
        for (std::size_t i = 0; i < b.size(); ++i) REQUIRE(b[i] == p[i]);
    }
}

TEST_CASE("a prime enters the bound cutoff exactly at q = p^2 + 3") {
    const auto table = PrimeTable::build(200);
    for (std::uint64_t p : table.primes()) {
        if (p == 2) continue;
        if (p > 97) break;
        const std::uint64_t q = p * p + 3;
        const auto at = cutoff_primes_for_bound(q, table);
        REQUIRE(!at.empty());
        CHECK(at.back() == p);
        const auto before = cutoff_primes_for_bound(q - 2, table);
        CHECK((before.empty() || before.back() < p));
    }
}
