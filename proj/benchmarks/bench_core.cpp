// Microbenchmarks for the throughput-sensitive paths: sieving, pair
// counting, bound evaluation, and whole-chunk scanning.

#include <benchmark/benchmark.h>

#include <sstream>

#include "goldbach/bounds.hpp"
#include "goldbach/partition.hpp"
#include "goldbach/prime_table.hpp"
#include "goldbach/scan.hpp"

using namespace goldbach;

static void BM_BuildTable(benchmark::State& state) {
    const auto limit = std::uint64_t(state.range(0));
    for (auto _ : state) {
        auto table = PrimeTable::build(limit);
        benchmark::DoNotOptimize(table.primes().size());
    }
    state.SetItemsProcessed(std::int64_t(state.iterations()) * std::int64_t(limit));
}
BENCHMARK(BM_BuildTable)->Arg(100'000)->Arg(1'000'000)->Arg(10'000'000);

static void BM_SieveSegment(benchmark::State& state) {
    const auto table = PrimeTable::build(40'000);
    const std::uint64_t lo = 1'000'000'000;
    const std::uint64_t width = std::uint64_t(state.range(0));
    for (auto _ : state) {
        auto seg = sieve_segment(table, lo, lo + width);
        benchmark::DoNotOptimize(seg.odd_bits.count());
    }
    state.SetItemsProcessed(std::int64_t(state.iterations()) * std::int64_t(width));
}
BENCHMARK(BM_SieveSegment)->Arg(1 << 20)->Arg(1 << 22);

static void BM_GoldbachCount(benchmark::State& state) {
    const auto q = std::uint64_t(state.range(0));
    const auto table = PrimeTable::build(q);
    for (auto _ : state) {
        auto c = goldbach_count(q, table);
        benchmark::DoNotOptimize(c.ordered);
    }
}
BENCHMARK(BM_GoldbachCount)->Arg(10'000)->Arg(100'000)->Arg(1'000'000);

static void BM_AdmissibleCount(benchmark::State& state) {
    const auto q = std::uint64_t(state.range(0));
    const auto table = PrimeTable::build(q);
    for (auto _ : state) {
        benchmark::DoNotOptimize(admissible_count(q, table));
    }
}
BENCHMARK(BM_AdmissibleCount)->Arg(10'000)->Arg(100'000);

static void BM_BoundA(benchmark::State& state) {
    const auto q = std::uint64_t(state.range(0));
    const auto table = PrimeTable::build(isqrt(q) + 1);
    for (auto _ : state) {
        auto b = bound_A(q, table);
        benchmark::DoNotOptimize(b.A);
    }
}
BENCHMARK(BM_BoundA)->Arg(100'000)->Arg(100'000'000);

static void BM_MinimaRecord(benchmark::State& state) {
    const auto table = PrimeTable::build(10'000);
    const auto p = std::uint64_t(state.range(0));
    for (auto _ : state) {
        auto r = minima_record(p, table);
        benchmark::DoNotOptimize(r.A_eq5);
    }
}
BENCHMARK(BM_MinimaRecord)->Arg(97)->Arg(997)->Arg(9973);

static void BM_ScanRange(benchmark::State& state) {
    const auto width = std::uint64_t(state.range(0));
    const auto table = PrimeTable::build(1001);
    for (auto _ : state) {
        ScanConfig cfg;
        cfg.q_lo = 4;
        cfg.q_hi = 4 + width;
        NullSink sink;
        auto rep = scan_range(cfg, table, sink);
        benchmark::DoNotOptimize(rep.records_written);
    }
    state.SetItemsProcessed(std::int64_t(state.iterations()) * std::int64_t(width / 2));
}
BENCHMARK(BM_ScanRange)->Arg(1 << 14)->Arg(1 << 17);

static void BM_CsvRender(benchmark::State& state) {
    std::ostringstream out;
    CsvScanSink sink(out);
    const auto table = PrimeTable::build(1001);
    CollectingSink collect;
    ScanConfig cfg;
    cfg.q_lo = 999'000;
    cfg.q_hi = 1'000'000;
    scan_range(cfg, table, collect);
    for (auto _ : state) {
        std::size_t bytes = 0;
        for (const auto& r : collect.records) bytes += sink.render(r).size();
        benchmark::DoNotOptimize(bytes);
    }
    state.SetItemsProcessed(std::int64_t(state.iterations()) *
                            std::int64_t(collect.records.size()));
}
BENCHMARK(BM_CsvRender);

BENCHMARK_MAIN();
