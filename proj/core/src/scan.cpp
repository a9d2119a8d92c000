#include "goldbach/scan.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <semaphore>
#include <span>
#include <stdexcept>
#include <thread>

namespace goldbach {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// K: index such that ordered odd partitions of q are the pairs
// (i, K - i) over the odd-number bit encoding (index i <-> 2i + 3).
u64 pair_top(u64 q) { return (q - 6) / 2; }

// Immutable state shared by all workers.
struct ScanShared {
    ScanConfig cfg;
    BitVector primes_fwd; // odd primality, index i <-> 2i + 3, bits [0, top]
    BitVector primes_rev; // primes_fwd reversed over [0, top]
    u64 top = 0;          // pair_top(q_hi) when q_hi >= 6
    std::vector<u64> odd_primes; // ascending odd primes p with p^2 < q_hi
};

struct ChunkOutput {
    std::string bytes;
    std::vector<ScanRecord> records;
    std::vector<u64> violations;
    std::vector<u64> soundness_failures;
    u64 count = 0;
    u64 last_q = 0;
    bool has_margin = false;
    u64 margin_q = 0;
    BigInt margin_num, margin_den; // margin = goldbach_ordered - A, exact
};

// Odd primality over [3, max_value], sieved in blocks so the marking
// working set stays cache-sized regardless of range.
BitVector build_odd_prime_bits(const PrimeTable& table, u64 max_value) {
    const u64 nbits = max_value >= 3 ? (max_value - 3) / 2 + 1 : 0;
    BitVector bits(nbits, true);
    if (nbits == 0) return bits;

    constexpr u64 kBlockOdds = 1ULL << 20;
    u64* words = bits.word_data();
    for (u64 block = 0; block < nbits; block += kBlockOdds) {
        const u64 end = std::min(nbits, block + kBlockOdds); // exclusive index
        const u64 lo_val = 2 * block + 3;
        const u64 hi_val = 2 * (end - 1) + 3;
        for (u64 p : table.primes()) {
            if (p == 2) continue;
            if (u128(p) * p > hi_val) break;
            u64 m = ((lo_val + p - 1) / p) * p;
            if (m < p * p) m = p * p;
            if (m % 2 == 0) m += p;
            for (u64 i = (m - 3) / 2; i < end; i += p)
                words[i >> 6] &= ~(1ULL << (i & 63));
        }
    }
    return bits;
}

// Ordered count of index pairs (i, j), i + j = K, with both bits set.
// rev must be fwd reversed over [0, J]; requires K <= J.
u64 symmetric_pair_count(const BitVector& fwd, const BitVector& rev, u64 J, u64 K) {
    const u64 s = J - K;
    if (K % 2 == 1) return 2 * shifted_and_popcount(fwd, rev, (K - 1) / 2, s);
    u64 total = K >= 2 ? 2 * shifted_and_popcount(fwd, rev, K / 2 - 1, s) : 0;
    if (fwd.test(K / 2)) ++total;
    return total;
}

bool prime_pair_bits(const ScanShared& sh, u64 q, u64 n1) {
    return sh.primes_fwd.test((n1 - 3) / 2) && sh.primes_fwd.test((q - n1 - 3) / 2);
}

// Direct admissibility test by division, used by the re-verification
// paths. cutoff/q_mod are the predicate primes for q and q's residues.
bool admissible_by_division(u64 n1, std::span<const u64> cutoff, std::span<const u64> q_mod) {
    for (std::size_t i = 0; i < cutoff.size(); ++i) {
        const u64 r = n1 % cutoff[i];
        if (r == 0 || r == q_mod[i]) return false;
    }
    return true;
}

// Exhaustive soundness re-verification for one q, independent of the
// roughness-correlation counting path: strike both bad-residue
// progressions of every cutoff prime directly into a scratch bitset
// over t <-> n1 = 3 + 2t, re-derive the admissible count, and require
// every surviving n1 to form a prime pair.
bool verify_soundness_full(const ScanShared& sh, u64 q, std::size_t pred_count,
                           u64 expected_adm, u64 goldbach_ordered) {
    if (expected_adm > goldbach_ordered) return false;

    const u64 slots = q / 2 - 2; // odd n1 in [3, q-3]
    const u64 words = (slots + 63) / 64;
    thread_local std::vector<u64> buf;
    buf.assign(words, ~0ULL);
    if (slots % 64 != 0) buf[words - 1] = (1ULL << (slots % 64)) - 1;

    for (std::size_t i = 0; i < pred_count; ++i) {
        const u64 p = sh.odd_primes[i];
        for (u64 t = (p - 3) / 2; t < slots; t += p)
            buf[t >> 6] &= ~(1ULL << (t & 63));
        const u64 qm = q % p;
        if (qm != 0) {
            u64 v0 = (qm % 2 != 0) ? qm : qm + p; // smallest odd value >= 3 with v ≡ q (mod p)
            if (v0 < 3) v0 += 2 * p;
            for (u64 t = (v0 - 3) / 2; t < slots; t += p)
                buf[t >> 6] &= ~(1ULL << (t & 63));
        }
    }

    u64 count = 0;
    for (u64 w = 0; w < words; ++w) count += std::uint64_t(std::popcount(buf[w]));
    if (count != expected_adm) return false;

    for (u64 w = 0; w < words; ++w) {
        u64 x = buf[w];
        while (x != 0) {
            const u64 t = w * 64 + std::uint64_t(std::countr_zero(x));
            x &= x - 1;
            if (!prime_pair_bits(sh, q, 3 + 2 * t)) return false;
        }
    }
    return true;
}

// Seeded spot checks for q above the exhaustive threshold: pick random
// q values in the chunk, locate an admissible n1 by forward walk from a
// random start, and require it to be a prime pair. Deterministic in
// (seed, chunk_index) so worker scheduling cannot affect output.
std::vector<u64> spot_check_failures(const ScanShared& sh, u64 c_lo, u64 c_hi,
                                     u64 chunk_index) {
    std::vector<u64> fails;
    u64 lo = std::max(c_lo, sh.cfg.full_soundness_max + 2);
    if (lo % 2 != 0) ++lo;
    if (lo > c_hi || lo < 12) return fails;

    std::mt19937_64 rng(sh.cfg.seed ^ (0x9e3779b97f4a7c15ULL * (chunk_index + 1)));
    const u64 n_evens = (c_hi - lo) / 2 + 1;
    for (unsigned smp = 0; smp < sh.cfg.samples_per_chunk; ++smp) {
        const u64 q = lo + 2 * (rng() % n_evens);

        std::size_t pred_count = 0;
        while (pred_count < sh.odd_primes.size() &&
               sh.odd_primes[pred_count] * sh.odd_primes[pred_count] < q)
            ++pred_count;
        std::span<const u64> cutoff(sh.odd_primes.data(), pred_count);
        std::vector<u64> q_mod(pred_count);
        for (std::size_t i = 0; i < pred_count; ++i) q_mod[i] = q % cutoff[i];

        const u64 slots = q / 2 - 2;
        const u64 start = rng() % slots;
        const u64 max_walk = std::min<u64>(slots, 4096);
        for (u64 step = 0; step < max_walk; ++step) {
            u64 t = start + step;
            if (t >= slots) t -= slots;
            const u64 n1 = 3 + 2 * t;
            if (!admissible_by_division(n1, cutoff, q_mod)) continue;
            if (!prime_pair_bits(sh, q, n1)) fails.push_back(q);
            break;
        }
    }
    std::sort(fails.begin(), fails.end());
    fails.erase(std::unique(fails.begin(), fails.end()), fails.end());
    return fails;
}

ChunkOutput process_chunk(const ScanShared& sh, u64 chunk_index, const RecordSink& sink) {
    const ScanConfig& cfg = sh.cfg;
    const u64 c_lo = cfg.q_lo + chunk_index * cfg.chunk;
    const u64 c_hi = std::min(cfg.q_hi, c_lo + cfg.chunk - 2);
    const bool collect = sink.wants_records();

    ChunkOutput out;
    const std::vector<u64> spot_fails = spot_check_failures(sh, c_lo, c_hi, chunk_index);

    // Bound-rule state at c_lo: shrink product and p_j over primes with
    // p^2 + 3 <= q, advanced as q grows.
    Rational shrink = 1;
    BigInt shrink_num = 1, shrink_den = 1;
    u64 p_j = 0;
    std::size_t bound_idx = 0;
    while (bound_idx < sh.odd_primes.size()) {
        const u64 p = sh.odd_primes[bound_idx];
        if (u128(p) * p + 3 > c_lo) break;
        shrink *= Rational(p - 2, p);
        p_j = p;
        ++bound_idx;
    }
    shrink_num = numerator(shrink);
    shrink_den = denominator(shrink);

    // Predicate-rule roughness bitmap over [3, c_hi - 3]: bit i set iff
    // 2i + 3 has no prime factor among the current cutoff primes. The
    // admissible count for q is then a symmetric pair count, exactly as
    // for primality.
    BitVector rough, rough_rev;
    u64 JR = 0;
    std::size_t pred_idx = 0;
    if (c_hi >= 6) {
        JR = pair_top(c_hi);
        rough = BitVector(JR + 1, true);
        while (pred_idx < sh.odd_primes.size()) {
            const u64 p = sh.odd_primes[pred_idx];
            if (u128(p) * p >= c_lo) break;
            rough.clear_stride((p - 3) / 2, p);
            ++pred_idx;
        }
        rough_rev = reversed(rough, JR);
    }

    for (u64 q = c_lo; q <= c_hi; q += 2) {
        ScanRecord r;
        r.q = q;
        if (q == 4) {
            r.goldbach_ordered = 1; // 4 = 2 + 2
            r.special = true;
            r.A_num = 0;
            r.A_den = 1;
        } else {
            bool bound_moved = false;
            while (bound_idx < sh.odd_primes.size()) {
                const u64 p = sh.odd_primes[bound_idx];
                if (u128(p) * p + 3 > q) break;
                shrink *= Rational(p - 2, p);
                p_j = p;
                ++bound_idx;
                bound_moved = true;
            }
            if (bound_moved) {
                shrink_num = numerator(shrink);
                shrink_den = denominator(shrink);
            }
            bool rough_moved = false;
            while (pred_idx < sh.odd_primes.size()) {
                const u64 p = sh.odd_primes[pred_idx];
                if (u128(p) * p >= q) break;
                rough.clear_stride((p - 3) / 2, p);
                ++pred_idx;
                rough_moved = true;
            }
            if (rough_moved) rough_rev = reversed(rough, JR);

            const u64 K = pair_top(q);
            r.n = q / 2 - 2;
            r.p_j = p_j;
            r.special = (p_j == 0);
            r.goldbach_ordered = symmetric_pair_count(sh.primes_fwd, sh.primes_rev, sh.top, K);
            r.admissible_count = symmetric_pair_count(rough, rough_rev, JR, K);

            if (p_j == 0) {
                r.A_num = r.n;
                r.A_den = 1;
            } else {
                // A = (Sn*n - (p_j-2)*Sd) / Sd with gcd(Sn, Sd) = 1, so the
                // common factor with Sd is exactly gcd(n, Sd).
                BigInt raw = shrink_num * r.n - BigInt(p_j - 2) * shrink_den;
                const u64 g = std::gcd(r.n, (shrink_den % r.n).convert_to<u64>());
                r.A_num = raw / g;
                r.A_den = shrink_den / g;
            }

            if (cfg.inject_violation_q && *cfg.inject_violation_q == q) {
                r.A_num = r.goldbach_ordered; // inflate A to exactly g
                r.A_den = 1;
            }

            r.conjecture_ok = r.special || r.A_num <= 0 ||
                              BigInt(r.goldbach_ordered) * r.A_den > r.A_num;

            if (q <= cfg.full_soundness_max)
                r.soundness_ok =
                    verify_soundness_full(sh, q, pred_idx, r.admissible_count,
                                          r.goldbach_ordered);
            else
                r.soundness_ok = r.admissible_count <= r.goldbach_ordered &&
                                 !std::binary_search(spot_fails.begin(), spot_fails.end(), q);
        }

        if (!r.conjecture_ok) out.violations.push_back(q);
        if (!r.soundness_ok) out.soundness_failures.push_back(q);

        BigInt m_num = BigInt(r.goldbach_ordered) * r.A_den - r.A_num;
        if (!out.has_margin || m_num * out.margin_den < out.margin_num * r.A_den) {
            out.has_margin = true;
            out.margin_q = q;
            out.margin_num = m_num;
            out.margin_den = r.A_den;
        }

        out.bytes += sink.render(r);
        if (collect) out.records.push_back(std::move(r));
        ++out.count;
        out.last_q = q;
    }
    return out;
}

} // namespace

ScanReport scan_range(const ScanConfig& cfg, const PrimeTable& table, RecordSink& sink,
                      const std::filesystem::path* checkpoint_path, u64 resume_from_q) {
    if (cfg.q_lo < 4 || cfg.q_lo % 2 != 0 || cfg.q_hi % 2 != 0 || cfg.q_lo > cfg.q_hi)
        throw std::invalid_argument("scan_range: invalid range (need even 4 <= q_lo <= q_hi)");
    if (cfg.chunk < 2 || cfg.chunk % 2 != 0)
        throw std::invalid_argument("scan_range: chunk must be even and >= 2");
    if (u128(table.limit()) * table.limit() < cfg.q_hi)
        throw std::invalid_argument("scan_range: table too small (need limit^2 >= q_hi)");
    if (cfg.inject_violation_q) {
        const u64 iq = *cfg.inject_violation_q;
        if (iq < 12 || iq % 2 != 0 || iq < cfg.q_lo || iq > cfg.q_hi)
            throw std::invalid_argument(
                "scan_range: inject_violation_q must be an even non-special q in range");
    }

    ScanReport rep;
    rep.q_lo = cfg.q_lo;
    rep.q_hi = cfg.q_hi;
    rep.resumed_from_q = resume_from_q;

    const u64 total_chunks = (cfg.q_hi - cfg.q_lo) / cfg.chunk + 1;
    u64 first_chunk = 0;
    if (resume_from_q != 0) {
        if (resume_from_q > cfg.q_hi) { // checkpoint says the scan already finished
            rep.checkpoint_q = cfg.q_hi;
            rep.complete = true;
            return rep;
        }
        if (resume_from_q < cfg.q_lo || (resume_from_q - cfg.q_lo) % cfg.chunk != 0)
            throw std::invalid_argument("scan_range: resume point is not a chunk boundary");
        first_chunk = (resume_from_q - cfg.q_lo) / cfg.chunk;
        rep.checkpoint_q = resume_from_q - 2;
    }

    ScanShared shared;
    shared.cfg = cfg;
    if (cfg.q_hi >= 6) {
        shared.top = pair_top(cfg.q_hi);
        shared.primes_fwd = build_odd_prime_bits(table, cfg.q_hi - 3);
        shared.primes_rev = reversed(shared.primes_fwd, shared.top);
        for (u64 p : table.primes()) {
            if (p == 2) continue;
            if (u128(p) * p >= cfg.q_hi) break;
            shared.odd_primes.push_back(p);
        }
    }

    const unsigned workers = std::max(1u, cfg.workers);
    const std::ptrdiff_t window = std::ptrdiff_t(workers) * 2 + 2;

    std::vector<std::optional<ChunkOutput>> done(total_chunks);
    std::mutex m;
    std::condition_variable cv;
    std::counting_semaphore<> slots(window);
    std::atomic<u64> cursor{first_chunk};
    std::atomic<bool> cancel{false};
    std::exception_ptr worker_error;
    std::mutex error_m;

    auto work = [&] {
        for (;;) {
            slots.acquire();
            if (cancel.load(std::memory_order_relaxed)) {
                slots.release();
                return;
            }
            const u64 k = cursor.fetch_add(1);
            if (k >= total_chunks) {
                slots.release();
                return;
            }
            try {
                ChunkOutput out = process_chunk(shared, k, sink);
                {
                    std::lock_guard lk(m);
                    done[k] = std::move(out);
                }
                cv.notify_all();
            } catch (...) {
                {
                    std::lock_guard lk(error_m);
                    if (!worker_error) worker_error = std::current_exception();
                }
                cancel.store(true);
                cv.notify_all();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);

    std::exception_ptr sequencer_error;
    try {
        for (u64 k = first_chunk; k < total_chunks; ++k) {
            std::unique_lock lk(m);
            cv.wait(lk, [&] { return done[k].has_value() || cancel.load(); });
            if (!done[k].has_value()) break; // cancelled by a worker failure
            ChunkOutput out = std::move(*done[k]);
            done[k].reset();
            lk.unlock();

            if (!out.bytes.empty()) sink.write_rendered(out.bytes);
            if (sink.wants_records())
                for (const ScanRecord& r : out.records) sink.on_record(r);
            sink.flush();

            rep.records_written += out.count;
            rep.violations.insert(rep.violations.end(), out.violations.begin(),
                                  out.violations.end());
            rep.soundness_failures.insert(rep.soundness_failures.end(),
                                          out.soundness_failures.begin(),
                                          out.soundness_failures.end());
            if (out.has_margin) {
                const bool replace =
                    rep.records_written == out.count /* first committed chunk */ ||
                    out.margin_num * denominator(rep.min_margin) <
                        numerator(rep.min_margin) * out.margin_den;
                if (replace) {
                    rep.min_margin_q = out.margin_q;
                    rep.min_margin = Rational(out.margin_num, out.margin_den);
                }
            }
            rep.checkpoint_q = out.last_q;
            if (checkpoint_path)
                write_checkpoint(*checkpoint_path,
                                 Checkpoint{cfg.q_lo, cfg.q_hi, cfg.chunk, out.last_q});

            slots.release();
            if (cfg.stop_after_q && out.last_q >= *cfg.stop_after_q &&
                out.last_q < cfg.q_hi) {
                cancel.store(true);
                break;
            }
        }
    } catch (...) {
        sequencer_error = std::current_exception();
        cancel.store(true);
    }

    cancel.store(true);
    slots.release(window);
    cv.notify_all();
    for (std::thread& t : pool) t.join();

    if (sequencer_error) std::rethrow_exception(sequencer_error);
    {
        std::lock_guard lk(error_m);
        if (worker_error) std::rethrow_exception(worker_error);
    }

    rep.complete = rep.checkpoint_q == cfg.q_hi;
    return rep;
}

std::pair<u64, Rational> min_margin(u64 q_lo, u64 q_hi, const PrimeTable& table,
                                    unsigned workers) {
    if (q_lo > q_hi) throw std::invalid_argument("min_margin: empty range");
    ScanConfig cfg;
    cfg.q_lo = q_lo;
    cfg.q_hi = q_hi;
    cfg.workers = workers;
    NullSink sink;
    const ScanReport rep = scan_range(cfg, table, sink);
    return {rep.min_margin_q, rep.min_margin};
}

} // namespace goldbach
