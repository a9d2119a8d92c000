// scan.hpp
// Range sweep over even q: per-q exact bound evaluation, exact Goldbach
// and admissible counts, conjecture and soundness auditing, checkpointed
// deterministic output.
//
// Concurrency contract: chunks (contiguous q ranges of a fixed width)
// are processed by a pool of workers sharing only immutable state; a
// sequencing stage restores ascending q order before the sink, and the
// sink is written by exactly one thread. Output bytes are identical for
// any worker count and across an interrupt/resume cycle.
//
// Record semantics:
//   - conjecture_ok is decided by exact cross-multiplication
//     goldbach_ordered * A_den > A_num. Rows flagged special (q = 4 and
//     empty-cutoff rows, q < 12), where the bound formula is a
//     convention rather than a claim, are treated as trivially
//     satisfied, as are rows with A <= 0.
//   - soundness_ok re-verifies the admissibility predicate: exhaustively
//     (every n1, independent of the counting path) for
//     q <= full_soundness_max, by per-chunk seeded spot checks above.
//   - A violation never aborts a scan; it is recorded and surfaced.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "goldbach/prime_table.hpp"
#include "goldbach/rational.hpp"

namespace goldbach {

struct ScanRecord {
    std::uint64_t q = 0;
    std::uint64_t n = 0;   // q/2 - 2 (0 for q = 4)
    std::uint64_t p_j = 0; // last bound-cutoff prime, 0 if none
    BigInt A_num = 0;      // exact bound A in lowest terms; A_den > 0
    BigInt A_den = 1;
    std::uint64_t goldbach_ordered = 0;
    std::uint64_t admissible_count = 0;
    bool conjecture_ok = true;
    bool soundness_ok = true;
    bool special = false; // q = 4 or empty bound cutoff
};

struct ScanConfig {
    std::uint64_t q_lo = 4;
    std::uint64_t q_hi = 4;
    std::uint64_t chunk = 8192; // q-range width of one work unit; even, >= 2
    unsigned workers = 1;
    std::uint64_t seed = 0;

    // Exhaustive soundness re-verification at or below this q; seeded
    // spot checks above it.
    std::uint64_t full_soundness_max = 100'000;
    unsigned samples_per_chunk = 16;

    // Test hook: artificially inflate A at this q so the violation
    // detection path can be exercised. Must be a non-special q in range.
    std::optional<std::uint64_t> inject_violation_q;

    // Stop cleanly once the chunk containing this q has been committed;
    // the checkpoint stays valid for resume.
    std::optional<std::uint64_t> stop_after_q;
};

struct ScanReport {
    std::uint64_t q_lo = 0;
    std::uint64_t q_hi = 0;
    std::uint64_t records_written = 0;
    std::vector<std::uint64_t> violations;          // q with conjecture_ok = false
    std::vector<std::uint64_t> soundness_failures;  // q with soundness_ok = false
    std::uint64_t min_margin_q = 0; // q minimizing goldbach_ordered - A; ties -> smaller q
    Rational min_margin;
    std::uint64_t checkpoint_q = 0;  // last completed q
    std::uint64_t resumed_from_q = 0; // 0 for a fresh run
    bool complete = false;
};

// Sink for scan records. render() must be pure and thread-safe (it runs
// on worker threads); the write_* methods are called by the sequencer
// only, in ascending q order.
class RecordSink {
public:
    virtual ~RecordSink() = default;
    virtual void write_preamble(const std::string& /*config_echo*/) {}
    virtual std::string render(const ScanRecord&) const { return {}; }
    virtual void write_rendered(std::string_view) {}
    virtual void flush() {}
    virtual unsigned preamble_lines() const { return 0; }
    // When true, chunks carry full records and on_record() fires per
    // record (sequencer thread, ascending q).
    virtual bool wants_records() const { return false; }
    virtual void on_record(const ScanRecord&) {}
};

// CSV, one record per line. Columns (exact order):
// q,n,p_j,A_num,A_den,goldbach_ordered,admissible_count,conjecture_ok,soundness_ok,special
// Booleans are 1/0. Preamble: the config echo comment line plus the
// header row.
class CsvScanSink : public RecordSink {
public:
    explicit CsvScanSink(std::ostream& out) : out_(out) {}
    void write_preamble(const std::string& config_echo) override;
    std::string render(const ScanRecord& r) const override;
    void write_rendered(std::string_view bytes) override;
    void flush() override;
    unsigned preamble_lines() const override { return 2; }

    static std::string header();

private:
    std::ostream& out_;
};

// JSON Lines, one object per record with the same field names; A_num and
// A_den are decimal strings so no consumer is forced to parse bignums as
// doubles. Preamble: one {"_config": ...} object line.
class JsonlScanSink : public RecordSink {
public:
    explicit JsonlScanSink(std::ostream& out) : out_(out) {}
    void write_preamble(const std::string& config_echo) override;
    std::string render(const ScanRecord& r) const override;
    void write_rendered(std::string_view bytes) override;
    void flush() override;
    unsigned preamble_lines() const override { return 1; }

private:
    std::ostream& out_;
};

// Human-oriented key=value lines. Preamble: the config echo line.
class PlainScanSink : public RecordSink {
public:
    explicit PlainScanSink(std::ostream& out) : out_(out) {}
    void write_preamble(const std::string& config_echo) override;
    std::string render(const ScanRecord& r) const override;
    void write_rendered(std::string_view bytes) override;
    void flush() override;
    unsigned preamble_lines() const override { return 1; }

private:
    std::ostream& out_;
};

// Discards bytes; used when only the report is wanted.
class NullSink : public RecordSink {};

// Buffers full records in memory; for tests and small ranges.
class CollectingSink : public RecordSink {
public:
    bool wants_records() const override { return true; }
    void on_record(const ScanRecord& r) override { records.push_back(r); }
    std::vector<ScanRecord> records;
};

// Checkpoint file: line 1 "goldbach-scan v1 <q_lo> <q_hi> <chunk>",
// line 2 the last completed q. Chunks are never persisted partially;
// resume re-runs whole chunks.
inline constexpr std::string_view kCheckpointMagic = "goldbach-scan v1";

struct Checkpoint {
    std::uint64_t q_lo = 0;
    std::uint64_t q_hi = 0;
    std::uint64_t chunk = 0;
    std::uint64_t last_q = 0;
};

// Written via a temp file + rename so a torn write cannot corrupt it.
void write_checkpoint(const std::filesystem::path& path, const Checkpoint& ck);

// Throws std::runtime_error with a diagnostic on unreadable, malformed,
// or internally inconsistent files.
Checkpoint read_checkpoint(const std::filesystem::path& path);

struct ResumePlan {
    std::uint64_t next_q = 0;       // first q to compute
    std::uint64_t records_done = 0; // records already committed
    bool complete = false;
};

// Validate a checkpoint against the configured scan and decide where to
// continue. Throws std::runtime_error if the checkpoint is corrupt or
// its parameters do not match the config.
ResumePlan plan_resume(const std::filesystem::path& checkpoint_path, const ScanConfig& cfg);

// The canonical configuration echo line. Deliberately excludes worker
// count and paths: output content does not depend on them, and the scan
// is reproducible from this line alone.
std::string scan_config_echo(const ScanConfig& cfg, std::string_view format_name);

// Sweep all even q in [cfg.q_lo, cfg.q_hi]. One record per q, emitted in
// ascending order regardless of worker scheduling. When checkpoint_path
// is given the checkpoint is rewritten after every committed chunk. A
// fresh run has resume_from_q = 0; a resumed run passes the
// ResumePlan::next_q and must hand in a sink already positioned after
// the previously committed records (the preamble is not rewritten).
// Throws std::invalid_argument on a bad range/chunk and propagates sink
// write failures (with the checkpoint intact).
ScanReport scan_range(const ScanConfig& cfg, const PrimeTable& table, RecordSink& sink,
                      const std::filesystem::path* checkpoint_path = nullptr,
                      std::uint64_t resume_from_q = 0);

// The q in [q_lo, q_hi] minimizing goldbach_ordered - A (exact; ties
// broken toward smaller q), with that margin.
std::pair<std::uint64_t, Rational> min_margin(std::uint64_t q_lo, std::uint64_t q_hi,
                                              const PrimeTable& table, unsigned workers = 1);

} // namespace goldbach
