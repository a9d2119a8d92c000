// goldbach-audit: command-line front end.
//
// Subcommands: table, count, partitions, bound, minima, scan.
// Global flags: --format {plain,csv,jsonl}, --output PATH, --workers N,
// --seed S, --checkpoint PATH.
//
// Exit status: 0 success, 1 violation(s) found by scan, 2 usage or
// input/output error. stdout carries data only; stderr carries
// diagnostics and summaries.
//
// Every subcommand echoes its resolved configuration as a leading line
// of the output stream (comment style in plain/csv, a {"_config": ...}
// object in jsonl), so any emitted artifact is reproducible from its
// own first line. Scheduling-only knobs (worker count, paths) are
// deliberately not part of the echo: they cannot change output content.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "goldbach/bounds.hpp"
#include "goldbach/partition.hpp"
#include "goldbach/prime_table.hpp"
#include "goldbach/rational.hpp"
#include "goldbach/scan.hpp"

namespace {

using goldbach::BigInt;
using goldbach::PrimeTable;
using goldbach::Rational;

enum class Format { plain, csv, jsonl };

struct GlobalOpts {
    Format format = Format::plain;
    std::string output = "-";
    unsigned workers = 0; // 0 = hardware concurrency
    std::uint64_t seed = 0;
    std::string checkpoint;
};

const char* format_name(Format f) {
    switch (f) {
        case Format::csv: return "csv";
        case Format::jsonl: return "jsonl";
        default: return "plain";
    }
}

// Output stream selection: stdout for "-", else a file.
struct OutputTarget {
    std::ostream* out = nullptr;
    std::ofstream file;

    void open(const std::string& path, std::ios::openmode mode = std::ios::trunc) {
        if (path == "-") {
            out = &std::cout;
            return;
        }
        file.open(path, mode);
        if (!file) throw std::runtime_error("cannot open output file: " + path);
        out = &file;
    }
};

std::string kv_echo(const std::string& cmd, const std::vector<std::pair<std::string, std::string>>& kv,
                    Format format) {
    std::string line = "# goldbach-audit " + cmd;
    for (const auto& [k, v] : kv) line += " " + k + "=" + v;
    line += std::string(" format=") + format_name(format);
    return line;
}

void emit_echo(std::ostream& out, const std::string& echo, Format format) {
    if (format == Format::jsonl)
        out << "{\"_config\":\"" << echo.substr(2) << "\"}\n"; // drop the "# " prefix
    else
        out << echo << '\n';
}

const char* yn01(bool b) { return b ? "1" : "0"; }
const char* json_bool(bool b) { return b ? "true" : "false"; }

// ---------------------------------------------------------------- table

int cmd_table(const GlobalOpts& g, std::uint64_t n1_max, std::uint64_t prime_max) {
    if (n1_max < 3 || n1_max % 2 == 0)
        throw CLI::ValidationError("table", "n1_max must be odd and >= 3");
    if (prime_max < 3) throw CLI::ValidationError("table", "prime_max must be >= 3");

    const PrimeTable table = PrimeTable::build(prime_max);
    std::vector<std::uint64_t> primes;
    for (std::uint64_t p : table.primes())
        if (p != 2) primes.push_back(p);

    OutputTarget target;
    target.open(g.output);
    std::ostream& out = *target.out;

    emit_echo(out,
              kv_echo("table",
                      {{"n1_max", std::to_string(n1_max)},
                       {"prime_max", std::to_string(prime_max)}},
                      g.format),
              g.format);

    if (g.format == Format::csv || g.format == Format::plain) {
        std::string header = g.format == Format::csv ? "n1" : "# n1";
        for (std::uint64_t p : primes)
            header += (g.format == Format::csv ? "," : " ") + std::string("r(") +
                      std::to_string(p) + ")";
        out << header << '\n';
    }

    for (std::uint64_t n1 = 3; n1 <= n1_max; n1 += 2) {
        const auto row = goldbach::residue_row(n1, primes);
        if (g.format == Format::jsonl) {
            out << "{\"n1\":" << n1 << ",\"residues\":{";
            for (std::size_t i = 0; i < row.residues.size(); ++i) {
                if (i) out << ',';
                out << '"' << row.residues[i].first << "\":" << row.residues[i].second;
            }
            out << "}}\n";
        } else if (g.format == Format::csv) {
            out << n1;
            for (const auto& [p, r] : row.residues) out << ',' << r;
            out << '\n';
        } else {
            out << n1 << ':';
            for (const auto& [p, r] : row.residues) out << ' ' << r;
            out << '\n';
        }
    }
    return 0;
}

// ---------------------------------------------------------------- count

int cmd_count(const GlobalOpts& g, std::uint64_t q) {
    const PrimeTable table = PrimeTable::build(std::max<std::uint64_t>(q, 8));
    const auto profile = goldbach::partition_profile(q, table);

    OutputTarget target;
    target.open(g.output);
    std::ostream& out = *target.out;
    emit_echo(out, kv_echo("count", {{"q", std::to_string(q)}}, g.format), g.format);

    if (g.format == Format::jsonl) {
        out << "{\"q\":" << profile.q << ",\"n\":" << profile.n << ",\"goldbach_ordered\":"
            << profile.goldbach_ordered << ",\"goldbach_unordered\":"
            << profile.goldbach_unordered << ",\"admissible_count\":"
            << profile.admissible_count << ",\"predicate_cutoff\":" << profile.predicate_cutoff
            << ",\"special\":" << json_bool(profile.special) << "}\n";
    } else if (g.format == Format::csv) {
        out << "q,n,goldbach_ordered,goldbach_unordered,admissible_count,predicate_cutoff,"
               "special\n";
        out << profile.q << ',' << profile.n << ',' << profile.goldbach_ordered << ','
            << profile.goldbach_unordered << ',' << profile.admissible_count << ','
            << profile.predicate_cutoff << ',' << yn01(profile.special) << '\n';
    } else {
        out << "q=" << profile.q << " n=" << profile.n
            << " goldbach_ordered=" << profile.goldbach_ordered
            << " goldbach_unordered=" << profile.goldbach_unordered
            << " admissible_count=" << profile.admissible_count
            << " predicate_cutoff=" << profile.predicate_cutoff
            << " special=" << yn01(profile.special) << '\n';
    }
    return 0;
}

// ----------------------------------------------------------- partitions

int cmd_partitions(const GlobalOpts& g, std::uint64_t q) {
    const PrimeTable table = PrimeTable::build(std::max<std::uint64_t>(q, 8));
    const auto entries = goldbach::enumerate_partitions(q, table);

    OutputTarget target;
    target.open(g.output);
    std::ostream& out = *target.out;
    emit_echo(out, kv_echo("partitions", {{"q", std::to_string(q)}}, g.format), g.format);

    if (g.format == Format::csv) out << "n1,n2,admissible,prime_pair\n";
    for (const auto& e : entries) {
        if (g.format == Format::jsonl) {
            out << "{\"n1\":" << e.n1 << ",\"n2\":" << e.n2
                << ",\"admissible\":" << json_bool(e.admissible)
                << ",\"prime_pair\":" << json_bool(e.prime_pair) << "}\n";
        } else if (g.format == Format::csv) {
            out << e.n1 << ',' << e.n2 << ',' << yn01(e.admissible) << ','
                << yn01(e.prime_pair) << '\n';
        } else {
            out << "n1=" << e.n1 << " n2=" << e.n2 << " admissible=" << yn01(e.admissible)
                << " prime_pair=" << yn01(e.prime_pair) << '\n';
        }
    }
    return 0;
}

// ---------------------------------------------------------------- bound

int cmd_bound(const GlobalOpts& g, std::uint64_t q) {
    const PrimeTable table = PrimeTable::build(std::max<std::uint64_t>(goldbach::isqrt(q) + 1, 8));
    const auto b = goldbach::bound_A(q, table);

    OutputTarget target;
    target.open(g.output);
    std::ostream& out = *target.out;
    emit_echo(out, kv_echo("bound", {{"q", std::to_string(q)}}, g.format), g.format);

    const BigInt shrink_num = numerator(b.shrink), shrink_den = denominator(b.shrink);
    const BigInt a_num = numerator(b.A), a_den = denominator(b.A);

    if (g.format == Format::jsonl) {
        out << "{\"q\":" << b.q << ",\"n\":" << b.n << ",\"p_j\":"
            << (b.cutoff.empty() ? 0 : b.cutoff.back()) << ",\"shrink_num\":\"" << shrink_num
            << "\",\"shrink_den\":\"" << shrink_den << "\",\"subtractive\":" << b.subtractive
            << ",\"A_num\":\"" << a_num << "\",\"A_den\":\"" << a_den << "\"}\n";
    } else if (g.format == Format::csv) {
        out << "q,n,p_j,shrink_num,shrink_den,subtractive,A_num,A_den\n";
        out << b.q << ',' << b.n << ',' << (b.cutoff.empty() ? 0 : b.cutoff.back()) << ','
            << shrink_num << ',' << shrink_den << ',' << b.subtractive << ',' << a_num << ','
            << a_den << '\n';
    } else {
        out << "q=" << b.q << " cutoff=";
        if (b.cutoff.empty()) {
            out << "none";
        } else {
            for (std::size_t i = 0; i < b.cutoff.size(); ++i)
                out << (i ? "," : "") << b.cutoff[i];
        }
        out << " shrink=" << goldbach::to_string(b.shrink) << " n=" << b.n
            << " sub=" << b.subtractive << " A=" << goldbach::to_string(b.A) << '\n';
        out << "eq3=" << goldbach::to_string(goldbach::bound_A_three(q)) << '\n';
        const auto eq4 = goldbach::bound_A_three_five(q);
        out << "eq4=" << goldbach::to_string(eq4.value)
            << (eq4.in_scope ? "" : " (out of stated scope: q < 28)") << '\n';
    }
    return 0;
}

// --------------------------------------------------------------- minima

int cmd_minima(const GlobalOpts& g, std::uint64_t p_lo, std::uint64_t p_hi) {
    if (p_lo > p_hi) throw CLI::ValidationError("minima", "p_lo must be <= p_hi");
    const PrimeTable table = PrimeTable::build(std::max<std::uint64_t>(p_hi, 8));

    OutputTarget target;
    target.open(g.output);
    std::ostream& out = *target.out;
    emit_echo(out,
              kv_echo("minima",
                      {{"p_lo", std::to_string(p_lo)}, {"p_hi", std::to_string(p_hi)}},
                      g.format),
              g.format);

    if (g.format == Format::csv)
        out << "p_m,q,n,A5_num,A5_den,A3bis_num,A3bis_den,lower_num,lower_den,"
               "routes_equal,exceeds_lower\n";

    for (std::uint64_t p : table.primes()) {
        if (p < 3 || p < p_lo) continue;
        if (p > p_hi) break;
        const auto r = goldbach::minima_record(p, table);
        const bool routes_equal = r.A_eq3bis.has_value() && *r.A_eq3bis == r.A_eq5;
        const bool exceeds = r.A_eq5 > r.lower_chain;
        if (g.format == Format::jsonl) {
            out << "{\"p_m\":" << r.p_m << ",\"q\":" << r.q << ",\"n\":" << r.n
                << ",\"A5_num\":\"" << numerator(r.A_eq5) << "\",\"A5_den\":\""
                << denominator(r.A_eq5) << "\"";
            if (r.A_eq3bis)
                out << ",\"A3bis_num\":\"" << numerator(*r.A_eq3bis) << "\",\"A3bis_den\":\""
                    << denominator(*r.A_eq3bis) << "\"";
            else
                out << ",\"A3bis_num\":null,\"A3bis_den\":null";
            out << ",\"lower_num\":\"" << numerator(r.lower_chain) << "\",\"lower_den\":\""
                << denominator(r.lower_chain) << "\",\"routes_equal\":"
                << json_bool(routes_equal) << ",\"exceeds_lower\":" << json_bool(exceeds)
                << "}\n";
        } else if (g.format == Format::csv) {
            out << r.p_m << ',' << r.q << ',' << r.n << ',' << numerator(r.A_eq5) << ','
                << denominator(r.A_eq5) << ',';
            if (r.A_eq3bis)
                out << numerator(*r.A_eq3bis) << ',' << denominator(*r.A_eq3bis);
            else
                out << ',';
            out << ',' << numerator(r.lower_chain) << ',' << denominator(r.lower_chain) << ','
                << yn01(routes_equal) << ',' << yn01(exceeds) << '\n';
        } else {
            out << "p_m=" << r.p_m << " q=" << r.q << " n=" << r.n
                << " A_eq5=" << goldbach::to_string(r.A_eq5) << " A_eq3bis="
                << (r.A_eq3bis ? goldbach::to_string(*r.A_eq3bis) : std::string("undefined"))
                << " lower=" << goldbach::to_string(r.lower_chain)
                << " routes_equal=" << (r.A_eq3bis ? yn01(routes_equal) : "-")
                << " exceeds_lower=" << yn01(exceeds) << '\n';
        }
    }
    return 0;
}

// ----------------------------------------------------------------- scan

struct ScanArgs {
    std::uint64_t q_lo = 0, q_hi = 0;
    std::uint64_t chunk = 8192;
    std::optional<std::uint64_t> stop_after;
    std::optional<std::uint64_t> inject;
};

std::unique_ptr<goldbach::RecordSink> make_scan_sink(Format f, std::ostream& out) {
    switch (f) {
        case Format::csv: return std::make_unique<goldbach::CsvScanSink>(out);
        case Format::jsonl: return std::make_unique<goldbach::JsonlScanSink>(out);
        default: return std::make_unique<goldbach::PlainScanSink>(out);
    }
}

// Drop any bytes past the last checkpointed record so a resumed run
// appends exactly where an uninterrupted run would have been. Returns
// false if the file has fewer lines than the checkpoint implies.
bool trim_output_for_resume(const std::string& path, std::uint64_t keep_lines) {
    std::error_code ec;
    const std::uint64_t file_size = std::filesystem::file_size(path, ec);
    if (ec) return false;
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::uint64_t lines = 0;
    std::uint64_t offset = 0;
    std::string line;
    while (lines < keep_lines && std::getline(in, line)) {
        ++lines;
        offset += line.size() + 1;
    }
    // A torn final line makes the computed offset overrun the file.
    if (lines < keep_lines || offset > file_size) return false;
    in.close();
    std::filesystem::resize_file(path, offset);
    return true;
}

int cmd_scan(const GlobalOpts& g, const ScanArgs& args) {
    goldbach::ScanConfig cfg;
    cfg.q_lo = args.q_lo;
    cfg.q_hi = args.q_hi;
    cfg.chunk = args.chunk;
    cfg.seed = g.seed;
    cfg.workers = g.workers ? g.workers
                            : std::max(1u, std::thread::hardware_concurrency());
    cfg.inject_violation_q = args.inject;
    cfg.stop_after_q = args.stop_after;

    const std::uint64_t table_limit =
        std::max<std::uint64_t>(goldbach::isqrt(cfg.q_hi) + 1, 8);
    const PrimeTable table = PrimeTable::build(table_limit);

    const std::string echo = goldbach::scan_config_echo(cfg, format_name(g.format));

    std::uint64_t resume_from = 0;
    std::filesystem::path ck_path;
    const std::filesystem::path* ck_ptr = nullptr;
    if (!g.checkpoint.empty()) {
        ck_path = g.checkpoint;
        ck_ptr = &ck_path;
    }

    OutputTarget target;
    std::unique_ptr<goldbach::RecordSink> sink;

    if (ck_ptr && std::filesystem::exists(ck_path)) {
        const auto plan = goldbach::plan_resume(ck_path, cfg);
        if (plan.complete) {
            std::cerr << "scan already complete at checkpoint " << ck_path.string()
                      << "; nothing to do\n";
            std::cerr << "violations: unknown (no-op resume; see existing output)\n";
            return 0;
        }
        resume_from = plan.next_q;
        if (g.output != "-") {
            // preamble lines depend on the format
            const unsigned preamble = g.format == Format::csv ? 2 : 1;
            if (!trim_output_for_resume(g.output, preamble + plan.records_done))
                throw std::runtime_error(
                    "resume: existing output file " + g.output +
                    " is shorter than the checkpoint implies; refusing to resume");
            target.open(g.output, std::ios::app);
        } else {
            target.open(g.output);
        }
        sink = make_scan_sink(g.format, *target.out);
        std::cerr << "resuming from q=" << resume_from << " (checkpoint "
                  << ck_path.string() << ")\n";
    } else {
        target.open(g.output);
        sink = make_scan_sink(g.format, *target.out);
        sink->write_preamble(echo);
    }

    const auto report = goldbach::scan_range(cfg, table, *sink, ck_ptr, resume_from);

    std::cerr << "scan summary: range=[" << report.q_lo << "," << report.q_hi << "]"
              << " records=" << report.records_written
              << " violations=" << report.violations.size()
              << " soundness_failures=" << report.soundness_failures.size();
    if (report.records_written > 0)
        std::cerr << " min_margin_q=" << report.min_margin_q
                  << " min_margin=" << goldbach::to_string(report.min_margin);
    std::cerr << " last_q=" << report.checkpoint_q
              << " status=" << (report.complete ? "complete" : "stopped");
    if (report.resumed_from_q) std::cerr << " resumed_from=" << report.resumed_from_q;
    std::cerr << '\n';
    if (!report.violations.empty()) {
        std::cerr << "violating q:";
        for (std::uint64_t q : report.violations) std::cerr << ' ' << q;
        std::cerr << '\n';
    }
    if (!report.soundness_failures.empty()) {
        std::cerr << "soundness failures at q:";
        for (std::uint64_t q : report.soundness_failures) std::cerr << ' ' << q;
        std::cerr << '\n';
    }
    std::cerr << "violations: " << report.violations.size() << '\n';

    return (report.violations.empty() && report.soundness_failures.empty()) ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Goldbach partition auditor: residue tables, partition counts, exact "
                 "lower bounds, and conjecture range scans"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts g;
    std::map<std::string, Format> format_map{
        {"plain", Format::plain}, {"csv", Format::csv}, {"jsonl", Format::jsonl}};
    app.add_option("--format", g.format, "Output format: plain, csv, jsonl")
        ->transform(CLI::CheckedTransformer(format_map, CLI::ignore_case));
    app.add_option("--output", g.output, "Output path, or - for stdout")->capture_default_str();
    app.add_option("--workers", g.workers, "Worker threads (0 = hardware concurrency)");
    app.add_option("--seed", g.seed, "Seed for sampled re-verification");
    app.add_option("--checkpoint", g.checkpoint,
                   "Checkpoint file for scan; resumes automatically if it exists");

    std::uint64_t n1_max = 0, prime_max = 0, q = 0, p_lo = 0, p_hi = 0;
    ScanArgs scan_args;

    auto* t = app.add_subcommand("table", "Residue table r(p) = n1 mod p for odd n1");
    t->add_option("n1_max", n1_max, "Largest odd n1 row")->required();
    t->add_option("prime_max", prime_max, "Largest residue-column prime")->required();

    auto* c = app.add_subcommand("count", "Partition profile of one even q");
    c->add_option("q", q, "Even number to profile")->required();

    auto* p = app.add_subcommand("partitions", "List partitions of one even q with flags");
    p->add_option("q", q, "Even number to enumerate")->required();

    auto* b = app.add_subcommand("bound", "Exact lower-bound breakdown for one even q");
    b->add_option("q", q, "Even number to bound")->required();

    auto* mi = app.add_subcommand("minima", "Bound minima records for primes in a range");
    mi->add_option("p_lo", p_lo, "First prime")->required();
    mi->add_option("p_hi", p_hi, "Last prime")->required();

    auto* s = app.add_subcommand("scan", "Sweep even q in [q_lo, q_hi], auditing the bound");
    s->add_option("q_lo", scan_args.q_lo, "First even q")->required();
    s->add_option("q_hi", scan_args.q_hi, "Last even q")->required();
    s->add_option("--chunk", scan_args.chunk, "Work unit width in q (even)")
        ->capture_default_str();
    s->add_option("--stop-after", scan_args.stop_after,
                  "Stop once the chunk containing this q is committed (checkpoint stays "
                  "valid)");
    s->add_option("--inject-violation", scan_args.inject,
                  "Test hook: inflate A at this q to exercise violation detection");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (t->parsed()) return cmd_table(g, n1_max, prime_max);
        if (c->parsed()) return cmd_count(g, q);
        if (p->parsed()) return cmd_partitions(g, q);
        if (b->parsed()) return cmd_bound(g, q);
        if (mi->parsed()) return cmd_minima(g, p_lo, p_hi);
        if (s->parsed()) return cmd_scan(g, scan_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
