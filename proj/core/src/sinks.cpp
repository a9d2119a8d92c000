#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "goldbach/scan.hpp"

namespace goldbach {

namespace {

void checked_write(std::ostream& out, std::string_view bytes) {
    out.write(bytes.data(), std::streamsize(bytes.size()));
    if (!out) throw std::runtime_error("record sink: write failure");
}

const char* bool01(bool b) { return b ? "1" : "0"; }
const char* booljson(bool b) { return b ? "true" : "false"; }

} // namespace

std::string CsvScanSink::header() {
    return "q,n,p_j,A_num,A_den,goldbach_ordered,admissible_count,"
           "conjecture_ok,soundness_ok,special";
}

void CsvScanSink::write_preamble(const std::string& config_echo) {
    checked_write(out_, config_echo);
    checked_write(out_, "\n");
    checked_write(out_, header());
    checked_write(out_, "\n");
}

std::string CsvScanSink::render(const ScanRecord& r) const {
    std::string line;
    line.reserve(64 + r.A_num.str().size());
    line += std::to_string(r.q);
    line += ',';
    line += std::to_string(r.n);
    line += ',';
    line += std::to_string(r.p_j);
    line += ',';
    line += r.A_num.str();
    line += ',';
    line += r.A_den.str();
    line += ',';
    line += std::to_string(r.goldbach_ordered);
    line += ',';
    line += std::to_string(r.admissible_count);
    line += ',';
    line += bool01(r.conjecture_ok);
    line += ',';
    line += bool01(r.soundness_ok);
    line += ',';
    line += bool01(r.special);
    line += '\n';
    return line;
}

void CsvScanSink::write_rendered(std::string_view bytes) { checked_write(out_, bytes); }
void CsvScanSink::flush() { out_.flush(); }

void JsonlScanSink::write_preamble(const std::string& config_echo) {
    std::string body = config_echo;
    if (body.rfind("# ", 0) == 0) body.erase(0, 2);
    std::string line = "{\"_config\":\"";
    line += body;
    line += "\"}\n";
    checked_write(out_, line);
}

std::string JsonlScanSink::render(const ScanRecord& r) const {
    std::string line;
    line.reserve(160 + r.A_num.str().size());
    line += "{\"q\":";
    line += std::to_string(r.q);
    line += ",\"n\":";
    line += std::to_string(r.n);
    line += ",\"p_j\":";
    line += std::to_string(r.p_j);
    line += ",\"A_num\":\"";
    line += r.A_num.str();
    line += "\",\"A_den\":\"";
    line += r.A_den.str();
    line += "\",\"goldbach_ordered\":";
    line += std::to_string(r.goldbach_ordered);
    line += ",\"admissible_count\":";
    line += std::to_string(r.admissible_count);
    line += ",\"conjecture_ok\":";
    line += booljson(r.conjecture_ok);
    line += ",\"soundness_ok\":";
    line += booljson(r.soundness_ok);
    line += ",\"special\":";
    line += booljson(r.special);
    line += "}\n";
    return line;
}

void JsonlScanSink::write_rendered(std::string_view bytes) { checked_write(out_, bytes); }
void JsonlScanSink::flush() { out_.flush(); }

void PlainScanSink::write_preamble(const std::string& config_echo) {
    checked_write(out_, config_echo);
    checked_write(out_, "\n");
}

std::string PlainScanSink::render(const ScanRecord& r) const {
    std::string line = "q=" + std::to_string(r.q);
    line += " n=" + std::to_string(r.n);
    line += " p_j=" + std::to_string(r.p_j);
    line += " A=" + to_string(Rational(r.A_num, r.A_den));
    line += " goldbach_ordered=" + std::to_string(r.goldbach_ordered);
    line += " admissible_count=" + std::to_string(r.admissible_count);
    line += " conjecture_ok=" + std::string(bool01(r.conjecture_ok));
    line += " soundness_ok=" + std::string(bool01(r.soundness_ok));
    line += " special=" + std::string(bool01(r.special));
    line += '\n';
    return line;
}

void PlainScanSink::write_rendered(std::string_view bytes) { checked_write(out_, bytes); }
void PlainScanSink::flush() { out_.flush(); }

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& ck) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("checkpoint: cannot open " + tmp.string());
        out << kCheckpointMagic << ' ' << ck.q_lo << ' ' << ck.q_hi << ' ' << ck.chunk << '\n'
            << ck.last_q << '\n';
        out.flush();
        if (!out) throw std::runtime_error("checkpoint: write failure on " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("checkpoint: cannot open " + path.string());
    std::string line1, line2;
    if (!std::getline(in, line1) || !std::getline(in, line2))
        throw std::runtime_error("checkpoint: truncated file " + path.string());

    std::istringstream h(line1);
    std::string word1, word2;
    Checkpoint ck;
    if (!(h >> word1 >> word2 >> ck.q_lo >> ck.q_hi >> ck.chunk) ||
        word1 + " " + word2 != kCheckpointMagic)
        throw std::runtime_error("checkpoint: malformed header in " + path.string());
    std::string extra;
    if (h >> extra) throw std::runtime_error("checkpoint: trailing junk in " + path.string());

    std::istringstream b(line2);
    if (!(b >> ck.last_q))
        throw std::runtime_error("checkpoint: malformed progress line in " + path.string());

    if (ck.q_lo < 4 || ck.q_lo % 2 != 0 || ck.q_hi % 2 != 0 || ck.chunk < 2 ||
        ck.chunk % 2 != 0 || ck.q_lo > ck.q_hi || ck.last_q < ck.q_lo - 2 ||
        ck.last_q > ck.q_hi || ck.last_q % 2 != 0)
        throw std::runtime_error("checkpoint: inconsistent values in " + path.string());
    // last_q must sit on a chunk boundary (or at q_hi for a finished scan).
    if (ck.last_q != ck.q_hi && (ck.last_q + 2 - ck.q_lo) % ck.chunk != 0)
        throw std::runtime_error("checkpoint: progress not on a chunk boundary in " +
                                 path.string());
    return ck;
}

ResumePlan plan_resume(const std::filesystem::path& checkpoint_path, const ScanConfig& cfg) {
    const Checkpoint ck = read_checkpoint(checkpoint_path);
    if (ck.q_lo != cfg.q_lo || ck.q_hi != cfg.q_hi || ck.chunk != cfg.chunk)
        throw std::runtime_error(
            "resume: checkpoint parameters do not match the requested scan (checkpoint " +
            std::to_string(ck.q_lo) + ".." + std::to_string(ck.q_hi) + " chunk " +
            std::to_string(ck.chunk) + ", requested " + std::to_string(cfg.q_lo) + ".." +
            std::to_string(cfg.q_hi) + " chunk " + std::to_string(cfg.chunk) + ")");

    ResumePlan plan;
    if (ck.last_q >= ck.q_hi) {
        plan.complete = true;
        plan.next_q = ck.q_hi + 2;
        plan.records_done = (ck.q_hi - ck.q_lo) / 2 + 1;
    } else {
        plan.next_q = ck.last_q + 2;
        plan.records_done = ck.last_q >= ck.q_lo ? (ck.last_q - ck.q_lo) / 2 + 1 : 0;
    }
    return plan;
}

std::string scan_config_echo(const ScanConfig& cfg, std::string_view format_name) {
    std::string s = "# goldbach-audit scan q_lo=" + std::to_string(cfg.q_lo);
    s += " q_hi=" + std::to_string(cfg.q_hi);
    s += " chunk=" + std::to_string(cfg.chunk);
    s += " seed=" + std::to_string(cfg.seed);
    s += " format=";
    s += format_name;
    return s;
}

} // namespace goldbach
