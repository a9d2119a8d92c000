// End-to-end tests against the goldbach-audit binary: output formats,
// exit-status contract, stream discipline, and byte compatibility
// between the CLI scan and the library sink.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>
#include <unistd.h>

#include "goldbach/prime_table.hpp"
#include "goldbach/scan.hpp"

#ifndef GOLDBACH_CLI_PATH
#error "GOLDBACH_CLI_PATH must be defined by the build"
#endif

namespace {

struct CmdResult {
    int status = -1;
    std::string out;
};

CmdResult run_cli(const std::string& args) {
    const std::string cmd = std::string(GOLDBACH_CLI_PATH) + " " + args;
    CmdResult r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf;
    std::size_t got = 0;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0)
        r.out.append(buf.data(), got);
    const int rc = ::pclose(pipe);
    r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return r;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("goldbach-cli-test-" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> lines;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

} // namespace

TEST_CASE("table plain output matches mod arithmetic") {
    const auto r = run_cli("table 31 29 2>/dev/null");
    REQUIRE(r.status == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 2 + 15); // echo + header + 15 rows
    CHECK(lines[0] == "# goldbach-audit table n1_max=31 prime_max=29 format=plain");
    CHECK(lines[1] == "# n1 r(3) r(5) r(7) r(11) r(13) r(17) r(19) r(23) r(29)");
    CHECK(lines[2] == "3: 0 3 3 3 3 3 3 3 3");
    CHECK(lines[12] == "23: 2 3 2 1 10 6 4 0 23");
    CHECK(lines[16] == "31: 1 1 3 9 5 14 12 8 2");
}

TEST_CASE("table 3 3 emits the single row") {
    const auto r = run_cli("table 3 3 2>/dev/null");
    REQUIRE(r.status == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 3);
    CHECK(lines[2] == "3: 0");
}

TEST_CASE("table 7 5 rows") {
    const auto r = run_cli("table 7 5 --format csv 2>/dev/null");
    REQUIRE(r.status == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 5);
    CHECK(lines[1] == "n1,r(3),r(5)");
    CHECK(lines[2] == "3,0,3");
    CHECK(lines[3] == "5,2,0");
    CHECK(lines[4] == "7,1,2");
}

TEST_CASE("usage errors exit 2") {
    CHECK(run_cli("table 4 29 2>/dev/null").status == 2);   // even n1_max
    CHECK(run_cli("bound 7 2>/dev/null").status == 2);      // odd q
    CHECK(run_cli("bound 2>/dev/null").status == 2);        // missing arg
    CHECK(run_cli("nonsense 2>/dev/null").status == 2);     // unknown subcommand
    CHECK(run_cli("scan 9 100 2>/dev/null").status == 2);   // odd q_lo
    CHECK(run_cli("2>/dev/null").status == 2);              // no subcommand
}

TEST_CASE("count and bound plain output") {
    const auto c = run_cli("count 20 2>/dev/null");
    REQUIRE(c.status == 0);
    CHECK(lines_of(c.out)[1] ==
          "q=20 n=8 goldbach_ordered=4 goldbach_unordered=2 admissible_count=2 "
          "predicate_cutoff=3 special=0");

    const auto b = run_cli("bound 100 2>/dev/null");
    REQUIRE(b.status == 0);
    CHECK(lines_of(b.out)[1] == "q=100 cutoff=3,5,7 shrink=1/7 n=48 sub=5 A=13/7");

    const auto b20 = run_cli("bound 20 2>/dev/null");
    REQUIRE(b20.status == 0);
    const auto lines = lines_of(b20.out);
    CHECK(lines[1] == "q=20 cutoff=3 shrink=1/3 n=8 sub=1 A=5/3");
    CHECK(lines[2] == "eq3=2");
    CHECK(lines[3] == "eq4=-1 (out of stated scope: q < 28)");
}

TEST_CASE("partitions output lists flags") {
    const auto r = run_cli("partitions 12 --format csv 2>/dev/null");
    REQUIRE(r.status == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 6); // echo, header, 4 odd rows
    CHECK(lines[1] == "n1,n2,admissible,prime_pair");
    CHECK(lines[2] == "3,9,0,0");
    CHECK(lines[3] == "5,7,1,1");
    CHECK(lines[4] == "7,5,1,1");
    CHECK(lines[5] == "9,3,0,0");
}

TEST_CASE("minima output marks the chain") {
    const auto r = run_cli("minima 37 37 2>/dev/null");
    REQUIRE(r.status == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[1].find("p_m=37") == 0);
    CHECK(lines[1].find("routes_equal=1") != std::string::npos);
    CHECK(lines[1].find("exceeds_lower=1") != std::string::npos);
    CHECK(lines[1].find("lower=73/37") != std::string::npos);
}

TEST_CASE("jsonl output is valid json per line") {
    const auto r = run_cli("scan 4 40 --format jsonl 2>/dev/null");
    REQUIRE(r.status == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 1 + 19);
    const auto config = nlohmann::json::parse(lines[0]);
    CHECK(config.contains("_config"));
    CHECK(config["_config"].get<std::string>().find("goldbach-audit scan q_lo=4 q_hi=40") == 0);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto row = nlohmann::json::parse(lines[i]);
        REQUIRE(row.contains("q"));
        REQUIRE(row.contains("A_num"));
        REQUIRE(row["A_den"].is_string());
        REQUIRE(row["conjecture_ok"].is_boolean());
    }
    const auto q100 = run_cli("count 100 --format jsonl 2>/dev/null");
    const auto row = nlohmann::json::parse(lines_of(q100.out)[1]);
    CHECK(row["goldbach_ordered"] == 12);
    CHECK(row["admissible_count"] == 10);
}

TEST_CASE("scan exit statuses: 0 clean, 1 with violations") {
    TempDir tmp;
    const auto ok = run_cli("scan 4 1000 --output /dev/null 2>/dev/null");
    CHECK(ok.status == 0);

    const auto err_path = (tmp.path / "stderr.txt").string();
    const auto bad = run_cli("scan 4 1000 --inject-violation 100 --output /dev/null 2>" +
                             err_path);
    CHECK(bad.status == 1);
    const std::string diag = read_file(err_path);
    CHECK(diag.find("violations: 1") != std::string::npos);
    CHECK(diag.find("violating q: 100") != std::string::npos);
}

TEST_CASE("scan data goes to stdout, diagnostics to stderr") {
    TempDir tmp;
    const auto err_path = (tmp.path / "stderr.txt").string();
    const auto r = run_cli("scan 4 60 --format csv 2>" + err_path);
    REQUIRE(r.status == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 2 + 29);
    for (const auto& line : lines) CHECK(line.find("summary") == std::string::npos);
    const std::string diag = read_file(err_path);
    CHECK(diag.find("scan summary:") != std::string::npos);
    CHECK(diag.find("violations: 0") != std::string::npos);
}

TEST_CASE("CLI csv scan output is byte-identical to the library sink") {
    TempDir tmp;
    const auto out_path = tmp.path / "cli.csv";
    const auto r = run_cli("scan 4 5000 --format csv --workers 3 --output " +
                           out_path.string() + " 2>/dev/null");
    REQUIRE(r.status == 0);

    goldbach::ScanConfig cfg;
    cfg.q_lo = 4;
    cfg.q_hi = 5000;
    std::ostringstream lib;
    goldbach::CsvScanSink sink(lib);
    sink.write_preamble(goldbach::scan_config_echo(cfg, "csv"));
    const auto table = goldbach::PrimeTable::build(1001);
    goldbach::scan_range(cfg, table, sink);

    CHECK(read_file(out_path) == lib.str());
}

TEST_CASE("CLI resume produces the same bytes as a one-shot run") {
    TempDir tmp;
    const auto one = tmp.path / "one.csv";
    const auto two = tmp.path / "two.csv";
    const auto ck = tmp.path / "ck";

    REQUIRE(run_cli("scan 4 20000 --chunk 1024 --format csv --output " + one.string() +
                    " 2>/dev/null")
                .status == 0);
    REQUIRE(run_cli("scan 4 20000 --chunk 1024 --format csv --checkpoint " + ck.string() +
                    " --stop-after 9000 --output " + two.string() + " 2>/dev/null")
                .status == 0);
    // resumes automatically from the checkpoint
    const auto err_path = (tmp.path / "stderr.txt").string();
    REQUIRE(run_cli("scan 4 20000 --chunk 1024 --format csv --checkpoint " + ck.string() +
                    " --output " + two.string() + " 2>" + err_path)
                .status == 0);
    CHECK(read_file(err_path).find("resuming from q=") != std::string::npos);
    CHECK(read_file(one) == read_file(two));

    // a third invocation is a no-op on a completed checkpoint
    REQUIRE(run_cli("scan 4 20000 --chunk 1024 --format csv --checkpoint " + ck.string() +
                    " --output " + two.string() + " 2>/dev/null")
                .status == 0);
    CHECK(read_file(one) == read_file(two));

    // mismatched parameters refuse to resume
    CHECK(run_cli("scan 4 30000 --chunk 1024 --format csv --checkpoint " + ck.string() +
                  " --output " + two.string() + " 2>/dev/null")
              .status == 2);
}

TEST_CASE("resume refuses inconsistent output files") {
    TempDir tmp;
    const auto out = tmp.path / "out.csv";
    const auto ck = tmp.path / "ck";
    REQUIRE(run_cli("scan 4 20000 --chunk 1024 --format csv --checkpoint " + ck.string() +
                    " --stop-after 5000 --output " + out.string() + " 2>/dev/null")
                .status == 0);

    // torn final line: shorter than the checkpoint implies
    std::filesystem::resize_file(out, std::filesystem::file_size(out) - 40);
    CHECK(run_cli("scan 4 20000 --chunk 1024 --format csv --checkpoint " + ck.string() +
                  " --output " + out.string() + " 2>/dev/null")
              .status == 2);

    // missing output entirely
    std::filesystem::remove(out);
    CHECK(run_cli("scan 4 20000 --chunk 1024 --format csv --checkpoint " + ck.string() +
                  " --output " + out.string() + " 2>/dev/null")
              .status == 2);
}
