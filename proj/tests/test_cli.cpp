#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "nlab/cli_commands.hpp"
#include "nlab/report_utils.hpp"

using namespace nlab;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir(const char* tag) {
        path = fs::temp_directory_path() / (std::string("nlab_cli_") + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string sub(const char* name) const { return (path / name).string(); }
};

std::string slurp(const std::string& p) { return read_text_file(p); }

} // namespace

TEST_CASE("sha256 known vectors") {
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("csv quoting follows RFC 4180") {
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CsvWriter w;
    w.row({"x", "1,2"});
    CHECK(w.text() == "x,\"1,2\"\r\n");
}

TEST_CASE("construct writes the sequence and a manifest with digests") {
    TempDir dir("construct");
    std::string cfg = R"({"family":"nevanlinna","n_gen":3,"m_extra":2})";
    CHECK(cli::run_construct(cfg, dir.sub("out")) == cli::EXIT_OK);
    std::string csv = slurp(dir.sub("out/sequence.csv"));
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 43); // header + 42 rows
    std::string svg = slurp(dir.sub("out/sequence.svg"));
    CHECK(svg.find("<svg") != std::string::npos);

    auto manifest = nlohmann::json::parse(slurp(dir.sub("out/run_manifest.json")));
    CHECK(manifest["command"] == "construct");
    CHECK(manifest["outputs"]["sequence.csv"] == sha256_hex(csv));
    CHECK(manifest["outputs"]["sequence.svg"] == sha256_hex(svg));

    // bit-identical rerun
    CHECK(cli::run_construct(cfg, dir.sub("out2")) == cli::EXIT_OK);
    CHECK(slurp(dir.sub("out2/run_manifest.json")) == slurp(dir.sub("out/run_manifest.json")));

    CHECK(cli::run_construct(R"({"family":"nevanlinna","n_gen":0})", dir.sub("bad")) ==
          cli::EXIT_CONFIG);
    CHECK(cli::run_construct("{not json", dir.sub("bad")) == cli::EXIT_CONFIG);
}

TEST_CASE("check handles empty and malformed input CSV") {
    TempDir dir("check");
    {
        std::ofstream(dir.sub("empty.csv")) << "";
        std::string cfg = R"({"input_csv":")" + dir.sub("empty.csv") + R"("})";
        CHECK(cli::run_check(cfg, dir.sub("out_empty")) == cli::EXIT_OK);
        auto rep = nlohmann::json::parse(slurp(dir.sub("out_empty/carleson.json")));
        CHECK(rep["norm"] == 0.0);
        CHECK(rep["points"] == 0);
    }
    {
        std::ofstream(dir.sub("bad.csv")) << "kind,n,k\nA,1\n";
        std::string cfg = R"({"input_csv":")" + dir.sub("bad.csv") + R"("})";
        CHECK(cli::run_check(cfg, dir.sub("out_bad")) == cli::EXIT_CONFIG);
    }
    {
        std::string cfg =
            R"({"family":"nevanlinna","n_gen":2,"m_extra":1,"max_depth":10,"thresholds":{"max_norm":0.001}})";
        CHECK(cli::run_check(cfg, dir.sub("out_thr")) == cli::EXIT_THRESHOLD);
    }
}

TEST_CASE("witness depth trace and single-depth warning") {
    TempDir dir("witness");
    std::string cfg = R"({"family":"nevanlinna","depths":[2,3],"m_extra":4})";
    CHECK(cli::run_witness(cfg, dir.sub("out")) == cli::EXIT_OK);
    std::string csv = slurp(dir.sub("out/witness_trace.csv"));
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    auto rep = nlohmann::json::parse(slurp(dir.sub("out/witness.json")));
    CHECK(rep["growth"]["detected"] == true);

    CHECK(cli::run_witness(R"({"family":"nevanlinna","depths":2,"m_extra":4})",
                           dir.sub("single")) == cli::EXIT_OK);
    auto single = nlohmann::json::parse(slurp(dir.sub("single/witness.json")));
    CHECK(single["growth"]["skipped_single_depth"] == true);

    CHECK(cli::run_witness(R"({"depths":[5,2]})", dir.sub("bad")) == cli::EXIT_CONFIG);
}

TEST_CASE("peaks command on a tiny family") {
    TempDir dir("peaks");
    std::string cfg = R"({"family":"nevanlinna","n_gen":1,"m_extra":0,"j_max":4})";
    CHECK(cli::run_peaks(cfg, dir.sub("out")) == cli::EXIT_OK);
    auto rep = nlohmann::json::parse(slurp(dir.sub("out/peaks.json")));
    CHECK(rep["summary"]["audit_ok"] == true);
    CHECK(rep["summary"]["all_zeros_exact"] == true);
    CHECK(rep["per_lambda"].size() == 2);
    std::string csv = slurp(dir.sub("out/gauges.csv"));
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 4);
}

TEST_CASE("figure emits standalone charts") {
    TempDir dir("figure");
    std::string cfg = R"({"charts":[{"type":"sequence","family":"smirnov","n_gen":3}]})";
    CHECK(cli::run_figure(cfg, dir.sub("out")) == cli::EXIT_OK);
    CHECK(slurp(dir.sub("out/figure_00_sequence.svg")).find("</svg>") != std::string::npos);
    CHECK(cli::run_figure(R"({"charts":[]})", dir.sub("bad")) == cli::EXIT_CONFIG);
    CHECK(cli::run_figure(R"({"charts":[{"type":"pie"}]})", dir.sub("bad2")) ==
          cli::EXIT_CONFIG);
}
