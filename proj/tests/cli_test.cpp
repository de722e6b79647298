#include "patgeo/cli.hpp"

#include "helpers.hpp"

#include <catch2/catch.hpp>

#include <sstream>
#include <string>
#include <vector>

using namespace patgeo;
using testutil::fresh_dir;

namespace {

int run_cli(const std::vector<std::string>& args, std::string* stdout_text = nullptr) {
    std::ostringstream out, err;
    int status = cli::run(args, out, err);
    if (stdout_text) *stdout_text = out.str();
    return status;
}

std::vector<std::string> corpus_flags(const std::filesystem::path& dir) {
    return {"--corpus", (dir / "corpus.jsonl").string(),
            "--symptom-vocab", (dir / "symptoms.txt").string(),
            "--herb-vocab", (dir / "herbs.txt").string(),
            "--category-map", (dir / "categories.csv").string()};
}

std::filesystem::path synth_corpus(const std::string& name) {
    auto dir = fresh_dir(name);
    std::vector<std::string> args{"synth", "--out", dir.string(), "--n", "80", "--symptoms",
                                  "20", "--groups", "10", "--herbs", "12", "--beta-ext-int",
                                  "0.7", "--seed", "13"};
    REQUIRE(run_cli(args) == 0);
    return dir;
}

void append(std::vector<std::string>& args, const std::vector<std::string>& extra) {
    args.insert(args.end(), extra.begin(), extra.end());
}

} // namespace

TEST_CASE("validate prints a summary for a well-formed corpus") {
    auto dir = synth_corpus("cli_validate");
    std::vector<std::string> args{"validate"};
    append(args, corpus_flags(dir));
    std::string out;
    REQUIRE(run_cli(args, &out) == 0);
    CHECK(out.find("provisions=80") != std::string::npos);
    CHECK(out.find("symptoms=20") != std::string::npos);
    CHECK(out.find("grouped=10") != std::string::npos);
    CHECK(out.find("herbs=12") != std::string::npos);
}

TEST_CASE("unknown subcommands and missing flags fail") {
    CHECK(run_cli({"frobnicate"}) != 0);
    CHECK(run_cli({"validate"}) != 0); // required corpus flags absent
    CHECK(run_cli({}) != 0);
}

TEST_CASE("module errors surface as nonzero exits with diagnostics") {
    auto dir = fresh_dir("cli_bad");
    write_file(dir / "symptoms.txt", "a\n");
    write_file(dir / "herbs.txt", "h\n");
    write_file(dir / "categories.csv", "token,category\n");
    write_file(dir / "corpus.jsonl",
               R"({"id": "x", "symptoms": [], "herbs": [], "scores": {"ext_int": 9, "cold_heat": 0, "def_exc": 0}})"
               "\n");
    std::vector<std::string> args{"validate"};
    append(args, corpus_flags(dir));
    std::ostringstream out, err;
    CHECK(cli::run(args, out, err) == 1);
    CHECK(err.str().find("ScoreOutOfRange") != std::string::npos);
}

TEST_CASE("ccgp runs are byte-identical across invocations") {
    auto dir = synth_corpus("cli_ccgp_det");
    auto out_a = fresh_dir("cli_ccgp_a");
    auto out_b = fresh_dir("cli_ccgp_b");

    for (const auto& out_dir : {out_a, out_b}) {
        std::vector<std::string> args{"ccgp", "--space", "herb", "--iterations", "40",
                                      "--sample-size", "6", "--seed", "7", "--out", out_dir.string()};
        append(args, corpus_flags(dir));
        REQUIRE(run_cli(args) == 0);
    }
    CHECK(read_file(out_a / "ccgp_herb.csv") == read_file(out_b / "ccgp_herb.csv"));
}

TEST_CASE("tree subcommand writes the requested sweep") {
    auto dir = synth_corpus("cli_tree");
    auto out = fresh_dir("cli_tree_out");
    std::vector<std::string> args{"tree", "--depths", "2,4", "--with-patterns", "--out", out.string()};
    append(args, corpus_flags(dir));
    REQUIRE(run_cli(args) == 0);

    auto lines = read_lines(out / "tree_concat.csv");
    REQUIRE(lines.size() == 3); // header + 2 depths
    CHECK(lines[0] == "depth,feat1,imp1,feat2,imp2,feat3,imp3,n_features,r2");
    CHECK(lines[1].rfind("2,", 0) == 0);
}

TEST_CASE("json format emits parseable arrays") {
    auto dir = synth_corpus("cli_json");
    auto out = fresh_dir("cli_json_out");
    std::vector<std::string> args{"variance", "--format", "json", "--out", out.string()};
    append(args, corpus_flags(dir));
    REQUIRE(run_cli(args) == 0);

    auto parsed = nlohmann::json::parse(read_file(out / "variance.json"));
    REQUIRE(parsed.is_array());
    REQUIRE(parsed.size() == 3);
    CHECK(parsed[0]["axis"] == "Ext-Int");
    CHECK(parsed[0].contains("variance"));
}

TEST_CASE("report emits every table, the svgs, and a manifest") {
    auto dir = synth_corpus("cli_report");
    auto out = fresh_dir("cli_report_out");
    std::vector<std::string> args{"report", "--iterations", "15", "--permutations", "50",
                                  "--depths", "2,3", "--seed", "5", "--out", out.string()};
    append(args, corpus_flags(dir));
    REQUIRE(run_cli(args) == 0);

    const std::vector<std::string> expected{
        "variance.csv",          "abstraction_symptom.csv", "abstraction_herb.csv",
        "ccgp_symptom.csv",      "ccgp_herb.csv",           "tree_symptom.csv",
        "tree_concat.csv",       "embedding.csv",           "manifold_extint_coldheat.svg",
        "manifold_extint_defexc.svg", "manifold_coldheat_defexc.svg"};
    for (const auto& name : expected) CHECK(std::filesystem::exists(out / name));

    // the manifest lists every emitted file with its digest
    auto manifest_lines = read_lines(out / "manifest.csv");
    REQUIRE(manifest_lines.size() == expected.size() + 1);
    CHECK(manifest_lines[0] == "file,bytes,fnv1a64");
    for (const auto& name : expected) {
        bool found = false;
        for (const auto& line : manifest_lines)
            if (line.rfind(name + ",", 0) == 0) {
                found = true;
                auto fields = csv_split(line);
                REQUIRE(fields.size() == 3);
                CHECK(fields[2] == fnv1a64_hex(read_file(out / name)));
            }
        CHECK(found);
    }

    // row counts mirror the module contracts: 3/3/3/12/12/|depths|/|depths|
    CHECK(read_lines(out / "variance.csv").size() == 4);
    CHECK(read_lines(out / "abstraction_symptom.csv").size() == 4);
    CHECK(read_lines(out / "abstraction_herb.csv").size() == 4);
    CHECK(read_lines(out / "ccgp_symptom.csv").size() == 13);
    CHECK(read_lines(out / "ccgp_herb.csv").size() == 13);
    CHECK(read_lines(out / "tree_symptom.csv").size() == 3);
    CHECK(read_lines(out / "tree_concat.csv").size() == 3);
}
