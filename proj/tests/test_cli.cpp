// SPDX-License-Identifier: Apache-2.0
#include "guiprobe/cli.hpp"

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace guiprobe;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result cli(std::vector<std::string> args) {
    args.insert(args.begin(), "guiprobe");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("guiprobe-cli-" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::trunc) << text; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST_CASE("usage errors exit with 1") {
    CHECK(cli({}).code == exit_code::kUsage);
    CHECK(cli({"frobnicate"}).code == exit_code::kUsage);
    CHECK(cli({"run", "--runs", "0"}).code == exit_code::kUsage);
    CHECK(cli({"run", "--controller", "psychic"}).code == exit_code::kUsage);
    CHECK(cli({"--help"}).code == exit_code::kOk);
}

TEST_CASE("live backend without a credential names the variable") {
    const auto dir = scratch("live");
    ::unsetenv("GUIPROBE_API_KEY");
    const auto r = cli({"run", "--backend", "live", "--out", dir.string()});
    CHECK(r.code == exit_code::kUsage);
    CHECK_THAT(r.err, Catch::Matchers::ContainsSubstring("GUIPROBE_API_KEY"));
    CHECK(fs::is_empty(dir));
}

TEST_CASE("run, label, report and replay work end to end") {
    const auto dir = scratch("e2e");
    const auto runs = dir / "runs";
    const auto config = dir / "config.json";
    write(config, R"J({
        "max_iterations": 200,
        "controller": {"kind": "scripted", "script": "full_traversal"},
        "faults": [
            {"kind": "missing_title", "page": "cpacs_properties"},
            {"kind": "truncated_text", "page": "review", "field": "Description"}
        ]
    })J");

    const auto ran = cli({"run", "--config", config.string(), "--runs", "2", "--out", runs.string()});
    REQUIRE(ran.code == exit_code::kOk);
    CHECK_THAT(ran.out, Catch::Matchers::ContainsSubstring("run-001: "));
    CHECK(fs::exists(runs / "run-000" / "header.json"));

    const auto labels = dir / "labels.txt";
    const auto report_args = std::vector<std::string>{"report", "--runs", runs.string()};
    const auto unlabeled = cli(report_args);
    CHECK(unlabeled.code == exit_code::kUnlabeled);
    CHECK_THAT(unlabeled.err, Catch::Matchers::ContainsSubstring("unlabeled: run-000"));

    REQUIRE(cli({"label", "--runs", runs.string(), "--labels", labels.string()}).code == exit_code::kOk);
    auto text = slurp(labels);
    CHECK(cli({"report", "--runs", runs.string(), "--labels", labels.string()}).code == exit_code::kUnlabeled);
    for (std::string::size_type p; (p = text.find(" unknown")) != std::string::npos;)
        text.replace(p, 8, " true_positive");
    write(labels, text);

    const auto report = cli({"report", "--runs", runs.string(), "--labels", labels.string(), "--format", "json"});
    REQUIRE(report.code == exit_code::kOk);
    const auto j = nlohmann::json::parse(report.out);
    CHECK(j["runs"] == 2);
    CHECK(j["positives"] == 4);
    CHECK(j["true_positives"] == 4);
    CHECK(j["unique_issues"] == 2);

    const auto lenient = cli({"report", "--runs", runs.string(), "--assume-unlabeled-false"});
    CHECK(lenient.code == exit_code::kOk);
    CHECK_THAT(lenient.out, Catch::Matchers::ContainsSubstring("True positives              0"));

    const auto replayed = cli({"replay", "--record", (runs / "run-000").string()});
    CHECK(replayed.code == exit_code::kOk);
    CHECK_THAT(replayed.out, Catch::Matchers::ContainsSubstring("replayed identically"));

    const auto no_faults = dir / "clean.json";
    write(no_faults, R"J({"faults": []})J");
    const auto diverged = cli({"replay", "--record", (runs / "run-000").string(), "--config", no_faults.string()});
    CHECK(diverged.code == exit_code::kDivergence);
    CHECK_THAT(diverged.err, Catch::Matchers::ContainsSubstring("replay diverged at iteration"));

    // A truncated iteration log is an integrity error.
    const auto log = runs / "run-001" / "iterations.jsonl";
    const auto content = slurp(log);
    write(log, content.substr(0, content.size() - 10));
    const auto truncated = cli({"replay", "--record", (runs / "run-001").string()});
    CHECK(truncated.code == exit_code::kUsage);
    CHECK_THAT(truncated.err, Catch::Matchers::ContainsSubstring("partial line"));
    CHECK(cli(report_args).code == exit_code::kUsage);
}

TEST_CASE("config files are strict") {
    const auto dir = scratch("config");
    const auto bad_key = dir / "bad.json";
    write(bad_key, R"J({"max_iteration": 3})J");
    const auto r = cli({"run", "--config", bad_key.string(), "--out", (dir / "runs").string()});
    CHECK(r.code == exit_code::kUsage);
    CHECK_THAT(r.err, Catch::Matchers::ContainsSubstring("unknown key 'max_iteration'"));

    const auto bad_json = dir / "broken.json";
    write(bad_json, "{\"seed\": ");
    CHECK(cli({"run", "--config", bad_json.string()}).code == exit_code::kUsage);

    const auto bad_fault = dir / "fault.json";
    write(bad_fault, R"J({"faults": [{"kind": "missing_title", "page": "nowhere"}]})J");
    const auto f = cli({"run", "--config", bad_fault.string(), "--out", (dir / "runs").string()});
    CHECK(f.code == exit_code::kUsage);
    CHECK_THAT(f.err, Catch::Matchers::ContainsSubstring("unknown fault target"));

    const auto c = run_config_from_json(nlohmann::json::parse(R"J({
        "seed": 9, "controller": {"kind": "random"}, "evaluator": {"kind": "oracle"},
        "remote": {"credential_env": "MY_KEY", "max_retries": 1},
        "docs": [{"page": "review", "markdown": "# Review"}]})J"));
    CHECK(c.seed == 9);
    CHECK(c.controller == ControllerKind::Random);
    CHECK(c.remote->credential_env == "MY_KEY");
    REQUIRE(c.docs.entries.size() == 1);
    CHECK(c.docs.entries[0].page_key == "review");
}

TEST_CASE("the example config in the repository loads") {
    const auto c = load_run_config(fs::path(GUIPROBE_TEST_DATA) / ".." / "configs" / "five_faults.json");
    CHECK(c.faults.size() == 5);
    CHECK_FALSE(c.controller_script.empty());
}

TEST_CASE("demo reports the seeded fault") {
    const auto r = cli({"demo"});
    CHECK(r.code == exit_code::kOk);
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("Unique issues               1"));
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("Invalid path to working directory"));
}
