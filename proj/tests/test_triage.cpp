// SPDX-License-Identifier: Apache-2.0
#include "guiprobe/triage.hpp"
#include "support/funnel_fixture.hpp"

#include <catch_amalgamated.hpp>

using namespace guiprobe;

namespace {

IterationRecord iteration(int n, std::optional<Verdict> v, std::string action = "click(4)") {
    IterationRecord it;
    it.iteration = n;
    it.action = std::move(action);
    it.status = ActionStatus::Executed;
    it.page_before = "tool_description";
    it.page_after = "tool_description";
    it.verdict = std::move(v);
    return it;
}

RunRecord small_run(std::string id) {
    RunRecord r;
    r.run_id = std::move(id);
    r.iterations.push_back(iteration(1, Verdict::okay()));
    r.iterations.push_back(iteration(2, Verdict::problem("Control 1021 is cut off.")));
    r.iterations.push_back(iteration(3, std::nullopt));
    r.iterations.push_back(iteration(4, Verdict::problem("control 77 is CUT off")));
    return r;
}

} // namespace

TEST_CASE("positives are collected in run and iteration order") {
    const auto found = collect_positives({small_run("run-001"), small_run("run-000")});
    REQUIRE(found.size() == 4);
    CHECK(found[0].run_id == "run-000");
    CHECK(found[0].iteration == 2);
    CHECK(found[1].iteration == 4);
    CHECK(found[2].run_id == "run-001");
}

TEST_CASE("reasons normalize by case, digits, punctuation and spacing") {
    CHECK(normalize_reason("Control 1021 is cut off.") == "control # is cut off");
    CHECK(normalize_reason("control 77 is CUT   off") == "control # is cut off");
    CHECK(normalize_reason("  The 'Name'  field!") == "the name field");
    CHECK(normalize_reason("v1.2.3") == "v###");
    CHECK(normalize_reason("") == "");
}

TEST_CASE("consolidation groups by cause key and keeps first appearance order") {
    PositiveFinding a{"r", 1, "Control 5 is cut off.", "", "", ""};
    PositiveFinding b{"r", 2, "A title is missing", "", "", ""};
    PositiveFinding c{"r", 3, "control 9 is cut off", "", "", ""};
    PositiveFinding d{"r", 4, "Something else entirely", "", "", ""};
    const auto groups = consolidate({{a, ""}, {b, "titles"}, {c, ""}, {d, "titles"}});
    REQUIRE(groups.size() == 2);
    CHECK(groups[0].cause_key == "control # is cut off");
    CHECK(groups[0].members.size() == 2);
    CHECK(groups[0].representative_reason == "Control 5 is cut off.");
    CHECK(groups[1].cause_key == "titles");
    CHECK(groups[1].members.size() == 2);
}

TEST_CASE("label files parse, round-trip and reject malformed lines") {
    const auto file = parse_label_file("# header\n"
                                       "run-000 2 true_positive  cut off text \n"
                                       "\n"
                                       "run-000 4 false_positive # trailing comment\n"
                                       "run-001 2 unknown\n");
    REQUIRE(file.entries.size() == 3);
    CHECK(file.entries.at({"run-000", 2}).cause_key == "cut off text");
    CHECK(file.entries.at({"run-000", 4}).label == Label::FalsePositive);
    const auto again = parse_label_file(serialize_label_file(file));
    CHECK(serialize_label_file(again) == serialize_label_file(file));

    CHECK_THROWS_AS(parse_label_file("run-000 two true_positive\n"), ConfigError);
    CHECK_THROWS_AS(parse_label_file("run-000 0 true_positive\n"), ConfigError);
    CHECK_THROWS_AS(parse_label_file("run-000 2 maybe\n"), ConfigError);
    CHECK_THROWS_AS(parse_label_file("run-000 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_label_file("run-000 2 false_positive because\n"), ConfigError);
    CHECK_THROWS_WITH(parse_label_file("a 1 unknown\na 1 unknown\n"),
                      Catch::Matchers::ContainsSubstring("line 2: duplicate"));
}

TEST_CASE("label template lists every finding and keeps existing labels") {
    const auto findings = collect_positives({small_run("run-000")});
    LabelFile existing;
    existing.entries[{"run-000", 4}] = {Label::TruePositive, "cut"};
    const auto text = label_template(findings, existing);
    const auto parsed = parse_label_file(text);
    CHECK(parsed.entries.size() == 2);
    CHECK(parsed.entries.at({"run-000", 2}).label == Label::Unknown);
    CHECK(parsed.entries.at({"run-000", 4}).cause_key == "cut");
}

TEST_CASE("summaries refuse unlabeled and dangling labels") {
    const std::vector<RunRecord> runs = {small_run("run-000")};
    try {
        summarize(runs, {});
        FAIL("expected unlabeled findings");
    } catch (const UnlabeledFindings& e) {
        CHECK(e.keys() == std::vector<FindingKey>{{"run-000", 2}, {"run-000", 4}});
    }
    const auto lenient = summarize(runs, {}, true);
    CHECK(lenient.positives == 2);
    CHECK(lenient.true_positives == 0);

    LabelFile dangling;
    dangling.entries[{"run-000", 3}] = {Label::FalsePositive, {}};
    CHECK_THROWS_AS(summarize(runs, dangling, true), IntegrityError);
}

TEST_CASE("the funnel counts each stage") {
    LabelFile labels;
    labels.entries[{"run-000", 2}] = {Label::TruePositive, {}};
    labels.entries[{"run-000", 4}] = {Label::TruePositive, {}};
    labels.entries[{"run-001", 2}] = {Label::FalsePositive, {}};
    labels.entries[{"run-001", 4}] = {Label::TruePositive, "other"};
    const auto r = summarize({small_run("run-000"), small_run("run-001")}, labels);
    CHECK(r.runs == 2);
    CHECK(r.actions == 8);
    CHECK(r.positives == 4);
    CHECK(r.true_positives == 3);
    CHECK(r.unique_issues == 2);
    CHECK(r.per_run[1].true_positives == 1);
    CHECK(r.controls_acted_on == 1);
    CHECK(r.pages_visited == std::vector<std::string>{"tool_description"});

    const auto j = to_json(r);
    CHECK(j["unique_issues"] == 2);
    CHECK(j["issues"][0]["members"].size() == 2);
    const auto text = report_text(r);
    CHECK(text.find("Unique issues               2") != std::string::npos);
}

TEST_CASE("funnel fixture yields the expected stage counts") {
    const auto fx = testing::funnel_fixture();
    const auto r = summarize(fx.records, parse_label_file(fx.labels));
    CHECK(r.runs == 9);
    CHECK(r.actions == 752);
    CHECK(r.positives == 72);
    CHECK(r.true_positives == 7);
    CHECK(r.unique_issues == 5);
}
