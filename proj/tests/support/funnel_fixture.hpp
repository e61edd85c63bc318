// SPDX-License-Identifier: Apache-2.0
#pragma once

// Synthetic run records with fixed campaign totals:
// 9 runs, 752 actions, 72 problem verdicts, 7 confirmed in 5 causes.

#include "guiprobe/harness.hpp"

#include <string>
#include <vector>

namespace guiprobe::testing {

struct FunnelFixture {
    std::vector<RunRecord> records;
    std::string labels;
};

inline FunnelFixture funnel_fixture() {
    constexpr int kRuns = 9;
    const int problem_iterations[] = {5, 10, 20, 30, 40, 50, 60, 70};
    FunnelFixture fx;
    for (int r = 0; r < kRuns; ++r) {
        RunRecord rec;
        rec.run_id = run_id_for(static_cast<std::size_t>(r));
        rec.config = {{"backend", "sim"}, {"seed", r}};
        rec.stop_reason = "max_iterations";
        const int n = r == kRuns - 1 ? 80 : 84;
        for (int i = 1; i <= n; ++i) {
            IterationRecord it;
            it.iteration = i;
            it.page_before = it.page_after = "launch_settings";
            it.action = "click(" + std::to_string(1000 + i) + ")";
            it.explanation = "fixture action";
            it.status = ActionStatus::Executed;
            it.before_digest = it.after_digest = "d" + std::to_string(i);
            it.verdict = Verdict::okay();
            rec.iterations.push_back(it);
        }
        for (int i : problem_iterations)
            rec.iterations[static_cast<std::size_t>(i - 1)].verdict =
                Verdict::problem("The Next button of control " + std::to_string(r * 100 + i) + " looks disabled.");
        fx.records.push_back(std::move(rec));
    }

    // Seven confirmed findings. Two pairs share a cause: one pair through
    // reasons that differ only in a control id, one through an explicit key.
    auto set = [&](int run, int iteration, const std::string& reason) {
        fx.records[static_cast<std::size_t>(run)].iterations[static_cast<std::size_t>(iteration - 1)].verdict =
            Verdict::problem(reason);
    };
    set(0, 10, "The Text of the Description in control 2001 is not fully visible.");
    set(2, 20, "The text of the description in control 5041 is not fully visible!");
    set(3, 5, "The error message 'Invalid path to working directory' is shown for an empty field.");
    set(5, 30, "Working directory error appears although nothing was entered.");
    set(1, 40, "The page is shown without a title.");
    set(6, 50, "The check box is not aligned with its label.");
    set(7, 60, "The error message about the name is still shown after correcting it.");

    fx.labels = "# run_id iteration label [cause_key]\n";
    for (const auto& rec : fx.records) {
        for (const auto& it : rec.iterations) {
            if (!it.verdict || !it.verdict->is_problem()) continue;
            std::string label = "false_positive";
            const auto key = std::pair{rec.run_id, it.iteration};
            if (key == std::pair{std::string("run-000"), 10} || key == std::pair{std::string("run-002"), 20} ||
                key == std::pair{std::string("run-001"), 40} || key == std::pair{std::string("run-006"), 50} ||
                key == std::pair{std::string("run-007"), 60})
                label = "true_positive";
            if (key == std::pair{std::string("run-003"), 5} || key == std::pair{std::string("run-005"), 30})
                label = "true_positive generic working directory message";
            fx.labels += rec.run_id + " " + std::to_string(it.iteration) + " " + label + "\n";
        }
    }
    return fx;
}

} // namespace guiprobe::testing
