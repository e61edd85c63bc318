// SPDX-License-Identifier: Apache-2.0
#pragma once

// Subcommands run, replay, label, report and demo. Kept in a header so tests
// can drive the exact code path of the binary.

#include "guiprobe/config.hpp"
#include "guiprobe/error.hpp"
#include "guiprobe/fixtures.hpp"
#include "guiprobe/harness.hpp"
#include "guiprobe/triage.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace guiprobe {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kRunError = 2;
inline constexpr int kUnlabeled = 3;
inline constexpr int kDivergence = 4;
} // namespace exit_code

namespace detail {

struct RunFlags {
    std::string config;
    int runs = 1;
    std::string backend;
    std::string controller;
    std::string evaluator;
    std::optional<std::uint64_t> seed;
    std::optional<int> max_iterations;
    std::string out = "runs";
    int jobs = 1;
};

inline int cmd_run(const RunFlags& f, std::ostream& out, std::ostream& err) {
    RunConfig c;
    if (!f.config.empty()) c = load_run_config(f.config);
    else c.docs = default_docs();
    if (!f.backend.empty()) c.backend = backend_from_name(f.backend);
    if (!f.controller.empty()) c.controller = controller_kind_from_name(f.controller);
    if (!f.evaluator.empty()) c.evaluator = evaluator_kind_from_name(f.evaluator);
    if (f.seed) c.seed = *f.seed;
    if (f.max_iterations) c.max_iterations = *f.max_iterations;
    if (c.controller == ControllerKind::Scripted && c.controller_script.empty())
        c.controller_script = full_traversal_script(c.wizard);
    c.out_dir = f.out;
    preflight(c);

    const auto records = run_many(c, f.runs, f.jobs);
    int failures = 0;
    for (const auto& r : records) {
        if (!r.error.empty()) {
            ++failures;
            err << r.run_id << ": error: " << r.error << "\n";
            continue;
        }
        std::size_t problems = 0;
        for (const auto& it : r.iterations)
            if (it.verdict && it.verdict->is_problem()) ++problems;
        out << r.run_id << ": " << r.iterations.size() << " iterations, " << problems << " problems reported (stop: "
            << r.stop_reason << ")\n";
    }
    out << "records written to " << f.out << "\n";
    return failures ? exit_code::kRunError : exit_code::kOk;
}

inline int cmd_replay(const std::string& record_dir, const std::string& config, std::ostream& out,
                      std::ostream& err) {
    RunRecord rec;
    std::unique_ptr<SimBackend> backend;
    try {
        rec = load_record(record_dir);
        std::optional<std::vector<FaultSpec>> faults;
        if (!config.empty()) faults = load_run_config(config).faults;
        backend = backend_for_record(rec, faults);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::kUsage;
    }
    try {
        replay(rec, *backend);
    } catch (const ReplayDivergence& e) {
        err << e.what() << "\n";
        return exit_code::kDivergence;
    }
    out << rec.run_id << ": " << rec.iterations.size() << " iterations replayed identically\n";
    return exit_code::kOk;
}

inline LabelFile read_labels(const std::string& path) {
    if (path.empty()) return {};
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read label file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_label_file(buf.str());
}

inline int cmd_label(const std::string& runs, const std::string& labels, std::ostream& out) {
    const auto records = load_records(runs);
    const auto findings = collect_positives(records);
    LabelFile existing;
    if (std::filesystem::exists(labels)) existing = read_labels(labels);
    std::ofstream f(labels, std::ios::trunc);
    f << label_template(findings, existing);
    if (!f) throw Error("cannot write " + labels);
    std::size_t open = 0;
    for (const auto& x : findings) {
        const auto it = existing.entries.find({x.run_id, x.iteration});
        if (it == existing.entries.end() || it->second.label == Label::Unknown) ++open;
    }
    out << findings.size() << " findings, " << open << " still to label in " << labels << "\n";
    return exit_code::kOk;
}

inline int cmd_report(const std::string& runs, const std::string& labels, const std::string& format,
                      bool assume_unlabeled_false, std::ostream& out, std::ostream& err) {
    const auto records = load_records(runs);
    const auto label_file = read_labels(labels);
    try {
        const auto report = summarize(records, label_file, assume_unlabeled_false);
        if (format == "json") out << to_json(report).dump(2) << "\n";
        else out << report_text(report);
    } catch (const UnlabeledFindings& e) {
        err << e.what() << "\n";
        for (const auto& k : e.keys()) err << "unlabeled: " << k.first << " " << k.second << "\n";
        return exit_code::kUnlabeled;
    }
    return exit_code::kOk;
}

// Full scripted traversal with one seeded fault, every finding accepted.
inline int cmd_demo(const std::string& out_dir, std::ostream& out) {
    RunConfig c;
    c.docs = default_docs();
    c.controller_script = full_traversal_script(c.wizard);
    c.faults = {{FaultKind::GenericErrorMessage, "launch_settings", "Working directory", true}};
    c.out_dir = out_dir;
    const auto rec = run(c);
    LabelFile labels;
    for (const auto& f : collect_positives({rec})) labels.entries[{f.run_id, f.iteration}] = {Label::TruePositive, {}};
    out << "seeded fault: generic_error_message on launch_settings/Working directory\n\n";
    out << report_text(summarize({rec}, labels));
    return exit_code::kOk;
}

} // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Agent-driven exploratory GUI testing against a simulated tool integration wizard", "guiprobe"};
    app.require_subcommand(1, 1);

    detail::RunFlags rf;
    auto* run_cmd = app.add_subcommand("run", "Run a campaign of test runs");
    run_cmd->add_option("--config", rf.config, "JSON run configuration")->check(CLI::ExistingFile);
    run_cmd->add_option("--runs", rf.runs, "Number of runs")->check(CLI::PositiveNumber);
    run_cmd->add_option("--backend", rf.backend, "sim or live")->check(CLI::IsMember({"sim", "live"}));
    run_cmd->add_option("--controller", rf.controller, "scripted, random or remote")
        ->check(CLI::IsMember({"scripted", "random", "remote"}));
    run_cmd->add_option("--evaluator", rf.evaluator, "scripted, oracle or remote")
        ->check(CLI::IsMember({"scripted", "oracle", "remote"}));
    run_cmd->add_option("--seed", rf.seed, "Base seed; run i uses seed + i");
    run_cmd->add_option("--max-iterations", rf.max_iterations, "Iteration cap per run")->check(CLI::NonNegativeNumber);
    run_cmd->add_option("--out", rf.out, "Directory receiving one subdirectory per run");
    run_cmd->add_option("--jobs", rf.jobs, "Runs executed in parallel")->check(CLI::PositiveNumber);

    std::string record_dir, replay_config;
    auto* replay_cmd = app.add_subcommand("replay", "Re-execute a recorded run and compare screenshots and statuses");
    replay_cmd->add_option("--record", record_dir, "Run directory")->required();
    replay_cmd->add_option("--config", replay_config, "Config whose faults replace the recorded ones")
        ->check(CLI::ExistingFile);

    std::string label_runs = "runs", label_path = "labels.txt";
    auto* label_cmd = app.add_subcommand("label", "Write or update the label file for all findings");
    label_cmd->add_option("--runs", label_runs, "Directory of run directories");
    label_cmd->add_option("--labels", label_path, "Label file");

    std::string report_runs = "runs", report_labels, format = "text";
    bool assume_false = false;
    auto* report_cmd = app.add_subcommand("report", "Summarize runs and labels");
    report_cmd->add_option("--runs", report_runs, "Directory of run directories");
    report_cmd->add_option("--labels", report_labels, "Label file")->check(CLI::ExistingFile);
    report_cmd->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
    report_cmd->add_flag("--assume-unlabeled-false", assume_false, "Treat unlabeled findings as false positives");

    std::string demo_out;
    auto* demo_cmd = app.add_subcommand("demo", "Scripted traversal with one seeded fault");
    demo_cmd->add_option("--out", demo_out, "Persist the run below this directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_code::kOk : exit_code::kUsage;
    }

    try {
        if (*run_cmd) return detail::cmd_run(rf, out, err);
        if (*replay_cmd) return detail::cmd_replay(record_dir, replay_config, out, err);
        if (*label_cmd) return detail::cmd_label(label_runs, label_path, out);
        if (*report_cmd) return detail::cmd_report(report_runs, report_labels, format, assume_false, out, err);
        if (*demo_cmd) return detail::cmd_demo(demo_out, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::kUsage;
    } catch (const IntegrityError& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::kRunError;
    }
    return exit_code::kUsage;
}

} // namespace guiprobe
