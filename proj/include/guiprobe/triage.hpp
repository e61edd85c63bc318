// SPDX-License-Identifier: Apache-2.0
#pragma once

// Funnel from run records to a report: problem verdicts -> human labels ->
// true positives -> issues grouped by cause.

#include "guiprobe/action_grammar.hpp"
#include "guiprobe/error.hpp"
#include "guiprobe/harness.hpp"

#include <json.hpp>

#include <cctype>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace guiprobe {

struct PositiveFinding {
    std::string run_id;
    int iteration = 0;
    std::string reason;
    std::string action;
    std::string before_digest;
    std::string after_digest;

    bool operator==(const PositiveFinding&) const = default;
};

using FindingKey = std::pair<std::string, int>;

inline std::string key_text(const FindingKey& k) { return k.first + " " + std::to_string(k.second); }

enum class Label { TruePositive, FalsePositive, Unknown };

inline std::string_view label_name(Label l) {
    switch (l) {
    case Label::TruePositive: return "true_positive";
    case Label::FalsePositive: return "false_positive";
    case Label::Unknown: return "unknown";
    }
    return "unknown";
}

struct LabelEntry {
    Label label = Label::Unknown;
    std::string cause_key; // true positives only; empty means the normalized reason
};

struct LabelFile {
    std::map<FindingKey, LabelEntry> entries;
};

struct IssueGroup {
    std::string cause_key;
    std::vector<PositiveFinding> members;
    std::string representative_reason;
};

struct RunSummary {
    std::string run_id;
    std::size_t actions = 0;
    std::size_t positives = 0;
    std::size_t true_positives = 0;
};

struct Report {
    std::size_t runs = 0;
    std::size_t actions = 0;
    std::size_t positives = 0;
    std::size_t true_positives = 0;
    std::size_t unique_issues = 0;
    std::vector<RunSummary> per_run;
    std::size_t controls_acted_on = 0;
    std::vector<std::string> pages_visited;
    std::vector<IssueGroup> issues;
};

class UnlabeledFindings : public Error {
public:
    explicit UnlabeledFindings(std::vector<FindingKey> keys) : Error(describe(keys)), keys_(std::move(keys)) {}

    const std::vector<FindingKey>& keys() const noexcept { return keys_; }

private:
    static std::string describe(const std::vector<FindingKey>& keys) {
        std::string s = std::to_string(keys.size()) + " finding(s) without a label:";
        for (const auto& k : keys) s += " (" + k.first + ", " + std::to_string(k.second) + ")";
        return s;
    }

    std::vector<FindingKey> keys_;
};

// ---------------------------------------------------------------------------

inline std::vector<PositiveFinding> collect_positives(const std::vector<RunRecord>& records) {
    std::vector<PositiveFinding> out;
    for (const auto& rec : records)
        for (const auto& it : rec.iterations)
            if (it.verdict && it.verdict->is_problem())
                out.push_back({rec.run_id, it.iteration, it.verdict->reason.value_or(""), it.action, it.before_digest,
                               it.after_digest});
    std::stable_sort(out.begin(), out.end(), [](const PositiveFinding& a, const PositiveFinding& b) {
        return std::pair{a.run_id, a.iteration} < std::pair{b.run_id, b.iteration};
    });
    return out;
}

// Lowercase, digit runs masked as '#', punctuation dropped, whitespace
// collapsed. Reasons that differ only in control ids collapse together.
inline std::string normalize_reason(std::string_view reason) {
    std::string out;
    bool pending_space = false;
    bool in_digits = false;
    for (char ch : reason) {
        const auto c = static_cast<unsigned char>(ch);
        if (std::isdigit(c)) {
            if (!in_digits) {
                if (pending_space && !out.empty()) out += ' ';
                pending_space = false;
                out += '#';
            }
            in_digits = true;
            continue;
        }
        in_digits = false;
        if (std::isspace(c)) {
            pending_space = true;
        } else if (std::isalpha(c) || c >= 0x80) {
            if (pending_space && !out.empty()) out += ' ';
            pending_space = false;
            out += static_cast<char>(std::tolower(c));
        }
    }
    return out;
}

// Groups in order of first appearance; each input lands in exactly one group.
inline std::vector<IssueGroup> consolidate(const std::vector<std::pair<PositiveFinding, std::string>>& true_positives) {
    std::vector<IssueGroup> groups;
    std::map<std::string, std::size_t> index;
    for (const auto& [finding, key] : true_positives) {
        const auto cause = key.empty() ? normalize_reason(finding.reason) : key;
        auto [it, inserted] = index.emplace(cause, groups.size());
        if (inserted) groups.push_back({cause, {}, finding.reason});
        groups[it->second].members.push_back(finding);
    }
    return groups;
}

// ---------------------------------------------------------------------------
// Label files: `run_id iteration label [cause_key...]`, '#' starts a comment.

inline LabelFile parse_label_file(std::string_view text) {
    LabelFile file;
    std::istringstream in{std::string(text)};
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::string run_id, iteration, label;
        if (!(fields >> run_id)) continue;
        if (!(fields >> iteration >> label))
            throw ConfigError("label file line " + std::to_string(n) + ": expected 'run_id iteration label'");
        int iter = 0;
        try {
            std::size_t used = 0;
            iter = std::stoi(iteration, &used);
            if (used != iteration.size() || iter < 1) throw std::invalid_argument(iteration);
        } catch (const std::exception&) {
            throw ConfigError("label file line " + std::to_string(n) + ": bad iteration '" + iteration + "'");
        }
        LabelEntry e;
        if (label == "true_positive") e.label = Label::TruePositive;
        else if (label == "false_positive") e.label = Label::FalsePositive;
        else if (label == "unknown") e.label = Label::Unknown;
        else throw ConfigError("label file line " + std::to_string(n) + ": unknown label '" + label + "'");

        std::string rest;
        std::getline(fields, rest);
        const auto b = rest.find_first_not_of(" \t");
        const auto last = rest.find_last_not_of(" \t\r");
        if (b != std::string::npos) e.cause_key = rest.substr(b, last - b + 1);
        if (!e.cause_key.empty() && e.label != Label::TruePositive)
            throw ConfigError("label file line " + std::to_string(n) + ": cause key on a non-true-positive label");
        if (!file.entries.emplace(FindingKey{run_id, iter}, e).second)
            throw ConfigError("label file line " + std::to_string(n) + ": duplicate label for " +
                              key_text({run_id, iter}));
    }
    return file;
}

inline std::string serialize_label_file(const LabelFile& file) {
    std::string out;
    for (const auto& [key, e] : file.entries) {
        out += key.first + " " + std::to_string(key.second) + " " + std::string(label_name(e.label));
        if (!e.cause_key.empty()) out += " " + e.cause_key;
        out += "\n";
    }
    return out;
}

// Template for the human labeler: every finding as `unknown`, with the
// reason as a comment. Labels already present are kept.
inline std::string label_template(const std::vector<PositiveFinding>& findings, const LabelFile& existing = {}) {
    std::string out = "# run_id iteration true_positive|false_positive|unknown [cause_key]\n";
    for (const auto& f : findings) {
        out += "# " + f.action + ": " + f.reason + "\n";
        const auto it = existing.entries.find({f.run_id, f.iteration});
        out += f.run_id + " " + std::to_string(f.iteration) + " ";
        if (it == existing.entries.end()) {
            out += "unknown\n";
        } else {
            out += std::string(label_name(it->second.label));
            if (!it->second.cause_key.empty()) out += " " + it->second.cause_key;
            out += "\n";
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

inline Report summarize(const std::vector<RunRecord>& records, const LabelFile& labels,
                        bool assume_unlabeled_false = false) {
    const auto findings = collect_positives(records);
    std::set<FindingKey> known;
    for (const auto& f : findings) known.insert({f.run_id, f.iteration});
    for (const auto& [key, e] : labels.entries)
        if (!known.count(key)) throw IntegrityError("label references missing finding " + key_text(key));

    std::vector<FindingKey> unlabeled;
    std::vector<std::pair<PositiveFinding, std::string>> tps;
    for (const auto& f : findings) {
        const auto it = labels.entries.find({f.run_id, f.iteration});
        const auto label = it == labels.entries.end() ? Label::Unknown : it->second.label;
        if (label == Label::Unknown && !assume_unlabeled_false) unlabeled.push_back({f.run_id, f.iteration});
        if (label == Label::TruePositive) tps.emplace_back(f, it->second.cause_key);
    }
    if (!unlabeled.empty()) throw UnlabeledFindings(std::move(unlabeled));

    Report r;
    r.runs = records.size();
    std::set<std::string> pages;
    std::set<ControlId> controls;
    for (const auto& rec : records) {
        RunSummary s{rec.run_id, rec.iterations.size(), 0, 0};
        for (const auto& it : rec.iterations) {
            if (it.verdict && it.verdict->is_problem()) ++s.positives;
            if (it.status != ActionStatus::Executed) continue;
            if (!it.page_before.empty()) pages.insert(it.page_before);
            if (!it.page_after.empty()) pages.insert(it.page_after);
            try {
                controls.insert(parse_action(it.action).control_id);
            } catch (const Error&) {
            }
        }
        for (const auto& [f, key] : tps)
            if (f.run_id == rec.run_id) ++s.true_positives;
        r.actions += s.actions;
        r.positives += s.positives;
        r.per_run.push_back(std::move(s));
    }
    r.true_positives = tps.size();
    r.issues = consolidate(tps);
    r.unique_issues = r.issues.size();
    r.controls_acted_on = controls.size();
    r.pages_visited.assign(pages.begin(), pages.end());

    if (!(r.unique_issues <= r.true_positives && r.true_positives <= r.positives && r.positives <= r.actions))
        throw IntegrityError("funnel counts are not monotone");
    return r;
}

inline nlohmann::ordered_json to_json(const Report& r) {
    nlohmann::ordered_json j;
    j["runs"] = r.runs;
    j["actions"] = r.actions;
    j["positives"] = r.positives;
    j["true_positives"] = r.true_positives;
    j["unique_issues"] = r.unique_issues;
    auto per_run = nlohmann::ordered_json::array();
    for (const auto& s : r.per_run)
        per_run.push_back({{"run_id", s.run_id},
                           {"actions", s.actions},
                           {"positives", s.positives},
                           {"true_positives", s.true_positives}});
    j["per_run"] = per_run;
    j["coverage"] = {{"controls_acted_on", r.controls_acted_on}, {"pages_visited", r.pages_visited}};
    auto issues = nlohmann::ordered_json::array();
    for (const auto& g : r.issues) {
        auto members = nlohmann::ordered_json::array();
        for (const auto& m : g.members) members.push_back({{"run_id", m.run_id}, {"iteration", m.iteration}});
        issues.push_back({{"cause_key", g.cause_key}, {"reason", g.representative_reason}, {"members", members}});
    }
    j["issues"] = issues;
    return j;
}

// Plain-text table of the funnel stages followed by the per-run breakdown.
inline std::string report_text(const Report& r) {
    std::ostringstream o;
    auto row = [&](const std::string& stage, std::size_t n) { o << std::left << std::setw(28) << stage << n << "\n"; };
    row("Test runs", r.runs);
    row("Actions performed", r.actions);
    row("Problems reported", r.positives);
    row("True positives", r.true_positives);
    row("Unique issues", r.unique_issues);
    o << "\n" << std::left << std::setw(12) << "run" << std::setw(10) << "actions" << std::setw(11) << "positives"
      << "true_positives\n";
    for (const auto& s : r.per_run)
        o << std::left << std::setw(12) << s.run_id << std::setw(10) << s.actions << std::setw(11) << s.positives
          << s.true_positives << "\n";
    o << "\ncontrols acted on: " << r.controls_acted_on << "\npages visited: ";
    for (std::size_t i = 0; i < r.pages_visited.size(); ++i) o << (i ? ", " : "") << r.pages_visited[i];
    o << "\n";
    if (!r.issues.empty()) {
        o << "\nissues:\n";
        for (std::size_t i = 0; i < r.issues.size(); ++i)
            o << "  " << i + 1 << ". " << r.issues[i].representative_reason << " (" << r.issues[i].members.size()
              << "x)\n";
    }
    return o.str();
}

} // namespace guiprobe
