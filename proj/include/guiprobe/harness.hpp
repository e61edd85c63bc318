// SPDX-License-Identifier: Apache-2.0
#pragma once

// The agent loop: controller prompt -> controller -> parse -> validate ->
// execute -> screenshots -> evaluator prompt -> evaluator -> verdict, with
// one JSONL line persisted per iteration.

#include "guiprobe/action_grammar.hpp"
#include "guiprobe/action_log.hpp"
#include "guiprobe/agents.hpp"
#include "guiprobe/digest.hpp"
#include "guiprobe/error.hpp"
#include "guiprobe/prompt_builder.hpp"
#include "guiprobe/remote_agent.hpp"
#include "guiprobe/sim_gui.hpp"
#include "guiprobe/widget_model.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace guiprobe {

enum class BackendKind { Simulated, Live };
enum class ControllerKind { Scripted, Random, Remote };
enum class EvaluatorKind { Scripted, Oracle, Remote };

inline std::string_view backend_name(BackendKind k) { return k == BackendKind::Simulated ? "sim" : "live"; }

inline std::string_view controller_kind_name(ControllerKind k) {
    switch (k) {
    case ControllerKind::Scripted: return "scripted";
    case ControllerKind::Random: return "random";
    case ControllerKind::Remote: return "remote";
    }
    return "scripted";
}

inline std::string_view evaluator_kind_name(EvaluatorKind k) {
    switch (k) {
    case EvaluatorKind::Scripted: return "scripted";
    case EvaluatorKind::Oracle: return "oracle";
    case EvaluatorKind::Remote: return "remote";
    }
    return "oracle";
}

inline BackendKind backend_from_name(std::string_view s) {
    if (s == "sim" || s == "simulated") return BackendKind::Simulated;
    if (s == "live") return BackendKind::Live;
    throw ConfigError("unknown backend '" + std::string(s) + "' (expected sim or live)");
}

inline ControllerKind controller_kind_from_name(std::string_view s) {
    for (auto k : {ControllerKind::Scripted, ControllerKind::Random, ControllerKind::Remote})
        if (controller_kind_name(k) == s) return k;
    throw ConfigError("unknown controller '" + std::string(s) + "' (expected scripted, random or remote)");
}

inline EvaluatorKind evaluator_kind_from_name(std::string_view s) {
    for (auto k : {EvaluatorKind::Scripted, EvaluatorKind::Oracle, EvaluatorKind::Remote})
        if (evaluator_kind_name(k) == s) return k;
    throw ConfigError("unknown evaluator '" + std::string(s) + "' (expected scripted, oracle or remote)");
}

struct RunConfig {
    std::string task = std::string(prompt_text::kDefaultTask);
    int max_iterations = 100;
    BackendKind backend = BackendKind::Simulated;
    ControllerKind controller = ControllerKind::Scripted;
    std::vector<std::string> controller_script;
    EvaluatorKind evaluator = EvaluatorKind::Oracle;
    std::vector<std::string> evaluator_script;
    std::uint64_t seed = 0;
    // Root of the run directories; empty keeps records in memory only.
    std::filesystem::path out_dir;
    std::optional<RemoteAgentConfig> remote;
    WizardSpec wizard = default_wizard_spec();
    std::vector<FaultSpec> faults;
    DocCorpus docs;
    PromptOptions prompt;
    bool attach_controller_screenshot = false;
    bool record_timestamps = true;
};

// Everything needed to rebuild the run, minus any credential.
inline nlohmann::ordered_json config_echo(const RunConfig& c) {
    nlohmann::ordered_json j;
    j["task"] = c.task;
    j["max_iterations"] = c.max_iterations;
    j["backend"] = backend_name(c.backend);
    j["seed"] = c.seed;
    j["controller"] = {{"kind", controller_kind_name(c.controller)}, {"script", c.controller_script}};
    j["evaluator"] = {{"kind", evaluator_kind_name(c.evaluator)}, {"script", c.evaluator_script}};
    if (c.remote) {
        j["remote"] = {{"endpoint", c.remote->endpoint},
                       {"model", c.remote->model},
                       {"credential_env", c.remote->credential_env},
                       {"timeout_seconds", c.remote->timeout_seconds},
                       {"max_retries", c.remote->max_retries},
                       {"temperature", c.remote->temperature},
                       {"backoff_initial_ms", c.remote->backoff_initial.count()}};
    }
    j["prompt"] = {{"doc_budget", c.prompt.doc_budget},
                   {"normalize_evaluator_wording", c.prompt.normalize_evaluator_wording},
                   {"attach_controller_screenshot", c.attach_controller_screenshot}};
    nlohmann::ordered_json wizard;
    to_json(wizard, c.wizard);
    j["wizard"] = wizard;
    j["faults"] = faults_to_json(c.faults);
    auto docs = nlohmann::ordered_json::array();
    for (const auto& e : c.docs.entries) docs.push_back({{"page", e.page_key}, {"markdown", e.markdown_body}});
    j["docs"] = docs;
    return j;
}

// ---------------------------------------------------------------------------
// Backends

class GuiBackend {
public:
    virtual ~GuiBackend() = default;
    virtual WidgetNode snapshot() = 0;
    virtual ExecResult execute(const ActionCommand& cmd) = 0;
    virtual SimScreenshot screenshot() = 0;
    virtual std::string page_key() = 0;
    // Deterministic ground-truth verdict, when the backend knows its faults.
    virtual std::optional<Verdict> oracle(const SimScreenshot&, const SimScreenshot&, const ActionCommand&) {
        return std::nullopt;
    }
};

class SimBackend final : public GuiBackend {
public:
    explicit SimBackend(SimWizard wizard) : sim_(std::move(wizard)) {}

    WidgetNode snapshot() override { return sim_.snapshot(); }
    ExecResult execute(const ActionCommand& cmd) override { return sim_.execute(cmd); }
    SimScreenshot screenshot() override { return sim_.render(); }
    std::string page_key() override { return sim_.page().key; }
    std::optional<Verdict> oracle(const SimScreenshot& before, const SimScreenshot& after,
                                  const ActionCommand& cmd) override {
        return oracle_evaluate(before, after, cmd, sim_);
    }

    const SimWizard& wizard() const { return sim_; }

private:
    SimWizard sim_;
};

// Checks that do not depend on the run index: remote settings and the
// credential are resolved before any run starts.
inline void preflight(const RunConfig& c) {
    if (c.max_iterations < 0) throw ConfigError("max_iterations must not be negative");
    const bool needs_remote = c.backend == BackendKind::Live || c.controller == ControllerKind::Remote ||
                              c.evaluator == EvaluatorKind::Remote;
    if (needs_remote) {
        const auto remote = c.remote.value_or(RemoteAgentConfig{});
        (void)Secret::from_env(remote.credential_env);
        split_endpoint(remote.endpoint);
    }
    if (c.backend == BackendKind::Live && !c.remote) throw ConfigError("the live backend requires a remote agent config");
    if (c.backend == BackendKind::Simulated) (void)SimWizard(c.faults, c.seed, c.wizard);
    if (c.evaluator == EvaluatorKind::Oracle && c.backend == BackendKind::Live)
        throw ConfigError("the oracle evaluator needs the simulated backend");
}

inline std::unique_ptr<GuiBackend> make_backend(const RunConfig& c) {
    if (c.backend == BackendKind::Live) {
        preflight(c);
        throw Error("backend initialization failed: no UI automation driver is available for the live backend");
    }
    return std::make_unique<SimBackend>(SimWizard(c.faults, c.seed, c.wizard));
}

inline std::unique_ptr<Agent> make_controller(const RunConfig& c) {
    switch (c.controller) {
    case ControllerKind::Scripted: return std::make_unique<ScriptedAgent>(c.controller_script);
    case ControllerKind::Random: return std::make_unique<RandomAgent>(c.seed);
    case ControllerKind::Remote: return std::make_unique<RemoteAgent>(c.remote.value_or(RemoteAgentConfig{}));
    }
    return nullptr;
}

inline std::unique_ptr<Agent> make_evaluator(const RunConfig& c) {
    switch (c.evaluator) {
    case EvaluatorKind::Scripted: return std::make_unique<ScriptedAgent>(c.evaluator_script);
    case EvaluatorKind::Oracle: return nullptr;
    case EvaluatorKind::Remote: return std::make_unique<RemoteAgent>(c.remote.value_or(RemoteAgentConfig{}));
    }
    return nullptr;
}

// ---------------------------------------------------------------------------
// Records

struct IterationRecord {
    int iteration = 0; // 1-based
    std::string page_before;
    std::string page_after;
    std::string tree_digest;
    std::string controller_prompt_digest;
    std::string controller_raw;
    std::string action; // formatted command; empty when nothing parsed
    std::string explanation;
    std::string controller_error;
    ActionStatus status = ActionStatus::Rejected;
    std::string status_reason;
    std::string before_digest;
    std::string after_digest;
    std::string evaluator_prompt_digest;
    std::string evaluator_raw;
    std::optional<Verdict> verdict;
    std::string evaluator_error;
    std::string started_at;
    std::string finished_at;

    bool operator==(const IterationRecord&) const = default;

    ActionLogEntry log_entry() const { return {action, explanation, status}; }
};

struct RunRecord {
    std::string run_id;
    nlohmann::ordered_json config;
    std::vector<IterationRecord> iterations;
    std::string stop_reason;
    std::string error; // run-level failure, empty on success
};

inline nlohmann::ordered_json to_json(const IterationRecord& r, bool with_timestamps = true) {
    auto opt = [](const std::string& s) -> nlohmann::ordered_json {
        return s.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(s);
    };
    nlohmann::ordered_json j;
    j["iteration"] = r.iteration;
    j["page_before"] = r.page_before;
    j["page_after"] = r.page_after;
    j["tree_digest"] = r.tree_digest;
    j["controller_prompt_digest"] = opt(r.controller_prompt_digest);
    j["controller_raw"] = r.controller_raw;
    j["action"] = opt(r.action);
    j["explanation"] = r.explanation;
    j["controller_error"] = opt(r.controller_error);
    j["status"] = status_name(r.status);
    j["status_reason"] = opt(r.status_reason);
    j["before_digest"] = r.before_digest;
    j["after_digest"] = r.after_digest;
    j["evaluator_prompt_digest"] = opt(r.evaluator_prompt_digest);
    j["evaluator_raw"] = opt(r.evaluator_raw);
    j["verdict"] = r.verdict ? to_json(*r.verdict) : nlohmann::ordered_json(nullptr);
    j["evaluator_error"] = opt(r.evaluator_error);
    if (with_timestamps) {
        j["started_at"] = r.started_at;
        j["finished_at"] = r.finished_at;
    }
    return j;
}

inline IterationRecord iteration_from_json(const nlohmann::json& j) {
    auto str = [&](const char* key) {
        const auto it = j.find(key);
        return it == j.end() || it->is_null() ? std::string() : it->get<std::string>();
    };
    IterationRecord r;
    r.iteration = j.at("iteration").get<int>();
    r.page_before = str("page_before");
    r.page_after = str("page_after");
    r.tree_digest = str("tree_digest");
    r.controller_prompt_digest = str("controller_prompt_digest");
    r.controller_raw = str("controller_raw");
    r.action = str("action");
    r.explanation = str("explanation");
    r.controller_error = str("controller_error");
    r.status = status_from_name(j.at("status").get<std::string>());
    r.status_reason = str("status_reason");
    r.before_digest = str("before_digest");
    r.after_digest = str("after_digest");
    r.evaluator_prompt_digest = str("evaluator_prompt_digest");
    r.evaluator_raw = str("evaluator_raw");
    if (const auto it = j.find("verdict"); it != j.end() && !it->is_null()) r.verdict = parse_verdict(it->dump());
    r.evaluator_error = str("evaluator_error");
    r.started_at = str("started_at");
    r.finished_at = str("finished_at");
    return r;
}

// The record minus wall-clock fields; equal for equal (config, seeds).
inline std::string comparable_text(const RunRecord& rec) {
    std::string out = rec.config.dump() + "\n";
    for (const auto& it : rec.iterations) out += to_json(it, false).dump() + "\n";
    out += rec.stop_reason + "\n" + rec.error + "\n";
    return out;
}

inline std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const auto t = std::chrono::system_clock::to_time_t(now);
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
    char out[40];
    std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
    return out;
}

inline std::string run_id_for(std::size_t index) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "run-%03zu", index);
    return buf;
}

// ---------------------------------------------------------------------------
// Persistence: <out>/<run-id>/{header.json, iterations.jsonl, shots/, prompts/}

class RunWriter {
public:
    RunWriter() = default;

    RunWriter(const std::filesystem::path& root, const std::string& run_id, const nlohmann::ordered_json& header)
        : dir_(root / run_id) {
        std::filesystem::create_directories(dir_ / "shots");
        std::filesystem::create_directories(dir_ / "prompts");
        header_ = header;
        write_file(dir_ / "header.json", header.dump(2) + "\n");
        jsonl_.open(dir_ / "iterations.jsonl", std::ios::trunc);
        if (!jsonl_) throw Error("cannot write " + (dir_ / "iterations.jsonl").string());
    }

    bool enabled() const { return !dir_.empty(); }

    void shot(const SimScreenshot& s) {
        if (enabled()) write_once(dir_ / "shots" / (s.digest + ".txt"), s.rendered);
    }

    std::string prompt(const PromptDocument& doc) {
        const auto text = doc.render();
        const auto digest = sha256_hex(text);
        if (enabled()) write_once(dir_ / "prompts" / (digest + ".txt"), text);
        return digest;
    }

    // Appended and flushed before the next iteration begins.
    void iteration(const IterationRecord& r) {
        if (!enabled()) return;
        jsonl_ << to_json(r).dump() << '\n';
        jsonl_.flush();
        if (!jsonl_) throw Error("cannot append to " + (dir_ / "iterations.jsonl").string());
    }

    // Records how the run ended; written via a temporary so a crash leaves
    // the previous header intact.
    void finish(const std::string& stop_reason) {
        if (!enabled()) return;
        header_["stop_reason"] = stop_reason;
        const auto tmp = dir_ / "header.json.tmp";
        write_file(tmp, header_.dump(2) + "\n");
        std::filesystem::rename(tmp, dir_ / "header.json");
    }

private:
    static void write_file(const std::filesystem::path& p, const std::string& content) {
        std::ofstream f(p, std::ios::binary | std::ios::trunc);
        f << content;
        if (!f) throw Error("cannot write " + p.string());
    }

    static void write_once(const std::filesystem::path& p, const std::string& content) {
        if (!std::filesystem::exists(p)) write_file(p, content);
    }

    std::filesystem::path dir_;
    nlohmann::ordered_json header_;
    std::ofstream jsonl_;
};

inline RunRecord load_record(const std::filesystem::path& dir) {
    RunRecord rec;
    rec.run_id = dir.filename().string();
    std::ifstream header(dir / "header.json");
    if (!header) throw IntegrityError("missing " + (dir / "header.json").string());
    const auto h = nlohmann::ordered_json::parse(header, nullptr, false);
    if (h.is_discarded() || !h.is_object() || !h.contains("config"))
        throw IntegrityError("malformed " + (dir / "header.json").string());
    rec.run_id = h.value("run_id", rec.run_id);
    rec.config = h.at("config");
    rec.stop_reason = h.value("stop_reason", "");

    std::ifstream lines(dir / "iterations.jsonl", std::ios::binary);
    if (!lines) throw IntegrityError("missing " + (dir / "iterations.jsonl").string());
    std::stringstream buf;
    buf << lines.rdbuf();
    const auto content = buf.str();
    if (!content.empty() && content.back() != '\n')
        throw IntegrityError((dir / "iterations.jsonl").string() + " ends in a partial line");
    std::istringstream in(content);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        const auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object())
            throw IntegrityError("iterations.jsonl line " + std::to_string(n) + " is not a JSON object");
        try {
            rec.iterations.push_back(iteration_from_json(j));
        } catch (const std::exception& e) {
            throw IntegrityError("iterations.jsonl line " + std::to_string(n) + ": " + e.what());
        }
        if (rec.iterations.back().iteration != n)
            throw IntegrityError("iterations.jsonl line " + std::to_string(n) + " has iteration " +
                                 std::to_string(rec.iterations.back().iteration));
    }
    return rec;
}

// Writes a finished record in the layout load_record reads (no shots or
// prompts); used for synthesized fixtures.
inline void save_record(const std::filesystem::path& root, const RunRecord& rec) {
    nlohmann::ordered_json header;
    header["run_id"] = rec.run_id;
    header["controller_sections"] = controller_section_names();
    header["evaluator_sections"] = evaluator_section_names();
    header["config"] = rec.config;
    RunWriter writer(root, rec.run_id, header);
    for (const auto& it : rec.iterations) writer.iteration(it);
    if (!rec.stop_reason.empty()) writer.finish(rec.stop_reason);
}

// Run directories below root, sorted by name.
inline std::vector<RunRecord> load_records(const std::filesystem::path& root) {
    std::vector<std::filesystem::path> dirs;
    if (!std::filesystem::is_directory(root)) throw IntegrityError("no run directory at " + root.string());
    for (const auto& e : std::filesystem::directory_iterator(root))
        if (e.is_directory() && std::filesystem::exists(e.path() / "header.json")) dirs.push_back(e.path());
    std::sort(dirs.begin(), dirs.end());
    std::vector<RunRecord> out;
    for (const auto& d : dirs) out.push_back(load_record(d));
    return out;
}

// ---------------------------------------------------------------------------
// The loop

class Run {
public:
    Run(RunConfig config, std::string run_id)
        : config_(std::move(config)), backend_(make_backend(config_)), controller_(make_controller(config_)),
          evaluator_(make_evaluator(config_)) {
        record_.run_id = std::move(run_id);
        record_.config = config_echo(config_);
        if (!config_.out_dir.empty()) {
            nlohmann::ordered_json header;
            header["run_id"] = record_.run_id;
            header["created_at"] = config_.record_timestamps ? utc_timestamp() : std::string();
            header["controller_sections"] = controller_section_names();
            header["evaluator_sections"] = evaluator_section_names();
            header["config"] = record_.config;
            writer_ = RunWriter(config_.out_dir, record_.run_id, header);
        }
        current_ = backend_->screenshot();
        writer_.shot(current_);
    }

    const RunRecord& record() const { return record_; }
    bool done() const { return done_; }
    GuiBackend& backend() { return *backend_; }

    // One full controller/evaluator round. Returns false once the run is over.
    bool step() {
        if (done_) return false;
        if (static_cast<int>(record_.iterations.size()) >= config_.max_iterations) return stop("max_iterations");

        IterationRecord it;
        it.iteration = static_cast<int>(record_.iterations.size()) + 1;
        it.started_at = stamp();
        it.page_before = backend_->page_key();
        const auto tree = backend_->snapshot();
        const auto actions = possible_actions(tree);
        if (actions.empty()) return stop("no_possible_actions");
        it.tree_digest = sha256_hex(serialize_tree(tree));
        const auto before = current_;
        it.before_digest = before.digest;

        std::optional<ImageRef> attached;
        if (config_.attach_controller_screenshot) attached = before.image();
        const auto prompt = build_controller_prompt(config_.task, config_.docs, tree, log_, attached, config_.prompt);
        it.controller_prompt_digest = writer_.prompt(prompt);

        std::optional<ActionCommand> cmd;
        try {
            it.controller_raw = controller_->respond({prompt, AgentRole::Controller});
            try {
                auto out = parse_controller_output(it.controller_raw);
                it.action = format_action(out.action);
                it.explanation = out.explanation;
                const auto v = validate_action(out.action, actions);
                if (v.accepted) cmd = out.action;
                else it.status_reason = v.reason.value_or("rejected");
            } catch (const Error& e) {
                it.controller_error = e.what();
                it.explanation = std::string("unparseable controller output: ") + e.what();
            }
        } catch (const AgentError& e) {
            if (e.kind() == AgentError::Kind::ScriptExhausted) return stop("controller_script_exhausted");
            it.controller_error = e.what();
            it.explanation = std::string("controller error: ") + e.what();
        }

        if (cmd) {
            const auto result = backend_->execute(*cmd);
            it.status = result.status;
            it.status_reason = result.reason;
        } else {
            it.status = ActionStatus::Rejected;
        }

        const auto after = backend_->screenshot();
        writer_.shot(after);
        it.after_digest = after.digest;
        it.page_after = backend_->page_key();

        bool evaluator_exhausted = false;
        if (cmd) {
            const auto eval_prompt = build_evaluator_prompt(it.explanation, before.image(), after.image(), config_.prompt);
            it.evaluator_prompt_digest = writer_.prompt(eval_prompt);
            try {
                if (!evaluator_) {
                    it.verdict = backend_->oracle(before, after, *cmd);
                    if (!it.verdict) throw AgentError(AgentError::Kind::Unsupported, "backend has no oracle");
                    it.evaluator_raw = serialize_verdict(*it.verdict);
                } else {
                    it.evaluator_raw = evaluator_->respond({eval_prompt, AgentRole::Evaluator});
                    it.verdict = parse_verdict(it.evaluator_raw);
                }
            } catch (const AgentError& e) {
                it.evaluator_error = e.what();
                evaluator_exhausted = e.kind() == AgentError::Kind::ScriptExhausted;
            } catch (const VerdictParseError& e) {
                it.evaluator_error = e.what();
            }
        }

        // The previous screenshot is replaced by the new one.
        current_ = after;
        log_.push_back(it.log_entry());
        it.finished_at = stamp();
        writer_.iteration(it);
        record_.iterations.push_back(std::move(it));
        if (evaluator_exhausted) return stop("evaluator_script_exhausted");
        return true;
    }

    RunRecord finish() {
        while (step()) {}
        return record_;
    }

private:
    bool stop(std::string why) {
        done_ = true;
        record_.stop_reason = std::move(why);
        writer_.finish(record_.stop_reason);
        return false;
    }

    std::string stamp() const { return config_.record_timestamps ? utc_timestamp() : std::string(); }

    RunConfig config_;
    std::unique_ptr<GuiBackend> backend_;
    std::unique_ptr<Agent> controller_;
    std::unique_ptr<Agent> evaluator_;
    RunWriter writer_;
    RunRecord record_;
    std::vector<ActionLogEntry> log_;
    SimScreenshot current_;
    bool done_ = false;
};

inline RunRecord run(const RunConfig& config, const std::string& run_id = run_id_for(0)) {
    return Run(config, run_id).finish();
}

// n runs with seeds seed + i. A failing run records its error; the others
// are unaffected.
inline std::vector<RunRecord> run_many(const RunConfig& config, int n, int jobs = 1) {
    if (n < 1) throw ConfigError("the number of runs must be at least 1");
    std::vector<RunRecord> records(static_cast<std::size_t>(n));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next++; i < n; i = next++) {
            auto c = config;
            c.seed = config.seed + static_cast<std::uint64_t>(i);
            const auto id = run_id_for(static_cast<std::size_t>(i));
            try {
                records[static_cast<std::size_t>(i)] = run(c, id);
            } catch (const std::exception& e) {
                auto& r = records[static_cast<std::size_t>(i)];
                r.run_id = id;
                r.config = config_echo(c);
                r.error = e.what();
                r.stop_reason = "error";
            }
        }
    };
    const int threads = std::clamp(jobs, 1, n);
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return records;
}

// ---------------------------------------------------------------------------
// Replay

class ReplayDivergence : public Error {
public:
    ReplayDivergence(int iteration, const std::string& what)
        : Error("replay diverged at iteration " + std::to_string(iteration) + ": " + what), iteration_(iteration) {}

    int iteration() const noexcept { return iteration_; }

private:
    int iteration_;
};

// Re-executes the recorded commands against backend. Rejected iterations are
// checked to leave the GUI untouched.
inline RunRecord replay(const RunRecord& record, GuiBackend& backend) {
    RunRecord out;
    out.run_id = record.run_id;
    out.config = record.config;
    out.stop_reason = record.stop_reason;
    auto current = backend.screenshot();
    for (const auto& rec : record.iterations) {
        IterationRecord it = rec;
        it.before_digest = current.digest;
        if (it.before_digest != rec.before_digest)
            throw ReplayDivergence(rec.iteration, "screenshot before the action differs");
        if (rec.status != ActionStatus::Rejected) {
            ActionCommand cmd;
            try {
                cmd = parse_action(rec.action);
            } catch (const Error& e) {
                throw IntegrityError("iteration " + std::to_string(rec.iteration) + ": " + e.what());
            }
            const auto v = validate_action(cmd, possible_actions(backend.snapshot()));
            if (!v.accepted) throw ReplayDivergence(rec.iteration, "action no longer possible: " + *v.reason);
            const auto result = backend.execute(cmd);
            it.status = result.status;
            it.status_reason = result.reason;
            if (it.status != rec.status)
                throw ReplayDivergence(rec.iteration, "status " + std::string(status_name(it.status)) + " instead of " +
                                                          std::string(status_name(rec.status)));
        }
        current = backend.screenshot();
        it.after_digest = current.digest;
        if (it.after_digest != rec.after_digest)
            throw ReplayDivergence(rec.iteration, "screenshot after the action differs");
        out.iterations.push_back(std::move(it));
    }
    return out;
}

// Fresh simulator from the record's own config; faults may be overridden.
inline std::unique_ptr<SimBackend> backend_for_record(const RunRecord& record,
                                                      std::optional<std::vector<FaultSpec>> faults = std::nullopt) {
    const auto& c = record.config;
    if (c.value("backend", "sim") != "sim") throw ConfigError("only records of the simulated backend can be replayed");
    const auto plain = nlohmann::json::parse(c.dump());
    WizardSpec spec = plain.contains("wizard") ? plain.at("wizard").get<WizardSpec>() : default_wizard_spec();
    auto f = faults ? *faults : faults_from_json(plain.value("faults", nlohmann::json::array()));
    return std::make_unique<SimBackend>(SimWizard(std::move(f), plain.value("seed", std::uint64_t{0}), std::move(spec)));
}

} // namespace guiprobe
