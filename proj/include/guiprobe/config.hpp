// SPDX-License-Identifier: Apache-2.0
#pragma once

// JSON run configuration. Unknown keys are rejected so typos do not silently
// fall back to defaults. The credential is referenced by environment
// variable name only.

#include "guiprobe/error.hpp"
#include "guiprobe/fixtures.hpp"
#include "guiprobe/harness.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

namespace guiprobe {

namespace detail {

inline void only_keys(const nlohmann::json& j, const std::string& where, std::initializer_list<const char*> keys) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, v] : j.items())
        if (!allowed.count(k)) throw ConfigError("unknown key '" + (where.empty() ? k : where + "." + k) + "'");
}

inline std::vector<std::string> script_from_json(const nlohmann::json& j, const WizardSpec& wizard,
                                                 const std::string& where) {
    if (j.is_string()) {
        if (j.get<std::string>() == "full_traversal") return full_traversal_script(wizard);
        throw ConfigError(where + " must be an array of strings or \"full_traversal\"");
    }
    return j.get<std::vector<std::string>>();
}

} // namespace detail

inline RunConfig run_config_from_json(const nlohmann::json& j) {
    detail::only_keys(j, "", {"task", "max_iterations", "seed", "backend", "controller", "evaluator", "remote",
                              "prompt", "wizard", "faults", "docs"});
    RunConfig c;
    try {
        c.task = j.value("task", c.task);
        c.max_iterations = j.value("max_iterations", c.max_iterations);
        c.seed = j.value("seed", c.seed);
        c.backend = backend_from_name(j.value("backend", std::string("sim")));
        if (j.contains("wizard")) c.wizard = j.at("wizard").get<WizardSpec>();
        if (j.contains("faults")) c.faults = faults_from_json(j.at("faults"));

        if (j.contains("controller")) {
            const auto& cj = j.at("controller");
            detail::only_keys(cj, "controller", {"kind", "script"});
            c.controller = controller_kind_from_name(cj.value("kind", std::string("scripted")));
            if (cj.contains("script")) c.controller_script = detail::script_from_json(cj.at("script"), c.wizard, "controller.script");
        }
        if (j.contains("evaluator")) {
            const auto& ej = j.at("evaluator");
            detail::only_keys(ej, "evaluator", {"kind", "script"});
            c.evaluator = evaluator_kind_from_name(ej.value("kind", std::string("oracle")));
            if (ej.contains("script")) c.evaluator_script = ej.at("script").get<std::vector<std::string>>();
        }
        if (j.contains("remote")) {
            const auto& rj = j.at("remote");
            detail::only_keys(rj, "remote", {"endpoint", "model", "credential_env", "timeout_seconds", "max_retries",
                                             "temperature", "backoff_initial_ms"});
            RemoteAgentConfig r;
            r.endpoint = rj.value("endpoint", r.endpoint);
            r.model = rj.value("model", r.model);
            r.credential_env = rj.value("credential_env", r.credential_env);
            r.timeout_seconds = rj.value("timeout_seconds", r.timeout_seconds);
            r.max_retries = rj.value("max_retries", r.max_retries);
            r.temperature = rj.value("temperature", r.temperature);
            r.backoff_initial = std::chrono::milliseconds(rj.value("backoff_initial_ms", r.backoff_initial.count()));
            if (r.max_retries < 0) throw ConfigError("remote.max_retries must not be negative");
            if (r.timeout_seconds <= 0) throw ConfigError("remote.timeout_seconds must be positive");
            c.remote = r;
        }
        if (j.contains("prompt")) {
            const auto& pj = j.at("prompt");
            detail::only_keys(pj, "prompt", {"doc_budget", "normalize_evaluator_wording", "attach_controller_screenshot"});
            c.prompt.doc_budget = pj.value("doc_budget", c.prompt.doc_budget);
            c.prompt.normalize_evaluator_wording =
                pj.value("normalize_evaluator_wording", c.prompt.normalize_evaluator_wording);
            c.attach_controller_screenshot = pj.value("attach_controller_screenshot", c.attach_controller_screenshot);
        }
        if (j.contains("docs")) {
            const auto& dj = j.at("docs");
            if (dj.is_string() && dj.get<std::string>() == "default") {
                c.docs = default_docs();
            } else {
                for (const auto& e : dj) {
                    detail::only_keys(e, "docs[]", {"page", "markdown"});
                    c.docs.entries.push_back({e.at("page").get<std::string>(), e.at("markdown").get<std::string>()});
                }
            }
        } else {
            c.docs = default_docs();
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
    if (c.max_iterations < 0) throw ConfigError("max_iterations must not be negative");
    return c;
}

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_json_text(buf.str());
    } catch (const JsonSyntaxError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
    return run_config_from_json(read_json_file(path));
}

} // namespace guiprobe
