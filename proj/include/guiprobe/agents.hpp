// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "guiprobe/action_grammar.hpp"
#include "guiprobe/error.hpp"
#include "guiprobe/prompt_builder.hpp"
#include "guiprobe/widget_model.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace guiprobe {

enum class AgentRole { Controller, Evaluator };

inline std::string_view role_name(AgentRole r) { return r == AgentRole::Controller ? "controller" : "evaluator"; }

struct AgentRequest {
    PromptDocument prompt;
    AgentRole role = AgentRole::Controller;
};

class AgentError : public Error {
public:
    enum class Kind { ScriptExhausted, Transport, Service, Unsupported, BadRequest };

    AgentError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

// An agent returns the raw text of its answer; parsing is the caller's job.
class Agent {
public:
    virtual ~Agent() = default;
    virtual std::string respond(const AgentRequest& request) = 0;
    virtual std::string kind() const = 0;
};

inline void check_request(const AgentRequest& req) {
    if (req.role == AgentRole::Evaluator && req.prompt.attachments.size() != 2)
        throw AgentError(AgentError::Kind::BadRequest, "evaluator requests must carry exactly two images");
}

// Plays back a fixed list of responses, one per call.
class ScriptedAgent final : public Agent {
public:
    explicit ScriptedAgent(std::vector<std::string> script) : script_(std::move(script)) {}

    std::string respond(const AgentRequest& request) override {
        check_request(request);
        if (next_ >= script_.size())
            throw AgentError(AgentError::Kind::ScriptExhausted,
                             "script exhausted after " + std::to_string(script_.size()) + " responses");
        return script_[next_++];
    }

    std::string kind() const override { return "scripted"; }
    std::size_t remaining() const { return script_.size() - next_; }

private:
    std::vector<std::string> script_;
    std::size_t next_ = 0;
};

// Monkey-testing baseline: reads the GUI tree out of the controller prompt
// and picks uniformly among its possible actions.
class RandomAgent final : public Agent {
public:
    explicit RandomAgent(std::uint64_t seed) : rng_(seed) {}

    std::string respond(const AgentRequest& request) override {
        if (request.role != AgentRole::Controller)
            throw AgentError(AgentError::Kind::Unsupported, "the random agent only acts as controller");
        const auto* gui = request.prompt.section("GUI");
        if (!gui) throw AgentError(AgentError::Kind::BadRequest, "controller prompt has no GUI section");

        constexpr std::string_view lead = "The current state of the GUI:\n";
        std::string_view body = gui->body;
        if (body.substr(0, lead.size()) == lead) body.remove_prefix(lead.size());
        const auto actions = possible_actions(parse_tree(body));
        if (actions.empty()) throw AgentError(AgentError::Kind::Unsupported, "no possible actions in the current GUI");

        const auto& pick = actions[uniform(actions.size())];
        ActionCommand cmd{pick.verb, pick.control_id, std::nullopt};
        switch (pick.arg_spec.kind) {
        case ArgSpec::Kind::None: break;
        case ArgSpec::Kind::FreeText: cmd.arg = kInputs[uniform(std::size(kInputs))]; break;
        case ArgSpec::Kind::OneOf:
            cmd.arg = pick.arg_spec.items.empty() ? std::string() : pick.arg_spec.items[uniform(pick.arg_spec.items.size())];
            break;
        }

        nlohmann::ordered_json out;
        out["action"] = format_action(cmd);
        out["explanation"] = "random exploration: " + std::string(verb_name(cmd.verb)) + " control " +
                             std::to_string(cmd.control_id);
        return out.dump();
    }

    std::string kind() const override { return "random"; }

private:
    // Typical monkey-test inputs: empty, plausible, malformed.
    static constexpr const char* kInputs[] = {
        "", "1.0", "Number of Threads", "/opt/tools/solver", "tools/solver", "C:\\Tools\\Solver",
        "mapping.xml", "mapping.txt", "-1", "4", "it's", "a very long text that does not fit into the field at all",
    };

    std::size_t uniform(std::size_t n) {
        std::uniform_int_distribution<std::size_t> dist(0, n - 1);
        return dist(rng_);
    }

    std::mt19937_64 rng_;
};

// ---------------------------------------------------------------------------
// Verdicts

struct Verdict {
    enum class State { Okay, Problem };
    State state = State::Okay;
    std::optional<std::string> reason;

    static Verdict okay() { return {State::Okay, std::nullopt}; }
    static Verdict problem(std::string why) { return {State::Problem, std::move(why)}; }

    bool is_problem() const { return state == State::Problem; }
    bool operator==(const Verdict&) const = default;
};

class VerdictParseError : public Error {
public:
    using Error::Error;
};

inline nlohmann::ordered_json to_json(const Verdict& v) {
    nlohmann::ordered_json j;
    j["state"] = v.is_problem() ? "problem" : "okay";
    if (v.reason) j["reason"] = *v.reason;
    return j;
}

inline std::string serialize_verdict(const Verdict& v) { return to_json(v).dump(); }

inline Verdict parse_verdict(std::string_view raw) {
    const auto obj = extract_first_json_object(raw);
    if (!obj) throw VerdictParseError("no JSON object found in evaluator output");
    if (!obj->contains("state") || !obj->at("state").is_string())
        throw VerdictParseError("evaluator output lacks \"state\"");

    const auto state = obj->at("state").get<std::string>();
    if (state == "okay") return Verdict::okay();
    if (state != "problem") throw VerdictParseError("unknown state \"" + state + "\"");

    const auto it = obj->find("reason");
    if (it == obj->end() || !it->is_string() || it->get<std::string>().empty())
        throw VerdictParseError("problem verdict without reason");
    return Verdict::problem(it->get<std::string>());
}

} // namespace guiprobe
