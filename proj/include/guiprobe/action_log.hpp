// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "guiprobe/error.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace guiprobe {

enum class ActionStatus { Executed, Failed, Rejected };

inline std::string_view status_name(ActionStatus s) {
    switch (s) {
    case ActionStatus::Executed: return "executed";
    case ActionStatus::Failed: return "failed";
    case ActionStatus::Rejected: return "rejected";
    }
    return "rejected";
}

inline ActionStatus status_from_name(std::string_view s) {
    if (s == "executed") return ActionStatus::Executed;
    if (s == "failed") return ActionStatus::Failed;
    if (s == "rejected") return ActionStatus::Rejected;
    throw IntegrityError("unknown action status '" + std::string(s) + "'");
}

// One attempted action as the controller sees it in later prompts.
struct ActionLogEntry {
    std::string action;
    std::string explanation;
    ActionStatus status = ActionStatus::Executed;

    bool operator==(const ActionLogEntry&) const = default;
};

inline nlohmann::ordered_json to_json(const ActionLogEntry& e) {
    nlohmann::ordered_json j;
    j["action"] = e.action;
    j["explanation"] = e.explanation;
    j["status"] = status_name(e.status);
    return j;
}

inline std::string serialize_action_log(const std::vector<ActionLogEntry>& log) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& e : log) arr.push_back(to_json(e));
    return arr.dump(4);
}

} // namespace guiprobe
