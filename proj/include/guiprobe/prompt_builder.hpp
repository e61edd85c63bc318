// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "guiprobe/action_log.hpp"
#include "guiprobe/error.hpp"
#include "guiprobe/widget_model.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace guiprobe {

enum class PromptKind { Controller, Evaluator };

inline std::string_view prompt_kind_name(PromptKind k) {
    return k == PromptKind::Controller ? "controller" : "evaluator";
}

// An image handed to a multimodal agent. The simulated backend produces text
// renders, so media_type is usually text/plain.
struct ImageRef {
    std::string id;
    std::string media_type = "text/plain";
    std::string data;

    bool empty() const { return id.empty(); }
    bool operator==(const ImageRef&) const = default;
};

struct PromptSection {
    std::string name;
    std::string body;

    bool operator==(const PromptSection&) const = default;
};

struct PromptDocument {
    PromptKind kind = PromptKind::Controller;
    std::vector<PromptSection> sections;
    std::vector<ImageRef> attachments;

    std::string render() const {
        std::string out;
        for (std::size_t i = 0; i < sections.size(); ++i) {
            if (i) out += "\n\n";
            out += sections[i].body;
        }
        return out;
    }

    const PromptSection* section(std::string_view name) const {
        for (const auto& s : sections)
            if (s.name == name) return &s;
        return nullptr;
    }
};

struct DocEntry {
    std::string page_key;
    std::string markdown_body;
};

struct DocCorpus {
    std::vector<DocEntry> entries;
};

struct PromptOptions {
    std::size_t doc_budget = 8000;
    // Fixes the doubled "was was:" in the evaluator's action line.
    bool normalize_evaluator_wording = false;
};

inline const std::vector<std::string>& controller_section_names() {
    static const std::vector<std::string> names = {"Role",   "Task",      "Documentation", "GUI",
                                                   "Action", "ActionLog", "Closing"};
    return names;
}

inline const std::vector<std::string>& evaluator_section_names() {
    static const std::vector<std::string> names = {"Role", "Task", "Output", "Action", "Closing"};
    return names;
}

namespace prompt_text {

inline constexpr std::string_view kControllerRole =
    "Your Role:\n"
    "You are an automated system that controls the software RCE.\n"
    "You are given a task, the GUI of RCE and documentation about the software in textual form.\n"
    "You have to interact with the GUI to achieve the given task.\n"
    "You can control the GUI by sending actions to the software.\n"
    "The software will execute the actions and give you feedback about the result, by sending you the new state "
    "of the GUI and whether the action was successful or not.\n"
    "You must use the information about the GUI and the documentation to decide which actions to take.\n"
    "Include the information about the position of the GUI-Elements and the text of the GUI-Elements in your "
    "decision.\n"
    "Also consider which Parent-Elements the GUI-Elements have.\n"
    "It is important to take the context of the GUI-Elements into account when deciding which actions to take\n"
    "You can also use the feedback about the result of the actions to decide which actions to take next.";

inline constexpr std::string_view kDefaultTask =
    "Act as a GUI-Tester for the software RCE.\n"
    "Cover all pages of the Tool Integration Wizard.\n"
    "Use as many different UI-Elements as possible.";

inline constexpr std::string_view kActionElementTypes =
    "There are different types of GUI-Elements in the GUI of RCE.\n"
    "UIAWrapper and StaticWrapper are GUI-Elements that can not be interacted with.\n"
    "Their only purpose is to display information or group other Gui Elements.\n"
    "The ButtonWrapper is a GUI-Element that can be clicked.\n"
    "The EditWrapper is a GUI-Element that text can be written into.\n"
    "The ComboBoxWrapper is a GUI-Element from which one of its items can be selected.\n"
    "The CheckBoxWrapper is a GUI-Element that can be checked or unchecked.\n"
    "The RadioButtonWrapper is a GUI-Element that can be clicked to choose one option of a group.\n"
    "The ListItemWrapper and the TabItemWrapper are GUI-Elements that can be clicked to select them.\n"
    "The ToolbarWrapper and the WindowSpecification group other GUI-Elements and can not be interacted with.";

inline constexpr std::string_view kActionCommandFormat =
    "To control a GUI-Element output a command in the following Format:\n"
    "<action>(<control id>), for example click(134478)\n"
    "For each control type there are different actions posible.\n"
    "The StaticWrapper, ToolbarWrapper and UIAWrapper have no actions.\n"
    "The ButtonWrapper has the click(<control_id>) action, for example click(134478)\n"
    "The EditWrapper has the write(<control_id>, '<text>') action, for example write(2166788, 'Number of Threads')\n"
    "The ComboBoxWrapper has the select(<control_id>, '<item>') action, for example select(2166790, 'File')\n"
    "The CheckBoxWrapper has the check(<control_id>) and uncheck(<control_id>) actions, for example "
    "check(2166791)\n"
    "The RadioButtonWrapper, ListItemWrapper and TabItemWrapper have the click(<control_id>) action, for example "
    "click(2166792)\n"
    "Text arguments are enclosed in single quotes. Write a single quote inside the text as \\' and a backslash "
    "as \\\\.";

inline constexpr std::string_view kActionOutputFormat =
    "You must format your output in JSON as the following:\n"
    "{\n"
    "    \"action\": \"<action>\",\n"
    "    \"explanation\": \"<what the action does and why you do it>\"\n"
    "}\n"
    "example 1:\n"
    "{\n"
    "    \"action\": \"click(134478)\",\n"
    "    \"explanation\": \"click next to get to the second page\"\n"
    "}\n"
    "example 2:\n"
    "{\n"
    "    \"action\": \"write(2166788, 'Number of Threads')\",\n"
    "    \"explanation\": \"Enter a display name 'Number of Threads' for the 'numThreads' property to make the key "
    "human-readable and provide context in the properties view.\"\n"
    "}";

inline constexpr std::string_view kControllerClosing =
    "What action do you want to take to do the next step for achieving the given task?";

inline constexpr std::string_view kEvaluatorRole =
    "You are a very experienced GUI Tester.\n"
    "You observe the GUI of a Software.\n"
    "A system performs actions on the GUI.\n"
    "After each action taken on the GUI you evaluate whether the software behaves as expected or if there are any "
    "issues.\n"
    "You are provided with a screenshot of the GUI before and after the action.";

inline constexpr std::string_view kEvaluatorTask =
    "Check if there are any inconsistencies, unexpected behaviour or UI Elements that are not visible.\n"
    "In detail check the following:\n"
    "- the size, position, height, width of the visual elements\n"
    "- Checking the message displayed, frequency and content\n"
    "- Checking alignment of radio buttons, drop downs\n"
    "- Verifying the title of each section and their correctness\n"
    "- Cross-checking the colors and its synchronization with the theme";

inline constexpr std::string_view kEvaluatorOutput =
    "Format your output as JSON.\n"
    "For example:\n"
    "{\n"
    "    \"state\": \"problem\",\n"
    "    \"reason\": \"The Text of the Description is not fully visible.\"\n"
    "}\n"
    "If there are no problems output:\n"
    "{\n"
    "    \"state\": \"okay\"\n"
    "}";

inline constexpr std::string_view kEvaluatorActionLead = "The action performed between the two images was was:";
inline constexpr std::string_view kEvaluatorActionLeadNormalized = "The action performed between the two images was:";

inline constexpr std::string_view kEvaluatorClosing =
    "Are there any problems with the GUI after the action was performed?";

} // namespace prompt_text

namespace detail {

// Longest prefix of s within budget bytes that does not split a UTF-8 sequence.
inline std::string utf8_prefix(std::string_view s, std::size_t budget) {
    if (s.size() <= budget) return std::string(s);
    std::size_t n = budget;
    while (n > 0 && (static_cast<unsigned char>(s[n]) & 0xC0) == 0x80) --n;
    return std::string(s.substr(0, n));
}

inline const WidgetNode* page_root(const WidgetNode& tree) {
    const WidgetNode* hit = nullptr;
    for_each_node(tree, [&](const WidgetNode& n) {
        if (!hit && n.kind == WidgetKind::Dialog) hit = &n;
    });
    return hit;
}

} // namespace detail

// The corpus entry for the page marked on the Dialog root ("page" key). With
// no match, whole entries are concatenated while they fit in the budget.
inline std::string select_documentation(const DocCorpus& docs, const WidgetNode& tree, std::size_t budget = 8000) {
    if (docs.entries.empty()) return {};
    if (const auto* root = detail::page_root(tree)) {
        if (const auto* page = root->string_state("page")) {
            for (const auto& e : docs.entries)
                if (e.page_key == *page) return detail::utf8_prefix(e.markdown_body, budget);
        }
    }
    std::string out;
    for (const auto& e : docs.entries) {
        const std::size_t extra = (out.empty() ? 0 : 2) + e.markdown_body.size();
        if (out.size() + extra > budget) break;
        if (!out.empty()) out += "\n\n";
        out += e.markdown_body;
    }
    if (out.empty()) out = detail::utf8_prefix(docs.entries.front().markdown_body, budget);
    return out;
}

inline PromptDocument build_controller_prompt(std::string_view task, const DocCorpus& docs, const WidgetNode& tree,
                                              const std::vector<ActionLogEntry>& log,
                                              const std::optional<ImageRef>& screenshot,
                                              const PromptOptions& options = {}) {
    namespace t = prompt_text;
    PromptDocument doc;
    doc.kind = PromptKind::Controller;
    doc.sections = {
        {"Role", std::string(t::kControllerRole)},
        {"Task", "Your task:\n" + std::string(task)},
        {"Documentation", "Documentation:\n" + select_documentation(docs, tree, options.doc_budget)},
        {"GUI", "The current state of the GUI:\n" + serialize_tree(tree)},
        {"Action", std::string(t::kActionElementTypes) + "\n\n" + std::string(t::kActionCommandFormat) + "\n\n" +
                       std::string(t::kActionOutputFormat)},
        {"ActionLog", "The previous actions:\n" + serialize_action_log(log)},
        {"Closing", std::string(t::kControllerClosing)},
    };
    if (screenshot && !screenshot->empty()) doc.attachments.push_back(*screenshot);
    return doc;
}

inline PromptDocument build_evaluator_prompt(std::string_view action_explanation, const ImageRef& before,
                                             const ImageRef& after, const PromptOptions& options = {}) {
    namespace t = prompt_text;
    if (before.empty()) throw Error("evaluator prompt: missing before image");
    if (after.empty()) throw Error("evaluator prompt: missing after image");

    const auto lead = options.normalize_evaluator_wording ? t::kEvaluatorActionLeadNormalized : t::kEvaluatorActionLead;
    PromptDocument doc;
    doc.kind = PromptKind::Evaluator;
    doc.sections = {
        {"Role", std::string(t::kEvaluatorRole)},
        {"Task", std::string(t::kEvaluatorTask)},
        {"Output", std::string(t::kEvaluatorOutput)},
        {"Action", std::string(lead) + "\n" + std::string(action_explanation)},
        {"Closing", std::string(t::kEvaluatorClosing)},
    };
    doc.attachments = {before, after};
    return doc;
}

} // namespace guiprobe
