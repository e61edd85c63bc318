// SPDX-License-Identifier: Apache-2.0
#pragma once

// Deterministic stand-in for the tool integration wizard: a six-page form
// state machine with top-to-bottom validation, injectable UI faults, widget
// tree snapshots and a 120x40 character "screenshot".

#include "guiprobe/action_grammar.hpp"
#include "guiprobe/action_log.hpp"
#include "guiprobe/agents.hpp"
#include "guiprobe/digest.hpp"
#include "guiprobe/error.hpp"
#include "guiprobe/widget_model.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace guiprobe {

// ---------------------------------------------------------------------------
// Fixture description

enum class FieldKind {
    Info,   // static text
    Text,   // edit field
    Choice, // combo box
    Flag,   // check box
    Radio,  // radio button group
    List,   // endpoint list with add/remove buttons and an add dialog
    Tabs,   // tab strip over a read-only summary of the other pages
};

struct FieldSpec {
    std::string label;
    FieldKind kind = FieldKind::Text;
    bool required = false;
    std::string validator; // absolute_path | positive_int | email | mapping_file
    std::string empty_message;
    std::string invalid_message;
    std::string text;                 // Info
    std::vector<std::string> options; // Choice items, Radio options, Tabs names
    std::string items_from;           // Choice: input_files | inputs | outputs
    std::string enabled_by;           // label of a Flag on the same page
    std::string direction;            // List: input | output
};

struct PageSpec {
    std::string key;
    std::string title;
    std::vector<FieldSpec> fields;
};

struct WizardSpec {
    std::string dialog_title = "Integrate a Tool as a Workflow Component";
    std::vector<PageSpec> pages;
};

enum class FaultKind { TruncatedText, GenericErrorMessage, MisalignedRect, MissingTitle, StaleError };

struct FaultSpec {
    FaultKind kind = FaultKind::TruncatedText;
    std::string page;
    std::string field; // unused for missing_title
    bool active = true;

    bool operator==(const FaultSpec&) const = default;
};

inline std::string_view fault_kind_name(FaultKind k) {
    switch (k) {
    case FaultKind::TruncatedText: return "truncated_text";
    case FaultKind::GenericErrorMessage: return "generic_error_message";
    case FaultKind::MisalignedRect: return "misaligned_rect";
    case FaultKind::MissingTitle: return "missing_title";
    case FaultKind::StaleError: return "stale_error";
    }
    return "truncated_text";
}

inline FaultKind fault_kind_from_name(std::string_view s) {
    for (auto k : {FaultKind::TruncatedText, FaultKind::GenericErrorMessage, FaultKind::MisalignedRect,
                   FaultKind::MissingTitle, FaultKind::StaleError})
        if (fault_kind_name(k) == s) return k;
    throw ConfigError("unknown fault kind '" + std::string(s) + "'");
}

inline std::string_view field_kind_name(FieldKind k) {
    switch (k) {
    case FieldKind::Info: return "info";
    case FieldKind::Text: return "text";
    case FieldKind::Choice: return "choice";
    case FieldKind::Flag: return "flag";
    case FieldKind::Radio: return "radio";
    case FieldKind::List: return "list";
    case FieldKind::Tabs: return "tabs";
    }
    return "text";
}

inline FieldKind field_kind_from_name(std::string_view s) {
    for (auto k : {FieldKind::Info, FieldKind::Text, FieldKind::Choice, FieldKind::Flag, FieldKind::Radio,
                   FieldKind::List, FieldKind::Tabs})
        if (field_kind_name(k) == s) return k;
    throw ConfigError("unknown field kind '" + std::string(s) + "'");
}

inline void to_json(nlohmann::ordered_json& j, const FieldSpec& f) {
    j = nlohmann::ordered_json::object();
    j["label"] = f.label;
    j["kind"] = field_kind_name(f.kind);
    if (f.required) j["required"] = true;
    if (!f.validator.empty()) j["validator"] = f.validator;
    if (!f.empty_message.empty()) j["empty_message"] = f.empty_message;
    if (!f.invalid_message.empty()) j["invalid_message"] = f.invalid_message;
    if (!f.text.empty()) j["text"] = f.text;
    if (!f.options.empty()) j["options"] = f.options;
    if (!f.items_from.empty()) j["items_from"] = f.items_from;
    if (!f.enabled_by.empty()) j["enabled_by"] = f.enabled_by;
    if (!f.direction.empty()) j["direction"] = f.direction;
}

inline void from_json(const nlohmann::json& j, FieldSpec& f) {
    f.label = j.at("label").get<std::string>();
    f.kind = field_kind_from_name(j.at("kind").get<std::string>());
    f.required = j.value("required", false);
    f.validator = j.value("validator", "");
    f.empty_message = j.value("empty_message", "");
    f.invalid_message = j.value("invalid_message", "");
    f.text = j.value("text", "");
    f.options = j.value("options", std::vector<std::string>{});
    f.items_from = j.value("items_from", "");
    f.enabled_by = j.value("enabled_by", "");
    f.direction = j.value("direction", "");
}

inline void to_json(nlohmann::ordered_json& j, const PageSpec& p) {
    j = nlohmann::ordered_json::object();
    j["key"] = p.key;
    j["title"] = p.title;
    j["fields"] = nlohmann::ordered_json::array();
    for (const auto& f : p.fields) {
        nlohmann::ordered_json fj;
        to_json(fj, f);
        j["fields"].push_back(fj);
    }
}

inline void from_json(const nlohmann::json& j, PageSpec& p) {
    p.key = j.at("key").get<std::string>();
    p.title = j.at("title").get<std::string>();
    p.fields.clear();
    for (const auto& fj : j.at("fields")) p.fields.push_back(fj.get<FieldSpec>());
}

inline void to_json(nlohmann::ordered_json& j, const WizardSpec& w) {
    j = nlohmann::ordered_json::object();
    j["dialog_title"] = w.dialog_title;
    j["pages"] = nlohmann::ordered_json::array();
    for (const auto& p : w.pages) {
        nlohmann::ordered_json pj;
        to_json(pj, p);
        j["pages"].push_back(pj);
    }
}

inline void from_json(const nlohmann::json& j, WizardSpec& w) {
    w.dialog_title = j.value("dialog_title", WizardSpec{}.dialog_title);
    w.pages.clear();
    for (const auto& pj : j.at("pages")) w.pages.push_back(pj.get<PageSpec>());
}

inline void to_json(nlohmann::ordered_json& j, const FaultSpec& f) {
    j = nlohmann::ordered_json::object();
    j["kind"] = fault_kind_name(f.kind);
    j["page"] = f.page;
    if (!f.field.empty()) j["field"] = f.field;
    if (!f.active) j["active"] = false;
}

inline void from_json(const nlohmann::json& j, FaultSpec& f) {
    f.kind = fault_kind_from_name(j.at("kind").get<std::string>());
    f.page = j.at("page").get<std::string>();
    f.field = j.value("field", "");
    f.active = j.value("active", true);
}

inline nlohmann::ordered_json faults_to_json(const std::vector<FaultSpec>& faults) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& f : faults) {
        nlohmann::ordered_json fj;
        to_json(fj, f);
        arr.push_back(fj);
    }
    return arr;
}

inline std::vector<FaultSpec> faults_from_json(const nlohmann::json& j) {
    std::vector<FaultSpec> out;
    for (const auto& fj : j) out.push_back(fj.get<FaultSpec>());
    return out;
}

// The default six-page fixture. Launch settings follow the order the real
// dialog validates in; the other pages carry representative fields.
inline WizardSpec default_wizard_spec() {
    auto info = [](std::string text) {
        FieldSpec f;
        f.label = "Description";
        f.kind = FieldKind::Info;
        f.text = std::move(text);
        return f;
    };
    auto text = [](std::string label, bool required, std::string empty_msg = {}, std::string validator = {},
                   std::string invalid_msg = {}) {
        FieldSpec f;
        f.label = std::move(label);
        f.kind = FieldKind::Text;
        f.required = required;
        f.empty_message = std::move(empty_msg);
        f.validator = std::move(validator);
        f.invalid_message = std::move(invalid_msg);
        return f;
    };
    auto flag = [](std::string label) {
        FieldSpec f;
        f.label = std::move(label);
        f.kind = FieldKind::Flag;
        return f;
    };

    WizardSpec w;

    PageSpec description{"tool_description", "Tool Description", {}};
    description.fields.push_back(
        info("Enter the name of the tool and describe what it does. The name is shown in the palette."));
    description.fields.push_back(text("Name", true, "The tool name must not be empty."));
    description.fields.push_back(text("Tool description", false));
    {
        FieldSpec group;
        group.label = "Group";
        group.kind = FieldKind::Choice;
        group.options = {"User Integrated Tools", "Simulation", "Preprocessing", "Postprocessing"};
        description.fields.push_back(group);
        FieldSpec type;
        type.label = "Tool type";
        type.kind = FieldKind::Radio;
        type.options = {"Common tool", "CPACS tool"};
        description.fields.push_back(type);
    }
    description.fields.push_back(text("Integrator e-mail", false, {}, "email", "The e-mail address is not valid."));
    w.pages.push_back(description);

    PageSpec io{"inputs_outputs", "Inputs and Outputs", {}};
    io.fields.push_back(info("Define the inputs and outputs of the tool. Inputs are passed to the tool on start."));
    {
        FieldSpec inputs;
        inputs.label = "Inputs";
        inputs.kind = FieldKind::List;
        inputs.direction = "input";
        io.fields.push_back(inputs);
        FieldSpec outputs = inputs;
        outputs.label = "Outputs";
        outputs.direction = "output";
        io.fields.push_back(outputs);
    }
    w.pages.push_back(io);

    PageSpec launch{"launch_settings", "Launch Settings", {}};
    launch.fields.push_back(info("Configure the directory the tool is installed in and how it is executed."));
    launch.fields.push_back(text("Tool directory", true, "The tool directory must not be empty."));
    launch.fields.push_back(text("Version", true, "The chosen version is not valid. The version must not be empty."));
    launch.fields.push_back(text("Working directory", true, "The working directory must not be empty.",
                                 "absolute_path", "Invalid path to working directory"));
    launch.fields.push_back(text("Maximum parallel instances", false, {}, "positive_int",
                                 "The maximum number of parallel instances must be a positive integer."));
    launch.fields.push_back(flag("Delete working directory after run"));
    w.pages.push_back(launch);

    PageSpec cpacs{"cpacs_properties", "CPACS Tool Properties", {}};
    cpacs.fields.push_back(info("Configure the CPACS tool specific values, e.g. the input and output mapping."));
    cpacs.fields.push_back(flag("Use CPACS tool properties"));
    {
        FieldSpec endpoint;
        endpoint.label = "Incoming CPACS endpoint name";
        endpoint.kind = FieldKind::Choice;
        endpoint.required = true;
        endpoint.items_from = "input_files";
        endpoint.enabled_by = "Use CPACS tool properties";
        endpoint.empty_message = "Select the input that represents the incoming CPACS file.";
        cpacs.fields.push_back(endpoint);
    }
    const std::string mapping_msg =
        "Supported file extensions are \".xml\" and \".xsl\". The path must be relative to the tool directory.";
    auto input_mapping = text("Input mapping file", true, "The input mapping file must not be empty.", "mapping_file",
                              mapping_msg);
    input_mapping.enabled_by = "Use CPACS tool properties";
    cpacs.fields.push_back(input_mapping);
    auto output_mapping = text("Output mapping file", false, {}, "mapping_file", mapping_msg);
    output_mapping.enabled_by = "Use CPACS tool properties";
    cpacs.fields.push_back(output_mapping);
    w.pages.push_back(cpacs);

    PageSpec review{"review", "Review", {}};
    review.fields.push_back(info("Check the configuration of the tool before it is integrated into the workflow."));
    {
        FieldSpec tabs;
        tabs.label = "Overview";
        tabs.kind = FieldKind::Tabs;
        tabs.options = {"Summary", "Configuration"};
        review.fields.push_back(tabs);
    }
    review.fields.push_back(flag("Save configuration as template"));
    w.pages.push_back(review);

    PageSpec finish{"finish", "Finish", {}};
    finish.fields.push_back(info("The tool is ready to be integrated. Press Finish to complete the integration."));
    finish.fields.push_back(flag("Open tool after integration"));
    w.pages.push_back(finish);

    return w;
}

// ---------------------------------------------------------------------------
// Control id layout

namespace ids {
inline constexpr ControlId kRoot = 0;
inline constexpr ControlId kTitle = 1;
inline constexpr ControlId kMessage = 2;
inline constexpr ControlId kBack = 3;
inline constexpr ControlId kNext = 4;
inline constexpr ControlId kFinish = 5;
inline constexpr ControlId kBanner = 6;

inline constexpr ControlId kModal = 9000;
inline constexpr ControlId kModalTitle = 9001;
inline constexpr ControlId kModalNameLabel = 9002;
inline constexpr ControlId kModalName = 9003;
inline constexpr ControlId kModalTypeLabel = 9004;
inline constexpr ControlId kModalType = 9005;
inline constexpr ControlId kModalUsageLabel = 9006;
inline constexpr ControlId kModalUsage = 9007;
inline constexpr ControlId kModalMessage = 9008;
inline constexpr ControlId kModalOk = 9009;
inline constexpr ControlId kModalCancel = 9010;

// Field i of page p owns ids [base, base + 20): base is its label, base + 1
// its main widget, base + 2.. radio options / list items / tabs, base + 10
// and base + 11 the list buttons, base + 10.. the tab content lines.
inline constexpr ControlId field_base(std::size_t page, std::size_t field) {
    return 1000 * static_cast<ControlId>(page + 1) + 20 * static_cast<ControlId>(field);
}
inline constexpr ControlId kWidget = 1;
inline constexpr ControlId kFirstItem = 2;
inline constexpr ControlId kListAdd = 10;
inline constexpr ControlId kListRemove = 11;
inline constexpr ControlId kTabLines = 10;
inline constexpr std::size_t kMaxListItems = 4;
inline constexpr std::size_t kMaxTabLines = 8;
} // namespace ids

inline const std::vector<std::string>& endpoint_data_types() {
    static const std::vector<std::string> types = {"File", "Float", "Integer", "ShortText", "Boolean", "Directory"};
    return types;
}

inline const std::vector<std::string>& endpoint_usages() {
    static const std::vector<std::string> usages = {"required", "optional"};
    return usages;
}

// ---------------------------------------------------------------------------
// Screenshots

struct SimScreenshot {
    static constexpr int kColumns = 120;
    static constexpr int kRows = 40;

    std::string page_key;
    std::string rendered;
    std::string digest;
    // Indices into the wizard's fault list that are visible in this frame.
    std::vector<std::size_t> observable_faults;

    ImageRef image() const { return {digest, "text/plain", rendered}; }
};

struct ExecResult {
    ActionStatus status = ActionStatus::Executed;
    std::string reason;

    bool executed() const { return status == ActionStatus::Executed; }
    static ExecResult ok() { return {ActionStatus::Executed, {}}; }
    static ExecResult failed(std::string why) { return {ActionStatus::Failed, std::move(why)}; }
};

namespace detail {

inline bool is_absolute_path(const std::string& s) {
    if (!s.empty() && s[0] == '/') return true;
    return s.size() >= 3 && std::isalpha(static_cast<unsigned char>(s[0])) && s[1] == ':' &&
           (s[2] == '\\' || s[2] == '/');
}

inline bool ends_with_ci(const std::string& s, std::string_view suffix) {
    if (s.size() < suffix.size()) return false;
    for (std::size_t i = 0; i < suffix.size(); ++i)
        if (std::tolower(static_cast<unsigned char>(s[s.size() - suffix.size() + i])) != suffix[i]) return false;
    return true;
}

inline bool run_validator(const std::string& name, const std::string& v) {
    if (name.empty()) return true;
    if (name == "absolute_path") return is_absolute_path(v);
    if (name == "positive_int") {
        if (v.empty() || v.size() > 9 || !std::all_of(v.begin(), v.end(), [](char c) { return c >= '0' && c <= '9'; }))
            return false;
        return std::stol(v) > 0;
    }
    if (name == "email") {
        const auto at = v.find('@');
        if (at == std::string::npos || at == 0) return false;
        const auto dot = v.find('.', at + 2);
        return dot != std::string::npos && dot + 1 < v.size() && v.find(' ') == std::string::npos;
    }
    if (name == "mapping_file") return !is_absolute_path(v) && (ends_with_ci(v, ".xml") || ends_with_ci(v, ".xsl"));
    return true;
}

inline bool known_validator(const std::string& name) {
    return name.empty() || name == "absolute_path" || name == "positive_int" || name == "email" ||
           name == "mapping_file";
}

inline std::string utf8_cut(const std::string& s, std::size_t n) {
    if (s.size() <= n) return s;
    while (n > 0 && (static_cast<unsigned char>(s[n]) & 0xC0) == 0x80) --n;
    return s.substr(0, n);
}

} // namespace detail

// ---------------------------------------------------------------------------
// The wizard

class SimWizard {
public:
    static constexpr std::size_t kTruncateAt = 40;
    static constexpr std::int64_t kLeft = 4429;
    static constexpr std::int64_t kTop = 1655;
    static constexpr std::int64_t kCellWidth = 8;
    static constexpr std::int64_t kCellHeight = 16;
    static constexpr int kFirstContentRow = 4;
    static constexpr int kLastContentRow = 34;
    static constexpr int kMessageRow = 35;
    static constexpr int kBannerRow = 36;
    static constexpr int kButtonRow = 37;

    using FieldValue = std::variant<std::string, bool>;

    struct Endpoint {
        std::string name;
        std::string data_type;
        std::string usage;
        bool operator==(const Endpoint&) const = default;
    };

    struct Message {
        std::string text;
        std::optional<std::pair<std::size_t, std::size_t>> origin; // (page, field)
        bool generic = false;
        bool stale = false;
    };

    struct Modal {
        std::size_t page = 0;
        std::size_t field = 0;
        std::string name;
        std::string data_type = "File";
        std::string usage = "required";
        std::string message;
    };

    SimWizard(std::vector<FaultSpec> faults, std::uint64_t seed, WizardSpec spec = default_wizard_spec())
        : spec_(std::move(spec)), faults_(std::move(faults)), seed_(seed) {
        check_spec();
        for (const auto& f : faults_) check_fault(f);
        std::mt19937_64 rng(seed_);
        misalign_dx_ = 9 + static_cast<std::int64_t>(rng() % 16);
        misalign_dy_ = 3 + static_cast<std::int64_t>(rng() % 5);
        reset_values();
    }

    const WizardSpec& spec() const { return spec_; }
    const std::vector<FaultSpec>& faults() const { return faults_; }
    std::uint64_t seed() const { return seed_; }
    std::size_t current_page() const { return page_; }
    const PageSpec& page() const { return spec_.pages[page_]; }
    const Message& message() const { return message_; }
    bool finished() const { return finished_; }
    bool modal_open() const { return modal_.has_value(); }

    // Jumps without validation; used to inspect page fixtures.
    void force_page(std::size_t page) {
        if (page >= spec_.pages.size()) throw Error("no page " + std::to_string(page));
        page_ = page;
        modal_.reset();
        message_ = {};
    }

    std::size_t page_index(const std::string& key) const {
        for (std::size_t i = 0; i < spec_.pages.size(); ++i)
            if (spec_.pages[i].key == key) return i;
        throw ConfigError("unknown page '" + key + "'");
    }

    std::size_t field_index(std::size_t page, const std::string& label) const {
        const auto& fields = spec_.pages.at(page).fields;
        for (std::size_t i = 0; i < fields.size(); ++i)
            if (fields[i].label == label) return i;
        throw ConfigError("unknown field '" + label + "' on page '" + spec_.pages.at(page).key + "'");
    }

    // Main widget of a field (edit, combo box, check box, list, tab strip).
    ControlId widget_id(const std::string& page_key, const std::string& label) const {
        const auto p = page_index(page_key);
        return ids::field_base(p, field_index(p, label)) + ids::kWidget;
    }
    // Radio option, list item or tab with the given index.
    ControlId item_id(const std::string& page_key, const std::string& label, std::size_t index) const {
        const auto p = page_index(page_key);
        return ids::field_base(p, field_index(p, label)) + ids::kFirstItem + static_cast<ControlId>(index);
    }
    ControlId list_add_id(const std::string& page_key, const std::string& label) const {
        const auto p = page_index(page_key);
        return ids::field_base(p, field_index(p, label)) + ids::kListAdd;
    }
    ControlId list_remove_id(const std::string& page_key, const std::string& label) const {
        const auto p = page_index(page_key);
        return ids::field_base(p, field_index(p, label)) + ids::kListRemove;
    }

    const std::vector<Endpoint>& endpoints(std::size_t page, std::size_t field) const {
        static const std::vector<Endpoint> none;
        auto it = lists_.find(ids::field_base(page, field));
        return it == lists_.end() ? none : it->second.entries;
    }

    // ---- snapshot -------------------------------------------------------

    WidgetNode snapshot() const {
        WidgetNode root = make_node("Dialog", WidgetKind::Dialog, ids::kRoot, 0, 0, SimScreenshot::kColumns,
                                    spec_.dialog_title, SimScreenshot::kRows);
        root.extra_state["page"] = page().key;
        if (finished_) root.extra_state["finished"] = true;

        const bool interactive = !modal_ && !finished_;
        if (!fault_on(FaultKind::MissingTitle, page_, std::nullopt))
            root.sub_elements.push_back(make_node("Static", WidgetKind::Static, ids::kTitle, 2, 2, 100, page().title));

        int row = kFirstContentRow;
        for (std::size_t i = 0; i < page().fields.size(); ++i) add_field_nodes(root, i, row, interactive);

        if (!message_.text.empty())
            root.sub_elements.push_back(
                make_node("Static", WidgetKind::Static, ids::kMessage, kMessageRow, 2, 116, message_.text));
        if (finished_)
            root.sub_elements.push_back(make_node("Static", WidgetKind::Static, ids::kBanner, kBannerRow, 2, 60,
                                                  "The tool has been integrated."));

        const bool last = page_ + 1 == spec_.pages.size();
        root.sub_elements.push_back(button(ids::kBack, kButtonRow, 70, 14, "< Back", interactive && page_ > 0));
        root.sub_elements.push_back(button(ids::kNext, kButtonRow, 86, 14, "Next >", interactive && !last));
        root.sub_elements.push_back(button(ids::kFinish, kButtonRow, 102, 14, "Finish", interactive && last));

        if (modal_) root.sub_elements.push_back(modal_nodes());
        return root;
    }

    // ---- execution ------------------------------------------------------

    ExecResult execute(const ActionCommand& cmd) {
        const auto tree = snapshot();
        const auto* node = find_widget(tree, cmd.control_id);
        if (!node) return ExecResult::failed("no control with id " + std::to_string(cmd.control_id));
        if (!is_actionable(node->kind)) return ExecResult::failed("not actionable");
        if (!verb_permitted(node->kind, cmd.verb))
            return ExecResult::failed(std::string(verb_name(cmd.verb)) + " is not supported by " +
                                      std::string(control_type_name(node->kind)));
        if (!node->enabled()) return ExecResult::failed("control " + std::to_string(cmd.control_id) + " is disabled");
        if (verb_takes_argument(cmd.verb) && !cmd.arg) return ExecResult::failed("missing argument");

        if (cmd.control_id >= ids::kModal) return execute_modal(cmd, *node);
        switch (cmd.control_id) {
        case ids::kBack: return go_back();
        case ids::kNext: return go_next();
        case ids::kFinish: return finish();
        default: break;
        }
        return execute_field(cmd, *node);
    }

    // ---- rendering ------------------------------------------------------

    SimScreenshot render() const {
        const auto tree = snapshot();
        std::vector<std::string> canvas(SimScreenshot::kRows, std::string(SimScreenshot::kColumns, ' '));
        draw_box(canvas, 0, 0, SimScreenshot::kRows - 1, SimScreenshot::kColumns - 1, tree.text);
        for (const auto& child : tree.sub_elements) draw_node(canvas, child);

        SimScreenshot shot;
        shot.page_key = page().key;
        for (const auto& line : canvas) {
            shot.rendered += line;
            shot.rendered += '\n';
        }
        shot.digest = sha256_hex(shot.rendered);
        shot.observable_faults = observable_faults();
        return shot;
    }

    std::vector<std::size_t> observable_faults() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < faults_.size(); ++i)
            if (fault_observable(i)) out.push_back(i);
        return out;
    }

    // Canonical ground-truth reason for a fault.
    std::string fault_reason(std::size_t index) const {
        const auto& f = faults_.at(index);
        const auto p = page_index(f.page);
        switch (f.kind) {
        case FaultKind::TruncatedText:
            return "The Text of the " + f.field + " is not fully visible.";
        case FaultKind::GenericErrorMessage: {
            const auto& spec = spec_.pages[p].fields[field_index(p, f.field)];
            return "The error message '" + spec.invalid_message + "' is visible even though no value was provided for '" +
                   f.field + "'.";
        }
        case FaultKind::MisalignedRect:
            return "The element '" + f.field + "' is not aligned with the other elements of the page.";
        case FaultKind::MissingTitle:
            return "The page '" + spec_.pages[p].title + "' is shown without a title.";
        case FaultKind::StaleError: {
            const auto& spec = spec_.pages[p].fields[field_index(p, f.field)];
            const auto& msg = spec.empty_message.empty() ? spec.invalid_message : spec.empty_message;
            return "The error message '" + msg + "' is still shown after '" + f.field + "' was corrected.";
        }
        }
        return {};
    }

private:
    struct ListState {
        std::vector<Endpoint> entries;
        std::optional<std::size_t> selected;
    };

    // ---- construction checks ----------------------------------------------

    void check_spec() const {
        if (spec_.pages.empty()) throw ConfigError("wizard has no pages");
        std::set<std::string> keys;
        for (std::size_t p = 0; p < spec_.pages.size(); ++p) {
            const auto& page = spec_.pages[p];
            if (!keys.insert(page.key).second) throw ConfigError("duplicate page key '" + page.key + "'");
            if (page.fields.size() > 40) throw ConfigError("page '" + page.key + "' has too many fields");
            std::set<std::string> labels;
            int rows = kFirstContentRow;
            for (const auto& f : page.fields) {
                if (!labels.insert(f.label).second)
                    throw ConfigError("duplicate field '" + f.label + "' on page '" + page.key + "'");
                if (!detail::known_validator(f.validator)) throw ConfigError("unknown validator '" + f.validator + "'");
                if (!f.enabled_by.empty()) {
                    const auto it = std::find_if(page.fields.begin(), page.fields.end(),
                                                 [&](const FieldSpec& o) { return o.label == f.enabled_by; });
                    if (it == page.fields.end() || it->kind != FieldKind::Flag)
                        throw ConfigError("field '" + f.label + "' is enabled by unknown flag '" + f.enabled_by + "'");
                }
                if (f.kind == FieldKind::List && f.direction != "input" && f.direction != "output")
                    throw ConfigError("list '" + f.label + "' needs direction input or output");
                if (f.kind == FieldKind::Choice && f.options.empty() && f.items_from != "input_files" &&
                    f.items_from != "inputs" && f.items_from != "outputs")
                    throw ConfigError("choice '" + f.label + "' has no options");
                if ((f.kind == FieldKind::Radio || f.kind == FieldKind::Tabs) &&
                    (f.options.empty() || f.options.size() > 8))
                    throw ConfigError("field '" + f.label + "' needs 1 to 8 options");
                rows += field_height(f);
            }
            if (rows > kLastContentRow + 1) throw ConfigError("page '" + page.key + "' does not fit the dialog");
        }
    }

    void check_fault(const FaultSpec& f) const {
        const auto where = std::string(fault_kind_name(f.kind)) + " fault on '" + f.page + "/" + f.field + "'";
        std::size_t p = 0;
        try {
            p = page_index(f.page);
        } catch (const ConfigError&) {
            throw ConfigError("unknown fault target: " + where);
        }
        if (f.kind == FaultKind::MissingTitle) return;
        const auto& fields = spec_.pages[p].fields;
        const auto it =
            std::find_if(fields.begin(), fields.end(), [&](const FieldSpec& s) { return s.label == f.field; });
        if (it == fields.end()) throw ConfigError("unknown fault target: " + where);

        switch (f.kind) {
        case FaultKind::TruncatedText:
            if (!(it->kind == FieldKind::Text || (it->kind == FieldKind::Info && it->text.size() > kTruncateAt)))
                throw ConfigError(where + " needs an edit field or a static text longer than 40 characters");
            break;
        case FaultKind::GenericErrorMessage:
            if (it->kind != FieldKind::Text || !it->required || it->invalid_message.empty() ||
                it->invalid_message == it->empty_message)
                throw ConfigError(where + " needs a required edit field with a distinct invalid message");
            break;
        case FaultKind::MisalignedRect:
            if (it->kind != FieldKind::Text && it->kind != FieldKind::Choice && it->kind != FieldKind::Flag)
                throw ConfigError(where + " needs an edit field, combo box or check box");
            break;
        case FaultKind::StaleError:
            if (it->empty_message.empty() && it->invalid_message.empty())
                throw ConfigError(where + " needs a field with a validation message");
            break;
        case FaultKind::MissingTitle: break;
        }
    }

    void reset_values() {
        for (std::size_t p = 0; p < spec_.pages.size(); ++p) {
            for (std::size_t i = 0; i < spec_.pages[p].fields.size(); ++i) {
                const auto& f = spec_.pages[p].fields[i];
                const auto id = ids::field_base(p, i) + ids::kWidget;
                switch (f.kind) {
                case FieldKind::Text: values_[id] = std::string(); break;
                case FieldKind::Choice: values_[id] = f.options.empty() ? std::string() : f.options.front(); break;
                case FieldKind::Radio:
                case FieldKind::Tabs: values_[id] = f.options.front(); break;
                case FieldKind::Flag: values_[id] = false; break;
                case FieldKind::List: lists_[ids::field_base(p, i)] = {}; break;
                case FieldKind::Info: break;
                }
            }
        }
    }

    // ---- faults -----------------------------------------------------------

    bool fault_on(FaultKind kind, std::size_t page, std::optional<std::size_t> field) const {
        for (const auto& f : faults_) {
            if (!f.active || f.kind != kind) continue;
            const auto p = page_index(f.page);
            if (p != page) continue;
            if (!field) return true;
            if (field_index(p, f.field) == *field) return true;
        }
        return false;
    }

    bool fault_observable(std::size_t index) const {
        const auto& f = faults_[index];
        if (!f.active) return false;
        const auto p = page_index(f.page);
        switch (f.kind) {
        case FaultKind::MissingTitle: return page_ == p;
        case FaultKind::MisalignedRect: return page_ == p;
        case FaultKind::TruncatedText: {
            if (page_ != p) return false;
            const auto i = field_index(p, f.field);
            const auto& spec = spec_.pages[p].fields[i];
            return displayed_text(p, i, spec).size() > kTruncateAt;
        }
        case FaultKind::GenericErrorMessage:
            return message_.generic && message_.origin == std::pair{p, field_index(p, f.field)};
        case FaultKind::StaleError:
            return message_.stale && message_.origin == std::pair{p, field_index(p, f.field)};
        }
        return false;
    }

    // ---- values -----------------------------------------------------------

    const std::string& text_value(std::size_t page, std::size_t field) const {
        return std::get<std::string>(values_.at(ids::field_base(page, field) + ids::kWidget));
    }

    bool flag_value(std::size_t page, std::size_t field) const {
        return std::get<bool>(values_.at(ids::field_base(page, field) + ids::kWidget));
    }

    std::string displayed_text(std::size_t page, std::size_t field, const FieldSpec& spec) const {
        if (spec.kind == FieldKind::Info) return spec.text;
        if (spec.kind == FieldKind::Text) return text_value(page, field);
        return spec.label;
    }

    std::vector<std::string> choice_items(const FieldSpec& f) const {
        if (f.items_from.empty()) return f.options;
        std::vector<std::string> items;
        for (std::size_t p = 0; p < spec_.pages.size(); ++p) {
            for (std::size_t i = 0; i < spec_.pages[p].fields.size(); ++i) {
                const auto& lf = spec_.pages[p].fields[i];
                if (lf.kind != FieldKind::List) continue;
                const bool is_input = lf.direction == "input";
                for (const auto& e : endpoints(p, i)) {
                    if (f.items_from == "outputs" && !is_input) items.push_back(e.name);
                    if (f.items_from == "inputs" && is_input) items.push_back(e.name);
                    if (f.items_from == "input_files" && is_input && e.data_type == "File") items.push_back(e.name);
                }
            }
        }
        return items;
    }

    // A selection that no longer exists in a dynamic item list reads as empty.
    std::string choice_value(std::size_t page, std::size_t field) const {
        const auto& spec = spec_.pages[page].fields[field];
        const auto& v = text_value(page, field);
        const auto items = choice_items(spec);
        return std::find(items.begin(), items.end(), v) != items.end() ? v : std::string();
    }

    bool field_enabled(std::size_t page, std::size_t field) const {
        const auto& spec = spec_.pages[page].fields[field];
        if (spec.enabled_by.empty()) return true;
        return flag_value(page, field_index(page, spec.enabled_by));
    }

    // ---- validation -------------------------------------------------------

    std::optional<Message> field_failure(std::size_t page, std::size_t field) const {
        const auto& spec = spec_.pages[page].fields[field];
        if (!field_enabled(page, field)) return std::nullopt;
        std::string value;
        switch (spec.kind) {
        case FieldKind::Text: value = text_value(page, field); break;
        case FieldKind::Choice: value = choice_value(page, field); break;
        case FieldKind::List:
            if (spec.required && endpoints(page, field).empty())
                return Message{spec.empty_message, std::pair{page, field}, false, false};
            return std::nullopt;
        default: return std::nullopt;
        }
        if (value.empty()) {
            if (!spec.required) return std::nullopt;
            if (fault_on(FaultKind::GenericErrorMessage, page, field))
                return Message{spec.invalid_message, std::pair{page, field}, true, false};
            return Message{spec.empty_message, std::pair{page, field}, false, false};
        }
        if (!detail::run_validator(spec.validator, value))
            return Message{spec.invalid_message, std::pair{page, field}, false, false};
        return std::nullopt;
    }

    // First failing field in declaration order.
    std::optional<Message> validate_page(std::size_t page) const {
        for (std::size_t i = 0; i < spec_.pages[page].fields.size(); ++i)
            if (auto m = field_failure(page, i)) return m;
        return std::nullopt;
    }

    bool message_is_sticky() const {
        return message_.origin && fault_on(FaultKind::StaleError, message_.origin->first, message_.origin->second);
    }

    // Replace the message unless the stale_error fault pins it; forced
    // replacement (a failed Next/Finish) always wins.
    void update_message(std::optional<Message> next, bool forced) {
        if (!forced && message_is_sticky() && !message_.text.empty()) {
            const bool same_origin = next && next->origin == message_.origin;
            if (!same_origin) {
                message_.stale = true;
                return;
            }
        }
        message_ = next.value_or(Message{});
    }

    void revalidate_after_edit() {
        if (message_.text.empty() || !message_.origin || message_.origin->first != page_) return;
        update_message(validate_page(page_), false);
    }

    // ---- actions ----------------------------------------------------------

    ExecResult go_next() {
        if (auto failure = validate_page(page_)) {
            update_message(std::move(failure), true);
            return ExecResult::ok();
        }
        update_message(std::nullopt, false);
        ++page_;
        return ExecResult::ok();
    }

    ExecResult go_back() {
        update_message(std::nullopt, false);
        --page_;
        return ExecResult::ok();
    }

    ExecResult finish() {
        if (auto failure = validate_page(page_)) {
            update_message(std::move(failure), true);
            return ExecResult::ok();
        }
        update_message(std::nullopt, false);
        finished_ = true;
        return ExecResult::ok();
    }

    ExecResult execute_field(const ActionCommand& cmd, const WidgetNode& node) {
        const auto rel = cmd.control_id - ids::field_base(page_, 0);
        const auto field = static_cast<std::size_t>(rel / 20);
        const auto sub = rel % 20;
        if (rel < 0 || field >= page().fields.size()) return ExecResult::failed("not actionable");
        const auto& spec = page().fields[field];
        const auto base = ids::field_base(page_, field);
        auto& value = values_[base + ids::kWidget];

        switch (spec.kind) {
        case FieldKind::Text:
            value = *cmd.arg;
            break;
        case FieldKind::Choice: {
            const auto* items = node.list_state("items");
            if (!items || std::find(items->begin(), items->end(), *cmd.arg) == items->end())
                return ExecResult::failed("'" + *cmd.arg + "' is not an item of '" + spec.label + "'");
            value = *cmd.arg;
            break;
        }
        case FieldKind::Flag:
            value = cmd.verb == Verb::Check;
            break;
        case FieldKind::Radio:
            value = spec.options.at(static_cast<std::size_t>(sub - ids::kFirstItem));
            break;
        case FieldKind::Tabs:
            value = spec.options.at(static_cast<std::size_t>(sub - ids::kFirstItem));
            return ExecResult::ok();
        case FieldKind::List: {
            auto& list = lists_[base];
            if (sub == ids::kListAdd) {
                modal_ = Modal{page_, field, {}, "File", "required", {}};
                return ExecResult::ok();
            }
            if (sub == ids::kListRemove) {
                list.entries.erase(list.entries.begin() + static_cast<std::ptrdiff_t>(*list.selected));
                list.selected.reset();
                break;
            }
            list.selected = static_cast<std::size_t>(sub - ids::kFirstItem);
            return ExecResult::ok();
        }
        case FieldKind::Info: return ExecResult::failed("not actionable");
        }
        revalidate_after_edit();
        return ExecResult::ok();
    }

    ExecResult execute_modal(const ActionCommand& cmd, const WidgetNode& node) {
        auto& m = *modal_;
        switch (cmd.control_id) {
        case ids::kModalName: m.name = *cmd.arg; break;
        case ids::kModalType:
        case ids::kModalUsage: {
            const auto* items = node.list_state("items");
            if (!items || std::find(items->begin(), items->end(), *cmd.arg) == items->end())
                return ExecResult::failed("'" + *cmd.arg + "' is not an item");
            (cmd.control_id == ids::kModalType ? m.data_type : m.usage) = *cmd.arg;
            break;
        }
        case ids::kModalCancel: modal_.reset(); break;
        case ids::kModalOk: {
            auto& list = lists_[ids::field_base(m.page, m.field)];
            const auto& entries = list.entries;
            const bool duplicate = std::any_of(entries.begin(), entries.end(),
                                               [&](const Endpoint& e) { return e.name == m.name; });
            if (m.name.empty()) {
                m.message = "The name must not be empty.";
            } else if (duplicate) {
                m.message = "An endpoint with this name already exists.";
            } else if (entries.size() >= ids::kMaxListItems) {
                m.message = "At most " + std::to_string(ids::kMaxListItems) + " endpoints can be defined.";
            } else {
                const bool input = spec_.pages[m.page].fields[m.field].direction == "input";
                list.entries.push_back({m.name, m.data_type, input ? m.usage : std::string()});
                modal_.reset();
                revalidate_after_edit();
            }
            break;
        }
        default: return ExecResult::failed("not actionable");
        }
        return ExecResult::ok();
    }

    // ---- tree construction ------------------------------------------------

    static WidgetNode make_node(std::string cls, WidgetKind kind, ControlId id, int row, int col, int width,
                                std::string text, int height = 1) {
        WidgetNode n;
        n.class_name = std::move(cls);
        n.kind = kind;
        n.control_id = id;
        n.rectangle = {kLeft + col * kCellWidth, kTop + row * kCellHeight, kLeft + (col + width) * kCellWidth,
                       kTop + (row + height) * kCellHeight};
        n.text = std::move(text);
        return n;
    }

    static WidgetNode button(ControlId id, int row, int col, int width, std::string text, bool enabled) {
        auto n = make_node("Button", WidgetKind::Button, id, row, col, width, std::move(text));
        n.extra_state["enabled"] = enabled;
        return n;
    }

    static int field_height(const FieldSpec& f) {
        switch (f.kind) {
        case FieldKind::List: return 7;
        case FieldKind::Tabs: return 10;
        default: return 2;
        }
    }

    void shift(WidgetNode& n) const {
        n.rectangle.left += misalign_dx_;
        n.rectangle.right += misalign_dx_;
        n.rectangle.top += misalign_dy_;
        n.rectangle.bottom += misalign_dy_;
    }

    void add_field_nodes(WidgetNode& root, std::size_t i, int& row, bool interactive) const {
        const auto& f = page().fields[i];
        const auto base = ids::field_base(page_, i);
        const auto widget_id = base + ids::kWidget;
        const bool enabled = interactive && field_enabled(page_, i);
        const bool truncate = fault_on(FaultKind::TruncatedText, page_, i);
        const bool misaligned = fault_on(FaultKind::MisalignedRect, page_, i);
        auto cut = [&](const std::string& s) { return truncate ? detail::utf8_cut(s, kTruncateAt) : s; };
        auto label = [&]() { return make_node("Static", WidgetKind::Static, base, row, 2, 26, f.label); };

        switch (f.kind) {
        case FieldKind::Info:
            root.sub_elements.push_back(make_node("Static", WidgetKind::Static, widget_id, row, 2, 114, cut(f.text)));
            break;
        case FieldKind::Text: {
            root.sub_elements.push_back(label());
            auto edit = make_node("Edit", WidgetKind::Edit, widget_id, row, 30, 60, cut(text_value(page_, i)));
            edit.extra_state["enabled"] = enabled;
            if (misaligned) shift(edit);
            root.sub_elements.push_back(std::move(edit));
            break;
        }
        case FieldKind::Choice: {
            root.sub_elements.push_back(label());
            const auto selected = choice_value(page_, i);
            auto combo = make_node("ComboBox", WidgetKind::ComboBox, widget_id, row, 30, 60, selected);
            combo.extra_state["enabled"] = enabled;
            combo.extra_state["items"] = choice_items(f);
            combo.extra_state["selected_item"] = selected;
            if (misaligned) shift(combo);
            root.sub_elements.push_back(std::move(combo));
            break;
        }
        case FieldKind::Flag: {
            auto box = make_node("CheckBox", WidgetKind::CheckBox, widget_id, row, 2, 60, f.label);
            box.extra_state["checked"] = flag_value(page_, i);
            box.extra_state["enabled"] = enabled;
            if (misaligned) shift(box);
            root.sub_elements.push_back(std::move(box));
            break;
        }
        case FieldKind::Radio: {
            root.sub_elements.push_back(label());
            auto group = make_node("GroupBox", WidgetKind::Container, widget_id, row, 30, 88, "");
            const auto& selected = text_value(page_, i);
            for (std::size_t k = 0; k < f.options.size(); ++k) {
                auto opt = make_node("RadioButton", WidgetKind::RadioButton,
                                     base + ids::kFirstItem + static_cast<ControlId>(k), row,
                                     30 + 22 * static_cast<int>(k), 20, f.options[k]);
                opt.extra_state["checked"] = f.options[k] == selected;
                opt.extra_state["enabled"] = enabled;
                group.sub_elements.push_back(std::move(opt));
            }
            root.sub_elements.push_back(std::move(group));
            break;
        }
        case FieldKind::List: {
            root.sub_elements.push_back(label());
            const auto& state = lists_.at(base);
            auto list = make_node("List", WidgetKind::Container, widget_id, row + 1, 4, 40, "",
                                  static_cast<int>(ids::kMaxListItems));
            for (std::size_t k = 0; k < state.entries.size(); ++k) {
                const auto& e = state.entries[k];
                auto item = make_node("ListItem", WidgetKind::ListItem,
                                      base + ids::kFirstItem + static_cast<ControlId>(k),
                                      row + 1 + static_cast<int>(k), 4, 40, e.name + " (" + e.data_type + ")");
                item.extra_state["selected"] = state.selected == k;
                item.extra_state["enabled"] = enabled;
                list.sub_elements.push_back(std::move(item));
            }
            root.sub_elements.push_back(std::move(list));
            const std::string noun = f.direction == "input" ? "Input" : "Output";
            root.sub_elements.push_back(
                button(base + ids::kListAdd, row + 5, 4, 18, "Add " + noun + "...", enabled));
            root.sub_elements.push_back(button(base + ids::kListRemove, row + 5, 24, 18, "Remove " + noun,
                                               enabled && state.selected.has_value()));
            break;
        }
        case FieldKind::Tabs: {
            auto strip = make_node("Tab", WidgetKind::Container, widget_id, row, 2, 114, "", 1);
            const auto& selected = text_value(page_, i);
            for (std::size_t k = 0; k < f.options.size(); ++k) {
                auto tab = make_node("TabItem", WidgetKind::TabItem, base + ids::kFirstItem + static_cast<ControlId>(k),
                                     row, 2 + 16 * static_cast<int>(k), 14, f.options[k]);
                tab.extra_state["selected"] = f.options[k] == selected;
                tab.extra_state["enabled"] = enabled;
                strip.sub_elements.push_back(std::move(tab));
            }
            root.sub_elements.push_back(std::move(strip));
            const auto lines = selected == f.options.front() ? summary_lines(false) : summary_lines(true);
            for (std::size_t k = 0; k < lines.size(); ++k)
                root.sub_elements.push_back(make_node("Static", WidgetKind::Static,
                                                      base + ids::kTabLines + static_cast<ControlId>(k),
                                                      row + 1 + static_cast<int>(k), 4, 110, lines[k]));
            break;
        }
        }
        row += field_height(f);
    }

    // Read-only overview of what was entered on the other pages.
    std::vector<std::string> summary_lines(bool config_style) const {
        std::vector<std::string> lines;
        auto emit = [&](const std::string& label, const std::string& value) {
            if (value.empty() || lines.size() >= ids::kMaxTabLines) return;
            if (!config_style) {
                lines.push_back(label + ": " + value);
                return;
            }
            std::string key;
            for (char c : label) key += c == ' ' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            lines.push_back(key + " = " + value);
        };
        for (std::size_t p = 0; p < spec_.pages.size(); ++p) {
            for (std::size_t i = 0; i < spec_.pages[p].fields.size(); ++i) {
                const auto& f = spec_.pages[p].fields[i];
                if (f.kind == FieldKind::Text || f.kind == FieldKind::Radio) emit(f.label, text_value(p, i));
                if (f.kind == FieldKind::Choice) emit(f.label, choice_value(p, i));
                if (f.kind == FieldKind::List) {
                    std::string names;
                    for (const auto& e : endpoints(p, i)) names += (names.empty() ? "" : ", ") + e.name;
                    emit(f.label, names);
                }
            }
        }
        return lines;
    }

    WidgetNode modal_nodes() const {
        const auto& m = *modal_;
        const bool input = spec_.pages[m.page].fields[m.field].direction == "input";
        auto dialog = make_node("Dialog", WidgetKind::Dialog, ids::kModal, 10, 20, 80,
                                input ? "Add Input" : "Add Output", 17);
        auto& subs = dialog.sub_elements;
        subs.push_back(make_node("Static", WidgetKind::Static, ids::kModalTitle, 11, 22, 76,
                                 input ? "Add Input" : "Add Output"));
        subs.push_back(make_node("Static", WidgetKind::Static, ids::kModalNameLabel, 13, 22, 20, "Name"));
        auto name = make_node("Edit", WidgetKind::Edit, ids::kModalName, 13, 44, 40, m.name);
        name.extra_state["enabled"] = true;
        subs.push_back(std::move(name));
        subs.push_back(make_node("Static", WidgetKind::Static, ids::kModalTypeLabel, 15, 22, 20, "Data type"));
        auto type = make_node("ComboBox", WidgetKind::ComboBox, ids::kModalType, 15, 44, 40, m.data_type);
        type.extra_state["enabled"] = true;
        type.extra_state["items"] = endpoint_data_types();
        type.extra_state["selected_item"] = m.data_type;
        subs.push_back(std::move(type));
        if (input) {
            subs.push_back(make_node("Static", WidgetKind::Static, ids::kModalUsageLabel, 17, 22, 20, "Usage"));
            auto usage = make_node("ComboBox", WidgetKind::ComboBox, ids::kModalUsage, 17, 44, 40, m.usage);
            usage.extra_state["enabled"] = true;
            usage.extra_state["items"] = endpoint_usages();
            usage.extra_state["selected_item"] = m.usage;
            subs.push_back(std::move(usage));
        }
        if (!m.message.empty())
            subs.push_back(make_node("Static", WidgetKind::Static, ids::kModalMessage, 21, 22, 76, m.message));
        subs.push_back(button(ids::kModalOk, 24, 60, 12, "OK", true));
        subs.push_back(button(ids::kModalCancel, 24, 80, 14, "Cancel", true));
        return dialog;
    }

    // ---- drawing ----------------------------------------------------------

    static void put(std::vector<std::string>& canvas, std::int64_t row, std::int64_t col, const std::string& text,
                    std::int64_t width) {
        if (row < 0 || row >= SimScreenshot::kRows) return;
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(text.size()) && i < width; ++i) {
            const auto c = col + i;
            if (c < 0 || c >= SimScreenshot::kColumns) continue;
            canvas[static_cast<std::size_t>(row)][static_cast<std::size_t>(c)] = text[static_cast<std::size_t>(i)];
        }
    }

    static void draw_box(std::vector<std::string>& canvas, std::int64_t top, std::int64_t left, std::int64_t bottom,
                         std::int64_t right, const std::string& title) {
        for (auto r = top; r <= bottom; ++r) {
            for (auto c = left; c <= right; ++c) {
                char ch = ' ';
                const bool edge_row = r == top || r == bottom;
                const bool edge_col = c == left || c == right;
                if (edge_row && edge_col) ch = '+';
                else if (edge_row) ch = '-';
                else if (edge_col) ch = '|';
                put(canvas, r, c, std::string(1, ch), 1);
            }
        }
        if (!title.empty()) put(canvas, top, left + 2, " " + title + " ", right - left - 3);
    }

    static std::string pad(std::string s, std::size_t width) {
        if (s.size() > width) s.resize(width);
        s.append(width - s.size(), ' ');
        return s;
    }

    void draw_node(std::vector<std::string>& canvas, const WidgetNode& n) const {
        const auto row = (n.rectangle.top - kTop) / kCellHeight;
        const auto col = (n.rectangle.left - kLeft) / kCellWidth;
        const auto width = (n.rectangle.right - n.rectangle.left) / kCellWidth;
        const auto w = static_cast<std::size_t>(std::max<std::int64_t>(width, 2));
        const bool enabled = n.enabled();

        switch (n.kind) {
        case WidgetKind::Static: put(canvas, row, col, n.text, width); break;
        case WidgetKind::Edit: put(canvas, row, col, "[" + pad(n.text, w - 2) + "]", width); break;
        case WidgetKind::ComboBox: put(canvas, row, col, "[" + pad(n.text, w - 4) + " v]", width); break;
        case WidgetKind::Button:
            put(canvas, row, col, (enabled ? "[" : "(") + n.text + (enabled ? "]" : ")"), width);
            break;
        case WidgetKind::CheckBox:
            put(canvas, row, col, (n.flag("checked").value_or(false) ? "[x] " : "[ ] ") + n.text, width);
            break;
        case WidgetKind::RadioButton:
            put(canvas, row, col, (n.flag("checked").value_or(false) ? "(*) " : "( ) ") + n.text, width);
            break;
        case WidgetKind::ListItem:
            put(canvas, row, col, (n.flag("selected").value_or(false) ? "> " : "  ") + n.text, width);
            break;
        case WidgetKind::TabItem:
            put(canvas, row, col, n.flag("selected").value_or(false) ? "[" + n.text + "]" : " " + n.text + " ", width);
            break;
        case WidgetKind::Dialog: {
            const auto height = (n.rectangle.bottom - n.rectangle.top) / kCellHeight;
            draw_box(canvas, row, col, row + height - 1, col + width - 1, n.text);
            break;
        }
        case WidgetKind::Toolbar:
        case WidgetKind::Container: break;
        }
        for (const auto& child : n.sub_elements) draw_node(canvas, child);
    }

    WizardSpec spec_;
    std::vector<FaultSpec> faults_;
    std::uint64_t seed_ = 0;
    std::int64_t misalign_dx_ = 9;
    std::int64_t misalign_dy_ = 3;

    std::size_t page_ = 0;
    std::map<ControlId, FieldValue> values_;
    std::map<ControlId, ListState> lists_;
    std::optional<Modal> modal_;
    Message message_;
    bool finished_ = false;
};

inline SimWizard new_wizard(std::vector<FaultSpec> faults, std::uint64_t seed, WizardSpec spec = default_wizard_spec()) {
    return SimWizard(std::move(faults), seed, std::move(spec));
}

// Ground truth for the evaluator role: a problem for every fault that
// became visible between the two frames.
inline Verdict oracle_evaluate(const SimScreenshot& before, const SimScreenshot& after, const ActionCommand& /*cmd*/,
                               const SimWizard& sim) {
    std::vector<std::string> reasons;
    for (auto index : after.observable_faults) {
        const bool seen = std::find(before.observable_faults.begin(), before.observable_faults.end(), index) !=
                          before.observable_faults.end();
        if (!seen) reasons.push_back(sim.fault_reason(index));
    }
    if (reasons.empty()) return Verdict::okay();
    std::string joined;
    for (const auto& r : reasons) joined += (joined.empty() ? "" : "; ") + r;
    return Verdict::problem(joined);
}

} // namespace guiprobe
