// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "guiprobe/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

namespace guiprobe {

using ControlId = std::int64_t;

struct Rect {
    std::int64_t left = 0;
    std::int64_t top = 0;
    std::int64_t right = 0;
    std::int64_t bottom = 0;

    bool valid() const { return left <= right && top <= bottom; }
    bool operator==(const Rect&) const = default;
};

enum class WidgetKind {
    Button,
    Edit,
    ComboBox,
    CheckBox,
    RadioButton,
    Static,
    Toolbar,
    Container,
    Dialog,
    ListItem,
    TabItem,
};

enum class Verb { Click, Write, Select, Check, Uncheck };

// Extra per-widget state such as checked/enabled/selected_item. Serialized
// flat into the node object, after "text", in key order.
using StateValue = std::variant<bool, std::int64_t, std::string, std::vector<std::string>>;
using ExtraState = std::map<std::string, StateValue>;

struct WidgetNode {
    std::string class_name;
    WidgetKind kind = WidgetKind::Container;
    ControlId control_id = 0;
    Rect rectangle;
    std::string text;
    ExtraState extra_state;
    std::vector<WidgetNode> sub_elements;

    bool operator==(const WidgetNode&) const = default;

    std::optional<bool> flag(const std::string& key) const {
        auto it = extra_state.find(key);
        if (it == extra_state.end()) return std::nullopt;
        if (const auto* b = std::get_if<bool>(&it->second)) return *b;
        return std::nullopt;
    }

    const std::string* string_state(const std::string& key) const {
        auto it = extra_state.find(key);
        if (it == extra_state.end()) return nullptr;
        return std::get_if<std::string>(&it->second);
    }

    const std::vector<std::string>* list_state(const std::string& key) const {
        auto it = extra_state.find(key);
        if (it == extra_state.end()) return nullptr;
        return std::get_if<std::vector<std::string>>(&it->second);
    }

    bool enabled() const { return flag("enabled").value_or(true); }
};

struct ArgSpec {
    enum class Kind { None, FreeText, OneOf };
    Kind kind = Kind::None;
    std::vector<std::string> items; // OneOf only

    bool operator==(const ArgSpec&) const = default;
};

struct PossibleAction {
    ControlId control_id = 0;
    Verb verb = Verb::Click;
    ArgSpec arg_spec;

    bool operator==(const PossibleAction&) const = default;
};

inline std::string_view verb_name(Verb v) {
    switch (v) {
    case Verb::Click: return "click";
    case Verb::Write: return "write";
    case Verb::Select: return "select";
    case Verb::Check: return "check";
    case Verb::Uncheck: return "uncheck";
    }
    return "click";
}

inline std::optional<Verb> verb_from_name(std::string_view s) {
    if (s == "click") return Verb::Click;
    if (s == "write") return Verb::Write;
    if (s == "select") return Verb::Select;
    if (s == "check") return Verb::Check;
    if (s == "uncheck") return Verb::Uncheck;
    return std::nullopt;
}

inline bool verb_takes_argument(Verb v) { return v == Verb::Write || v == Verb::Select; }

// Wrapper names as they appear in "control_type".
inline std::string_view control_type_name(WidgetKind k) {
    switch (k) {
    case WidgetKind::Button: return "ButtonWrapper";
    case WidgetKind::Edit: return "EditWrapper";
    case WidgetKind::ComboBox: return "ComboBoxWrapper";
    case WidgetKind::CheckBox: return "CheckBoxWrapper";
    case WidgetKind::RadioButton: return "RadioButtonWrapper";
    case WidgetKind::Static: return "StaticWrapper";
    case WidgetKind::Toolbar: return "ToolbarWrapper";
    case WidgetKind::Container: return "UIAWrapper";
    case WidgetKind::Dialog: return "WindowSpecification";
    case WidgetKind::ListItem: return "ListItemWrapper";
    case WidgetKind::TabItem: return "TabItemWrapper";
    }
    return "UIAWrapper";
}

inline std::optional<WidgetKind> kind_from_control_type(std::string_view s) {
    static const std::map<std::string_view, WidgetKind> table = {
        {"ButtonWrapper", WidgetKind::Button},
        {"EditWrapper", WidgetKind::Edit},
        {"ComboBoxWrapper", WidgetKind::ComboBox},
        {"CheckBoxWrapper", WidgetKind::CheckBox},
        {"RadioButtonWrapper", WidgetKind::RadioButton},
        {"StaticWrapper", WidgetKind::Static},
        {"ToolbarWrapper", WidgetKind::Toolbar},
        {"UIAWrapper", WidgetKind::Container},
        {"WindowSpecification", WidgetKind::Dialog},
        {"ListItemWrapper", WidgetKind::ListItem},
        {"TabItemWrapper", WidgetKind::TabItem},
    };
    auto it = table.find(s);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

// The action table: which verbs each widget kind accepts.
inline std::vector<Verb> permitted_verbs(WidgetKind k) {
    switch (k) {
    case WidgetKind::Button:
    case WidgetKind::RadioButton:
    case WidgetKind::ListItem:
    case WidgetKind::TabItem: return {Verb::Click};
    case WidgetKind::Edit: return {Verb::Write};
    case WidgetKind::ComboBox: return {Verb::Select};
    case WidgetKind::CheckBox: return {Verb::Check, Verb::Uncheck};
    case WidgetKind::Static:
    case WidgetKind::Toolbar:
    case WidgetKind::Container:
    case WidgetKind::Dialog: return {};
    }
    return {};
}

inline bool is_actionable(WidgetKind k) { return !permitted_verbs(k).empty(); }

inline bool verb_permitted(WidgetKind k, Verb v) {
    for (Verb p : permitted_verbs(k))
        if (p == v) return true;
    return false;
}

// ---------------------------------------------------------------------------
// Traversal

// Depth-first, parent before children, children in document order.
inline void for_each_node(const WidgetNode& root, const std::function<void(const WidgetNode&)>& fn) {
    fn(root);
    for (const auto& child : root.sub_elements) for_each_node(child, fn);
}

inline const WidgetNode* find_widget(const WidgetNode& tree, ControlId id) {
    if (tree.control_id == id) return &tree;
    for (const auto& child : tree.sub_elements)
        if (const auto* hit = find_widget(child, id)) return hit;
    return nullptr;
}

inline std::size_t count_nodes(const WidgetNode& tree) {
    std::size_t n = 0;
    for_each_node(tree, [&](const WidgetNode&) { ++n; });
    return n;
}

// Throws IntegrityError on duplicate ids, negative ids or inverted rectangles.
inline void validate_tree(const WidgetNode& tree) {
    std::unordered_set<ControlId> seen;
    for_each_node(tree, [&](const WidgetNode& n) {
        if (n.control_id < 0)
            throw IntegrityError("negative control_id " + std::to_string(n.control_id));
        if (!seen.insert(n.control_id).second)
            throw IntegrityError("duplicate control_id " + std::to_string(n.control_id));
        if (!n.rectangle.valid())
            throw IntegrityError("inverted rectangle on control_id " + std::to_string(n.control_id));
    });
}

inline std::vector<PossibleAction> possible_actions(const WidgetNode& tree) {
    std::vector<PossibleAction> out;
    for_each_node(tree, [&](const WidgetNode& n) {
        if (!n.enabled()) return;
        for (Verb v : permitted_verbs(n.kind)) {
            PossibleAction a{n.control_id, v, {}};
            if (v == Verb::Write) {
                a.arg_spec.kind = ArgSpec::Kind::FreeText;
            } else if (v == Verb::Select) {
                if (const auto* items = n.list_state("items")) {
                    a.arg_spec.kind = ArgSpec::Kind::OneOf;
                    a.arg_spec.items = *items;
                } else {
                    a.arg_spec.kind = ArgSpec::Kind::FreeText;
                }
            }
            out.push_back(std::move(a));
        }
    });
    return out;
}

// ---------------------------------------------------------------------------
// JSON

namespace detail {

inline std::string json_quote(std::string_view s) {
    return nlohmann::json(std::string(s)).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

inline std::string inline_string_list(const std::vector<std::string>& items) {
    if (items.empty()) return "[]";
    std::string out = "[ ";
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        out += json_quote(items[i]);
    }
    out += " ]";
    return out;
}

inline std::string state_value_json(const StateValue& v) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, bool>) return x ? "true" : "false";
            else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(x);
            else if constexpr (std::is_same_v<T, std::string>) return json_quote(x);
            else return inline_string_list(x);
        },
        v);
}

inline void write_node(std::string& out, const WidgetNode& n, int depth) {
    const std::string pad(static_cast<std::size_t>(depth) * 4, ' ');
    const std::string inner = pad + "    ";
    const auto& r = n.rectangle;
    out += "{\n";
    out += inner + "\"class_name\": " + json_quote(n.class_name) + ",\n";
    out += inner + "\"control_type\": " + json_quote(control_type_name(n.kind)) + ",\n";
    out += inner + "\"control_id\": " + std::to_string(n.control_id) + ",\n";
    out += inner + "\"rectangle\": [ \"L" + std::to_string(r.left) + "\", \"T" + std::to_string(r.top) +
           "\", \"R" + std::to_string(r.right) + "\", \"B" + std::to_string(r.bottom) + "\" ],\n";
    out += inner + "\"text\": " + json_quote(n.text) + ",\n";
    for (const auto& [key, value] : n.extra_state)
        out += inner + json_quote(key) + ": " + state_value_json(value) + ",\n";
    if (n.sub_elements.empty()) {
        out += inner + "\"sub_elements\": []\n";
    } else {
        out += inner + "\"sub_elements\": [\n";
        for (std::size_t i = 0; i < n.sub_elements.size(); ++i) {
            out += inner + "    ";
            write_node(out, n.sub_elements[i], depth + 2);
            out += (i + 1 < n.sub_elements.size()) ? ",\n" : "\n";
        }
        out += inner + "]\n";
    }
    out += pad + "}";
}

inline std::int64_t parse_rect_part(const nlohmann::json& v, char prefix, ControlId id) {
    const std::string where = "rectangle of control_id " + std::to_string(id);
    if (!v.is_string()) throw IntegrityError(where + ": expected string");
    const auto& s = v.get_ref<const std::string&>();
    if (s.size() < 2 || s[0] != prefix)
        throw IntegrityError(where + ": expected '" + std::string(1, prefix) + "<int>', got '" + s + "'");
    std::size_t used = 0;
    std::int64_t value = 0;
    try {
        value = std::stoll(s.substr(1), &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() - 1) throw IntegrityError(where + ": bad coordinate '" + s + "'");
    return value;
}

inline const std::set<std::string>& core_keys() {
    static const std::set<std::string> keys = {"class_name", "control_type", "control_id",
                                               "rectangle",  "text",         "sub_elements"};
    return keys;
}

inline WidgetNode node_from_json(const nlohmann::json& j, std::vector<std::string>& warnings) {
    if (!j.is_object()) throw IntegrityError("widget node must be a JSON object");
    for (const auto& key : core_keys())
        if (!j.contains(key)) throw IntegrityError("widget node missing key \"" + key + "\"");

    WidgetNode n;
    const auto& id = j.at("control_id");
    if (!id.is_number_integer()) throw IntegrityError("control_id must be an integer");
    n.control_id = id.get<ControlId>();
    if (n.control_id < 0) throw IntegrityError("negative control_id " + std::to_string(n.control_id));

    if (!j.at("class_name").is_string() || !j.at("control_type").is_string() || !j.at("text").is_string())
        throw IntegrityError("class_name, control_type and text must be strings (control_id " +
                             std::to_string(n.control_id) + ")");
    n.class_name = j.at("class_name").get<std::string>();
    n.text = j.at("text").get<std::string>();
    const auto control_type = j.at("control_type").get<std::string>();
    if (auto kind = kind_from_control_type(control_type)) {
        n.kind = *kind;
    } else {
        n.kind = WidgetKind::Container;
        warnings.push_back("unknown control_type \"" + control_type + "\" on control_id " +
                           std::to_string(n.control_id) + " treated as container");
    }

    const auto& rect = j.at("rectangle");
    if (!rect.is_array() || rect.size() != 4)
        throw IntegrityError("rectangle of control_id " + std::to_string(n.control_id) + " must have 4 entries");
    n.rectangle = {parse_rect_part(rect[0], 'L', n.control_id), parse_rect_part(rect[1], 'T', n.control_id),
                   parse_rect_part(rect[2], 'R', n.control_id), parse_rect_part(rect[3], 'B', n.control_id)};

    for (const auto& [key, value] : j.items()) {
        if (core_keys().count(key)) continue;
        if (value.is_boolean()) {
            n.extra_state[key] = value.get<bool>();
        } else if (value.is_number_integer()) {
            n.extra_state[key] = value.get<std::int64_t>();
        } else if (value.is_string()) {
            n.extra_state[key] = value.get<std::string>();
        } else if (value.is_array() &&
                   std::all_of(value.begin(), value.end(), [](const auto& e) { return e.is_string(); })) {
            n.extra_state[key] = value.get<std::vector<std::string>>();
        } else {
            throw IntegrityError("unsupported value for \"" + key + "\" on control_id " +
                                 std::to_string(n.control_id));
        }
    }

    const auto& subs = j.at("sub_elements");
    if (!subs.is_array()) throw IntegrityError("sub_elements must be an array");
    n.sub_elements.reserve(subs.size());
    for (const auto& child : subs) n.sub_elements.push_back(node_from_json(child, warnings));
    return n;
}

} // namespace detail

inline std::string serialize_tree(const WidgetNode& tree) {
    std::string out;
    detail::write_node(out, tree, 0);
    return out;
}

struct ParsedTree {
    WidgetNode root;
    std::vector<std::string> warnings;
};

inline nlohmann::json parse_json_text(std::string_view text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw JsonSyntaxError("malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what(), e.byte);
    }
}

inline ParsedTree parse_tree_with_warnings(std::string_view json) {
    ParsedTree out;
    out.root = detail::node_from_json(parse_json_text(json), out.warnings);
    validate_tree(out.root);
    return out;
}

inline WidgetNode parse_tree(std::string_view json) { return parse_tree_with_warnings(json).root; }

} // namespace guiprobe
