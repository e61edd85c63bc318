// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "guiprobe/error.hpp"
#include "guiprobe/widget_model.hpp"

#include <json.hpp>

#include <cctype>
#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace guiprobe {

// One verb bound to a control id. write/select carry an argument, the
// other verbs never do.
struct ActionCommand {
    Verb verb = Verb::Click;
    ControlId control_id = 0;
    std::optional<std::string> arg;

    bool operator==(const ActionCommand&) const = default;
};

struct ControllerOutput {
    ActionCommand action;
    std::string explanation;
};

struct ValidationResult {
    bool accepted = false;
    std::optional<std::string> reason;

    static ValidationResult accept() { return {true, std::nullopt}; }
    static ValidationResult reject(std::string why) { return {false, std::move(why)}; }
};

class ActionParseError : public Error {
public:
    enum class Kind { Syntax, UnknownVerb, Arity, BadControlId };

    ActionParseError(Kind kind, std::string fragment, const std::string& what)
        : Error(what), kind_(kind), fragment_(std::move(fragment)) {}

    Kind kind() const noexcept { return kind_; }
    const std::string& fragment() const noexcept { return fragment_; }

private:
    Kind kind_;
    std::string fragment_;
};

class ControllerOutputError : public Error {
public:
    enum class Kind { NoJsonObject, MissingField, BadAction };

    ControllerOutputError(Kind kind, const std::string& what, std::string raw)
        : Error(what), kind_(kind), raw_(std::move(raw)) {}

    Kind kind() const noexcept { return kind_; }
    const std::string& raw() const noexcept { return raw_; }

private:
    Kind kind_;
    std::string raw_;
};

namespace detail {

inline bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

class ActionLexer {
public:
    explicit ActionLexer(std::string_view text) : s_(text) {}

    void skip_ws() {
        while (pos_ < s_.size() && is_space(s_[pos_])) ++pos_;
    }
    bool at_end() const { return pos_ >= s_.size(); }
    char peek() const { return at_end() ? '\0' : s_[pos_]; }
    bool consume(char c) {
        if (peek() != c) return false;
        ++pos_;
        return true;
    }
    std::string_view take_while(auto pred) {
        const auto start = pos_;
        while (pos_ < s_.size() && pred(s_[pos_])) ++pos_;
        return s_.substr(start, pos_ - start);
    }
    std::string_view rest() const { return at_end() ? std::string_view{} : s_.substr(pos_); }

    // Quoted argument; backslash makes the next character literal.
    std::optional<std::string> quoted() {
        const char quote = peek();
        if (quote != '\'' && quote != '"') return std::nullopt;
        ++pos_;
        std::string out;
        while (pos_ < s_.size()) {
            const char c = s_[pos_++];
            if (c == '\\' && pos_ < s_.size()) {
                out.push_back(s_[pos_++]);
            } else if (c == quote) {
                return out;
            } else {
                out.push_back(c);
            }
        }
        throw ActionParseError(ActionParseError::Kind::Syntax, std::string(s_),
                               "unterminated quoted argument in '" + std::string(s_) + "'");
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;
};

inline std::string trim_copy(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return std::string(s);
}

} // namespace detail

inline ActionCommand parse_action(std::string_view text) {
    using K = ActionParseError::Kind;
    detail::ActionLexer lex(text);
    const std::string whole(text);

    lex.skip_ws();
    const auto verb_text = lex.take_while([](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; });
    if (verb_text.empty())
        throw ActionParseError(K::Syntax, whole, "expected an action verb in '" + whole + "'");
    const auto verb = verb_from_name(verb_text);
    if (!verb)
        throw ActionParseError(K::UnknownVerb, std::string(verb_text), "unknown verb '" + std::string(verb_text) + "'");

    lex.skip_ws();
    if (!lex.consume('('))
        throw ActionParseError(K::Syntax, whole, "expected '(' after '" + std::string(verb_text) + "'");

    lex.skip_ws();
    const auto id_text = detail::trim_copy(lex.take_while([](char c) { return c != ',' && c != ')'; }));
    if (id_text.empty()) throw ActionParseError(K::BadControlId, id_text, "missing control id in '" + whole + "'");
    ControlId id = 0;
    const auto* first = id_text.data();
    const auto* last = id_text.data() + id_text.size();
    const auto [ptr, ec] = std::from_chars(first, last, id);
    if (ec != std::errc{} || ptr != last || id < 0)
        throw ActionParseError(K::BadControlId, id_text, "non-integer control id '" + id_text + "'");

    ActionCommand cmd{*verb, id, std::nullopt};
    if (lex.consume(',')) {
        lex.skip_ws();
        auto arg = lex.quoted();
        if (!arg)
            throw ActionParseError(K::Syntax, std::string(lex.rest()),
                                   "argument must be quoted: '" + std::string(lex.rest()) + "'");
        cmd.arg = std::move(*arg);
        lex.skip_ws();
    }
    if (!lex.consume(')'))
        throw ActionParseError(K::Syntax, std::string(lex.rest()), "expected ')' in '" + whole + "'");
    lex.skip_ws();
    if (!lex.at_end())
        throw ActionParseError(K::Syntax, std::string(lex.rest()),
                               "unexpected trailing text '" + std::string(lex.rest()) + "'");

    const std::string name(verb_text);
    if (verb_takes_argument(*verb) && !cmd.arg)
        throw ActionParseError(K::Arity, name, name + " requires an argument");
    if (!verb_takes_argument(*verb) && cmd.arg)
        throw ActionParseError(K::Arity, name, name + " takes no argument");
    return cmd;
}

inline std::string format_action(const ActionCommand& cmd) {
    std::string out(verb_name(cmd.verb));
    out += '(';
    out += std::to_string(cmd.control_id);
    if (cmd.arg) {
        out += ", '";
        for (char c : *cmd.arg) {
            if (c == '\\' || c == '\'') out += '\\';
            out += c;
        }
        out += '\'';
    }
    out += ')';
    return out;
}

// First syntactically complete JSON object embedded in free text. Models
// wrap their answer in prose or code fences; brace matching skips those.
inline std::optional<nlohmann::json> extract_first_json_object(std::string_view text) {
    for (std::size_t start = text.find('{'); start != std::string_view::npos; start = text.find('{', start + 1)) {
        int depth = 0;
        bool in_string = false;
        bool escaped = false;
        for (std::size_t i = start; i < text.size(); ++i) {
            const char c = text[i];
            if (in_string) {
                if (escaped) escaped = false;
                else if (c == '\\') escaped = true;
                else if (c == '"') in_string = false;
                continue;
            }
            if (c == '"') {
                in_string = true;
            } else if (c == '{') {
                ++depth;
            } else if (c == '}' && --depth == 0) {
                auto parsed = nlohmann::json::parse(text.substr(start, i - start + 1), nullptr, false);
                if (!parsed.is_discarded() && parsed.is_object()) return parsed;
                break;
            }
        }
    }
    return std::nullopt;
}

inline ControllerOutput parse_controller_output(std::string_view raw) {
    using K = ControllerOutputError::Kind;
    const std::string raw_copy(raw);
    const auto obj = extract_first_json_object(raw);
    if (!obj) throw ControllerOutputError(K::NoJsonObject, "no JSON object found in controller output", raw_copy);

    for (const char* key : {"action", "explanation"}) {
        if (!obj->contains(key))
            throw ControllerOutputError(K::MissingField, std::string("controller output lacks \"") + key + "\"", raw_copy);
        if (!obj->at(key).is_string())
            throw ControllerOutputError(K::MissingField, std::string("\"") + key + "\" must be a string", raw_copy);
    }
    ControllerOutput out;
    out.explanation = obj->at("explanation").get<std::string>();
    if (out.explanation.empty())
        throw ControllerOutputError(K::MissingField, "\"explanation\" is empty", raw_copy);
    try {
        out.action = parse_action(obj->at("action").get<std::string>());
    } catch (const ActionParseError& e) {
        throw ControllerOutputError(K::BadAction, e.what(), raw_copy);
    }
    return out;
}

inline ValidationResult validate_action(const ActionCommand& cmd, const std::vector<PossibleAction>& allowed) {
    if (allowed.empty()) return ValidationResult::reject("no actions available");

    const PossibleAction* match = nullptr;
    for (const auto& a : allowed) {
        if (a.control_id == cmd.control_id && a.verb == cmd.verb) {
            match = &a;
            break;
        }
    }
    const auto label = std::string(verb_name(cmd.verb)) + " on control " + std::to_string(cmd.control_id);
    if (!match) return ValidationResult::reject(label + " is not a possible action");

    switch (match->arg_spec.kind) {
    case ArgSpec::Kind::None:
        if (cmd.arg) return ValidationResult::reject(label + " takes no argument");
        break;
    case ArgSpec::Kind::FreeText:
        if (!cmd.arg) return ValidationResult::reject(label + " requires an argument");
        break;
    case ArgSpec::Kind::OneOf: {
        const auto& items = match->arg_spec.items;
        if (cmd.arg && std::find(items.begin(), items.end(), *cmd.arg) != items.end()) break;
        std::string valid;
        for (const auto& item : items) {
            if (!valid.empty()) valid += ", ";
            valid += "'" + item + "'";
        }
        return ValidationResult::reject("'" + cmd.arg.value_or("") + "' is not one of: " +
                                        (valid.empty() ? std::string("(no items)") : valid));
    }
    }
    return ValidationResult::accept();
}

} // namespace guiprobe
