// SPDX-License-Identifier: Apache-2.0
#pragma once

// Seeded generators for property tests.

#include "guiprobe/action_grammar.hpp"
#include "guiprobe/widget_model.hpp"

#include <random>
#include <string>
#include <vector>

namespace guiprobe::testing {

inline const std::vector<WidgetKind>& all_kinds() {
    static const std::vector<WidgetKind> kinds = {
        WidgetKind::Button,    WidgetKind::Edit,      WidgetKind::ComboBox, WidgetKind::CheckBox,
        WidgetKind::RadioButton, WidgetKind::Static,  WidgetKind::Toolbar,  WidgetKind::Container,
        WidgetKind::Dialog,    WidgetKind::ListItem,  WidgetKind::TabItem,
    };
    return kinds;
}

// Text drawn from an alphabet heavy in characters the grammar must escape.
inline std::string random_text(std::mt19937_64& rng, std::size_t max_len = 24) {
    static const std::vector<std::string> pieces = {
        "a", "Z", "0", "7", " ", "'", "\"", "\\", ",", "(", ")", "{", "}", "\n", "\t", "\xC3\xA4", "\xE2\x82\xAC",
        "write(", "click(1)", "\\'", "''",
    };
    std::uniform_int_distribution<std::size_t> len(0, max_len);
    std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
    std::string s;
    for (auto n = len(rng); n > 0; --n) s += pieces[pick(rng)];
    return s;
}

inline ActionCommand random_command(std::mt19937_64& rng) {
    static const Verb verbs[] = {Verb::Click, Verb::Write, Verb::Select, Verb::Check, Verb::Uncheck};
    std::uniform_int_distribution<int> v(0, 4);
    std::uniform_int_distribution<ControlId> id(0, 99'999'999);
    ActionCommand c;
    c.verb = verbs[v(rng)];
    c.control_id = id(rng);
    if (verb_takes_argument(c.verb)) c.arg = random_text(rng);
    return c;
}

// Tree with unique non-negative ids and valid rectangles.
inline WidgetNode random_tree(std::mt19937_64& rng, int max_depth = 4, ControlId* next_id = nullptr) {
    ControlId local = 0;
    if (!next_id) next_id = &local;
    std::uniform_int_distribution<std::size_t> kind(0, all_kinds().size() - 1);
    std::uniform_int_distribution<std::int64_t> coord(0, 4000);
    std::uniform_int_distribution<int> children(0, max_depth > 0 ? 4 : 0);
    std::uniform_int_distribution<int> coin(0, 1);

    WidgetNode n;
    n.kind = all_kinds()[kind(rng)];
    n.class_name = std::string(control_type_name(n.kind)).substr(0, 4) + "Class";
    n.control_id = (*next_id)++;
    const auto l = coord(rng), t = coord(rng);
    n.rectangle = {l, t, l + coord(rng), t + coord(rng)};
    n.text = random_text(rng, 8);
    if (coin(rng)) n.extra_state["enabled"] = coin(rng) == 1;
    if (n.kind == WidgetKind::ComboBox && coin(rng)) {
        std::vector<std::string> items;
        for (int i = coin(rng) + coin(rng); i >= 0; --i) items.push_back(random_text(rng, 4));
        n.extra_state["items"] = items;
    }
    if (coin(rng)) n.extra_state["zorder"] = static_cast<std::int64_t>(coord(rng)) - 2000;
    for (int i = children(rng); i > 0; --i) n.sub_elements.push_back(random_tree(rng, max_depth - 1, next_id));
    return n;
}

} // namespace guiprobe::testing
