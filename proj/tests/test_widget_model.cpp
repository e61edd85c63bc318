// SPDX-License-Identifier: Apache-2.0
#include "guiprobe/widget_model.hpp"
#include "support/generators.hpp"

#include <catch_amalgamated.hpp>

#include <map>
#include <random>

using namespace guiprobe;

namespace {

WidgetNode leaf(WidgetKind kind, ControlId id, std::string text = {}) {
    WidgetNode n;
    n.class_name = "C";
    n.kind = kind;
    n.control_id = id;
    n.rectangle = {0, 0, 10, 10};
    n.text = std::move(text);
    return n;
}

} // namespace

TEST_CASE("tree serialization uses the fixed key order and inline rectangle") {
    WidgetNode root = leaf(WidgetKind::Dialog, 0, "Integrate a Tool as a Workflow Component");
    root.class_name = "Dialog";
    root.rectangle = {4429, 1655, 5172, 2299};
    auto edit = leaf(WidgetKind::Edit, 7, "a\"b");
    edit.class_name = "Edit";
    edit.extra_state["zeta"] = std::int64_t{-3};
    edit.extra_state["enabled"] = false;
    edit.extra_state["items"] = std::vector<std::string>{"x", "y"};
    root.sub_elements.push_back(edit);

    const std::string expected = "{\n"
                                 "    \"class_name\": \"Dialog\",\n"
                                 "    \"control_type\": \"WindowSpecification\",\n"
                                 "    \"control_id\": 0,\n"
                                 "    \"rectangle\": [ \"L4429\", \"T1655\", \"R5172\", \"B2299\" ],\n"
                                 "    \"text\": \"Integrate a Tool as a Workflow Component\",\n"
                                 "    \"sub_elements\": [\n"
                                 "        {\n"
                                 "            \"class_name\": \"Edit\",\n"
                                 "            \"control_type\": \"EditWrapper\",\n"
                                 "            \"control_id\": 7,\n"
                                 "            \"rectangle\": [ \"L0\", \"T0\", \"R10\", \"B10\" ],\n"
                                 "            \"text\": \"a\\\"b\",\n"
                                 "            \"enabled\": false,\n"
                                 "            \"items\": [ \"x\", \"y\" ],\n"
                                 "            \"zeta\": -3,\n"
                                 "            \"sub_elements\": []\n"
                                 "        }\n"
                                 "    ]\n"
                                 "}";
    CHECK(serialize_tree(root) == expected);
}

TEST_CASE("random trees survive a serialize/parse round trip") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 300; ++i) {
        const auto tree = testing::random_tree(rng);
        REQUIRE_NOTHROW(validate_tree(tree));
        CHECK(parse_tree(serialize_tree(tree)) == tree);
    }
}

TEST_CASE("integrity violations are reported") {
    auto root = leaf(WidgetKind::Container, 1);
    root.sub_elements.push_back(leaf(WidgetKind::Button, 1));
    CHECK_THROWS_WITH(validate_tree(root), Catch::Matchers::ContainsSubstring("duplicate control_id 1"));

    auto negative = leaf(WidgetKind::Button, -4);
    CHECK_THROWS_AS(validate_tree(negative), IntegrityError);

    auto inverted = leaf(WidgetKind::Button, 2);
    inverted.rectangle = {10, 0, 5, 10};
    CHECK_THROWS_AS(validate_tree(inverted), IntegrityError);

    CHECK_THROWS_AS(parse_tree(serialize_tree(root)), IntegrityError);
}

TEST_CASE("parsing tolerates unknown control types and reports syntax offsets") {
    const std::string text = R"({"class_name": "X", "control_type": "FancyWrapper", "control_id": 3,
        "rectangle": ["L0", "T0", "R1", "B1"], "text": "", "sub_elements": []})";
    const auto parsed = parse_tree_with_warnings(text);
    CHECK(parsed.root.kind == WidgetKind::Container);
    REQUIRE(parsed.warnings.size() == 1);
    CHECK_THAT(parsed.warnings[0], Catch::Matchers::ContainsSubstring("FancyWrapper"));

    try {
        parse_tree("{\"class_name\": }");
        FAIL("expected a syntax error");
    } catch (const JsonSyntaxError& e) {
        CHECK(e.byte_offset() > 0);
        CHECK(e.byte_offset() <= 16);
    }
}

TEST_CASE("possible actions follow the action table in depth-first order") {
    // Independent statement of the table.
    const std::map<WidgetKind, std::vector<Verb>> table = {
        {WidgetKind::Button, {Verb::Click}},          {WidgetKind::RadioButton, {Verb::Click}},
        {WidgetKind::ListItem, {Verb::Click}},        {WidgetKind::TabItem, {Verb::Click}},
        {WidgetKind::Edit, {Verb::Write}},            {WidgetKind::ComboBox, {Verb::Select}},
        {WidgetKind::CheckBox, {Verb::Check, Verb::Uncheck}}, {WidgetKind::Static, {}},
        {WidgetKind::Toolbar, {}},                    {WidgetKind::Container, {}},
        {WidgetKind::Dialog, {}},
    };
    for (const auto& [kind, verbs] : table) CHECK(permitted_verbs(kind) == verbs);

    auto root = leaf(WidgetKind::Dialog, 0);
    auto group = leaf(WidgetKind::Container, 1);
    group.sub_elements.push_back(leaf(WidgetKind::Button, 2));
    auto combo = leaf(WidgetKind::ComboBox, 3);
    combo.extra_state["items"] = std::vector<std::string>{"File", "Float"};
    group.sub_elements.push_back(combo);
    root.sub_elements.push_back(group);
    auto disabled = leaf(WidgetKind::CheckBox, 4);
    disabled.extra_state["enabled"] = false;
    root.sub_elements.push_back(disabled);
    root.sub_elements.push_back(leaf(WidgetKind::CheckBox, 5));
    root.sub_elements.push_back(leaf(WidgetKind::ComboBox, 6));

    const auto actions = possible_actions(root);
    REQUIRE(actions.size() == 5);
    CHECK(actions[0].control_id == 2);
    CHECK(actions[1].control_id == 3);
    CHECK(actions[1].arg_spec.kind == ArgSpec::Kind::OneOf);
    CHECK(actions[1].arg_spec.items == std::vector<std::string>{"File", "Float"});
    CHECK(actions[2].control_id == 5);
    CHECK(actions[2].verb == Verb::Check);
    CHECK(actions[3].verb == Verb::Uncheck);
    CHECK(actions[4].control_id == 6);
    CHECK(actions[4].arg_spec.kind == ArgSpec::Kind::FreeText);
}

TEST_CASE("control type names map both ways") {
    for (const auto kind : testing::all_kinds()) CHECK(kind_from_control_type(control_type_name(kind)) == kind);
    CHECK(control_type_name(WidgetKind::Dialog) == "WindowSpecification");
    CHECK(control_type_name(WidgetKind::Container) == "UIAWrapper");
    CHECK_FALSE(kind_from_control_type("NopeWrapper").has_value());
}
