// SPDX-License-Identifier: Apache-2.0
#pragma once

// Canned inputs for the default wizard: documentation pages, a five-fault
// set that surfaces once each during a traversal, and the traversal script.

#include "guiprobe/action_grammar.hpp"
#include "guiprobe/prompt_builder.hpp"
#include "guiprobe/sim_gui.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace guiprobe {

inline DocCorpus default_docs() {
    DocCorpus docs;
    docs.entries.push_back({"tool_description",
                            "# Tool Description\n"
                            "## Synopsis\n"
                            "Name the tool and describe what it does.\n"
                            "## Usage\n"
                            "- **Name**: The name shown in the palette. It must not be empty.\n"
                            "- **Group**: The palette group the tool is sorted into.\n"
                            "- **Integrator e-mail**: Contact address of the person integrating the tool."});
    docs.entries.push_back({"inputs_outputs",
                            "# Inputs and Outputs\n"
                            "## Synopsis\n"
                            "Define the endpoints of the tool.\n"
                            "## Usage\n"
                            "Use \"Add Input...\" and \"Add Output...\" to define endpoints. Every endpoint needs a "
                            "unique name and a data type. Inputs are either required or optional."});
    docs.entries.push_back({"launch_settings",
                            "# Launch Settings\n"
                            "## Synopsis\n"
                            "Configure how the tool is started.\n"
                            "## Usage\n"
                            "- **Tool directory**: The directory in which the tool is installed.\n"
                            "- **Version**: The version of the tool.\n"
                            "- **Working directory**: The absolute path to the working directory.\n"
                            "- **Maximum parallel instances**: The maximal number of instances that may run at "
                            "the same time."});
    docs.entries.push_back({"cpacs_properties",
                            "# CPACS Tool Properties (optional)\n"
                            "## Synopsis\n"
                            "Configure the CPACS tool specific values.\n"
                            "## Usage\n"
                            "Fill in the following values to make your tool using the CPACS specific features, e.g. "
                            "input and output mapping.\n"
                            "- **Incoming CPACS endpoint name**: Select the input that represents the incoming CPACS "
                            "file. This input must be configured on the \"Inputs and Outputs\" page.\n"
                            "    **Note**\n"
                            "    The data type of this input must be \"File\". Usage must be \"required\".\n"
                            "- **Input mapping file**: Select or enter the mapping file for input mapping. Supported "
                            "file extensions are \".xml\" for classic mapping and \".xsl\" for advanced XSLT-mapping.\n"
                            "    **Note**\n"
                            "    The path must be relative to the tool directory configured on the \"Launch "
                            "Settings\" page."});
    docs.entries.push_back({"review",
                            "# Review\n"
                            "## Synopsis\n"
                            "Check the configuration before the tool is integrated."});
    docs.entries.push_back({"finish",
                            "# Finish\n"
                            "## Synopsis\n"
                            "Press Finish to integrate the tool into the workflow palette."});
    return docs;
}

// One fault per page transition of the traversal below; each becomes
// visible exactly once.
inline std::vector<FaultSpec> five_fault_set() {
    return {
        {FaultKind::StaleError, "tool_description", "Name", true},
        {FaultKind::GenericErrorMessage, "launch_settings", "Working directory", true},
        {FaultKind::MissingTitle, "cpacs_properties", "", true},
        {FaultKind::TruncatedText, "review", "Description", true},
        {FaultKind::MisalignedRect, "finish", "Open tool after integration", true},
    };
}

namespace detail {

inline std::string controller_json(const ActionCommand& cmd, const std::string& explanation) {
    nlohmann::ordered_json j;
    j["action"] = format_action(cmd);
    j["explanation"] = explanation;
    return j.dump(4);
}

} // namespace detail

// Controller answers that walk all six pages of the default wizard, trying
// invalid input first where a page validates, and touching every widget.
inline std::vector<std::string> full_traversal_script(const WizardSpec& spec = default_wizard_spec()) {
    const SimWizard w({}, 0, spec);
    std::vector<std::string> out;
    auto click = [&](ControlId id, const std::string& why) {
        out.push_back(detail::controller_json({Verb::Click, id, std::nullopt}, why));
    };
    auto write = [&](ControlId id, const std::string& text, const std::string& why) {
        out.push_back(detail::controller_json({Verb::Write, id, text}, why));
    };
    auto select = [&](ControlId id, const std::string& item, const std::string& why) {
        out.push_back(detail::controller_json({Verb::Select, id, item}, why));
    };
    auto check = [&](ControlId id, bool on, const std::string& why) {
        out.push_back(detail::controller_json({on ? Verb::Check : Verb::Uncheck, id, std::nullopt}, why));
    };
    const auto next = ids::kNext;
    const auto back = ids::kBack;

    // Tool description
    click(next, "Click 'Next >' with an empty name to see whether the wizard complains.");
    write(w.widget_id("tool_description", "Name"), "Solver", "Enter the tool name 'Solver'.");
    write(w.widget_id("tool_description", "Tool description"), "Computes the aerodynamic coefficients of a wing.",
          "Describe what the tool does.");
    select(w.widget_id("tool_description", "Group"), "Simulation", "Sort the tool into the Simulation group.");
    click(w.item_id("tool_description", "Tool type", 1), "Mark the tool as a CPACS tool.");
    click(w.item_id("tool_description", "Tool type", 0), "Switch back to a common tool.");
    click(w.item_id("tool_description", "Tool type", 1), "Mark the tool as a CPACS tool again.");
    write(w.widget_id("tool_description", "Integrator e-mail"), "integrator@example.org",
          "Enter a contact address for the integrator.");
    click(next, "Click 'Next >' to proceed to the inputs and outputs.");

    // Inputs and outputs
    const auto add_in = w.list_add_id("inputs_outputs", "Inputs");
    const auto rm_in = w.list_remove_id("inputs_outputs", "Inputs");
    const auto add_out = w.list_add_id("inputs_outputs", "Outputs");
    const auto rm_out = w.list_remove_id("inputs_outputs", "Outputs");
    click(add_in, "Open the dialog to add an input.");
    write(ids::kModalName, "cpacsIn", "Name the input 'cpacsIn'.");
    select(ids::kModalType, "File", "The incoming CPACS file is a file.");
    select(ids::kModalUsage, "required", "The CPACS input is required.");
    click(ids::kModalOk, "Confirm the new input.");
    click(add_in, "Open the dialog again to try an input without a name.");
    click(ids::kModalOk, "Confirm without a name to check the validation.");
    click(ids::kModalCancel, "Cancel the dialog.");
    click(add_in, "Add a second input that will be removed again.");
    write(ids::kModalName, "scratch", "Name the input 'scratch'.");
    select(ids::kModalType, "Integer", "Make it an integer input.");
    select(ids::kModalUsage, "optional", "Make it optional.");
    click(ids::kModalOk, "Confirm the second input.");
    click(w.item_id("inputs_outputs", "Inputs", 1), "Select the 'scratch' input.");
    click(rm_in, "Remove the 'scratch' input.");
    click(w.item_id("inputs_outputs", "Inputs", 0), "Select the 'cpacsIn' input.");
    click(add_out, "Open the dialog to add an output.");
    write(ids::kModalName, "cpacsOut", "Name the output 'cpacsOut'.");
    click(ids::kModalOk, "Confirm the output.");
    click(add_out, "Add a second output that will be removed again.");
    write(ids::kModalName, "log", "Name the output 'log'.");
    select(ids::kModalType, "ShortText", "Make it a text output.");
    click(ids::kModalOk, "Confirm the second output.");
    click(w.item_id("inputs_outputs", "Outputs", 1), "Select the 'log' output.");
    click(rm_out, "Remove the 'log' output.");
    click(back, "Click '< Back' to check that the first page kept its values.");
    click(next, "Click 'Next >' to return to the inputs and outputs.");
    click(next, "Click 'Next >' to proceed to the launch settings.");

    // Launch settings
    write(w.widget_id("launch_settings", "Tool directory"), "/opt/tools/solver", "Enter the tool directory.");
    click(next, "Click 'Next >' with an empty version.");
    write(w.widget_id("launch_settings", "Version"), "1.0", "Enter the version 1.0.");
    click(next, "Click 'Next >' with an empty working directory.");
    write(w.widget_id("launch_settings", "Working directory"), "/tmp/solver-run", "Enter an absolute working directory.");
    write(w.widget_id("launch_settings", "Maximum parallel instances"), "4", "Allow four parallel instances.");
    check(w.widget_id("launch_settings", "Delete working directory after run"), true,
          "Delete the working directory after each run.");
    click(next, "Click 'Next >' to proceed to the CPACS properties.");

    // CPACS properties
    const auto use_cpacs = w.widget_id("cpacs_properties", "Use CPACS tool properties");
    check(use_cpacs, true, "Enable the CPACS tool properties.");
    check(use_cpacs, false, "Disable them again to see the dependent fields turn inactive.");
    check(use_cpacs, true, "Enable the CPACS tool properties again.");
    select(w.widget_id("cpacs_properties", "Incoming CPACS endpoint name"), "cpacsIn",
           "Use 'cpacsIn' as the incoming CPACS endpoint.");
    write(w.widget_id("cpacs_properties", "Input mapping file"), "mappings/input.txt",
          "Enter a mapping file with an unsupported extension.");
    click(next, "Click 'Next >' to see whether the extension is rejected.");
    write(w.widget_id("cpacs_properties", "Input mapping file"), "mappings/input.xml",
          "Enter a supported input mapping file.");
    write(w.widget_id("cpacs_properties", "Output mapping file"), "mappings/output.xsl",
          "Enter a supported output mapping file.");
    click(next, "Click 'Next >' to proceed to the review.");

    // Review
    click(w.item_id("review", "Overview", 1), "Open the Configuration tab.");
    click(w.item_id("review", "Overview", 0), "Go back to the Summary tab.");
    check(w.widget_id("review", "Save configuration as template"), true, "Save the configuration as a template.");
    click(next, "Click 'Next >' to proceed to the last page.");

    // Finish
    check(w.widget_id("finish", "Open tool after integration"), true, "Open the tool after the integration.");
    click(ids::kFinish, "Click 'Finish' to integrate the tool.");
    return out;
}

} // namespace guiprobe
