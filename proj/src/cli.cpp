// Copyright 2026 The Kadupul Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kadupul/cli.hpp"

#include "kadupul/netsim.hpp"
#include "kadupul/report.hpp"
#include "kadupul/scenario.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

namespace kadupul::cli {

namespace detail {
struct EmbeddedScenario {
    std::string_view name;
    std::string_view text;
};
// Defined in the generated templates source.
const std::vector<EmbeddedScenario>& embedded_scenarios();
}  // namespace detail

const std::vector<Template>& bundled_templates()
{
    static const std::vector<Template> templates = [] {
        static std::vector<std::string> descriptions;
        const auto& sources = detail::embedded_scenarios();
        descriptions.reserve(sources.size());
        std::vector<Template> out;
        for (const auto& s : sources) {
            const auto doc = nlohmann::json::parse(s.text);
            descriptions.push_back(doc.value("description", std::string{}));
            out.push_back(Template{s.name, descriptions.back(), s.text});
        }
        return out;
    }();
    return templates;
}

const Template* find_template(std::string_view name)
{
    for (const auto& t : bundled_templates())
        if (t.name == name) return &t;
    return nullptr;
}

std::optional<std::string> read_scenario_source(const std::string& path_or_name, std::string& error)
{
    std::error_code ec;
    if (std::filesystem::is_regular_file(path_or_name, ec)) {
        std::ifstream in(path_or_name, std::ios::binary);
        if (!in) {
            error = "cannot open '" + path_or_name + "'";
            return std::nullopt;
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
    if (const auto* t = find_template(path_or_name)) return std::string(t->text);
    error = "no scenario file or bundled template named '" + path_or_name + "'";
    return std::nullopt;
}

std::optional<double> parse_duration(std::string_view text)
{
    double value = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr == text.data()) return std::nullopt;
    const std::string_view unit(ptr, static_cast<std::size_t>(end - ptr));
    double scale = 1.0;
    if (unit.empty() || unit == "s") scale = 1.0;
    else if (unit == "ms") scale = 1e-3;
    else if (unit == "us") scale = 1e-6;
    else if (unit == "ns") scale = 1e-9;
    else return std::nullopt;
    if (!(value > 0)) return std::nullopt;
    return value * scale;
}

namespace {

void print_diagnostics(const std::vector<netsim::Diagnostic>& diags, std::ostream& err)
{
    for (const auto& d : diags) err << "error: " << netsim::format(d) << '\n';
}

}  // namespace

int cmd_validate(const std::string& path_or_name, std::ostream& out, std::ostream& err)
{
    std::string error;
    const auto text = read_scenario_source(path_or_name, error);
    if (!text) {
        err << "error: " << error << '\n';
        return kExitInvalid;
    }
    const auto parsed = netsim::load_scenario_text(*text);
    if (!parsed.ok()) {
        print_diagnostics(parsed.diagnostics, err);
        err << parsed.diagnostics.size() << " problem(s) found\n";
        return kExitInvalid;
    }
    out << "ok: " << (parsed.config.name.empty() ? path_or_name : parsed.config.name) << '\n';
    return kExitOk;
}

int cmd_run(const RunRequest& request, std::ostream& out, std::ostream& err)
{
    std::string error;
    const auto text = read_scenario_source(request.scenario_path, error);
    if (!text) {
        err << "error: " << error << '\n';
        return kExitInvalid;
    }
    auto parsed = netsim::load_scenario_text(*text);
    if (request.seed_override) parsed.config.seed = *request.seed_override;
    if (request.horizon_override_s) parsed.config.horizon_s = *request.horizon_override_s;
    if (!parsed.ok()) {
        print_diagnostics(parsed.diagnostics, err);
        return kExitInvalid;
    }
    // Overrides can make a valid file invalid (e.g. a non-positive horizon).
    if (const auto diags = netsim::validate_scenario(parsed.config); !diags.empty()) {
        print_diagnostics(diags, err);
        return kExitInvalid;
    }

    const auto report = netsim::run(parsed.config);
    try {
        report::write_all(report, request.output_directory);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    out << report.scenario_name << ": seed " << report.seed << ", " << report.events_processed << " events, "
        << report.accepted_claims().size() << " accepted claims, ended at " << format_time(report.end_time) << "s\n";
    if (report.horizon_exceeded) {
        err << "error: simulation horizon reached before quiescence; partial outputs written to "
            << request.output_directory.string() << '\n';
        return kExitHorizon;
    }
    return kExitOk;
}

int cmd_list_templates(std::ostream& out)
{
    for (const auto& t : bundled_templates()) out << t.name << "  " << t.description << '\n';
    return kExitOk;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Incentivised forwarding simulator"};
    app.require_subcommand(1);

    RunRequest request;
    std::string seed_text;
    std::string horizon_text;
    std::string output_dir = "out";
    auto* run = app.add_subcommand("run", "Run a scenario file or bundled template");
    run->add_option("scenario", request.scenario_path, "Scenario path or template name")->required();
    run->add_option("--seed", seed_text, "Override the scenario seed");
    run->add_option("--horizon", horizon_text, "Override the horizon (e.g. 30, 2.5s, 250ms)");
    run->add_option("--out", output_dir, "Output directory");

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "Check a scenario without running it");
    validate->add_option("scenario", validate_path, "Scenario path or template name")->required();

    auto* list = app.add_subcommand("list-templates", "List bundled scenario templates");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    }

    if (run->parsed()) {
        if (!seed_text.empty()) {
            std::uint64_t seed = 0;
            auto [ptr, ec] = std::from_chars(seed_text.data(), seed_text.data() + seed_text.size(), seed);
            if (ec != std::errc() || ptr != seed_text.data() + seed_text.size()) {
                err << "error: --seed expects an unsigned 64-bit integer\n";
                return kExitUsage;
            }
            request.seed_override = seed;
        }
        if (!horizon_text.empty()) {
            request.horizon_override_s = parse_duration(horizon_text);
            if (!request.horizon_override_s) {
                err << "error: --horizon expects a positive duration such as 30, 2.5s or 250ms\n";
                return kExitUsage;
            }
        }
        request.output_directory = output_dir;
        return cmd_run(request, out, err);
    }
    if (validate->parsed()) return cmd_validate(validate_path, out, err);
    if (list->parsed()) return cmd_list_templates(out);
    return kExitUsage;
}

}  // namespace kadupul::cli
