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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kadupul::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitHorizon = 3;

struct RunRequest {
    std::string scenario_path;  // file path or bundled template name
    std::filesystem::path output_directory = "out";
    std::optional<std::uint64_t> seed_override;
    std::optional<double> horizon_override_s;
};

struct Template {
    std::string_view name;
    std::string_view description;
    std::string_view text;
};

// Scenario documents compiled into the binary.
const std::vector<Template>& bundled_templates();
const Template* find_template(std::string_view name);

// Reads a scenario file, falling back to a bundled template of that name.
// Returns nullopt and fills `error` when neither exists.
std::optional<std::string> read_scenario_source(const std::string& path_or_name, std::string& error);

// "2.5", "2.5s", "250ms", "10us", "5ns". Returns seconds.
std::optional<double> parse_duration(std::string_view text);

int cmd_run(const RunRequest& request, std::ostream& out, std::ostream& err);
int cmd_validate(const std::string& path_or_name, std::ostream& out, std::ostream& err);
int cmd_list_templates(std::ostream& out);

// Full argument parsing and dispatch.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kadupul::cli
