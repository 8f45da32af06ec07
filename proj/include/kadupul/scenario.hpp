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

#include "kadupul/ledger.hpp"
#include "kadupul/sim_time.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace kadupul::netsim {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s

enum class Role { sender, forwarder, receiver, cracker, cache };
enum class Behavior { honest, withhold_ack };
enum class LinkKind { edge_wireless, isp_backhaul, control_plane };
enum class WorkloadModel { double_incentive, all_or_nothing, contract, competing, cache_demo };
enum class FaultKind { drop, corrupt };

std::string_view to_string(Role r);
std::string_view to_string(LinkKind k);
std::string_view to_string(WorkloadModel m);

struct NodeSpec {
    NodeId id;
    Role role = Role::forwarder;
    double x = 0.0;
    double y = 0.0;
    double hash_rate = 0.0;           // crackers, hash applications per second
    std::uint64_t cache_capacity = 0; // caches, bytes
    Amount forwarding_cost = 0;       // per message forwarded
    Amount price = 0;                 // quoted price for forwarding or cached delivery
    Behavior behavior = Behavior::honest;
};

struct LinkSpec {
    NodeId a;
    NodeId b;
    LinkKind kind = LinkKind::edge_wireless;
    std::optional<double> propagation_delay_s;  // explicit override
    double bandwidth = 0.0;                     // bytes per second
    std::string technology_tag;
};

struct ChainSpec {
    std::string id;
    std::uint64_t iterations = 1;
    std::vector<Amount> values;
};

struct FaultSpec {
    FaultKind kind = FaultKind::drop;
    std::size_t hop = 0;            // link index along the path, 0 = sender to first hop
    std::uint64_t chunk_index = 0;
    double probability = 1.0;
};

struct WorkloadSpec {
    std::string id;
    WorkloadModel model = WorkloadModel::double_incentive;
    double start_s = 0.0;
    std::uint64_t message_length = 0;
    std::uint64_t chunk_size = 0;
    std::vector<FaultSpec> faults;

    // double_incentive, all_or_nothing, cache_demo (origin route)
    std::vector<NodeId> path;
    std::string chain;

    // contract
    NodeId principal;
    NodeId contractor;
    NodeId receiver;
    Amount price = 0;
    double margin = 0.1;
    bool pull = false;
    std::uint64_t iterations = 0;  // contract, competing and cache_demo payment chains

    // competing
    NodeId sender;
    std::vector<std::vector<NodeId>> paths;
    std::vector<std::vector<std::uint64_t>> path_weights;
    std::size_t generation_size = 0;
    Amount reward_pool = 0;
    std::size_t max_packets_per_path = 0;  // 0 = 4k + 16

    // cache_demo
    std::vector<NodeId> caches;
    std::vector<double> request_times_s;
    Amount budget = 0;
};

struct PathComparisonSpec {
    NodeId src;
    NodeId dst;
    std::uint64_t message_length = 0;
};

struct SimDefaults {
    double processing_delay_s = 1e-4;
    double control_plane_delay_s = 0.02;
    double control_plane_bandwidth = 1.25e6;
    double forwarder_timeout_s = 10.0;
    std::size_t window_capacity = 16;
    double utilization_window_s = 1.0;
    double surge_cap = 10.0;
};

struct ScenarioConfig {
    std::string name;
    std::uint64_t seed = 0;
    std::optional<double> horizon_s;
    double confirmation_delay_s = 0.0;
    double publication_delay_s = 0.0;
    SimDefaults defaults;
    std::vector<NodeSpec> nodes;
    std::vector<LinkSpec> links;
    std::vector<ChainSpec> chains;
    std::vector<WorkloadSpec> workloads;
    std::vector<PathComparisonSpec> path_comparisons;

    const NodeSpec* find_node(const NodeId& id) const;
    const ChainSpec* find_chain(const std::string& id) const;
    // First data-plane link (edge or ISP) joining a and b in either direction.
    const LinkSpec* find_data_link(const NodeId& a, const NodeId& b) const;
    const LinkSpec* find_control_link(const NodeId& a, const NodeId& b) const;
    ledger::LedgerParams ledger_params() const;
};

struct Diagnostic {
    std::string field;
    std::string message;
};

std::string format(const Diagnostic& d);

struct ParseResult {
    ScenarioConfig config;
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return diagnostics.empty(); }
};

// Structural parse; every malformed field yields one diagnostic.
ParseResult parse_scenario(const nlohmann::json& doc);
ParseResult parse_scenario_text(const std::string& text);

// Semantic checks (dangling ids, zero bandwidth, one block per forwarder, ...).
std::vector<Diagnostic> validate_scenario(const ScenarioConfig& config);

// Parse then validate; the union of both diagnostic lists.
ParseResult load_scenario_text(const std::string& text);

// Propagation delay of a link: explicit value, or distance / c plus
// per-hop processing for edge links.
SimTime link_propagation(const ScenarioConfig& config, const LinkSpec& link);

nlohmann::json to_json(const ScenarioConfig& config);

}  // namespace kadupul::netsim
