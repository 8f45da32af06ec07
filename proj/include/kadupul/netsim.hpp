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

#include "kadupul/economics.hpp"
#include "kadupul/ledger.hpp"
#include "kadupul/scenario.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace kadupul::netsim {

// propagation + length / bandwidth, in nanoseconds (serialisation rounded up).
SimTime transfer_time(std::uint64_t message_length, SimTime propagation, double bandwidth);
SimTime transfer_time(const ScenarioConfig& config, std::uint64_t message_length, const LinkSpec& link);

struct RouteLatency {
    std::vector<NodeId> route;
    SimTime latency = 0;
};

struct PathComparison {
    NodeId src;
    NodeId dst;
    std::uint64_t message_length = 0;
    RouteLatency isp;
    RouteLatency edge;
};

// Minimum-latency route over ISP backhaul links and over edge wireless links,
// each summing per-hop transfer_time. Throws std::runtime_error when either
// class has no route.
PathComparison compare_paths(const ScenarioConfig& config, const NodeId& src, const NodeId& dst,
                             std::uint64_t message_length);

// Time a cracker needs for one block: iterations / hash_rate.
SimTime crack_duration(std::uint64_t iterations, double hash_rate);

struct TraceRow {
    SimTime time = 0;
    NodeId node;
    std::string phase_from;
    std::string phase_to;
    std::string event;
    std::string actions;
};

struct LatencyRow {
    std::string workload_id;
    std::string model;
    std::string kind;
    NodeId src;
    NodeId dst;
    std::string route;
    std::uint64_t message_length = 0;
    SimTime start = 0;
    std::optional<SimTime> end;
};

struct ChainInfo {
    ledger::ChainId chain_id = 0;
    std::string workload_id;
    NodeId publisher;
    SimTime visible_at = 0;
    std::vector<NodeId> intended_claimants;
};

struct WorkloadOutcome {
    std::string workload_id;
    std::string model;
    std::string status;
    nlohmann::json detail;
};

struct SimulationReport {
    std::string scenario_name;
    std::uint64_t seed = 0;
    SimTime end_time = 0;
    bool horizon_exceeded = false;
    std::uint64_t events_processed = 0;
    std::size_t max_window_occupancy = 0;
    std::vector<ledger::ClaimLogRow> claims;
    std::vector<TraceRow> trace;
    std::vector<economics::PayoffRecord> balances;
    std::vector<LatencyRow> latency;
    std::vector<ChainInfo> chains;
    std::vector<WorkloadOutcome> workloads;
    Amount claimed_confirmed_value = 0;

    // Accepted claims only.
    std::vector<ledger::ClaimLogRow> accepted_claims() const;
    const WorkloadOutcome* outcome(const std::string& workload_id) const;
};

// Runs a validated scenario to quiescence or its horizon. Throws
// std::invalid_argument listing diagnostics when the scenario is invalid.
SimulationReport run(const ScenarioConfig& scenario);

}  // namespace kadupul::netsim
