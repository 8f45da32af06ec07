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

#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kadupul::economics {

struct CapabilityQuote {
    NodeId node_id;
    std::string technology_tag;
    double range_meters = 0.0;
    SimTime expected_latency = 1;
    Amount price = 0;
};

struct ForwardingPath {
    std::vector<CapabilityQuote> hops;
    Amount total_price = 0;
    SimTime total_latency = 0;
};

// Greedy hop-by-hop negotiation. At each hop position the cheapest quote whose
// expected latency is within latency_bound wins; ties go to the lower latency,
// then the lexicographically smaller node id. Returns nullopt when some hop has
// no admissible quote or the total price exceeds the budget.
std::optional<ForwardingPath> select_path(const std::vector<std::vector<CapabilityQuote>>& candidates, Amount budget,
                                          SimTime latency_bound);

inline constexpr double kDefaultSurgeCap = 10.0;

// base_price * min(1 / (1 - utilization), cap), rounded up.
// Throws std::invalid_argument unless 0 <= utilization < 1.
Amount surge_price(Amount base_price, double utilization, double cap = kDefaultSurgeCap);

// Busy fraction of a link over a trailing window.
class UtilizationMeter {
public:
    void record_busy(SimTime start, SimTime end);
    double utilization(SimTime now, SimTime window) const;

private:
    std::deque<std::pair<SimTime, SimTime>> busy_;
};

struct PayoffRecord {
    NodeId node_id;
    Amount rewards_confirmed = 0;
    Amount forwarding_costs_incurred = 0;
    Amount net = 0;
};

struct SettlementInput {
    std::vector<NodeId> nodes;
    std::map<NodeId, Amount> rewards_confirmed;
    std::map<NodeId, Amount> forwarding_costs;
};

// One record per node (union of all inputs), ordered by node id.
std::vector<PayoffRecord> settle(const SettlementInput& input);

SettlementInput settlement_from_ledger(const ledger::Ledger& ledger, SimTime now, std::vector<NodeId> nodes,
                                       std::map<NodeId, Amount> forwarding_costs);

}  // namespace kadupul::economics
