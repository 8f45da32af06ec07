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

#include "kadupul/economics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace kadupul::economics {

std::optional<ForwardingPath> select_path(const std::vector<std::vector<CapabilityQuote>>& candidates, Amount budget,
                                          SimTime latency_bound)
{
    ForwardingPath path;
    for (const auto& hop : candidates) {
        const CapabilityQuote* best = nullptr;
        for (const auto& q : hop) {
            if (q.price < 0) throw std::invalid_argument("quote from " + q.node_id + " has a negative price");
            if (q.expected_latency <= 0)
                throw std::invalid_argument("quote from " + q.node_id + " has a non-positive latency");
            if (q.expected_latency > latency_bound) continue;
            if (best == nullptr || std::tie(q.price, q.expected_latency, q.node_id) <
                                       std::tie(best->price, best->expected_latency, best->node_id))
                best = &q;
        }
        if (best == nullptr) return std::nullopt;
        path.hops.push_back(*best);
        path.total_price += best->price;
        path.total_latency += best->expected_latency;
    }
    if (path.total_price > budget) return std::nullopt;
    return path;
}

Amount surge_price(Amount base_price, double utilization, double cap)
{
    if (!(utilization >= 0.0 && utilization < 1.0)) throw std::invalid_argument("utilization must lie in [0, 1)");
    if (base_price < 0) throw std::invalid_argument("base price must be non-negative");
    if (!(cap >= 1.0)) throw std::invalid_argument("surge cap must be at least 1");
    const double multiplier = std::min(1.0 / (1.0 - utilization), cap);
    const double raw = static_cast<double>(base_price) * multiplier;
    // Absorb representation error such as 1 / (1 - 0.8) = 5.000000000000001.
    return static_cast<Amount>(std::ceil(raw - 1e-9 * std::max(1.0, raw)));
}

void UtilizationMeter::record_busy(SimTime start, SimTime end)
{
    if (end <= start) return;
    busy_.emplace_back(start, end);
}

double UtilizationMeter::utilization(SimTime now, SimTime window) const
{
    if (window <= 0) throw std::invalid_argument("utilization window must be positive");
    const SimTime from = now - window;
    SimTime busy = 0;
    for (const auto& [s, e] : busy_) {
        const SimTime lo = std::max(s, from);
        const SimTime hi = std::min(e, now);
        if (hi > lo) busy += hi - lo;
    }
    return std::min(1.0, static_cast<double>(busy) / static_cast<double>(window));
}

std::vector<PayoffRecord> settle(const SettlementInput& input)
{
    std::set<NodeId> ids(input.nodes.begin(), input.nodes.end());
    for (const auto& [id, v] : input.rewards_confirmed) ids.insert(id);
    for (const auto& [id, v] : input.forwarding_costs) ids.insert(id);

    std::vector<PayoffRecord> out;
    out.reserve(ids.size());
    for (const auto& id : ids) {
        PayoffRecord r;
        r.node_id = id;
        if (auto it = input.rewards_confirmed.find(id); it != input.rewards_confirmed.end()) r.rewards_confirmed = it->second;
        if (auto it = input.forwarding_costs.find(id); it != input.forwarding_costs.end())
            r.forwarding_costs_incurred = it->second;
        r.net = r.rewards_confirmed - r.forwarding_costs_incurred;
        out.push_back(std::move(r));
    }
    return out;
}

SettlementInput settlement_from_ledger(const ledger::Ledger& ledger, SimTime now, std::vector<NodeId> nodes,
                                       std::map<NodeId, Amount> forwarding_costs)
{
    return SettlementInput{std::move(nodes), ledger.confirmed_balances(now), std::move(forwarding_costs)};
}

}  // namespace kadupul::economics
