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

#include "kadupul/report.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kadupul::report {

using nlohmann::json;

std::string csv_cell(const std::string& text)
{
    if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string claims_csv(const netsim::SimulationReport& report)
{
    std::ostringstream os;
    os << "chain_id,block_index,claimant,result,reason,claim_time,confirm_time\n";
    for (const auto& c : report.claims) {
        os << c.chain_id << ',' << c.block_index << ',' << csv_cell(c.claimant) << ','
           << (c.rejection ? "rejected" : "accepted") << ','
           << (c.rejection ? std::string(ledger::to_string(*c.rejection)) : "") << ',' << format_time(c.claim_time)
           << ',' << (c.confirm_time ? format_time(*c.confirm_time) : "") << '\n';
    }
    return os.str();
}

std::string events_csv(const netsim::SimulationReport& report)
{
    std::ostringstream os;
    os << "time,node,phase_from,phase_to,event,actions\n";
    for (const auto& r : report.trace) {
        os << format_time(r.time) << ',' << csv_cell(r.node) << ',' << r.phase_from << ',' << r.phase_to << ','
           << r.event << ',' << csv_cell(r.actions) << '\n';
    }
    return os.str();
}

std::string balances_csv(const netsim::SimulationReport& report)
{
    std::ostringstream os;
    os << "node_id,rewards_confirmed,costs,net\n";
    for (const auto& b : report.balances)
        os << csv_cell(b.node_id) << ',' << b.rewards_confirmed << ',' << b.forwarding_costs_incurred << ',' << b.net
           << '\n';
    return os.str();
}

std::string latency_csv(const netsim::SimulationReport& report)
{
    std::ostringstream os;
    os << "workload_id,model,kind,src,dst,route,message_length,start,end,latency\n";
    for (const auto& r : report.latency) {
        os << csv_cell(r.workload_id) << ',' << r.model << ',' << r.kind << ',' << csv_cell(r.src) << ','
           << csv_cell(r.dst) << ',' << csv_cell(r.route) << ',' << r.message_length << ',' << format_time(r.start)
           << ',' << (r.end ? format_time(*r.end) : "") << ',' << (r.end ? format_time(*r.end - r.start) : "")
           << '\n';
    }
    return os.str();
}

std::string summary_json(const netsim::SimulationReport& report)
{
    json j;
    j["scenario"] = report.scenario_name;
    j["seed"] = report.seed;
    j["end_time"] = format_time(report.end_time);
    j["horizon_exceeded"] = report.horizon_exceeded;
    j["events_processed"] = report.events_processed;
    j["max_window_occupancy"] = report.max_window_occupancy;
    j["claims_submitted"] = report.claims.size();
    j["claims_accepted"] = report.accepted_claims().size();
    j["claimed_confirmed_value"] = report.claimed_confirmed_value;
    Amount rewards = 0;
    for (const auto& b : report.balances) rewards += b.rewards_confirmed;
    j["total_rewards_confirmed"] = rewards;

    json chains = json::array();
    for (const auto& c : report.chains)
        chains.push_back({{"chain_id", c.chain_id},
                          {"workload_id", c.workload_id},
                          {"publisher", c.publisher},
                          {"visible_at", format_time(c.visible_at)},
                          {"intended_claimants", c.intended_claimants}});
    j["chains"] = chains;

    json workloads = json::array();
    for (const auto& w : report.workloads)
        workloads.push_back({{"id", w.workload_id}, {"model", w.model}, {"status", w.status}, {"detail", w.detail}});
    j["workloads"] = workloads;
    return j.dump(2) + "\n";
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

void write_all(const netsim::SimulationReport& report, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    write_file(dir / "claims.csv", claims_csv(report));
    write_file(dir / "events.csv", events_csv(report));
    write_file(dir / "balances.csv", balances_csv(report));
    write_file(dir / "latency.csv", latency_csv(report));
    write_file(dir / "summary.json", summary_json(report));
}

}  // namespace kadupul::report
