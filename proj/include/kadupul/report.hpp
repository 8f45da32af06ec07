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

#include "kadupul/netsim.hpp"

#include <filesystem>
#include <string>

namespace kadupul::report {

// Column orders:
//   claims.csv    chain_id,block_index,claimant,result,reason,claim_time,confirm_time
//   events.csv    time,node,phase_from,phase_to,event,actions
//   balances.csv  node_id,rewards_confirmed,costs,net
//   latency.csv   workload_id,model,kind,src,dst,route,message_length,start,end,latency
// Times are seconds with nanosecond digits. Empty cells mean "not applicable".
std::string claims_csv(const netsim::SimulationReport& report);
std::string events_csv(const netsim::SimulationReport& report);
std::string balances_csv(const netsim::SimulationReport& report);
std::string latency_csv(const netsim::SimulationReport& report);
std::string summary_json(const netsim::SimulationReport& report);

// Writes all five files into dir, creating it if needed.
void write_all(const netsim::SimulationReport& report, const std::filesystem::path& dir);

// Quotes a text cell when it contains a delimiter, quote or newline.
std::string csv_cell(const std::string& text);

}  // namespace kadupul::report
