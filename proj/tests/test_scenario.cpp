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

#include "kadupul/scenario.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace kadupul;
using namespace kadupul::netsim;
using nlohmann::json;

namespace {

json minimal()
{
    return json::parse(R"({
      "name": "t", "seed": 4,
      "nodes": [
        {"id": "S", "role": "sender", "position": [0, 0]},
        {"id": "F", "role": "forwarder", "position": [1000, 0]},
        {"id": "R", "role": "receiver", "position": [2000, 0]}
      ],
      "links": [
        {"a": "S", "b": "F", "kind": "edge_wireless", "bandwidth": 1000000},
        {"a": "F", "b": "R", "kind": "edge_wireless", "bandwidth": 1000000}
      ],
      "chains": [{"id": "c", "iterations": 10, "values": [5]}],
      "workloads": [{"id": "w", "model": "double_incentive", "path": ["S", "F", "R"], "chain": "c",
                     "message_length": 100, "chunk_size": 10}]
    })");
}

bool mentions(const std::vector<Diagnostic>& diags, const std::string& field, const std::string& text)
{
    for (const auto& d : diags)
        if (d.field == field && d.message.find(text) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_CASE("minimal scenario parses and validates")
{
    const auto r = parse_scenario(minimal());
    REQUIRE(r.ok());
    CHECK(r.config.nodes.size() == 3);
    CHECK(r.config.seed == 4);
    CHECK(validate_scenario(r.config).empty());
}

TEST_CASE("empty scenario is valid")
{
    const auto r = load_scenario_text(R"({"nodes": []})");
    CHECK(r.ok());
}

TEST_CASE("missing node id names the field")
{
    auto doc = minimal();
    doc["nodes"][1].erase("id");
    const auto r = load_scenario_text(doc.dump());
    CHECK_FALSE(r.ok());
    CHECK(mentions(r.diagnostics, "nodes[1].id", ""));
}

TEST_CASE("every violation is reported")
{
    auto doc = minimal();
    doc["links"][0]["b"] = "ghost";
    doc["links"][1]["bandwidth"] = 0;
    doc["chains"][0]["values"] = json::array({1, 2});
    const auto r = load_scenario_text(doc.dump());
    CHECK(mentions(r.diagnostics, "links[0].b", "ghost"));
    CHECK(mentions(r.diagnostics, "links[1].bandwidth", "positive"));
    CHECK(mentions(r.diagnostics, "workloads[0].chain", "one reward block is generated for each forwarder"));
    CHECK(r.diagnostics.size() >= 3);
}

TEST_CASE("type errors and syntax errors")
{
    auto doc = minimal();
    doc["nodes"][0]["role"] = "pilot";
    doc["seed"] = "x";
    const auto r = load_scenario_text(doc.dump());
    CHECK(mentions(r.diagnostics, "nodes[0].role", "pilot"));
    CHECK(mentions(r.diagnostics, "seed", ""));
    const auto bad = load_scenario_text("{ not json");
    REQUIRE(bad.diagnostics.size() == 1);
    CHECK(bad.diagnostics[0].message.find("syntax") != std::string::npos);
}

TEST_CASE("semantic checks")
{
    auto doc = minimal();
    doc["links"].push_back({{"a", "S"}, {"b", "R"}, {"kind", "isp_backhaul"}, {"bandwidth", 1e6}});
    doc["links"].push_back({{"a", "F"}, {"b", "F"}, {"kind", "edge_wireless"}, {"bandwidth", 1e6}});
    doc["nodes"].push_back({{"id", "X"}, {"role", "cracker"}});
    doc["workloads"][0]["faults"] = json::array({{{"kind", "drop"}, {"hop", 5}, {"chunk_index", 0}}});
    const auto diags = validate_scenario(parse_scenario(doc).config);
    CHECK(mentions(diags, "links[2].propagation_delay_s", "ISP"));
    CHECK(mentions(diags, "links[3]", "itself"));
    CHECK(mentions(diags, "nodes[3].hash_rate", "positive"));
    CHECK(mentions(diags, "workloads[0].faults[0].hop", "links"));
}

TEST_CASE("relay roles and routes")
{
    auto doc = minimal();
    doc["workloads"][0]["path"] = json::array({"S", "R", "F"});
    const auto diags = validate_scenario(parse_scenario(doc).config);
    CHECK(mentions(diags, "workloads[0].path[1]", "cannot relay"));
    CHECK(mentions(diags, "workloads[0].path", "no data link"));
}

TEST_CASE("competing workload checks")
{
    auto doc = minimal();
    doc["workloads"][0] = json::parse(R"({"id": "c", "model": "competing", "sender": "S", "receiver": "R",
        "paths": [["F"], ["F"]], "generation_size": 300, "message_length": 100, "reward_pool": 10, "iterations": 5})");
    const auto diags = validate_scenario(parse_scenario(doc).config);
    CHECK(mentions(diags, "workloads[0].paths[1]", "disjoint"));
    CHECK(mentions(diags, "workloads[0].generation_size", "1..255"));
}

TEST_CASE("link propagation")
{
    auto cfg = parse_scenario(minimal()).config;
    const auto edge = link_propagation(cfg, cfg.links[0]);
    CHECK(edge == seconds_to_time(1000.0 / kSpeedOfLight + 1e-4));
    LinkSpec isp{"S", "R", LinkKind::isp_backhaul, 0.02, 1e6, ""};
    CHECK(link_propagation(cfg, isp) == 20'000'000);
    LinkSpec control{"S", "R", LinkKind::control_plane, std::nullopt, 1e6, ""};
    CHECK(link_propagation(cfg, control) == seconds_to_time(cfg.defaults.control_plane_delay_s));
}

TEST_CASE("to_json round trip")
{
    const auto cfg = parse_scenario(minimal()).config;
    const auto again = parse_scenario(to_json(cfg));
    REQUIRE(again.ok());
    CHECK(to_json(again.config) == to_json(cfg));
}

TEST_CASE("bundled scenario files validate")
{
    for (const char* name : {"double_incentive_line3", "double_incentive_withholding", "all_or_nothing_broadcast",
                             "contract_pull", "competing_multicast", "cache_repeat", "isp_vs_edge",
                             "cracker_race_sweep"}) {
        std::ifstream in(std::string(KADUPUL_SCENARIO_DIR) + "/" + name + ".json");
        REQUIRE(in);
        std::stringstream ss;
        ss << in.rdbuf();
        const auto r = load_scenario_text(ss.str());
        INFO(name);
        CHECK(r.ok());
    }
}
