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

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace kadupul::netsim {

using nlohmann::json;

std::string_view to_string(Role r)
{
    switch (r) {
        case Role::sender: return "sender";
        case Role::forwarder: return "forwarder";
        case Role::receiver: return "receiver";
        case Role::cracker: return "cracker";
        case Role::cache: return "cache";
    }
    return "unknown";
}

std::string_view to_string(LinkKind k)
{
    switch (k) {
        case LinkKind::edge_wireless: return "edge_wireless";
        case LinkKind::isp_backhaul: return "isp_backhaul";
        case LinkKind::control_plane: return "control_plane";
    }
    return "unknown";
}

std::string_view to_string(WorkloadModel m)
{
    switch (m) {
        case WorkloadModel::double_incentive: return "double_incentive";
        case WorkloadModel::all_or_nothing: return "all_or_nothing";
        case WorkloadModel::contract: return "contract";
        case WorkloadModel::competing: return "competing";
        case WorkloadModel::cache_demo: return "cache_demo";
    }
    return "unknown";
}

std::string format(const Diagnostic& d) { return d.field + ": " + d.message; }

const NodeSpec* ScenarioConfig::find_node(const NodeId& id) const
{
    auto it = std::find_if(nodes.begin(), nodes.end(), [&](const NodeSpec& n) { return n.id == id; });
    return it == nodes.end() ? nullptr : &*it;
}

const ChainSpec* ScenarioConfig::find_chain(const std::string& id) const
{
    auto it = std::find_if(chains.begin(), chains.end(), [&](const ChainSpec& c) { return c.id == id; });
    return it == chains.end() ? nullptr : &*it;
}

namespace {

bool joins(const LinkSpec& l, const NodeId& a, const NodeId& b)
{
    return (l.a == a && l.b == b) || (l.a == b && l.b == a);
}

}  // namespace

const LinkSpec* ScenarioConfig::find_data_link(const NodeId& a, const NodeId& b) const
{
    for (const auto& l : links)
        if (l.kind != LinkKind::control_plane && joins(l, a, b)) return &l;
    return nullptr;
}

const LinkSpec* ScenarioConfig::find_control_link(const NodeId& a, const NodeId& b) const
{
    for (const auto& l : links)
        if (l.kind == LinkKind::control_plane && joins(l, a, b)) return &l;
    return nullptr;
}

ledger::LedgerParams ScenarioConfig::ledger_params() const
{
    return {seconds_to_time(confirmation_delay_s), seconds_to_time(publication_delay_s)};
}

SimTime link_propagation(const ScenarioConfig& config, const LinkSpec& link)
{
    if (link.propagation_delay_s) return seconds_to_time(*link.propagation_delay_s);
    switch (link.kind) {
        case LinkKind::edge_wireless: {
            const auto* a = config.find_node(link.a);
            const auto* b = config.find_node(link.b);
            const double distance = (a && b) ? std::hypot(a->x - b->x, a->y - b->y) : 0.0;
            return seconds_to_time(distance / kSpeedOfLight + config.defaults.processing_delay_s);
        }
        case LinkKind::isp_backhaul:
        case LinkKind::control_plane: return seconds_to_time(config.defaults.control_plane_delay_s);
    }
    return 0;
}

namespace {

// Collects one diagnostic per malformed field instead of stopping at the first.
class Reader {
public:
    explicit Reader(std::vector<Diagnostic>& diags) : diags_(diags) {}

    void error(const std::string& field, const std::string& message) { diags_.push_back({field, message}); }

    const json* member(const json& obj, const std::string& key, const std::string& path, bool required)
    {
        if (!obj.is_object()) {
            error(path, "expected an object");
            return nullptr;
        }
        auto it = obj.find(key);
        if (it == obj.end() || it->is_null()) {
            if (required) error(join(path, key), "missing required field");
            return nullptr;
        }
        return &*it;
    }

    bool string(const json& obj, const std::string& key, const std::string& path, std::string& out, bool required)
    {
        const json* v = member(obj, key, path, required);
        if (v == nullptr) return false;
        if (!v->is_string()) {
            error(join(path, key), "expected a string");
            return false;
        }
        out = v->get<std::string>();
        return true;
    }

    bool number(const json& obj, const std::string& key, const std::string& path, double& out, bool required)
    {
        const json* v = member(obj, key, path, required);
        if (v == nullptr) return false;
        if (!v->is_number()) {
            error(join(path, key), "expected a number");
            return false;
        }
        out = v->get<double>();
        return true;
    }

    template <typename Int>
    bool integer(const json& obj, const std::string& key, const std::string& path, Int& out, bool required)
    {
        const json* v = member(obj, key, path, required);
        if (v == nullptr) return false;
        if (!v->is_number_integer()) {
            error(join(path, key), "expected an integer");
            return false;
        }
        if constexpr (std::is_unsigned_v<Int>) {
            if (v->is_number_unsigned() || v->get<std::int64_t>() >= 0) {
                out = v->get<Int>();
                return true;
            }
            error(join(path, key), "expected a non-negative integer");
            return false;
        } else {
            out = v->get<Int>();
            return true;
        }
    }

    bool boolean(const json& obj, const std::string& key, const std::string& path, bool& out)
    {
        const json* v = member(obj, key, path, false);
        if (v == nullptr) return false;
        if (!v->is_boolean()) {
            error(join(path, key), "expected true or false");
            return false;
        }
        out = v->get<bool>();
        return true;
    }

    bool string_list(const json& obj, const std::string& key, const std::string& path, std::vector<std::string>& out,
                     bool required)
    {
        const json* v = member(obj, key, path, required);
        if (v == nullptr) return false;
        if (!v->is_array()) {
            error(join(path, key), "expected an array of strings");
            return false;
        }
        out.clear();
        for (std::size_t i = 0; i < v->size(); ++i) {
            if (!(*v)[i].is_string()) {
                error(join(path, key) + "[" + std::to_string(i) + "]", "expected a string");
                continue;
            }
            out.push_back((*v)[i].get<std::string>());
        }
        return true;
    }

    const json* array(const json& obj, const std::string& key, const std::string& path, bool required)
    {
        const json* v = member(obj, key, path, required);
        if (v == nullptr) return nullptr;
        if (!v->is_array()) {
            error(join(path, key), "expected an array");
            return nullptr;
        }
        return v;
    }

    static std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
    static std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

private:
    std::vector<Diagnostic>& diags_;
};

template <typename Enum>
bool parse_enum(Reader& r, const json& obj, const std::string& key, const std::string& path,
                std::initializer_list<std::pair<std::string_view, Enum>> options, Enum& out, bool required)
{
    std::string text;
    if (!r.string(obj, key, path, text, required)) return false;
    for (const auto& [name, value] : options) {
        if (name == text) {
            out = value;
            return true;
        }
    }
    std::string allowed;
    for (const auto& [name, value] : options) allowed += (allowed.empty() ? "" : ", ") + std::string(name);
    r.error(Reader::join(path, key), "unknown value '" + text + "' (expected one of: " + allowed + ")");
    return false;
}

NodeSpec parse_node(Reader& r, const json& j, const std::string& path)
{
    NodeSpec n;
    r.string(j, "id", path, n.id, true);
    parse_enum(r, j, "role", path,
               {{"sender", Role::sender},
                {"forwarder", Role::forwarder},
                {"receiver", Role::receiver},
                {"cracker", Role::cracker},
                {"cache", Role::cache}},
               n.role, true);
    if (const json* pos = r.member(j, "position", path, false)) {
        if (pos->is_array() && pos->size() == 2 && (*pos)[0].is_number() && (*pos)[1].is_number()) {
            n.x = (*pos)[0].get<double>();
            n.y = (*pos)[1].get<double>();
        } else {
            r.error(Reader::join(path, "position"), "expected [x, y] in meters");
        }
    }
    r.number(j, "hash_rate", path, n.hash_rate, false);
    r.integer(j, "cache_capacity", path, n.cache_capacity, false);
    r.integer(j, "forwarding_cost", path, n.forwarding_cost, false);
    r.integer(j, "price", path, n.price, false);
    parse_enum(r, j, "behavior", path, {{"honest", Behavior::honest}, {"withhold_ack", Behavior::withhold_ack}},
               n.behavior, false);
    return n;
}

LinkSpec parse_link(Reader& r, const json& j, const std::string& path)
{
    LinkSpec l;
    r.string(j, "a", path, l.a, true);
    r.string(j, "b", path, l.b, true);
    parse_enum(r, j, "kind", path,
               {{"edge_wireless", LinkKind::edge_wireless},
                {"isp_backhaul", LinkKind::isp_backhaul},
                {"control_plane", LinkKind::control_plane}},
               l.kind, true);
    double delay = 0.0;
    if (r.number(j, "propagation_delay_s", path, delay, false)) l.propagation_delay_s = delay;
    r.number(j, "bandwidth", path, l.bandwidth, true);
    r.string(j, "technology", path, l.technology_tag, false);
    return l;
}

ChainSpec parse_chain(Reader& r, const json& j, const std::string& path)
{
    ChainSpec c;
    r.string(j, "id", path, c.id, true);
    r.integer(j, "iterations", path, c.iterations, true);
    if (const json* values = r.array(j, "values", path, true)) {
        for (std::size_t i = 0; i < values->size(); ++i) {
            if ((*values)[i].is_number_integer())
                c.values.push_back((*values)[i].get<Amount>());
            else
                r.error(Reader::index(Reader::join(path, "values"), i), "expected an integer amount");
        }
    }
    return c;
}

FaultSpec parse_fault(Reader& r, const json& j, const std::string& path)
{
    FaultSpec f;
    parse_enum(r, j, "kind", path, {{"drop", FaultKind::drop}, {"corrupt", FaultKind::corrupt}}, f.kind, true);
    r.integer(j, "hop", path, f.hop, true);
    r.integer(j, "chunk_index", path, f.chunk_index, true);
    r.number(j, "probability", path, f.probability, false);
    return f;
}

WorkloadSpec parse_workload(Reader& r, const json& j, const std::string& path)
{
    WorkloadSpec w;
    r.string(j, "id", path, w.id, true);
    parse_enum(r, j, "model", path,
               {{"double_incentive", WorkloadModel::double_incentive},
                {"all_or_nothing", WorkloadModel::all_or_nothing},
                {"contract", WorkloadModel::contract},
                {"competing", WorkloadModel::competing},
                {"cache_demo", WorkloadModel::cache_demo}},
               w.model, true);
    r.number(j, "start_s", path, w.start_s, false);
    r.integer(j, "message_length", path, w.message_length, true);
    r.integer(j, "chunk_size", path, w.chunk_size, w.model != WorkloadModel::competing);
    if (const json* faults = r.array(j, "faults", path, false))
        for (std::size_t i = 0; i < faults->size(); ++i)
            w.faults.push_back(parse_fault(r, (*faults)[i], Reader::index(Reader::join(path, "faults"), i)));

    switch (w.model) {
        case WorkloadModel::double_incentive:
        case WorkloadModel::all_or_nothing:
            r.string_list(j, "path", path, w.path, true);
            r.string(j, "chain", path, w.chain, w.model == WorkloadModel::double_incentive);
            break;
        case WorkloadModel::contract: {
            r.string(j, "principal", path, w.principal, true);
            r.string(j, "contractor", path, w.contractor, true);
            r.string(j, "receiver", path, w.receiver, true);
            r.integer(j, "price", path, w.price, true);
            r.number(j, "margin", path, w.margin, false);
            r.integer(j, "iterations", path, w.iterations, true);
            std::string mode = "push";
            if (r.string(j, "mode", path, mode, false) && mode != "push" && mode != "pull")
                r.error(Reader::join(path, "mode"), "expected push or pull");
            w.pull = mode == "pull";
            break;
        }
        case WorkloadModel::competing: {
            r.string(j, "sender", path, w.sender, true);
            r.string(j, "receiver", path, w.receiver, true);
            if (const json* paths = r.array(j, "paths", path, true)) {
                for (std::size_t i = 0; i < paths->size(); ++i) {
                    const auto p = Reader::index(Reader::join(path, "paths"), i);
                    std::vector<NodeId> hops;
                    if (!(*paths)[i].is_array()) {
                        r.error(p, "expected an array of node ids");
                        continue;
                    }
                    for (std::size_t h = 0; h < (*paths)[i].size(); ++h) {
                        if ((*paths)[i][h].is_string())
                            hops.push_back((*paths)[i][h].get<std::string>());
                        else
                            r.error(Reader::index(p, h), "expected a string");
                    }
                    w.paths.push_back(std::move(hops));
                }
            }
            if (const json* weights = r.array(j, "path_weights", path, false)) {
                for (std::size_t i = 0; i < weights->size(); ++i) {
                    std::vector<std::uint64_t> ws;
                    const auto& row = (*weights)[i];
                    if (!row.is_array()) {
                        r.error(Reader::index(Reader::join(path, "path_weights"), i), "expected an array of integers");
                        continue;
                    }
                    for (const auto& v : row) {
                        if (v.is_number_unsigned())
                            ws.push_back(v.get<std::uint64_t>());
                        else
                            r.error(Reader::index(Reader::join(path, "path_weights"), i), "weights must be non-negative integers");
                    }
                    w.path_weights.push_back(std::move(ws));
                }
            }
            r.integer(j, "generation_size", path, w.generation_size, true);
            r.integer(j, "reward_pool", path, w.reward_pool, true);
            r.integer(j, "iterations", path, w.iterations, true);
            r.integer(j, "max_packets_per_path", path, w.max_packets_per_path, false);
            break;
        }
        case WorkloadModel::cache_demo: {
            r.string_list(j, "path", path, w.path, true);
            r.string_list(j, "caches", path, w.caches, false);
            r.integer(j, "iterations", path, w.iterations, true);
            r.integer(j, "budget", path, w.budget, true);
            if (const json* times = r.array(j, "request_times_s", path, true)) {
                for (std::size_t i = 0; i < times->size(); ++i) {
                    if ((*times)[i].is_number())
                        w.request_times_s.push_back((*times)[i].get<double>());
                    else
                        r.error(Reader::index(Reader::join(path, "request_times_s"), i), "expected a number");
                }
            }
            break;
        }
    }
    return w;
}

}  // namespace

ParseResult parse_scenario(const json& doc)
{
    ParseResult result;
    Reader r(result.diagnostics);
    auto& cfg = result.config;
    if (!doc.is_object()) {
        r.error("scenario", "expected a JSON object at top level");
        return result;
    }

    r.string(doc, "name", "", cfg.name, false);
    r.integer(doc, "seed", "", cfg.seed, false);
    double horizon = 0.0;
    if (r.number(doc, "horizon_s", "", horizon, false)) cfg.horizon_s = horizon;

    if (const json* led = r.member(doc, "ledger", "", false)) {
        r.number(*led, "confirmation_delay_s", "ledger", cfg.confirmation_delay_s, false);
        r.number(*led, "publication_delay_s", "ledger", cfg.publication_delay_s, false);
    }
    if (const json* d = r.member(doc, "defaults", "", false)) {
        r.number(*d, "processing_delay_s", "defaults", cfg.defaults.processing_delay_s, false);
        r.number(*d, "control_plane_delay_s", "defaults", cfg.defaults.control_plane_delay_s, false);
        r.number(*d, "control_plane_bandwidth", "defaults", cfg.defaults.control_plane_bandwidth, false);
        r.number(*d, "forwarder_timeout_s", "defaults", cfg.defaults.forwarder_timeout_s, false);
        r.integer(*d, "window_capacity", "defaults", cfg.defaults.window_capacity, false);
        r.number(*d, "utilization_window_s", "defaults", cfg.defaults.utilization_window_s, false);
        r.number(*d, "surge_cap", "defaults", cfg.defaults.surge_cap, false);
    }

    if (const json* nodes = r.array(doc, "nodes", "", true))
        for (std::size_t i = 0; i < nodes->size(); ++i) cfg.nodes.push_back(parse_node(r, (*nodes)[i], Reader::index("nodes", i)));
    if (const json* links = r.array(doc, "links", "", false))
        for (std::size_t i = 0; i < links->size(); ++i) cfg.links.push_back(parse_link(r, (*links)[i], Reader::index("links", i)));
    if (const json* chains = r.array(doc, "chains", "", false))
        for (std::size_t i = 0; i < chains->size(); ++i)
            cfg.chains.push_back(parse_chain(r, (*chains)[i], Reader::index("chains", i)));
    if (const json* workloads = r.array(doc, "workloads", "", false))
        for (std::size_t i = 0; i < workloads->size(); ++i)
            cfg.workloads.push_back(parse_workload(r, (*workloads)[i], Reader::index("workloads", i)));
    if (const json* comps = r.array(doc, "path_comparisons", "", false)) {
        for (std::size_t i = 0; i < comps->size(); ++i) {
            PathComparisonSpec pc;
            const auto p = Reader::index("path_comparisons", i);
            r.string((*comps)[i], "src", p, pc.src, true);
            r.string((*comps)[i], "dst", p, pc.dst, true);
            r.integer((*comps)[i], "message_length", p, pc.message_length, false);
            cfg.path_comparisons.push_back(pc);
        }
    }
    return result;
}

ParseResult parse_scenario_text(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        ParseResult result;
        result.diagnostics.push_back({"scenario", std::string("JSON syntax error: ") + e.what()});
        return result;
    }
    return parse_scenario(doc);
}

namespace {

class Validator {
public:
    Validator(const ScenarioConfig& cfg, std::vector<Diagnostic>& diags) : cfg_(cfg), diags_(diags) {}

    void error(const std::string& field, const std::string& message) { diags_.push_back({field, message}); }

    bool node_exists(const NodeId& id, const std::string& field)
    {
        if (cfg_.find_node(id) != nullptr) return true;
        error(field, "unknown node '" + id + "'");
        return false;
    }

    void data_route(const std::vector<NodeId>& route, const std::string& field)
    {
        std::set<NodeId> seen;
        bool all_known = true;
        for (std::size_t i = 0; i < route.size(); ++i) {
            all_known = node_exists(route[i], field + "[" + std::to_string(i) + "]") && all_known;
            if (!seen.insert(route[i]).second) error(field, "node '" + route[i] + "' appears twice");
        }
        if (!all_known) return;
        for (std::size_t i = 0; i + 1 < route.size(); ++i)
            if (cfg_.find_data_link(route[i], route[i + 1]) == nullptr)
                error(field, "no data link between '" + route[i] + "' and '" + route[i + 1] + "'");
    }

    void relays(const std::vector<NodeId>& route, std::size_t first, std::size_t last, const std::string& field)
    {
        for (std::size_t i = first; i < last && i < route.size(); ++i) {
            const auto* n = cfg_.find_node(route[i]);
            if (n != nullptr && n->role != Role::forwarder && n->role != Role::cache)
                error(field + "[" + std::to_string(i) + "]",
                      "node '" + n->id + "' has role " + std::string(to_string(n->role)) + " and cannot relay");
        }
    }

    void message(const WorkloadSpec& w, const std::string& field, bool needs_chunks)
    {
        if (w.message_length < 1) error(field + ".message_length", "must be at least 1 byte");
        if (needs_chunks && (w.chunk_size < 1 || w.chunk_size > w.message_length))
            error(field + ".chunk_size", "must lie in 1..message_length");
        if (w.start_s < 0 || !std::isfinite(w.start_s)) error(field + ".start_s", "must be a non-negative time");
    }

    void faults(const WorkloadSpec& w, const std::string& field, std::size_t hops)
    {
        for (std::size_t i = 0; i < w.faults.size(); ++i) {
            const auto& f = w.faults[i];
            const auto p = field + ".faults[" + std::to_string(i) + "]";
            if (f.hop >= hops) error(p + ".hop", "path has only " + std::to_string(hops) + " links");
            if (w.chunk_size > 0 && f.chunk_index >= (w.message_length + w.chunk_size - 1) / w.chunk_size)
                error(p + ".chunk_index", "message has fewer chunks");
            if (!(f.probability >= 0.0 && f.probability <= 1.0)) error(p + ".probability", "must lie in [0, 1]");
        }
    }

    void run()
    {
        std::set<NodeId> ids;
        for (std::size_t i = 0; i < cfg_.nodes.size(); ++i) {
            const auto& n = cfg_.nodes[i];
            const auto p = "nodes[" + std::to_string(i) + "]";
            if (n.id.empty()) error(p + ".id", "node id must not be empty");
            if (!ids.insert(n.id).second) error(p + ".id", "duplicate node id '" + n.id + "'");
            if (n.role == Role::cracker && !(n.hash_rate > 0)) error(p + ".hash_rate", "crackers need a positive hash_rate");
            if (n.hash_rate < 0) error(p + ".hash_rate", "must be non-negative");
            if (n.forwarding_cost < 0) error(p + ".forwarding_cost", "must be non-negative");
            if (n.price < 0) error(p + ".price", "must be non-negative");
        }

        for (std::size_t i = 0; i < cfg_.links.size(); ++i) {
            const auto& l = cfg_.links[i];
            const auto p = "links[" + std::to_string(i) + "]";
            if (!ids.count(l.a)) error(p + ".a", "link references unknown node '" + l.a + "'");
            if (!ids.count(l.b)) error(p + ".b", "link references unknown node '" + l.b + "'");
            if (l.a == l.b) error(p, "link joins node '" + l.a + "' to itself");
            if (!(l.bandwidth > 0)) error(p + ".bandwidth", "bandwidth must be positive");
            if (l.propagation_delay_s && !(*l.propagation_delay_s >= 0))
                error(p + ".propagation_delay_s", "must be non-negative");
            if (l.kind == LinkKind::isp_backhaul && !l.propagation_delay_s)
                error(p + ".propagation_delay_s", "ISP backhaul links need a configured fixed delay");
        }

        std::set<std::string> chain_ids;
        for (std::size_t i = 0; i < cfg_.chains.size(); ++i) {
            const auto& c = cfg_.chains[i];
            const auto p = "chains[" + std::to_string(i) + "]";
            if (!chain_ids.insert(c.id).second) error(p + ".id", "duplicate chain id '" + c.id + "'");
            if (c.iterations < 1) error(p + ".iterations", "must be at least 1");
            if (c.values.empty()) error(p + ".values", "a chain needs at least one block");
            for (std::size_t v = 0; v < c.values.size(); ++v)
                if (c.values[v] < 0) error(p + ".values[" + std::to_string(v) + "]", "must be non-negative");
        }

        std::set<std::string> workload_ids;
        for (std::size_t i = 0; i < cfg_.workloads.size(); ++i) workload(cfg_.workloads[i], "workloads[" + std::to_string(i) + "]", workload_ids);

        for (std::size_t i = 0; i < cfg_.path_comparisons.size(); ++i) {
            const auto& pc = cfg_.path_comparisons[i];
            const auto p = "path_comparisons[" + std::to_string(i) + "]";
            node_exists(pc.src, p + ".src");
            node_exists(pc.dst, p + ".dst");
        }

        if (cfg_.horizon_s && !(*cfg_.horizon_s > 0)) error("horizon_s", "must be positive");
        if (!(cfg_.confirmation_delay_s >= 0)) error("ledger.confirmation_delay_s", "must be non-negative");
        if (!(cfg_.publication_delay_s >= 0)) error("ledger.publication_delay_s", "must be non-negative");
        const auto& d = cfg_.defaults;
        if (!(d.processing_delay_s >= 0)) error("defaults.processing_delay_s", "must be non-negative");
        if (!(d.control_plane_delay_s >= 0)) error("defaults.control_plane_delay_s", "must be non-negative");
        if (!(d.control_plane_bandwidth > 0)) error("defaults.control_plane_bandwidth", "must be positive");
        if (!(d.forwarder_timeout_s > 0)) error("defaults.forwarder_timeout_s", "must be positive");
        if (d.window_capacity < 1) error("defaults.window_capacity", "must be at least 1");
        if (!(d.utilization_window_s > 0)) error("defaults.utilization_window_s", "must be positive");
        if (!(d.surge_cap >= 1)) error("defaults.surge_cap", "must be at least 1");
    }

    void workload(const WorkloadSpec& w, const std::string& p, std::set<std::string>& seen)
    {
        if (w.id.empty()) error(p + ".id", "workload id must not be empty");
        if (!seen.insert(w.id).second) error(p + ".id", "duplicate workload id '" + w.id + "'");

        switch (w.model) {
            case WorkloadModel::double_incentive:
            case WorkloadModel::all_or_nothing: {
                const bool di = w.model == WorkloadModel::double_incentive;
                message(w, p, true);
                if (w.path.size() < (di ? 3u : 2u))
                    error(p + ".path", di ? "needs sender, at least one forwarder and receiver"
                                          : "needs at least sender and receiver");
                data_route(w.path, p + ".path");
                if (w.path.size() >= 2) relays(w.path, 1, w.path.size() - 1, p + ".path");
                faults(w, p, w.path.empty() ? 0 : w.path.size() - 1);
                const std::size_t forwarders = w.path.size() >= 2 ? w.path.size() - 2 : 0;
                const auto* chain = cfg_.find_chain(w.chain);
                if (chain == nullptr) {
                    if (forwarders > 0 || di) error(p + ".chain", "unknown chain '" + w.chain + "'");
                } else if (chain->values.size() != forwarders) {
                    error(p + ".chain", "chain '" + chain->id + "' has " + std::to_string(chain->values.size()) +
                                            " values but the path has " + std::to_string(forwarders) +
                                            " forwarders; one reward block is generated for each forwarder");
                }
                break;
            }
            case WorkloadModel::contract: {
                message(w, p, true);
                node_exists(w.principal, p + ".principal");
                node_exists(w.contractor, p + ".contractor");
                node_exists(w.receiver, p + ".receiver");
                if (w.price < 0) error(p + ".price", "must be non-negative");
                if (!(w.margin >= 0 && w.margin < 1)) error(p + ".margin", "must lie in [0, 1)");
                if (w.iterations < 1) error(p + ".iterations", "must be at least 1");
                if (w.pull && w.principal != w.receiver)
                    error(p + ".principal", "in pull mode the receiver negotiates the contract");
                if (!w.pull && w.principal == w.receiver) error(p + ".principal", "push principal cannot be the receiver");
                if (!w.pull && cfg_.find_node(w.principal) && cfg_.find_node(w.contractor) &&
                    cfg_.find_data_link(w.principal, w.contractor) == nullptr)
                    error(p + ".contractor", "no data link from principal '" + w.principal + "' to contractor");
                if (!w.faults.empty()) error(p + ".faults", "fault injection is not supported for contract workloads");
                break;
            }
            case WorkloadModel::competing: {
                message(w, p, false);
                node_exists(w.sender, p + ".sender");
                node_exists(w.receiver, p + ".receiver");
                if (w.paths.size() < 2) error(p + ".paths", "competing forwarders need at least two paths");
                std::set<NodeId> used;
                for (std::size_t i = 0; i < w.paths.size(); ++i) {
                    const auto pp = p + ".paths[" + std::to_string(i) + "]";
                    if (w.paths[i].empty()) error(pp, "path needs at least one forwarder");
                    for (const auto& n : w.paths[i])
                        if (!used.insert(n).second) error(pp, "node '" + n + "' is shared between paths; paths must be disjoint");
                    std::vector<NodeId> full{w.sender};
                    full.insert(full.end(), w.paths[i].begin(), w.paths[i].end());
                    full.push_back(w.receiver);
                    data_route(full, pp);
                    relays(full, 1, full.size() - 1, pp);
                }
                if (!w.path_weights.empty()) {
                    if (w.path_weights.size() != w.paths.size()) error(p + ".path_weights", "one weight list per path");
                    for (std::size_t i = 0; i < std::min(w.path_weights.size(), w.paths.size()); ++i) {
                        const auto& ws = w.path_weights[i];
                        if (ws.size() != w.paths[i].size())
                            error(p + ".path_weights[" + std::to_string(i) + "]", "one weight per forwarder");
                        else if (std::all_of(ws.begin(), ws.end(), [](std::uint64_t x) { return x == 0; }))
                            error(p + ".path_weights[" + std::to_string(i) + "]", "weights must not all be zero");
                    }
                }
                if (w.generation_size < 1 || w.generation_size > 255)
                    error(p + ".generation_size", "must lie in 1..255");
                else if (w.generation_size > w.message_length)
                    error(p + ".generation_size", "cannot exceed message_length");
                if (w.reward_pool < 0) error(p + ".reward_pool", "must be non-negative");
                if (w.iterations < 1) error(p + ".iterations", "must be at least 1");
                if (!w.faults.empty()) error(p + ".faults", "fault injection is not supported for competing workloads");
                break;
            }
            case WorkloadModel::cache_demo: {
                message(w, p, true);
                if (w.path.size() < 2) error(p + ".path", "needs origin and requester");
                data_route(w.path, p + ".path");
                if (w.path.size() >= 2) relays(w.path, 1, w.path.size() - 1, p + ".path");
                for (std::size_t i = 0; i < w.caches.size(); ++i) {
                    const auto cp = p + ".caches[" + std::to_string(i) + "]";
                    if (!node_exists(w.caches[i], cp)) continue;
                    if (cfg_.find_node(w.caches[i])->role != Role::cache) error(cp, "node '" + w.caches[i] + "' is not a cache");
                    if (!w.path.empty() && cfg_.find_node(w.path.back()) &&
                        cfg_.find_data_link(w.caches[i], w.path.back()) == nullptr)
                        error(cp, "cache '" + w.caches[i] + "' has no data link to the requester");
                }
                if (w.request_times_s.empty()) error(p + ".request_times_s", "at least one request is required");
                for (std::size_t i = 0; i < w.request_times_s.size(); ++i)
                    if (!(w.request_times_s[i] >= 0)) error(p + ".request_times_s[" + std::to_string(i) + "]", "must be non-negative");
                if (w.iterations < 1) error(p + ".iterations", "must be at least 1");
                if (w.budget < 0) error(p + ".budget", "must be non-negative");
                faults(w, p, w.path.empty() ? 0 : w.path.size() - 1);
                break;
            }
        }
    }

private:
    const ScenarioConfig& cfg_;
    std::vector<Diagnostic>& diags_;
};

}  // namespace

std::vector<Diagnostic> validate_scenario(const ScenarioConfig& config)
{
    std::vector<Diagnostic> diags;
    Validator(config, diags).run();
    return diags;
}

ParseResult load_scenario_text(const std::string& text)
{
    auto result = parse_scenario_text(text);
    if (result.diagnostics.size() == 1 && result.diagnostics.front().field == "scenario") return result;
    auto semantic = validate_scenario(result.config);
    result.diagnostics.insert(result.diagnostics.end(), semantic.begin(), semantic.end());
    return result;
}

nlohmann::json to_json(const ScenarioConfig& cfg)
{
    json doc;
    doc["name"] = cfg.name;
    doc["seed"] = cfg.seed;
    if (cfg.horizon_s) doc["horizon_s"] = *cfg.horizon_s;
    doc["ledger"] = {{"confirmation_delay_s", cfg.confirmation_delay_s}, {"publication_delay_s", cfg.publication_delay_s}};
    const auto& d = cfg.defaults;
    doc["defaults"] = {{"processing_delay_s", d.processing_delay_s},
                       {"control_plane_delay_s", d.control_plane_delay_s},
                       {"control_plane_bandwidth", d.control_plane_bandwidth},
                       {"forwarder_timeout_s", d.forwarder_timeout_s},
                       {"window_capacity", d.window_capacity},
                       {"utilization_window_s", d.utilization_window_s},
                       {"surge_cap", d.surge_cap}};
    doc["nodes"] = json::array();
    for (const auto& n : cfg.nodes) {
        doc["nodes"].push_back({{"id", n.id},
                                {"role", to_string(n.role)},
                                {"position", {n.x, n.y}},
                                {"hash_rate", n.hash_rate},
                                {"cache_capacity", n.cache_capacity},
                                {"forwarding_cost", n.forwarding_cost},
                                {"price", n.price},
                                {"behavior", n.behavior == Behavior::honest ? "honest" : "withhold_ack"}});
    }
    doc["links"] = json::array();
    for (const auto& l : cfg.links) {
        json jl{{"a", l.a}, {"b", l.b}, {"kind", to_string(l.kind)}, {"bandwidth", l.bandwidth}, {"technology", l.technology_tag}};
        if (l.propagation_delay_s) jl["propagation_delay_s"] = *l.propagation_delay_s;
        doc["links"].push_back(jl);
    }
    doc["chains"] = json::array();
    for (const auto& c : cfg.chains) doc["chains"].push_back({{"id", c.id}, {"iterations", c.iterations}, {"values", c.values}});
    doc["workloads"] = json::array();
    for (const auto& w : cfg.workloads) {
        json jw{{"id", w.id}, {"model", to_string(w.model)}, {"start_s", w.start_s}, {"message_length", w.message_length}};
        if (w.model != WorkloadModel::competing) jw["chunk_size"] = w.chunk_size;
        if (!w.faults.empty()) {
            jw["faults"] = json::array();
            for (const auto& f : w.faults)
                jw["faults"].push_back({{"kind", f.kind == FaultKind::drop ? "drop" : "corrupt"},
                                        {"hop", f.hop},
                                        {"chunk_index", f.chunk_index},
                                        {"probability", f.probability}});
        }
        switch (w.model) {
            case WorkloadModel::double_incentive:
            case WorkloadModel::all_or_nothing:
                jw["path"] = w.path;
                jw["chain"] = w.chain;
                break;
            case WorkloadModel::contract:
                jw["principal"] = w.principal;
                jw["contractor"] = w.contractor;
                jw["receiver"] = w.receiver;
                jw["price"] = w.price;
                jw["margin"] = w.margin;
                jw["iterations"] = w.iterations;
                jw["mode"] = w.pull ? "pull" : "push";
                break;
            case WorkloadModel::competing:
                jw["sender"] = w.sender;
                jw["receiver"] = w.receiver;
                jw["paths"] = w.paths;
                if (!w.path_weights.empty()) jw["path_weights"] = w.path_weights;
                jw["generation_size"] = w.generation_size;
                jw["reward_pool"] = w.reward_pool;
                jw["iterations"] = w.iterations;
                if (w.max_packets_per_path > 0) jw["max_packets_per_path"] = w.max_packets_per_path;
                break;
            case WorkloadModel::cache_demo:
                jw["path"] = w.path;
                jw["caches"] = w.caches;
                jw["iterations"] = w.iterations;
                jw["budget"] = w.budget;
                jw["request_times_s"] = w.request_times_s;
                break;
        }
        doc["workloads"].push_back(jw);
    }
    doc["path_comparisons"] = json::array();
    for (const auto& pc : cfg.path_comparisons)
        doc["path_comparisons"].push_back({{"src", pc.src}, {"dst", pc.dst}, {"message_length", pc.message_length}});
    return doc;
}

}  // namespace kadupul::netsim
