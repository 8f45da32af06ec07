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

#include "kadupul/netsim.hpp"

#include "kadupul/coding.hpp"
#include "kadupul/protocol.hpp"
#include "kadupul/rng.hpp"
#include "kadupul/timelock.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <list>
#include <map>
#include <memory>
#include <queue>
#include <set>
#include <stdexcept>

namespace kadupul::netsim {

using nlohmann::json;
using protocol::ClaimTarget;
using protocol::ForwardingModel;
using protocol::Phase;

SimTime transfer_time(std::uint64_t message_length, SimTime propagation, double bandwidth)
{
    if (!(bandwidth > 0)) throw std::invalid_argument("bandwidth must be positive");
    const double serialisation = std::ceil(static_cast<double>(message_length) * 1e9 / bandwidth - 1e-6);
    return propagation + static_cast<SimTime>(std::max(0.0, serialisation));
}

SimTime transfer_time(const ScenarioConfig& config, std::uint64_t message_length, const LinkSpec& link)
{
    return transfer_time(message_length, link_propagation(config, link), link.bandwidth);
}

SimTime crack_duration(std::uint64_t iterations, double hash_rate)
{
    if (!(hash_rate > 0)) throw std::invalid_argument("hash_rate must be positive");
    return static_cast<SimTime>(std::llround(static_cast<double>(iterations) * 1e9 / hash_rate));
}

namespace {

RouteLatency shortest_route(const ScenarioConfig& config, const NodeId& src, const NodeId& dst,
                            std::uint64_t message_length, LinkKind kind)
{
    std::map<NodeId, SimTime> dist;
    std::map<NodeId, NodeId> prev;
    using Item = std::pair<SimTime, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> frontier;
    dist[src] = 0;
    frontier.emplace(0, src);
    while (!frontier.empty()) {
        auto [d, u] = frontier.top();
        frontier.pop();
        if (d != dist[u]) continue;
        if (u == dst) break;
        for (const auto& l : config.links) {
            if (l.kind != kind) continue;
            NodeId v;
            if (l.a == u) v = l.b;
            else if (l.b == u) v = l.a;
            else continue;
            const SimTime nd = d + transfer_time(config, message_length, l);
            auto it = dist.find(v);
            if (it == dist.end() || nd < it->second) {
                dist[v] = nd;
                prev[v] = u;
                frontier.emplace(nd, v);
            }
        }
    }
    if (!dist.count(dst))
        throw std::runtime_error("no " + std::string(to_string(kind)) + " route from '" + src + "' to '" + dst + "'");
    RouteLatency out;
    out.latency = dist[dst];
    for (NodeId at = dst;; at = prev[at]) {
        out.route.insert(out.route.begin(), at);
        if (at == src) break;
    }
    return out;
}

std::string join_route(const std::vector<NodeId>& route)
{
    std::string out;
    for (const auto& n : route) out += (out.empty() ? "" : ">") + n;
    return out;
}

}  // namespace

PathComparison compare_paths(const ScenarioConfig& config, const NodeId& src, const NodeId& dst,
                             std::uint64_t message_length)
{
    PathComparison pc;
    pc.src = src;
    pc.dst = dst;
    pc.message_length = message_length;
    pc.isp = shortest_route(config, src, dst, message_length, LinkKind::isp_backhaul);
    pc.edge = shortest_route(config, src, dst, message_length, LinkKind::edge_wireless);
    return pc;
}

std::vector<ledger::ClaimLogRow> SimulationReport::accepted_claims() const
{
    std::vector<ledger::ClaimLogRow> out;
    for (const auto& c : claims)
        if (!c.rejection) out.push_back(c);
    return out;
}

const WorkloadOutcome* SimulationReport::outcome(const std::string& workload_id) const
{
    for (const auto& w : workloads)
        if (w.workload_id == workload_id) return &w;
    return nullptr;
}

namespace {

constexpr std::uint64_t kSetupBytes = 128;
constexpr std::uint64_t kAckBytes = 32;
constexpr std::uint64_t kKeyBytes = 64;
constexpr std::uint64_t kPacketHeaderBytes = 8;

enum Purpose : std::uint64_t { kChainSeed = 1, kSecrets = 2, kMessage = 3, kFaults = 4, kCoding = 5 };

struct DirectedLink {
    const LinkSpec* spec = nullptr;
    SimTime propagation = 0;
    SimTime busy_until = 0;
    economics::UtilizationMeter meter;
};

// Per-hop payment of a chunked transfer: position 0 is the data source,
// 1..n the forwarders.
struct PaidPosition {
    ClaimTarget target;
    timelock::PuzzleKey key;
};

struct Transfer {
    std::size_t workload_index = 0;
    std::string workload_id;
    std::string kind;
    ForwardingModel model = ForwardingModel::double_incentive;
    std::vector<NodeId> path;
    Bytes message;
    protocol::MessageManifest manifest;
    SimTime start = 0;

    std::vector<protocol::ForwarderState> forwarders;  // positions 1..n
    protocol::ReceiverState receiver;

    std::vector<bool> tx_busy;            // per outgoing hop 0..n
    std::vector<bool> retry_pending;
    std::vector<std::uint64_t> in_flight;
    std::vector<std::uint64_t> sent;      // chunks started per hop
    std::map<std::pair<std::size_t, std::uint64_t>, FaultKind> faults;
    std::vector<bool> cost_charged;

    // Source-side payment (contract pull, cache delivery).
    std::optional<PaidPosition> source_paid;
    std::optional<Block32> source_nonce;
    bool source_claim_done = false;

    // All-or-nothing settlement.
    timelock::PuzzleChain chain;
    std::vector<ClaimTarget> aon_targets;

    std::optional<SimTime> delivered_at;
    bool intact = false;
    std::function<void(Transfer&)> on_delivered;

    std::size_t n() const { return path.size() - 2; }
};

struct CrackerWorker {
    NodeId cracker;
    ledger::ChainId chain = 0;
    double hash_rate = 1.0;
    std::optional<std::uint32_t> block;
    std::uint64_t token = 0;
};

struct PendingClaim {
    NodeId node;
    ClaimTarget target;
    timelock::PuzzleKey key;
    std::function<bool()> alive;
    std::function<void(const ledger::ClaimOutcome&)> on_final;
};

struct CacheStore {
    std::uint64_t capacity = 0;
    std::uint64_t used = 0;
    std::list<std::pair<std::string, std::uint64_t>> lru;  // front = most recent

    bool contains(const std::string& id) const
    {
        return std::any_of(lru.begin(), lru.end(), [&](const auto& e) { return e.first == id; });
    }
    void touch(const std::string& id)
    {
        auto it = std::find_if(lru.begin(), lru.end(), [&](const auto& e) { return e.first == id; });
        if (it != lru.end()) lru.splice(lru.begin(), lru, it);
    }
    bool store(const std::string& id, std::uint64_t size)
    {
        if (size > capacity) return false;
        if (contains(id)) {
            touch(id);
            return true;
        }
        while (used + size > capacity && !lru.empty()) {
            used -= lru.back().second;
            lru.pop_back();
        }
        lru.emplace_front(id, size);
        used += size;
        return true;
    }
};

struct CodedHop {
    std::deque<coding::CodedPacket> queue;
    bool busy = false;
    bool retry_pending = false;
};

struct CodedFlow {
    std::size_t workload_index = 0;
    std::string workload_id;
    coding::Generation generation;
    Bytes message;
    NodeId sender;
    NodeId receiver;
    std::vector<std::vector<NodeId>> routes;               // sender, forwarders..., receiver
    std::vector<std::vector<std::vector<coding::CodedPacket>>> held;  // [path][forwarder]
    std::vector<std::vector<CodedHop>> hops;                 // [path][hop]
    std::vector<std::vector<DeterministicRng>> recode_rng;   // [path][forwarder]
    std::vector<DeterministicRng> source_rng;                // [path]
    std::vector<std::size_t> source_sent;
    std::size_t max_packets = 0;
    std::unique_ptr<protocol::CreditingReceiver> receiver_state;
    bool stop = false;
    bool completed = false;
    SimTime start = 0;
    std::map<NodeId, Amount> payouts;
    std::optional<ledger::ChainId> chain_id;
    std::set<NodeId> charged;
};

class Simulator {
public:
    explicit Simulator(const ScenarioConfig& cfg) : cfg_(cfg), ledger_(cfg.ledger_params())
    {
        for (const auto& l : cfg_.links) {
            if (l.kind == LinkKind::control_plane) continue;
            const SimTime prop = link_propagation(cfg_, l);
            for (auto [from, to] : {std::pair{l.a, l.b}, std::pair{l.b, l.a}}) {
                auto key = std::pair{from, to};
                if (data_links_.count(key)) continue;
                data_links_[key] = DirectedLink{&l, prop, 0, {}};
            }
        }
        for (const auto& n : cfg_.nodes)
            if (n.role == Role::cache) caches_[n.id].capacity = n.cache_capacity;
        report_.scenario_name = cfg_.name;
        report_.seed = cfg_.seed;
    }

    SimulationReport run()
    {
        for (const auto& pc : cfg_.path_comparisons) {
            const auto cmp = compare_paths(cfg_, pc.src, pc.dst, pc.message_length);
            for (const auto* r : {&cmp.edge, &cmp.isp}) {
                LatencyRow row;
                row.workload_id = "-";
                row.model = "path_comparison";
                row.kind = r == &cmp.edge ? "edge" : "isp";
                row.src = pc.src;
                row.dst = pc.dst;
                row.route = join_route(r->route);
                row.message_length = pc.message_length;
                row.start = 0;
                row.end = r->latency;
                report_.latency.push_back(row);
            }
        }

        for (std::size_t i = 0; i < cfg_.workloads.size(); ++i) {
            const SimTime start = seconds_to_time(cfg_.workloads[i].start_s);
            at(start, [this, i] { start_workload(i); });
        }

        const std::optional<SimTime> horizon =
            cfg_.horizon_s ? std::optional<SimTime>(seconds_to_time(*cfg_.horizon_s)) : std::nullopt;
        while (!queue_.empty()) {
            if (horizon && queue_.top().time > *horizon) {
                report_.horizon_exceeded = true;
                now_ = *horizon;
                break;
            }
            auto ev = queue_.top();
            queue_.pop();
            now_ = ev.time;
            ++report_.events_processed;
            ev.fn();
        }

        finish();
        return std::move(report_);
    }

private:
    struct Scheduled {
        SimTime time;
        std::uint64_t seq;
        std::function<void()> fn;
    };
    struct Later {
        bool operator()(const Scheduled& a, const Scheduled& b) const
        {
            return a.time != b.time ? a.time > b.time : a.seq > b.seq;
        }
    };

    void at(SimTime t, std::function<void()> fn)
    {
        if (t < now_) throw std::logic_error("causality violation: event scheduled in the past");
        queue_.push(Scheduled{t, seq_++, std::move(fn)});
    }

    void trace(const NodeId& node, std::string from, std::string to, std::string event, std::string actions = {})
    {
        report_.trace.push_back(TraceRow{now_, node, std::move(from), std::move(to), std::move(event), std::move(actions)});
    }

    DeterministicRng rng_for(std::size_t workload_index, Purpose purpose, std::uint64_t extra = 0) const
    {
        return DeterministicRng(cfg_.seed, (workload_index + 1) * 1'000'003ULL + purpose * 131ULL + extra * 7919ULL);
    }

    DirectedLink& link(const NodeId& from, const NodeId& to)
    {
        auto it = data_links_.find({from, to});
        if (it == data_links_.end()) throw std::logic_error("no data link " + from + " -> " + to);
        return it->second;
    }

    SimTime control_delay(const NodeId& a, const NodeId& b, std::uint64_t bytes) const
    {
        if (a == b) return 0;
        if (const auto* l = cfg_.find_control_link(a, b)) return transfer_time(cfg_, bytes, *l);
        return transfer_time(bytes, seconds_to_time(cfg_.defaults.control_plane_delay_s),
                             cfg_.defaults.control_plane_bandwidth);
    }

    void charge(const NodeId& node)
    {
        const auto* spec = cfg_.find_node(node);
        costs_[node] += spec != nullptr ? spec->forwarding_cost : 0;
    }

    Amount quoted_price(const NodeId& node, const NodeId& next_hop)
    {
        const auto* spec = cfg_.find_node(node);
        const Amount base = spec != nullptr ? spec->price : 0;
        auto it = data_links_.find({node, next_hop});
        const double util = it == data_links_.end()
                                ? 0.0
                                : it->second.meter.utilization(now_, seconds_to_time(cfg_.defaults.utilization_window_s));
        return economics::surge_price(base, std::min(util, 0.999999), cfg_.defaults.surge_cap);
    }

    // ---- ledger, claims and crackers ----

    ledger::ChainId publish(const NodeId& publisher, const timelock::PuzzleChain& chain, const std::string& workload_id,
                            std::vector<NodeId> intended)
    {
        const auto id = ledger_.publish_chain(chain.published(), now_, publisher);
        const auto& entry = ledger_.entry(id);
        report_.chains.push_back(ChainInfo{id, workload_id, publisher, entry.visible_at, std::move(intended)});
        std::string values;
        for (const auto& b : chain.blocks) values += (values.empty() ? "" : "/") + std::to_string(b.value);
        trace(publisher, "-", "-", "publish_chain",
              "chain(" + std::to_string(id) + ";blocks=" + std::to_string(chain.size()) + ";values=" + values +
                  ";iv0=" + chain.blocks.front().iv_published.short_hex() + ")");
        at(entry.visible_at, [this, id] { chain_visible(id); });
        return id;
    }

    void chain_visible(ledger::ChainId id)
    {
        for (const auto& n : cfg_.nodes) {
            if (n.role != Role::cracker) continue;
            workers_.push_back(CrackerWorker{n.id, id, n.hash_rate, std::nullopt, 0});
            start_cracker(workers_.size() - 1);
        }
    }

    void start_cracker(std::size_t w)
    {
        auto& worker = workers_[w];
        const auto& entry = ledger_.entry(worker.chain);
        const auto target = entry.next_unclaimed();
        ++worker.token;
        worker.block = target;
        if (!target) return;
        const auto iterations = entry.published_blocks[*target].iterations;
        const SimTime done = now_ + crack_duration(iterations, worker.hash_rate);
        trace(worker.cracker, "-", "-", "cracker_start",
              "solve(" + std::to_string(worker.chain) + "#" + std::to_string(*target) + ";eta=" + format_time(done) + ")");
        const auto token = worker.token;
        at(done, [this, w, token] { cracker_solved(w, token); });
    }

    void cracker_solved(std::size_t w, std::uint64_t token)
    {
        auto& worker = workers_[w];
        if (worker.token != token || !worker.block) return;
        const auto& entry = ledger_.entry(worker.chain);
        const auto index = *worker.block;
        const auto& block = entry.published_blocks[index];
        std::optional<timelock::PuzzleKey> prev;
        if (index > 0) prev = ledger_.revealed_keys(worker.chain, now_).at(index - 1);
        const auto key = timelock::solve_block(block.iv_published, prev, block.iterations);
        const NodeId cracker = worker.cracker;
        submit_claim(cracker, ClaimTarget{worker.chain, index}, key, nullptr, [this, w](const ledger::ClaimOutcome& o) {
            if (!o.accepted()) start_cracker(w);
        });
    }

    void submit_claim(const NodeId& node, ClaimTarget target, const timelock::PuzzleKey& key,
                      std::function<bool()> alive, std::function<void(const ledger::ClaimOutcome&)> on_final)
    {
        const auto outcome = ledger_.submit_claim(target.chain_id, target.block_index, key, node, now_);
        const std::string desc = std::to_string(target.chain_id) + "#" + std::to_string(target.block_index);
        if (outcome.rejection == ledger::RejectReason::out_of_order) {
            trace(node, "-", "-", "claim_deferred", "wait_for_predecessor(" + desc + ")");
            pending_.push_back(PendingClaim{node, target, key, std::move(alive), std::move(on_final)});
            return;
        }
        trace(node, "-", "-", outcome.accepted() ? "claim_accepted" : "claim_rejected",
              desc + (outcome.accepted() ? "" : ";" + std::string(ledger::to_string(*outcome.rejection))));
        if (on_final) on_final(outcome);
        if (outcome.accepted()) block_claimed(target);
    }

    void block_claimed(ClaimTarget target)
    {
        const auto& rec = *ledger_.entry(target.chain_id).claims[target.block_index];
        const auto claimant = rec.claimant;
        at(rec.confirm_time, [this, claimant, target] {
            trace(claimant, "-", "-", "claim_confirmed",
                  std::to_string(target.chain_id) + "#" + std::to_string(target.block_index));
        });

        for (std::size_t w = 0; w < workers_.size(); ++w)
            if (workers_[w].chain == target.chain_id && workers_[w].block && *workers_[w].block <= target.block_index)
                start_cracker(w);

        std::vector<PendingClaim> ready;
        for (auto it = pending_.begin(); it != pending_.end();) {
            if (it->target.chain_id == target.chain_id && it->target.block_index == target.block_index + 1) {
                ready.push_back(std::move(*it));
                it = pending_.erase(it);
            } else {
                ++it;
            }
        }
        for (auto& p : ready) {
            at(now_, [this, p = std::move(p)]() mutable {
                if (p.alive && !p.alive()) return;
                submit_claim(p.node, p.target, p.key, std::move(p.alive), std::move(p.on_final));
            });
        }
    }

    // ---- chunked transfers ----

    Transfer& new_transfer(std::size_t workload_index, std::string kind, ForwardingModel model, std::vector<NodeId> path,
                           Bytes message, std::uint64_t chunk_size, SimTime start)
    {
        const auto& w = cfg_.workloads[workload_index];
        auto t = std::make_unique<Transfer>();
        t->workload_index = workload_index;
        t->workload_id = w.id;
        t->kind = std::move(kind);
        t->model = model;
        t->path = std::move(path);
        t->message = std::move(message);
        t->manifest = protocol::make_manifest(transfers_.size() + 1, t->message, chunk_size);
        t->start = start;
        const std::size_t hops = t->path.size() - 1;
        t->tx_busy.assign(hops, false);
        t->retry_pending.assign(hops, false);
        t->in_flight.assign(hops, 0);
        t->sent.assign(hops, 0);
        t->cost_charged.assign(hops, false);

        protocol::ForwarderConfig fc;
        fc.model = model;
        fc.window_capacity = cfg_.defaults.window_capacity;
        for (std::size_t i = 1; i + 1 < t->path.size(); ++i) {
            auto cfgi = fc;
            const auto* spec = cfg_.find_node(t->path[i]);
            cfgi.withhold_ack = spec != nullptr && spec->behavior == Behavior::withhold_ack;
            t->forwarders.emplace_back(t->path[i], cfgi);
        }
        t->receiver = protocol::ReceiverState(t->path.back(), model);

        auto fault_rng = rng_for(workload_index, kFaults, transfers_.size());
        for (const auto& f : w.faults) {
            if (f.hop >= hops) continue;
            if (fault_rng.next_unit() < f.probability) t->faults[{f.hop, f.chunk_index}] = f.kind;
        }
        transfers_.push_back(std::move(t));
        return *transfers_.back();
    }

    void step_forwarder(Transfer& t, std::size_t pos, const protocol::Event& ev)
    {
        auto& state = t.forwarders[pos - 1];
        const auto from = std::string(protocol::to_string(state.phase));
        auto [next, actions] = protocol::forwarder_step(std::move(state), ev);
        state = std::move(next);
        report_.max_window_occupancy = std::max(report_.max_window_occupancy, state.max_window_occupancy);
        std::string desc;
        for (const auto& a : actions) desc += (desc.empty() ? "" : ";") + protocol::describe(a);
        trace(state.node, from, std::string(protocol::to_string(state.phase)), std::string(protocol::event_name(ev)), desc);
        apply_actions(t, pos, actions);
    }

    void step_receiver(Transfer& t, const protocol::Event& ev)
    {
        const auto from = std::string(protocol::to_string(t.receiver.phase));
        auto [next, actions] = protocol::receiver_step(std::move(t.receiver), ev);
        t.receiver = std::move(next);
        std::string desc;
        for (const auto& a : actions) desc += (desc.empty() ? "" : ";") + protocol::describe(a);
        trace(t.receiver.node, from, std::string(protocol::to_string(t.receiver.phase)),
              std::string(protocol::event_name(ev)), desc);
        apply_actions(t, t.path.size() - 1, actions);
    }

    void deliver_ack(Transfer& t, std::size_t pos, const Block32& secret)
    {
        if (pos == 0) {
            source_ack(t, secret);
            return;
        }
        step_forwarder(t, pos, protocol::event::Ack{secret});
    }

    void apply_actions(Transfer& t, std::size_t pos, const std::vector<protocol::Action>& actions)
    {
        for (const auto& a : actions) {
            if (std::holds_alternative<protocol::action::ForwardChunk>(a)) {
                try_send(t, pos);
            } else if (const auto* ack = std::get_if<protocol::action::SendAckToPrevious>(&a)) {
                const auto secret = ack->secret;
                const auto delay = control_delay(t.path[pos], ack->address, kAckBytes);
                auto* tp = &t;
                at(now_ + delay, [this, tp, pos, secret] { deliver_ack(*tp, pos - 1, secret); });
            } else if (const auto* claim = std::get_if<protocol::action::SubmitClaim>(&a)) {
                auto* tp = &t;
                submit_claim(
                    t.path[pos], claim->target, claim->key,
                    [tp, pos] { return tp->forwarders[pos - 1].phase == Phase::claiming; },
                    [this, tp, pos](const ledger::ClaimOutcome& o) {
                        step_forwarder(*tp, pos, protocol::event::ClaimResult{o});
                    });
            } else if (const auto* ackS = std::get_if<protocol::action::AcknowledgeSender>(&a)) {
                const auto digest = ackS->digest;
                const auto delay = control_delay(t.path.back(), ackS->sender, kAckBytes);
                auto* tp = &t;
                at(now_ + delay, [this, tp, digest] { sender_release(*tp, digest); });
            } else if (const auto* d = std::get_if<protocol::action::Delivered>(&a)) {
                t.delivered_at = now_;
                t.intact = d->intact;
                LatencyRow row;
                row.workload_id = t.workload_id;
                row.model = std::string(to_string(cfg_.workloads[t.workload_index].model));
                row.kind = t.kind;
                row.src = t.path.front();
                row.dst = t.path.back();
                row.route = join_route(t.path);
                row.message_length = t.manifest.total_length;
                row.start = t.start;
                row.end = now_;
                report_.latency.push_back(row);
                if (t.on_delivered) t.on_delivered(t);
            }
        }
    }

    void sender_release(Transfer& t, const Block32& digest)
    {
        std::vector<NodeId> fwd(t.path.begin() + 1, t.path.end() - 1);
        const auto releases = protocol::all_or_nothing_release(t.chain, fwd, t.manifest, digest);
        std::string desc;
        for (const auto& [node, key] : releases) desc += (desc.empty() ? "" : ";") + ("release_key(" + node + ")");
        trace(t.path.front(), "-", "-", "end_to_end_ack", desc.empty() ? "release_none" : desc);
        for (std::size_t i = 0; i < releases.size(); ++i) {
            const auto key = releases[i].second;
            const std::size_t pos = i + 1;
            auto* tp = &t;
            at(now_ + control_delay(t.path.front(), releases[i].first, kKeyBytes),
               [this, tp, pos, key] { step_forwarder(*tp, pos, protocol::event::KeyRelease{key}); });
        }
    }

    void source_ack(Transfer& t, const Block32& secret)
    {
        if (!t.source_paid || !t.source_nonce || t.source_claim_done) {
            trace(t.path.front(), "-", "-", "ack", "");
            return;
        }
        t.source_claim_done = true;
        const auto key = protocol::reconstruct_key(*t.source_nonce, secret, t.manifest.full_hash);
        trace(t.path.front(), "-", "-", "ack",
              "submit_claim(" + std::to_string(t.source_paid->target.chain_id) + "#" +
                  std::to_string(t.source_paid->target.block_index) + ";" + key.short_hex() + ")");
        submit_claim(t.path.front(), t.source_paid->target, key, nullptr, nullptr);
    }

    bool downstream_has_room(const Transfer& t, std::size_t hop) const
    {
        const std::size_t next = hop + 1;
        if (next == t.path.size() - 1) return t.receiver.phase != Phase::failed;
        const auto& f = t.forwarders[next - 1];
        if (f.phase == Phase::failed) return false;
        return f.window.size() + t.in_flight[hop] < f.config.window_capacity;
    }

    void try_send(Transfer& t, std::size_t hop)
    {
        if (hop >= t.path.size() - 1 || t.tx_busy[hop]) return;
        const std::uint64_t count = t.manifest.chunk_count();
        Bytes data;
        if (hop == 0) {
            if (t.sent[0] >= count) return;
        } else {
            const auto& f = t.forwarders[hop - 1];
            if (f.window.empty() || f.phase == Phase::failed) return;
        }
        if (!downstream_has_room(t, hop)) return;

        auto& l = link(t.path[hop], t.path[hop + 1]);
        if (l.busy_until > now_) {
            if (!t.retry_pending[hop]) {
                t.retry_pending[hop] = true;
                auto* tp = &t;
                at(l.busy_until, [this, tp, hop] {
                    tp->retry_pending[hop] = false;
                    try_send(*tp, hop);
                });
            }
            return;
        }

        const std::uint64_t index = t.sent[hop]++;
        if (hop == 0) {
            const auto off = index * t.manifest.chunk_size;
            const auto len = t.manifest.chunk_length(index);
            data.assign(t.message.begin() + static_cast<std::ptrdiff_t>(off),
                        t.message.begin() + static_cast<std::ptrdiff_t>(off + len));
        } else {
            data = t.forwarders[hop - 1].window.front();
        }
        // Relays pay per transfer; a source pays only when it is being paid.
        if ((hop > 0 || t.source_paid) && !t.cost_charged[hop]) {
            t.cost_charged[hop] = true;
            charge(t.path[hop]);
        }

        const SimTime tx_end = transfer_time(data.size(), now_, l.spec->bandwidth);
        l.busy_until = tx_end;
        l.meter.record_busy(now_, tx_end);
        t.tx_busy[hop] = true;
        ++t.in_flight[hop];

        std::optional<FaultKind> fault;
        if (auto it = t.faults.find({hop, index}); it != t.faults.end()) fault = it->second;
        if (fault == FaultKind::corrupt && !data.empty()) data[data.size() / 2] ^= 0x01;
        if (fault) {
            trace(t.path[hop], "-", "-", "fault",
                  std::string(*fault == FaultKind::drop ? "drop" : "corrupt") + "(hop=" + std::to_string(hop) +
                      ";chunk=" + std::to_string(index) + ")");
        }

        auto* tp = &t;
        at(tx_end, [this, tp, hop] {
            tp->tx_busy[hop] = false;
            if (hop > 0) step_forwarder(*tp, hop, protocol::event::Transmitted{});
            try_send(*tp, hop);
            if (hop > 0) try_send(*tp, hop - 1);
        });
        const bool dropped = fault == FaultKind::drop;
        at(tx_end + l.propagation, [this, tp, hop, dropped, data = std::move(data)]() mutable {
            --tp->in_flight[hop];
            if (!dropped) {
                const std::size_t next = hop + 1;
                if (next == tp->path.size() - 1)
                    step_receiver(*tp, protocol::event::Chunk{std::move(data)});
                else
                    step_forwarder(*tp, next, protocol::event::Chunk{std::move(data)});
            }
            try_send(*tp, hop);
        });
    }

    // Distributes setup over the control plane and starts the data plane once
    // every participant has its setup.
    void launch(Transfer& t, const std::vector<std::optional<protocol::HopSetup>>& hop_setups,
                const std::optional<protocol::HopSetup>& receiver_setup, const std::vector<std::optional<ClaimTarget>>& targets)
    {
        const NodeId& source = t.path.front();
        SimTime ready = now_;
        auto* tp = &t;
        for (std::size_t pos = 1; pos + 1 < t.path.size(); ++pos) {
            protocol::event::Setup setup{t.manifest.without_hash(), hop_setups[pos - 1], targets[pos - 1], std::nullopt};
            const SimTime arrival = now_ + control_delay(source, t.path[pos], kSetupBytes);
            ready = std::max(ready, arrival);
            at(arrival, [this, tp, pos, setup] { step_forwarder(*tp, pos, setup); });
        }
        {
            protocol::event::Setup setup{t.manifest, receiver_setup, std::nullopt, source};
            const SimTime arrival = now_ + control_delay(source, t.path.back(), kSetupBytes);
            ready = std::max(ready, arrival);
            at(arrival, [this, tp, setup] { step_receiver(*tp, setup); });
        }
        at(ready, [this, tp] {
            trace(tp->path.front(), "-", "-", "start_transmission",
                  "message(" + std::to_string(tp->manifest.total_length) + ";" + tp->manifest.full_hash.short_hex() + ")");
            try_send(*tp, 0);
        });

        const SimTime deadline = now_ + seconds_to_time(cfg_.defaults.forwarder_timeout_s);
        for (std::size_t pos = 1; pos + 1 < t.path.size(); ++pos)
            at(deadline, [this, tp, pos] {
                if (tp->forwarders[pos - 1].phase != Phase::done && tp->forwarders[pos - 1].phase != Phase::failed)
                    step_forwarder(*tp, pos, protocol::event::Timeout{});
            });
        at(deadline, [this, tp] {
            if (tp->receiver.phase != Phase::done && tp->receiver.phase != Phase::failed)
                step_receiver(*tp, protocol::event::Timeout{});
        });
    }

    // Double-incentive style transfer where any subset of positions may be paid.
    void launch_incentive_transfer(Transfer& t, const std::vector<std::optional<PaidPosition>>& paid)
    {
        auto rng = rng_for(t.workload_index, kSecrets, transfers_.size());
        std::vector<std::optional<timelock::PuzzleKey>> keys;
        for (const auto& p : paid) keys.push_back(p ? std::optional(p->key) : std::nullopt);
        const auto setup = protocol::setup_paid_hops(t.path, t.manifest.full_hash, keys, rng);

        std::vector<std::optional<protocol::HopSetup>> hop_setups;
        std::vector<std::optional<ClaimTarget>> targets;
        for (std::size_t pos = 1; pos + 1 < t.path.size(); ++pos) {
            hop_setups.push_back(setup.hops[pos]);
            targets.push_back(paid[pos] ? std::optional(paid[pos]->target) : std::nullopt);
        }
        if (paid[0]) {
            t.source_paid = paid[0];
            t.source_nonce = setup.hops[0].nonce;
        }
        launch(t, hop_setups, setup.hops.back(), targets);
    }

    Bytes make_message(std::size_t workload_index, std::uint64_t length, std::uint64_t extra = 0) const
    {
        auto rng = rng_for(workload_index, kMessage, extra);
        return rng.next_bytes(length);
    }

    timelock::PuzzleChain make_chain(std::size_t workload_index, std::uint64_t iterations, const std::vector<Amount>& values)
    {
        auto rng = rng_for(workload_index, kChainSeed, chain_counter_++);
        return timelock::generate_chain(values.size(), iterations, values, rng.next_u64());
    }

    // ---- workloads ----

    void start_workload(std::size_t i)
    {
        const auto& w = cfg_.workloads[i];
        trace(w.id, "-", "-", "workload_start", std::string(to_string(w.model)));
        switch (w.model) {
            case WorkloadModel::double_incentive: start_double_incentive(i); break;
            case WorkloadModel::all_or_nothing: start_all_or_nothing(i); break;
            case WorkloadModel::contract: start_contract(i); break;
            case WorkloadModel::competing: start_competing(i); break;
            case WorkloadModel::cache_demo: start_cache_demo(i); break;
        }
    }

    void start_double_incentive(std::size_t i)
    {
        const auto& w = cfg_.workloads[i];
        const auto& spec = *cfg_.find_chain(w.chain);
        auto& t = new_transfer(i, "delivery", ForwardingModel::double_incentive, w.path, make_message(i, w.message_length),
                               w.chunk_size, now_);
        t.chain = make_chain(i, spec.iterations, spec.values);
        std::vector<NodeId> fwd(w.path.begin() + 1, w.path.end() - 1);
        const auto chain_id = publish(w.path.front(), t.chain, w.id, fwd);

        std::vector<std::optional<PaidPosition>> paid(w.path.size() - 1);
        for (std::size_t pos = 1; pos + 1 < w.path.size(); ++pos)
            paid[pos] = PaidPosition{ClaimTarget{chain_id, static_cast<std::uint32_t>(pos - 1)}, t.chain.keys[pos - 1]};
        launch_incentive_transfer(t, paid);
        transfer_outcomes_.push_back(&t);
    }

    void start_all_or_nothing(std::size_t i)
    {
        const auto& w = cfg_.workloads[i];
        auto& t = new_transfer(i, "delivery", ForwardingModel::all_or_nothing, w.path, make_message(i, w.message_length),
                               w.chunk_size, now_);
        std::vector<std::optional<ClaimTarget>> targets(t.n());
        if (t.n() > 0) {
            const auto& spec = *cfg_.find_chain(w.chain);
            t.chain = make_chain(i, spec.iterations, spec.values);
            std::vector<NodeId> fwd(w.path.begin() + 1, w.path.end() - 1);
            const auto chain_id = publish(w.path.front(), t.chain, w.id, fwd);
            for (std::size_t k = 0; k < t.n(); ++k) targets[k] = ClaimTarget{chain_id, static_cast<std::uint32_t>(k)};
        }
        std::vector<std::optional<protocol::HopSetup>> no_hops(t.n());
        launch(t, no_hops, std::nullopt, targets);
        transfer_outcomes_.push_back(&t);
    }

    std::size_t hops_to(const NodeId& from, const NodeId& to) const
    {
        std::map<NodeId, std::size_t> dist{{from, 0}};
        std::deque<NodeId> q{from};
        while (!q.empty()) {
            auto u = q.front();
            q.pop_front();
            if (u == to) return dist[u];
            for (const auto& l : cfg_.links) {
                if (l.kind == LinkKind::control_plane) continue;
                const NodeId* v = l.a == u ? &l.b : (l.b == u ? &l.a : nullptr);
                if (v != nullptr && !dist.count(*v)) {
                    dist[*v] = dist[u] + 1;
                    q.push_back(*v);
                }
            }
        }
        return std::numeric_limits<std::size_t>::max();
    }

    static json contract_json(const protocol::ContractState& c)
    {
        json j{{"contract_id", c.contract_id},
               {"principal", c.principal},
               {"contractor", c.contractor},
               {"agreed_price", c.agreed_price},
               {"deadline", format_time(c.deadline)}};
        j["subcontracts"] = json::array();
        for (const auto& s : c.subcontracts) j["subcontracts"].push_back(contract_json(s));
        return j;
    }

    void start_contract(std::size_t i)
    {
        const auto& w = cfg_.workloads[i];
        const NodeId source = w.pull ? w.contractor : w.principal;
        const SimTime deadline = seconds_to_time(cfg_.defaults.forwarder_timeout_s);

        protocol::ContractTopology topo;
        topo.in_range_of_receiver = [this, &w](const NodeId& n) { return cfg_.find_data_link(n, w.receiver) != nullptr; };
        topo.quotes = [this, &w](const NodeId& contractor, const std::vector<NodeId>& engaged) {
            std::vector<economics::CapabilityQuote> out;
            const auto here = hops_to(contractor, w.receiver);
            for (const auto& l : cfg_.links) {
                if (l.kind == LinkKind::control_plane) continue;
                const NodeId* v = l.a == contractor ? &l.b : (l.b == contractor ? &l.a : nullptr);
                if (v == nullptr || std::find(engaged.begin(), engaged.end(), *v) != engaged.end()) continue;
                const auto* spec = cfg_.find_node(*v);
                if (spec == nullptr || (spec->role != Role::forwarder && spec->role != Role::cache)) continue;
                if (hops_to(*v, w.receiver) >= here) continue;
                economics::CapabilityQuote q;
                q.node_id = *v;
                q.technology_tag = l.technology_tag;
                q.expected_latency = std::max<SimTime>(1, transfer_time(cfg_, w.message_length, l));
                q.price = quoted_price(*v, contractor);
                out.push_back(q);
            }
            return out;
        };

        const auto result = protocol::run_contract(w.principal, w.contractor, w.receiver, source, w.price, deadline,
                                                   protocol::ContractPolicy{w.margin, 8}, topo);
        WorkloadOutcome outcome{w.id, std::string(to_string(w.model)), "", json::object()};
        if (const auto* declined = std::get_if<protocol::ContractDeclined>(&result)) {
            outcome.status = "declined";
            outcome.detail = {{"at", declined->at}, {"reason", declined->reason}};
            trace(w.principal, "-", "-", "contract_declined", declined->at + ":" + declined->reason);
            report_.workloads.push_back(outcome);
            return;
        }
        const auto& plan = std::get<protocol::ContractPlan>(result);
        contract_plans_[i] = plan;

        // Negotiation messages travel down the contract tree over the control plane.
        SimTime negotiation = 0;
        for (const auto* level : plan.levels()) negotiation += control_delay(level->principal, level->contractor, kSetupBytes);
        std::string desc;
        for (const auto* level : plan.levels())
            desc += (desc.empty() ? "" : ";") + level->principal + "->" + level->contractor + "@" +
                    std::to_string(level->agreed_price);
        trace(w.principal, "-", "-", "contract_agreed", desc);

        at(now_ + negotiation, [this, i] {
            const auto& w = cfg_.workloads[i];
            const auto& plan = contract_plans_.at(i);
            auto& t = new_transfer(i, "delivery", ForwardingModel::double_incentive, plan.delivery_path,
                                   make_message(i, w.message_length), w.chunk_size, now_);
            std::vector<std::optional<PaidPosition>> paid(t.path.size() - 1);
            for (const auto* level : plan.levels()) {
                auto chain = make_chain(i, w.iterations, {level->agreed_price});
                const auto pos = static_cast<std::size_t>(
                    std::find(t.path.begin(), t.path.end(), level->contractor) - t.path.begin());
                const auto chain_id = publish(level->principal, chain, w.id, {level->contractor});
                if (pos < paid.size()) paid[pos] = PaidPosition{ClaimTarget{chain_id, 0}, chain.keys[0]};
            }
            launch_incentive_transfer(t, paid);
            transfer_outcomes_.push_back(&t);
        });
    }

    void start_cache_demo(std::size_t i)
    {
        const auto& w = cfg_.workloads[i];
        for (std::size_t r = 0; r < w.request_times_s.size(); ++r) {
            const SimTime when = seconds_to_time(w.start_s + w.request_times_s[r]);
            at(std::max(when, now_), [this, i, r] { cache_request(i, r); });
        }
    }

    void cache_request(std::size_t i, std::size_t r)
    {
        const auto& w = cfg_.workloads[i];
        const NodeId& requester = w.path.back();
        const NodeId& origin = w.path.front();
        const std::string content = w.id;

        economics::CapabilityQuote origin_bid;
        origin_bid.node_id = origin;
        origin_bid.technology_tag = "multihop";
        origin_bid.expected_latency = 1;
        for (std::size_t h = 0; h + 1 < w.path.size(); ++h) {
            origin_bid.expected_latency += transfer_time(cfg_, w.message_length, *cfg_.find_data_link(w.path[h], w.path[h + 1]));
            if (h > 0) origin_bid.price += quoted_price(w.path[h], w.path[h + 1]);
        }
        std::vector<economics::CapabilityQuote> bids{origin_bid};
        for (const auto& c : w.caches) {
            auto& store = caches_[c];
            if (!store.contains(content)) continue;
            const auto* l = cfg_.find_data_link(c, requester);
            economics::CapabilityQuote q;
            q.node_id = c;
            q.technology_tag = l->technology_tag;
            q.expected_latency = std::max<SimTime>(1, transfer_time(cfg_, w.message_length, *l));
            q.price = quoted_price(c, requester);
            bids.push_back(q);
        }
        std::string offers;
        for (const auto& b : bids) offers += (offers.empty() ? "" : ";") + b.node_id + "@" + std::to_string(b.price);
        const auto choice = economics::select_path({bids}, w.budget, std::numeric_limits<SimTime>::max());
        trace(requester, "-", "-", "content_request", offers + (choice ? ";winner=" + choice->hops.front().node_id : ";no_offer"));
        if (!choice) {
            cache_results_[i].push_back({r, "none", now_, std::nullopt});
            return;
        }
        const NodeId winner = choice->hops.front().node_id;
        const SimTime requested = now_;
        const SimTime start = now_ + control_delay(requester, winner, kSetupBytes);
        at(start, [this, i, r, winner, requested] { cache_deliver(i, r, winner, requested); });
    }

    void cache_deliver(std::size_t i, std::size_t r, const NodeId& winner, SimTime requested)
    {
        const auto& w = cfg_.workloads[i];
        const NodeId& requester = w.path.back();
        const bool from_cache = winner != w.path.front();
        std::vector<NodeId> path = from_cache ? std::vector<NodeId>{winner, requester} : w.path;
        auto& t = new_transfer(i, from_cache ? "cache_hit" : "origin", ForwardingModel::double_incentive, path,
                               make_message(i, w.message_length), w.chunk_size, requested);
        if (from_cache) caches_[winner].touch(w.id);

        std::vector<std::optional<PaidPosition>> paid(path.size() - 1);
        if (from_cache) {
            auto chain = make_chain(i, w.iterations, {quoted_price(winner, requester)});
            const auto id = publish(requester, chain, w.id, {winner});
            paid[0] = PaidPosition{ClaimTarget{id, 0}, chain.keys[0]};
        } else if (path.size() > 2) {
            std::vector<Amount> values;
            for (std::size_t h = 1; h + 1 < path.size(); ++h) values.push_back(quoted_price(path[h], path[h + 1]));
            auto chain = make_chain(i, w.iterations, values);
            const auto id = publish(requester, chain, w.id, std::vector<NodeId>(path.begin() + 1, path.end() - 1));
            for (std::size_t pos = 1; pos + 1 < path.size(); ++pos)
                paid[pos] = PaidPosition{ClaimTarget{id, static_cast<std::uint32_t>(pos - 1)}, chain.keys[pos - 1]};
        }

        const std::string content = w.id;
        const std::vector<NodeId> caches = w.caches;
        const std::uint64_t size = w.message_length;
        t.on_delivered = [this, i, r, from_cache, caches, content, size](Transfer& done) {
            if (done.intact) {
                for (std::size_t pos = 1; pos + 1 < done.path.size(); ++pos) {
                    if (std::find(caches.begin(), caches.end(), done.path[pos]) == caches.end()) continue;
                    const bool stored = caches_[done.path[pos]].store(content, size);
                    trace(done.path[pos], "-", "-", "cache_store", stored ? "stored(" + content + ")" : "too_large(" + content + ")");
                }
            }
            cache_results_[i].push_back({r, from_cache ? "cache_hit" : "origin", done.start, done.delivered_at});
        };
        launch_incentive_transfer(t, paid);
        transfer_outcomes_.push_back(&t);
    }

    // ---- competing forwarders ----

    void start_competing(std::size_t i)
    {
        const auto& w = cfg_.workloads[i];
        auto flow = std::make_unique<CodedFlow>();
        flow->workload_index = i;
        flow->workload_id = w.id;
        flow->message = make_message(i, w.message_length);
        flow->generation = coding::Generation::from_message(static_cast<std::uint32_t>(i), flow->message, w.generation_size);
        flow->sender = w.sender;
        flow->receiver = w.receiver;
        flow->start = now_;
        flow->max_packets = w.max_packets_per_path > 0 ? w.max_packets_per_path : 4 * w.generation_size + 16;
        flow->receiver_state = std::make_unique<protocol::CreditingReceiver>(
            flow->generation.generation_id, flow->generation.k, flow->generation.symbol_size);
        for (std::size_t p = 0; p < w.paths.size(); ++p) {
            std::vector<NodeId> route{w.sender};
            route.insert(route.end(), w.paths[p].begin(), w.paths[p].end());
            route.push_back(w.receiver);
            flow->routes.push_back(route);
            flow->held.emplace_back(w.paths[p].size());
            flow->hops.emplace_back(route.size() - 1);
            std::vector<DeterministicRng> rngs;
            for (std::size_t f = 0; f < w.paths[p].size(); ++f) rngs.push_back(rng_for(i, kCoding, 1000 * (p + 1) + f + 1));
            flow->recode_rng.push_back(std::move(rngs));
            flow->source_rng.push_back(rng_for(i, kCoding, 1000 * (p + 1)));
            flow->source_sent.push_back(0);
        }
        flows_.push_back(std::move(flow));
        auto* fp = flows_.back().get();
        for (std::size_t p = 0; p < fp->routes.size(); ++p) coded_try_send(*fp, p, 0);
    }

    void coded_try_send(CodedFlow& f, std::size_t p, std::size_t hop)
    {
        auto& h = f.hops[p][hop];
        if (h.busy) return;
        if (hop == 0) {
            if (h.queue.empty() && !f.stop && f.source_sent[p] < f.max_packets) {
                auto pkt = coding::encode(f.generation, f.source_rng[p]);
                pkt.last_hop = f.sender;
                h.queue.push_back(std::move(pkt));
                ++f.source_sent[p];
            }
        }
        if (h.queue.empty()) return;

        const auto& route = f.routes[p];
        auto& l = link(route[hop], route[hop + 1]);
        if (l.busy_until > now_) {
            if (!h.retry_pending) {
                h.retry_pending = true;
                auto* fp = &f;
                at(l.busy_until, [this, fp, p, hop] {
                    fp->hops[p][hop].retry_pending = false;
                    coded_try_send(*fp, p, hop);
                });
            }
            return;
        }
        auto pkt = std::move(h.queue.front());
        h.queue.pop_front();
        if (hop > 0 && f.charged.insert(route[hop]).second) charge(route[hop]);

        const std::uint64_t wire = pkt.coefficients.size() + pkt.payload.size() + kPacketHeaderBytes;
        const SimTime tx_end = transfer_time(wire, now_, l.spec->bandwidth);
        l.busy_until = tx_end;
        l.meter.record_busy(now_, tx_end);
        h.busy = true;
        auto* fp = &f;
        at(tx_end, [this, fp, p, hop] {
            fp->hops[p][hop].busy = false;
            coded_try_send(*fp, p, hop);
        });
        at(tx_end + l.propagation, [this, fp, p, hop, pkt = std::move(pkt)]() mutable { coded_arrive(*fp, p, hop + 1, std::move(pkt)); });
    }

    void coded_arrive(CodedFlow& f, std::size_t p, std::size_t pos, coding::CodedPacket pkt)
    {
        const auto& route = f.routes[p];
        if (pos == route.size() - 1) {
            if (f.completed) {
                trace(f.receiver, "-", "-", "coded_packet", "ignored(from=" + pkt.last_hop + ")");
                return;
            }
            const bool innovative = f.receiver_state->accept(pkt);
            trace(f.receiver, "-", "-", "coded_packet",
                  std::string(innovative ? "innovative" : "redundant") + "(from=" + pkt.last_hop +
                      ";rank=" + std::to_string(f.receiver_state->rank()) + ";c0=" + std::to_string(pkt.coefficients[0]) + ")");
            if (f.receiver_state->complete()) competing_complete(f);
            return;
        }
        auto& held = f.held[p][pos - 1];
        held.push_back(std::move(pkt));
        auto out = coding::recode(held, f.recode_rng[p][pos - 1]);
        out.last_hop = route[pos];
        f.hops[p][pos].queue.push_back(std::move(out));
        coded_try_send(f, p, pos);
    }

    void competing_complete(CodedFlow& f)
    {
        f.completed = true;
        const auto& w = cfg_.workloads[f.workload_index];
        const auto decoded = f.receiver_state->decoder().decoded_message(f.message.size());
        LatencyRow row;
        row.workload_id = w.id;
        row.model = std::string(to_string(w.model));
        row.kind = "decode_complete";
        row.src = f.sender;
        row.dst = f.receiver;
        row.route = std::to_string(f.routes.size()) + "_paths";
        row.message_length = f.message.size();
        row.start = f.start;
        row.end = now_;
        report_.latency.push_back(row);
        trace(f.receiver, "-", "-", "decode_complete", decoded == f.message ? "intact" : "corrupt");

        auto* fp = &f;
        const auto credits = f.receiver_state->credits();
        at(now_ + control_delay(f.receiver, f.sender, kAckBytes), [this, fp, credits] {
            fp->stop = true;
            const auto& w = cfg_.workloads[fp->workload_index];
            std::vector<protocol::CompetingPath> paths;
            for (std::size_t p = 0; p < w.paths.size(); ++p)
                paths.push_back({w.paths[p], p < w.path_weights.size() ? w.path_weights[p] : std::vector<std::uint64_t>{}});
            fp->payouts = protocol::split_reward_pool(w.reward_pool, paths, credits);

            std::vector<NodeId> payees;
            std::vector<Amount> values;
            for (const auto& path : w.paths)
                for (const auto& n : path)
                    if (auto it = fp->payouts.find(n); it != fp->payouts.end()) {
                        payees.push_back(n);
                        values.push_back(it->second);
                    }
            if (payees.empty()) return;
            auto chain = make_chain(fp->workload_index, w.iterations, values);
            const auto id = publish(fp->sender, chain, w.id, payees);
            fp->chain_id = id;
            for (std::size_t b = 0; b < payees.size(); ++b) {
                const auto key = chain.keys[b];
                const auto node = payees[b];
                const auto target = ClaimTarget{id, static_cast<std::uint32_t>(b)};
                at(now_ + control_delay(fp->sender, node, kKeyBytes), [this, node, target, key] {
                    trace(node, "-", "-", "key_release", "submit_claim(" + std::to_string(target.chain_id) + "#" +
                                                              std::to_string(target.block_index) + ";" + key.short_hex() + ")");
                    submit_claim(node, target, key, nullptr, nullptr);
                });
            }
        });
    }

    // ---- report ----

    void finish()
    {
        report_.end_time = now_;
        report_.claims = ledger_.claim_log();

        std::vector<NodeId> ids;
        for (const auto& n : cfg_.nodes) ids.push_back(n.id);
        report_.balances = economics::settle(economics::settlement_from_ledger(ledger_, now_, ids, costs_));
        report_.claimed_confirmed_value = ledger_.confirmed_value(now_);

        std::map<std::size_t, std::vector<const Transfer*>> by_workload;
        for (const auto* t : transfer_outcomes_) by_workload[t->workload_index].push_back(t);

        for (std::size_t i = 0; i < cfg_.workloads.size(); ++i) {
            const auto& w = cfg_.workloads[i];
            if (report_.outcome(w.id) != nullptr) continue;
            WorkloadOutcome o{w.id, std::string(to_string(w.model)), "", json::object()};
            switch (w.model) {
                case WorkloadModel::double_incentive:
                case WorkloadModel::all_or_nothing:
                case WorkloadModel::contract: {
                    auto it = by_workload.find(i);
                    if (it == by_workload.end() || it->second.empty()) {
                        o.status = "not_started";
                        break;
                    }
                    const auto* t = it->second.front();
                    o.status = t->delivered_at ? (t->intact ? "delivered" : "delivered_corrupt") : "undelivered";
                    o.detail["route"] = t->path;
                    o.detail["message_hash"] = t->manifest.full_hash.hex();
                    if (t->delivered_at) o.detail["latency_s"] = format_time(*t->delivered_at - t->start);
                    json phases = json::object();
                    for (const auto& f : t->forwarders) phases[f.node] = std::string(protocol::to_string(f.phase));
                    o.detail["forwarder_phases"] = phases;
                    if (auto cp = contract_plans_.find(i); cp != contract_plans_.end()) {
                        o.detail["contract"] = contract_json(cp->second.root);
                        o.detail["contract_depth"] = cp->second.root.depth();
                    }
                    break;
                }
                case WorkloadModel::competing: {
                    const CodedFlow* f = nullptr;
                    for (const auto& fl : flows_)
                        if (fl->workload_index == i) f = fl.get();
                    if (f == nullptr) {
                        o.status = "not_started";
                        break;
                    }
                    const bool decoded = f->completed &&
                                         f->receiver_state->decoder().decoded_message(f->message.size()) == f->message;
                    o.status = f->completed ? (decoded ? "decoded" : "decoded_corrupt") : "incomplete";
                    o.detail["rank"] = f->receiver_state->rank();
                    o.detail["generation_size"] = f->generation.k;
                    o.detail["credits"] = f->receiver_state->credits();
                    o.detail["total_credit"] = f->receiver_state->total_credit();
                    o.detail["payouts"] = f->payouts;
                    o.detail["packets_sent"] = f->source_sent;
                    break;
                }
                case WorkloadModel::cache_demo: {
                    o.status = "completed";
                    json reqs = json::array();
                    auto results = cache_results_[i];
                    std::sort(results.begin(), results.end(), [](const auto& a, const auto& b) { return a.request < b.request; });
                    for (const auto& r : results) {
                        json jr{{"request", r.request}, {"source", r.source}};
                        if (r.delivered) jr["latency_s"] = format_time(*r.delivered - r.requested);
                        reqs.push_back(jr);
                    }
                    o.detail["requests"] = reqs;
                    break;
                }
            }
            report_.workloads.push_back(std::move(o));
        }
        std::sort(report_.workloads.begin(), report_.workloads.end(), [this](const auto& a, const auto& b) {
            return workload_position(a.workload_id) < workload_position(b.workload_id);
        });
    }

    std::size_t workload_position(const std::string& id) const
    {
        for (std::size_t i = 0; i < cfg_.workloads.size(); ++i)
            if (cfg_.workloads[i].id == id) return i;
        return cfg_.workloads.size();
    }

    struct CacheResult {
        std::size_t request;
        std::string source;
        SimTime requested;
        std::optional<SimTime> delivered;
    };

    const ScenarioConfig& cfg_;
    ledger::Ledger ledger_;
    SimTime now_ = 0;
    std::uint64_t seq_ = 0;
    std::priority_queue<Scheduled, std::vector<Scheduled>, Later> queue_;
    std::map<std::pair<NodeId, NodeId>, DirectedLink> data_links_;
    std::vector<std::unique_ptr<Transfer>> transfers_;
    std::vector<const Transfer*> transfer_outcomes_;
    std::vector<std::unique_ptr<CodedFlow>> flows_;
    std::vector<CrackerWorker> workers_;
    std::list<PendingClaim> pending_;
    std::map<NodeId, CacheStore> caches_;
    std::map<std::size_t, std::vector<CacheResult>> cache_results_;
    std::map<std::size_t, protocol::ContractPlan> contract_plans_;
    std::map<NodeId, Amount> costs_;
    std::uint64_t chain_counter_ = 0;
    SimulationReport report_;
};

}  // namespace

SimulationReport run(const ScenarioConfig& scenario)
{
    const auto diags = validate_scenario(scenario);
    if (!diags.empty()) {
        std::string msg = "invalid scenario:";
        for (const auto& d : diags) msg += "\n  " + format(d);
        throw std::invalid_argument(msg);
    }
    return Simulator(scenario).run();
}

}  // namespace kadupul::netsim
