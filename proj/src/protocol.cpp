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

#include "kadupul/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace kadupul::protocol {

RollingHash incremental_hash_update(RollingHash state, ByteSpan chunk)
{
    state.update(chunk);
    return state;
}

std::uint64_t MessageManifest::chunk_length(std::uint64_t index) const
{
    const std::uint64_t start = index * chunk_size;
    if (start >= total_length) throw std::out_of_range("chunk index past end of message");
    return std::min(chunk_size, total_length - start);
}

MessageManifest MessageManifest::without_hash() const
{
    auto copy = *this;
    copy.full_hash = Block32::zero();
    return copy;
}

MessageManifest make_manifest(std::uint64_t message_id, ByteSpan message, std::uint64_t chunk_size)
{
    if (message.empty()) throw std::invalid_argument("manifest: message must be at least one byte");
    if (chunk_size < 1 || chunk_size > message.size())
        throw std::invalid_argument("manifest: chunk_size must lie in 1..message length");
    return {message_id, message.size(), chunk_size, sha256(message)};
}

DoubleIncentiveSetup setup_double_incentive(const std::vector<NodeId>& path, const MessageManifest& manifest,
                                            const timelock::PuzzleChain& chain, DeterministicRng& rng)
{
    if (path.size() < 3) throw std::invalid_argument("double incentive path needs sender, a forwarder and a receiver");
    const std::size_t n = path.size() - 2;
    if (chain.size() != n)
        throw std::invalid_argument("double incentive needs one reward block per forwarder: " +
                                    std::to_string(chain.size()) + " blocks for " + std::to_string(n) + " forwarders");

    DoubleIncentiveSetup out;
    out.secrets.reserve(n + 1);
    for (std::size_t i = 0; i < n + 1; ++i) out.secrets.push_back(rng.next_block());
    out.receiver_secret = out.secrets.back();

    // Forwarder i (1-based) owns block i-1 and needs s_{i+1} from the next hop.
    for (std::size_t i = 1; i <= n; ++i) {
        HopSetup hop;
        hop.hop_index = static_cast<std::uint32_t>(i);
        hop.secret = out.secrets[i - 1];
        hop.nonce = make_nonce(chain.keys[i - 1], out.secrets[i], manifest.full_hash);
        hop.ack_address = path[i - 1];
        out.hops.push_back(hop);
    }
    return out;
}

DoubleIncentiveSetup setup_paid_hops(const std::vector<NodeId>& path, const Block32& full_hash,
                                     const std::vector<std::optional<timelock::PuzzleKey>>& keys,
                                     DeterministicRng& rng)
{
    if (path.size() < 2) throw std::invalid_argument("paid path needs a source and a receiver");
    if (keys.size() != path.size() - 1) throw std::invalid_argument("one optional key per non-receiver position");
    const std::size_t n = path.size() - 2;

    DoubleIncentiveSetup out;
    for (std::size_t i = 0; i < n + 1; ++i) out.secrets.push_back(rng.next_block());
    out.receiver_secret = out.secrets.back();

    for (std::size_t pos = 0; pos < path.size(); ++pos) {
        HopSetup hop;
        hop.hop_index = static_cast<std::uint32_t>(pos);
        if (pos >= 1) {
            hop.secret = out.secrets[pos - 1];
            hop.ack_address = path[pos - 1];
        }
        if (pos < keys.size() && keys[pos]) hop.nonce = make_nonce(*keys[pos], out.secrets[pos], full_hash);
        out.hops.push_back(hop);
    }
    return out;
}

std::string_view to_string(Phase phase)
{
    switch (phase) {
        case Phase::awaiting_setup: return "awaiting_setup";
        case Phase::receiving: return "receiving";
        case Phase::forwarding: return "forwarding";
        case Phase::awaiting_ack: return "awaiting_ack";
        case Phase::reconstructing: return "reconstructing";
        case Phase::claiming: return "claiming";
        case Phase::done: return "done";
        case Phase::failed: return "failed";
    }
    return "unknown";
}

std::string_view event_name(const Event& e)
{
    return std::visit(
        [](const auto& ev) -> std::string_view {
            using T = std::decay_t<decltype(ev)>;
            if constexpr (std::is_same_v<T, event::Setup>) return "setup";
            else if constexpr (std::is_same_v<T, event::Chunk>) return "chunk";
            else if constexpr (std::is_same_v<T, event::Transmitted>) return "transmitted";
            else if constexpr (std::is_same_v<T, event::Ack>) return "ack";
            else if constexpr (std::is_same_v<T, event::KeyRelease>) return "key_release";
            else if constexpr (std::is_same_v<T, event::ClaimResult>) return "claim_result";
            else return "timeout";
        },
        e);
}

std::string describe(const Action& a)
{
    return std::visit(
        [](const auto& act) -> std::string {
            using T = std::decay_t<decltype(act)>;
            if constexpr (std::is_same_v<T, action::SendAckToPrevious>)
                return "send_ack_to_previous(" + act.address + ";" + act.secret.short_hex() + ")";
            else if constexpr (std::is_same_v<T, action::ForwardChunk>)
                return "forward_chunk(" + std::to_string(act.data.size()) + ")";
            else if constexpr (std::is_same_v<T, action::SubmitClaim>)
                return "submit_claim(" + std::to_string(act.target.chain_id) + "#" +
                       std::to_string(act.target.block_index) + ";" + act.key.short_hex() + ")";
            else if constexpr (std::is_same_v<T, action::AcknowledgeSender>)
                return "ack_sender(" + act.sender + ";" + act.digest.short_hex() + ")";
            else if constexpr (std::is_same_v<T, action::Delivered>)
                return std::string("delivered(") + (act.intact ? "intact" : "corrupt") + ")";
            else
                return "fail(" + act.reason + ")";
        },
        a);
}

namespace {

bool terminal(Phase p) { return p == Phase::done || p == Phase::failed; }

void fail(ForwarderState& s, std::vector<Action>& actions, std::string reason)
{
    s.phase = Phase::failed;
    s.failure = reason;
    actions.push_back(action::Fail{std::move(reason)});
}

// Moves a drained forwarder on to key reconstruction when it can.
void advance_after_drain(ForwarderState& s, std::vector<Action>& actions)
{
    if (s.phase != Phase::forwarding || !s.window.empty()) return;
    if (!s.target) {
        s.phase = Phase::done;
        return;
    }
    s.phase = Phase::awaiting_ack;
    if (s.config.model == ForwardingModel::double_incentive && s.received_secret) {
        s.phase = Phase::reconstructing;
        const auto key = reconstruct_key(s.setup->nonce, *s.received_secret, *s.message_hash);
        actions.push_back(action::SubmitClaim{*s.target, key});
        s.phase = Phase::claiming;
    }
}

}  // namespace

StepResult forwarder_step(ForwarderState s, const Event& ev)
{
    std::vector<Action> actions;
    if (terminal(s.phase)) return {std::move(s), std::move(actions)};

    if (std::holds_alternative<event::Timeout>(ev)) {
        fail(s, actions, std::string("timeout in ") + std::string(to_string(s.phase)));
        return {std::move(s), std::move(actions)};
    }

    if (const auto* setup = std::get_if<event::Setup>(&ev)) {
        if (s.phase != Phase::awaiting_setup) return {std::move(s), std::move(actions)};
        if (setup->manifest.total_length == 0 || setup->manifest.chunk_size == 0) {
            fail(s, actions, "invalid manifest");
            return {std::move(s), std::move(actions)};
        }
        if (s.config.model == ForwardingModel::double_incentive && setup->target && !setup->hop) {
            fail(s, actions, "double incentive setup without secret and nonce");
            return {std::move(s), std::move(actions)};
        }
        s.manifest = setup->manifest;
        s.setup = setup->hop;
        s.target = setup->target;
        s.phase = Phase::receiving;
        return {std::move(s), std::move(actions)};
    }

    if (const auto* chunk = std::get_if<event::Chunk>(&ev)) {
        if (s.phase == Phase::awaiting_setup) {
            fail(s, actions, "chunk before setup");
        } else if (s.phase != Phase::receiving || s.bytes_received + chunk->data.size() > s.manifest.total_length) {
            fail(s, actions, "chunk overflow beyond declared length");
        } else if (s.window.size() >= s.config.window_capacity) {
            fail(s, actions, "window overflow");
        } else {
            s.rolling_hash.update(chunk->data);
            s.bytes_received += chunk->data.size();
            s.window.push_back(chunk->data);
            s.max_window_occupancy = std::max(s.max_window_occupancy, s.window.size());
            actions.push_back(action::ForwardChunk{chunk->data});
            if (s.bytes_received == s.manifest.total_length) {
                s.message_hash = s.rolling_hash.finalize();
                if (s.config.model == ForwardingModel::double_incentive && s.setup && !s.config.withhold_ack)
                    actions.push_back(action::SendAckToPrevious{s.setup->ack_address, s.setup->secret});
                s.phase = Phase::forwarding;
            }
        }
        return {std::move(s), std::move(actions)};
    }

    if (std::holds_alternative<event::Transmitted>(ev)) {
        if (!s.window.empty()) s.window.pop_front();
        advance_after_drain(s, actions);
        return {std::move(s), std::move(actions)};
    }

    if (const auto* ack = std::get_if<event::Ack>(&ev)) {
        if (s.config.model != ForwardingModel::double_incentive || s.received_secret)
            return {std::move(s), std::move(actions)};
        s.received_secret = ack->secret;
        if (s.phase == Phase::awaiting_ack && s.target && s.setup && s.message_hash) {
            s.phase = Phase::reconstructing;
            const auto key = reconstruct_key(s.setup->nonce, ack->secret, *s.message_hash);
            actions.push_back(action::SubmitClaim{*s.target, key});
            s.phase = Phase::claiming;
        }
        return {std::move(s), std::move(actions)};
    }

    if (const auto* release = std::get_if<event::KeyRelease>(&ev)) {
        if (s.config.model != ForwardingModel::all_or_nothing || s.phase != Phase::awaiting_ack || !s.target)
            return {std::move(s), std::move(actions)};
        s.phase = Phase::reconstructing;
        actions.push_back(action::SubmitClaim{*s.target, release->key});
        s.phase = Phase::claiming;
        return {std::move(s), std::move(actions)};
    }

    if (const auto* result = std::get_if<event::ClaimResult>(&ev)) {
        if (s.phase != Phase::claiming) return {std::move(s), std::move(actions)};
        if (result->outcome.accepted())
            s.phase = Phase::done;
        else
            fail(s, actions, "claim rejected: " + std::string(ledger::to_string(*result->outcome.rejection)));
        return {std::move(s), std::move(actions)};
    }

    return {std::move(s), std::move(actions)};
}

ReceiverStepResult receiver_step(ReceiverState s, const Event& ev)
{
    std::vector<Action> actions;
    if (terminal(s.phase)) return {std::move(s), std::move(actions)};

    if (std::holds_alternative<event::Timeout>(ev)) {
        s.phase = Phase::failed;
        actions.push_back(action::Fail{"timeout before full message"});
    } else if (const auto* setup = std::get_if<event::Setup>(&ev)) {
        if (s.phase == Phase::awaiting_setup) {
            s.manifest = setup->manifest;
            s.setup = setup->hop;
            s.sender = setup->sender;
            s.phase = Phase::receiving;
        }
    } else if (const auto* chunk = std::get_if<event::Chunk>(&ev)) {
        if (s.phase != Phase::receiving || s.bytes_received + chunk->data.size() > s.manifest.total_length) {
            s.phase = Phase::failed;
            actions.push_back(action::Fail{"chunk outside the declared message"});
        } else {
            s.rolling_hash.update(chunk->data);
            s.bytes_received += chunk->data.size();
            if (s.bytes_received == s.manifest.total_length) {
                s.message_hash = s.rolling_hash.finalize();
                const bool intact = !s.manifest.full_hash.is_zero() ? *s.message_hash == s.manifest.full_hash : true;
                if (s.model == ForwardingModel::double_incentive && s.setup)
                    actions.push_back(action::SendAckToPrevious{s.setup->ack_address, s.setup->secret});
                if (s.model == ForwardingModel::all_or_nothing && s.sender && intact)
                    actions.push_back(action::AcknowledgeSender{*s.sender, *s.message_hash});
                actions.push_back(action::Delivered{intact});
                s.phase = Phase::done;
            }
        }
    }
    return {std::move(s), std::move(actions)};
}

std::vector<std::optional<std::size_t>> predicted_claimants(std::size_t n, std::size_t withholder)
{
    if (withholder > n) throw std::invalid_argument("withholder must be a forwarder position in 1..n");
    std::vector<std::optional<std::size_t>> out(n);
    // Forwarder j-1 never learns s_j, and later blocks are stuck behind it.
    // Forwarder 1 withholding only hurts the unpaid sender.
    const std::size_t honest = withholder <= 1 ? n : withholder - 2;
    for (std::size_t b = 0; b < honest; ++b) out[b] = b + 1;
    return out;
}

std::vector<std::pair<NodeId, timelock::PuzzleKey>> all_or_nothing_release(const timelock::PuzzleChain& chain,
                                                                           const std::vector<NodeId>& forwarders,
                                                                           const MessageManifest& manifest,
                                                                           const std::optional<Block32>& acked_digest)
{
    if (chain.size() != forwarders.size())
        throw std::invalid_argument("all-or-nothing needs one reward block per forwarder");
    std::vector<std::pair<NodeId, timelock::PuzzleKey>> out;
    if (!acked_digest || *acked_digest != manifest.full_hash) return out;
    for (std::size_t i = 0; i < forwarders.size(); ++i) out.emplace_back(forwarders[i], chain.keys[i]);
    return out;
}

// ---- contract forwarding ----

std::size_t ContractState::depth() const
{
    std::size_t d = 0;
    for (const auto& sub : subcontracts) d = std::max(d, sub.depth());
    return d + 1;
}

std::vector<const ContractState*> ContractPlan::levels() const
{
    std::vector<const ContractState*> out;
    for (const ContractState* c = &root; c != nullptr; c = c->subcontracts.empty() ? nullptr : &c->subcontracts.front())
        out.push_back(c);
    return out;
}

std::variant<ContractPlan, ContractDeclined> run_contract(const NodeId& principal, const NodeId& contractor,
                                                          const NodeId& receiver, const NodeId& data_source,
                                                          Amount agreed_price, SimTime deadline,
                                                          const ContractPolicy& policy,
                                                          const ContractTopology& topology)
{
    if (!(policy.margin >= 0.0 && policy.margin < 1.0)) throw std::invalid_argument("contract margin must lie in [0, 1)");
    if (agreed_price < 0) throw std::invalid_argument("contract price must be non-negative");

    std::uint64_t next_id = 1;
    ContractPlan plan;
    plan.root = ContractState{next_id++, principal, contractor, agreed_price, deadline, {}};

    std::vector<NodeId> engaged{principal, contractor};
    if (data_source != principal && data_source != contractor) engaged.push_back(data_source);
    engaged.push_back(receiver);

    if (data_source != contractor) plan.delivery_path.push_back(data_source);
    plan.delivery_path.push_back(contractor);

    ContractState* current = &plan.root;
    for (std::size_t depth = 1;; ++depth) {
        if (current->contractor == receiver || topology.in_range_of_receiver(current->contractor)) break;
        if (depth >= policy.max_depth) return ContractDeclined{current->contractor, "subcontracting depth limit reached"};

        const auto offer = static_cast<Amount>(
            std::floor(static_cast<double>(current->agreed_price) * (1.0 - policy.margin) + 1e-9));
        auto quotes = topology.quotes(current->contractor, engaged);
        const auto choice = economics::select_path({quotes}, offer, deadline);
        if (!choice) return ContractDeclined{current->contractor, "no subcontractor within budget"};

        const auto& pick = choice->hops.front();
        current->subcontracts.push_back(ContractState{next_id++, current->contractor, pick.node_id, offer, deadline, {}});
        engaged.push_back(pick.node_id);
        plan.delivery_path.push_back(pick.node_id);
        current = &current->subcontracts.back();
    }
    if (plan.delivery_path.back() != receiver) plan.delivery_path.push_back(receiver);
    return plan;
}

// ---- competing forwarders ----

CreditingReceiver::CreditingReceiver(std::uint32_t generation_id, std::size_t k, std::size_t symbol_size)
    : decoder_(generation_id, k, symbol_size)
{
}

bool CreditingReceiver::accept(const coding::CodedPacket& packet)
{
    const bool innovative = decoder_.accept(packet);
    if (innovative) ++credits_[packet.last_hop];
    return innovative;
}

std::size_t CreditingReceiver::total_credit() const
{
    std::size_t total = 0;
    for (const auto& [node, c] : credits_) total += c;
    return total;
}

std::map<NodeId, Amount> split_reward_pool(Amount reward_pool, const std::vector<CompetingPath>& paths,
                                           const std::map<NodeId, std::size_t>& credits)
{
    if (reward_pool < 0) throw std::invalid_argument("reward pool must be non-negative");

    struct Share {
        NodeId node;
        __int128 num;  // exact share = num / den
        __int128 den;
    };
    std::vector<Share> shares;

    __int128 total_credit = 0;
    for (const auto& p : paths) {
        if (p.forwarders.empty()) throw std::invalid_argument("competing path without forwarders");
        if (auto it = credits.find(p.forwarders.back()); it != credits.end()) total_credit += it->second;
    }
    std::map<NodeId, Amount> out;
    if (total_credit == 0) return out;

    for (const auto& p : paths) {
        std::vector<std::uint64_t> weights = p.weights;
        if (weights.empty()) weights.assign(p.forwarders.size(), 1);
        if (weights.size() != p.forwarders.size()) throw std::invalid_argument("one weight per forwarder required");
        const __int128 wsum = std::accumulate(weights.begin(), weights.end(), __int128{0});
        if (wsum == 0) throw std::invalid_argument("path weights must not all be zero");
        __int128 c = 0;
        if (auto it = credits.find(p.forwarders.back()); it != credits.end()) c = it->second;
        for (std::size_t i = 0; i < p.forwarders.size(); ++i)
            shares.push_back({p.forwarders[i], __int128{reward_pool} * c * weights[i], total_credit * wsum});
    }

    Amount assigned = 0;
    std::vector<std::pair<std::size_t, __int128>> remainders;  // index, remainder numerator over den
    std::vector<Amount> floor_parts(shares.size());
    for (std::size_t i = 0; i < shares.size(); ++i) {
        floor_parts[i] = static_cast<Amount>(shares[i].num / shares[i].den);
        assigned += floor_parts[i];
        remainders.emplace_back(i, shares[i].num % shares[i].den);
    }
    // Largest remainder first; compare r_a/den_a > r_b/den_b exactly; earlier entries win ties.
    std::stable_sort(remainders.begin(), remainders.end(), [&](const auto& a, const auto& b) {
        return a.second * shares[b.first].den > b.second * shares[a.first].den;
    });
    for (std::size_t j = 0; assigned < reward_pool; ++j, ++assigned) ++floor_parts[remainders[j % remainders.size()].first];

    for (std::size_t i = 0; i < shares.size(); ++i)
        if (floor_parts[i] > 0) out[shares[i].node] += floor_parts[i];
    return out;
}

}  // namespace kadupul::protocol
