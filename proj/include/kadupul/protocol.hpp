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

#include "kadupul/bytes.hpp"
#include "kadupul/coding.hpp"
#include "kadupul/economics.hpp"
#include "kadupul/ledger.hpp"
#include "kadupul/rng.hpp"
#include "kadupul/sha256.hpp"
#include "kadupul/timelock.hpp"

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace kadupul::protocol {

using RollingHash = Sha256Stream;

// Absorbs one chunk into the running message hash.
RollingHash incremental_hash_update(RollingHash state, ByteSpan chunk);

struct MessageManifest {
    std::uint64_t message_id = 0;
    std::uint64_t total_length = 0;
    std::uint64_t chunk_size = 0;
    Block32 full_hash;  // zero when withheld from the holder

    std::uint64_t chunk_count() const { return (total_length + chunk_size - 1) / chunk_size; }
    std::uint64_t chunk_length(std::uint64_t index) const;
    // Copy without the digest, as handed to forwarders.
    MessageManifest without_hash() const;
};

// Throws std::invalid_argument unless 1 <= chunk_size <= message.size().
MessageManifest make_manifest(std::uint64_t message_id, ByteSpan message, std::uint64_t chunk_size);

struct HopSetup {
    std::uint32_t hop_index = 0;  // 1-based position on the path
    Block32 secret;               // returned to the previous hop as acknowledgement
    Block32 nonce;                // nonce ^ next secret ^ message hash = this hop's key
    NodeId ack_address;           // control-plane address of the previous hop
};

struct DoubleIncentiveSetup {
    std::vector<HopSetup> hops;   // one per forwarder
    std::vector<Block32> secrets; // s_1 .. s_{n+1}
    Block32 receiver_secret;      // s_{n+1}
};

inline Block32 reconstruct_key(const Block32& nonce, const Block32& next_secret, const Block32& full_hash)
{
    return nonce ^ next_secret ^ full_hash;
}

inline Block32 make_nonce(const timelock::PuzzleKey& key, const Block32& next_secret, const Block32& full_hash)
{
    return key ^ next_secret ^ full_hash;
}

// path = sender, f_1 .. f_n, receiver; chain must hold exactly n blocks.
DoubleIncentiveSetup setup_double_incentive(const std::vector<NodeId>& path, const MessageManifest& manifest,
                                            const timelock::PuzzleChain& chain, DeterministicRng& rng);

// Generalised setup over path = p_0 .. p_{n+1} where any of the positions
// 0..n may be paid (keys[pos] set). Returns n+2 hops indexed by position:
// hops[pos].secret = s_pos for pos >= 1, hops[pos].nonce = keys[pos] ^ s_{pos+1} ^ H
// for paid positions (zero otherwise). hops.back() is the receiver's setup.
DoubleIncentiveSetup setup_paid_hops(const std::vector<NodeId>& path, const Block32& full_hash,
                                     const std::vector<std::optional<timelock::PuzzleKey>>& keys,
                                     DeterministicRng& rng);

struct ClaimTarget {
    ledger::ChainId chain_id = 0;
    std::uint32_t block_index = 0;
};

enum class Phase { awaiting_setup, receiving, forwarding, awaiting_ack, reconstructing, claiming, done, failed };
std::string_view to_string(Phase phase);

enum class ForwardingModel { double_incentive, all_or_nothing };

struct ForwarderConfig {
    ForwardingModel model = ForwardingModel::double_incentive;
    std::size_t window_capacity = 16;
    bool withhold_ack = false;
};

namespace event {
struct Setup {
    MessageManifest manifest;
    std::optional<HopSetup> hop;          // double incentive only
    std::optional<ClaimTarget> target;    // block this node may claim
    std::optional<NodeId> sender;         // all-or-nothing receiver acks here
};
struct Chunk {
    Bytes data;
};
struct Transmitted {};
struct Ack {
    Block32 secret;
};
struct KeyRelease {
    timelock::PuzzleKey key;
};
struct ClaimResult {
    ledger::ClaimOutcome outcome;
};
struct Timeout {};
}  // namespace event

using Event = std::variant<event::Setup, event::Chunk, event::Transmitted, event::Ack, event::KeyRelease,
                           event::ClaimResult, event::Timeout>;
std::string_view event_name(const Event& e);

namespace action {
struct SendAckToPrevious {
    NodeId address;
    Block32 secret;
};
struct ForwardChunk {
    Bytes data;
};
struct SubmitClaim {
    ClaimTarget target;
    timelock::PuzzleKey key;
};
struct AcknowledgeSender {
    NodeId sender;
    Block32 digest;
};
struct Delivered {
    bool intact = false;
};
struct Fail {
    std::string reason;
};
}  // namespace action

using Action = std::variant<action::SendAckToPrevious, action::ForwardChunk, action::SubmitClaim,
                            action::AcknowledgeSender, action::Delivered, action::Fail>;
std::string describe(const Action& a);

struct ForwarderState {
    NodeId node;
    ForwarderConfig config;
    Phase phase = Phase::awaiting_setup;
    RollingHash rolling_hash;
    std::deque<Bytes> window;  // received, not yet transmitted
    std::optional<Block32> received_secret;
    std::optional<HopSetup> setup;
    std::optional<ClaimTarget> target;
    MessageManifest manifest;
    std::uint64_t bytes_received = 0;
    std::optional<Block32> message_hash;
    std::size_t max_window_occupancy = 0;
    std::string failure;

    ForwarderState() = default;
    ForwarderState(NodeId id, ForwarderConfig cfg) : node(std::move(id)), config(cfg) {}
};

using StepResult = std::pair<ForwarderState, std::vector<Action>>;

// Deterministic reducer for one forwarder. Never stores more than
// config.window_capacity chunks; overflow or excess bytes fail the node.
StepResult forwarder_step(ForwarderState state, const Event& event);

struct ReceiverState {
    NodeId node;
    ForwardingModel model = ForwardingModel::double_incentive;
    Phase phase = Phase::awaiting_setup;
    RollingHash rolling_hash;
    MessageManifest manifest;
    std::optional<HopSetup> setup;  // double incentive: carries s_{n+1}
    std::optional<NodeId> sender;
    std::uint64_t bytes_received = 0;
    std::optional<Block32> message_hash;

    ReceiverState() = default;
    ReceiverState(NodeId id, ForwardingModel m) : node(std::move(id)), model(m) {}
};

using ReceiverStepResult = std::pair<ReceiverState, std::vector<Action>>;

// The receiver returns its secret to the last forwarder (double incentive) or
// acknowledges the sender when the digest matches the manifest (all-or-nothing).
ReceiverStepResult receiver_step(ReceiverState state, const Event& event);

// Expected claimant of each block on a line of n forwarders when forwarder
// `withholder` (1-based) never returns its secret, assuming crack time far
// exceeds forwarder timeouts. Forwarders 1..j-2 claim their own blocks; blocks
// j-2 onward fall to the cracker. Entry b holds the 1-based forwarder or
// nullopt for the cracker. withholder 0 means everyone is honest; withholder 1
// only withholds from the unpaid sender.
std::vector<std::optional<std::size_t>> predicted_claimants(std::size_t n, std::size_t withholder);

// All-or-nothing settlement: keys are released to every forwarder only on an
// end-to-end acknowledgement whose digest matches; otherwise none are.
std::vector<std::pair<NodeId, timelock::PuzzleKey>> all_or_nothing_release(const timelock::PuzzleChain& chain,
                                                                           const std::vector<NodeId>& forwarders,
                                                                           const MessageManifest& manifest,
                                                                           const std::optional<Block32>& acked_digest);

// ---- contract forwarding ----

struct ContractState {
    std::uint64_t contract_id = 0;
    NodeId principal;
    NodeId contractor;
    Amount agreed_price = 0;
    SimTime deadline = 0;
    std::vector<ContractState> subcontracts;

    std::size_t depth() const;
};

struct ContractPolicy {
    double margin = 0.1;
    std::size_t max_depth = 8;
};

// Negotiation environment seen by contractors.
struct ContractTopology {
    // True when `node` can deliver to the receiver over a single link.
    std::function<bool(const NodeId& node)> in_range_of_receiver;
    // Subcontractor quotes available to `contractor`, excluding nodes already engaged.
    std::function<std::vector<economics::CapabilityQuote>(const NodeId& contractor, const std::vector<NodeId>& engaged)>
        quotes;
};

struct ContractPlan {
    ContractState root;
    std::vector<NodeId> delivery_path;  // data source .. receiver
    std::vector<const ContractState*> levels() const;
};

struct ContractDeclined {
    NodeId at;
    std::string reason;
};

// Recursive subcontracting: a contractor out of range of the receiver offers
// floor(price * (1 - margin)) to the cheapest admissible neighbour.
std::variant<ContractPlan, ContractDeclined> run_contract(const NodeId& principal, const NodeId& contractor,
                                                          const NodeId& receiver, const NodeId& data_source,
                                                          Amount agreed_price, SimTime deadline,
                                                          const ContractPolicy& policy,
                                                          const ContractTopology& topology);

// ---- competing forwarders ----

// Receiver-side decoder that credits each innovative packet to its last hop.
class CreditingReceiver {
public:
    CreditingReceiver(std::uint32_t generation_id, std::size_t k, std::size_t symbol_size);

    bool accept(const coding::CodedPacket& packet);
    bool complete() const { return decoder_.complete(); }
    std::size_t rank() const { return decoder_.rank(); }
    const std::map<NodeId, std::size_t>& credits() const { return credits_; }
    std::size_t total_credit() const;
    const coding::Decoder& decoder() const { return decoder_; }

private:
    coding::Decoder decoder_;
    std::map<NodeId, std::size_t> credits_;
};

struct CompetingPath {
    std::vector<NodeId> forwarders;        // upstream .. last hop
    std::vector<std::uint64_t> weights;    // share of the path's reward per forwarder; empty = equal
};

// Splits reward_pool across paths in proportion to the credits of each path's
// last hop, then within a path by weight. Integer units are apportioned by
// largest remainder; the result sums to reward_pool whenever any credit exists.
std::map<NodeId, Amount> split_reward_pool(Amount reward_pool, const std::vector<CompetingPath>& paths,
                                           const std::map<NodeId, std::size_t>& credits);

}  // namespace kadupul::protocol
