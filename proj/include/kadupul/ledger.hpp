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

#include "kadupul/sim_time.hpp"
#include "kadupul/timelock.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kadupul {

using NodeId = std::string;

namespace ledger {

using ChainId = std::uint64_t;

struct LedgerParams {
    SimTime confirmation_delay = 0;
    SimTime publication_delay = 0;
};

enum class RejectReason { out_of_order, bad_key, already_claimed, unknown_chain, unknown_block, not_visible };

std::string_view to_string(RejectReason reason);

struct ClaimOutcome {
    std::optional<RejectReason> rejection;

    bool accepted() const { return !rejection; }
    static ClaimOutcome ok() { return {}; }
    static ClaimOutcome rejected(RejectReason r) { return {r}; }
};

struct ClaimRecord {
    NodeId claimant;
    timelock::PuzzleKey key;
    SimTime claim_time = 0;
    SimTime confirm_time = 0;
};

struct LedgerEntry {
    ChainId chain_id = 0;
    NodeId publisher;
    std::vector<timelock::PublicBlock> published_blocks;
    SimTime publish_time = 0;
    SimTime visible_at = 0;
    std::vector<std::optional<ClaimRecord>> claims;  // one slot per block

    // Lowest unclaimed index, or nullopt when every block is claimed.
    std::optional<std::uint32_t> next_unclaimed() const;
};

// One row per submitted claim, accepted or not.
struct ClaimLogRow {
    ChainId chain_id = 0;
    std::uint32_t block_index = 0;
    NodeId claimant;
    std::optional<RejectReason> rejection;
    SimTime claim_time = 0;
    std::optional<SimTime> confirm_time;
};

// Simulated public ledger. Single writer; state is a pure function of the
// ordered publish/claim sequence.
class Ledger {
public:
    explicit Ledger(LedgerParams params = {});

    const LedgerParams& params() const { return params_; }

    // Throws std::invalid_argument on an empty or malformed block list.
    ChainId publish_chain(std::vector<timelock::PublicBlock> blocks, SimTime now, NodeId publisher = {});

    ClaimOutcome submit_claim(ChainId chain, std::uint32_t block_index, const timelock::PuzzleKey& key,
                              const NodeId& claimant, SimTime now);

    // Throws std::out_of_range for an unknown chain.
    std::map<std::uint32_t, timelock::PuzzleKey> revealed_keys(ChainId chain, SimTime now) const;

    Amount confirmed_balance(const NodeId& node, SimTime now) const;
    std::map<NodeId, Amount> confirmed_balances(SimTime now) const;
    // Sum of block values whose claims are confirmed at `now`.
    Amount confirmed_value(SimTime now) const;

    bool has_chain(ChainId chain) const { return entries_.count(chain) != 0; }
    const LedgerEntry& entry(ChainId chain) const;
    std::vector<ChainId> chain_ids() const;
    const std::vector<ClaimLogRow>& claim_log() const { return log_; }

private:
    LedgerParams params_;
    ChainId next_id_ = 1;
    std::map<ChainId, LedgerEntry> entries_;
    std::vector<ClaimLogRow> log_;
};

}  // namespace ledger
}  // namespace kadupul
