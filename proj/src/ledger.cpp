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

#include "kadupul/ledger.hpp"

#include <stdexcept>

namespace kadupul::ledger {

std::string_view to_string(RejectReason reason)
{
    switch (reason) {
        case RejectReason::out_of_order: return "out_of_order";
        case RejectReason::bad_key: return "bad_key";
        case RejectReason::already_claimed: return "already_claimed";
        case RejectReason::unknown_chain: return "unknown_chain";
        case RejectReason::unknown_block: return "unknown_block";
        case RejectReason::not_visible: return "not_visible";
    }
    return "unknown";
}

std::optional<std::uint32_t> LedgerEntry::next_unclaimed() const
{
    for (std::size_t i = 0; i < claims.size(); ++i)
        if (!claims[i]) return static_cast<std::uint32_t>(i);
    return std::nullopt;
}

Ledger::Ledger(LedgerParams params) : params_(params)
{
    if (params_.confirmation_delay < 0 || params_.publication_delay < 0)
        throw std::invalid_argument("ledger delays must be non-negative");
}

ChainId Ledger::publish_chain(std::vector<timelock::PublicBlock> blocks, SimTime now, NodeId publisher)
{
    if (blocks.empty()) throw std::invalid_argument("publish_chain: empty block list");
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const auto& b = blocks[i];
        if (b.index != i) throw std::invalid_argument("publish_chain: block indices must be 0..n-1 in order");
        if (b.iterations == 0) throw std::invalid_argument("publish_chain: block iterations must be at least 1");
        if (b.value < 0) throw std::invalid_argument("publish_chain: block value must be non-negative");
    }

    const ChainId id = next_id_++;
    LedgerEntry entry;
    entry.chain_id = id;
    entry.publisher = std::move(publisher);
    entry.claims.resize(blocks.size());
    entry.published_blocks = std::move(blocks);
    entry.publish_time = now;
    entry.visible_at = now + params_.publication_delay;
    auto [it, inserted] = entries_.emplace(id, std::move(entry));
    if (!inserted) throw std::logic_error("publish_chain: duplicate chain id");
    return id;
}

ClaimOutcome Ledger::submit_claim(ChainId chain, std::uint32_t block_index, const timelock::PuzzleKey& key,
                                  const NodeId& claimant, SimTime now)
{
    auto decide = [&]() -> ClaimOutcome {
        auto it = entries_.find(chain);
        if (it == entries_.end()) return ClaimOutcome::rejected(RejectReason::unknown_chain);
        auto& e = it->second;
        if (now < e.visible_at) return ClaimOutcome::rejected(RejectReason::not_visible);
        if (block_index >= e.published_blocks.size()) return ClaimOutcome::rejected(RejectReason::unknown_block);
        if (e.claims[block_index]) return ClaimOutcome::rejected(RejectReason::already_claimed);
        if (block_index > 0 && !e.claims[block_index - 1]) return ClaimOutcome::rejected(RejectReason::out_of_order);
        if (!timelock::verify_key(key, e.published_blocks[block_index].key_commitment))
            return ClaimOutcome::rejected(RejectReason::bad_key);
        e.claims[block_index] = ClaimRecord{claimant, key, now, now + params_.confirmation_delay};
        return ClaimOutcome::ok();
    };

    const auto outcome = decide();
    ClaimLogRow row{chain, block_index, claimant, outcome.rejection, now, std::nullopt};
    if (outcome.accepted()) row.confirm_time = now + params_.confirmation_delay;
    log_.push_back(std::move(row));
    return outcome;
}

std::map<std::uint32_t, timelock::PuzzleKey> Ledger::revealed_keys(ChainId chain, SimTime now) const
{
    const auto& e = entry(chain);
    std::map<std::uint32_t, timelock::PuzzleKey> out;
    for (std::size_t i = 0; i < e.claims.size(); ++i)
        if (e.claims[i] && e.claims[i]->claim_time <= now) out.emplace(static_cast<std::uint32_t>(i), e.claims[i]->key);
    return out;
}

Amount Ledger::confirmed_balance(const NodeId& node, SimTime now) const
{
    Amount total = 0;
    for (const auto& [id, e] : entries_)
        for (std::size_t i = 0; i < e.claims.size(); ++i)
            if (e.claims[i] && e.claims[i]->claimant == node && e.claims[i]->confirm_time <= now)
                total += e.published_blocks[i].value;
    return total;
}

std::map<NodeId, Amount> Ledger::confirmed_balances(SimTime now) const
{
    std::map<NodeId, Amount> out;
    for (const auto& [id, e] : entries_)
        for (std::size_t i = 0; i < e.claims.size(); ++i)
            if (e.claims[i] && e.claims[i]->confirm_time <= now) out[e.claims[i]->claimant] += e.published_blocks[i].value;
    return out;
}

Amount Ledger::confirmed_value(SimTime now) const
{
    Amount total = 0;
    for (const auto& [id, e] : entries_)
        for (std::size_t i = 0; i < e.claims.size(); ++i)
            if (e.claims[i] && e.claims[i]->confirm_time <= now) total += e.published_blocks[i].value;
    return total;
}

const LedgerEntry& Ledger::entry(ChainId chain) const
{
    auto it = entries_.find(chain);
    if (it == entries_.end()) throw std::out_of_range("unknown chain " + std::to_string(chain));
    return it->second;
}

std::vector<ChainId> Ledger::chain_ids() const
{
    std::vector<ChainId> ids;
    ids.reserve(entries_.size());
    for (const auto& [id, e] : entries_) ids.push_back(id);
    return ids;
}

}  // namespace kadupul::ledger
