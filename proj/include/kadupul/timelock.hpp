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

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace kadupul {

using Amount = std::int64_t;

namespace timelock {

using PuzzleKey = Block32;

// Creator-side view of one reward block. iv_clear is never published.
struct RewardBlockSpec {
    std::uint32_t index = 0;
    Block32 iv_clear;
    Block32 iv_published;
    std::uint64_t iterations = 1;
    Block32 key_commitment;
    Amount value = 0;
};

// The fields of a reward block that appear on the ledger.
struct PublicBlock {
    std::uint32_t index = 0;
    Block32 iv_published;
    std::uint64_t iterations = 1;
    Block32 key_commitment;
    Amount value = 0;

    friend bool operator==(const PublicBlock&, const PublicBlock&) = default;
};

struct PuzzleChain {
    std::vector<RewardBlockSpec> blocks;
    std::vector<PuzzleKey> keys;  // creator-side only

    std::size_t size() const { return blocks.size(); }
    std::vector<PublicBlock> published() const;
    friend bool operator==(const PuzzleChain&, const PuzzleChain&);
};

struct ChainBuildOptions {
    // Order in which per-block keys are derived; empty means 0..n-1.
    std::vector<std::size_t> derivation_order;
    // Worker threads for key derivation; 0 or 1 derives on the calling thread.
    unsigned workers = 0;
};

// Iterated SHA-256. Throws std::invalid_argument when iterations == 0.
PuzzleKey derive_key(const Block32& iv, std::uint64_t iterations);

PuzzleChain generate_chain(std::size_t n_blocks, std::uint64_t iterations, std::span<const Amount> values,
                           std::uint64_t rng_seed, const ChainBuildOptions& options = {});

inline Block32 deobfuscate_iv(const Block32& iv_published, const PuzzleKey& prev_key) { return iv_published ^ prev_key; }

// Brute-force path: recovers a block key from public data plus the previous
// block's key (absent for block 0).
PuzzleKey solve_block(const Block32& iv_published, const std::optional<PuzzleKey>& prev_key, std::uint64_t iterations);

Block32 commit_key(const PuzzleKey& key);
bool verify_key(const PuzzleKey& candidate, const Block32& commitment);

// Number of SHA-256 applications performed by derive_key on this thread.
std::uint64_t hash_applications();
void reset_hash_applications();

// Publication format: index, iv_published and key_commitment as 64-char
// lowercase hex, iterations and value as decimal integers.
void to_json(nlohmann::json& j, const PublicBlock& block);
void from_json(const nlohmann::json& j, PublicBlock& block);
std::string to_publication_line(const PublicBlock& block);

}  // namespace timelock
}  // namespace kadupul
