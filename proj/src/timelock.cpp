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

#include "kadupul/timelock.hpp"

#include "kadupul/rng.hpp"
#include "kadupul/sha256.hpp"

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace kadupul::timelock {

namespace {

thread_local std::uint64_t g_hash_applications = 0;

bool is_lower_hex64(const std::string& s)
{
    return s.size() == 64 && std::all_of(s.begin(), s.end(), [](char c) {
               return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
           });
}

}  // namespace

std::uint64_t hash_applications() { return g_hash_applications; }
void reset_hash_applications() { g_hash_applications = 0; }

PuzzleKey derive_key(const Block32& iv, std::uint64_t iterations)
{
    if (iterations == 0) throw std::invalid_argument("derive_key: iterations must be at least 1");

    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (ctx == nullptr) throw std::runtime_error("derive_key: cannot allocate digest context");
    const EVP_MD* md = EVP_sha256();

    Block32 state = iv;
    for (std::uint64_t i = 0; i < iterations; ++i) {
        unsigned int len = 0;
        if (EVP_DigestInit_ex(ctx, md, nullptr) != 1 ||
            EVP_DigestUpdate(ctx, state.bytes.data(), state.bytes.size()) != 1 ||
            EVP_DigestFinal_ex(ctx, state.bytes.data(), &len) != 1) {
            EVP_MD_CTX_free(ctx);
            throw std::runtime_error("derive_key: SHA-256 failed");
        }
    }
    EVP_MD_CTX_free(ctx);
    g_hash_applications += iterations;
    return state;
}

Block32 commit_key(const PuzzleKey& key) { return sha256(key); }

bool verify_key(const PuzzleKey& candidate, const Block32& commitment) { return sha256(candidate) == commitment; }

PuzzleKey solve_block(const Block32& iv_published, const std::optional<PuzzleKey>& prev_key, std::uint64_t iterations)
{
    const Block32 iv = prev_key ? deobfuscate_iv(iv_published, *prev_key) : iv_published;
    return derive_key(iv, iterations);
}

PuzzleChain generate_chain(std::size_t n_blocks, std::uint64_t iterations, std::span<const Amount> values,
                           std::uint64_t rng_seed, const ChainBuildOptions& options)
{
    if (n_blocks == 0) throw std::invalid_argument("generate_chain: at least one block is required");
    if (values.size() != n_blocks)
        throw std::invalid_argument("generate_chain: " + std::to_string(values.size()) + " values for " +
                                    std::to_string(n_blocks) + " blocks");
    if (iterations == 0) throw std::invalid_argument("generate_chain: iterations must be at least 1");
    for (auto v : values)
        if (v < 0) throw std::invalid_argument("generate_chain: block values must be non-negative");

    std::vector<std::size_t> order = options.derivation_order;
    if (order.empty()) {
        order.resize(n_blocks);
        std::iota(order.begin(), order.end(), std::size_t{0});
    }
    {
        auto sorted = order;
        std::sort(sorted.begin(), sorted.end());
        std::vector<std::size_t> expected(n_blocks);
        std::iota(expected.begin(), expected.end(), std::size_t{0});
        if (sorted != expected) throw std::invalid_argument("generate_chain: derivation_order is not a permutation");
    }

    // IVs are drawn in index order regardless of derivation order.
    DeterministicRng rng(rng_seed, /*stream=*/0x7143);
    PuzzleChain chain;
    chain.blocks.resize(n_blocks);
    chain.keys.resize(n_blocks);
    for (std::size_t i = 0; i < n_blocks; ++i) {
        auto& b = chain.blocks[i];
        b.index = static_cast<std::uint32_t>(i);
        b.iv_clear = rng.next_block();
        b.iterations = iterations;
        b.value = values[i];
    }

    auto derive = [&](std::size_t i) { chain.keys[i] = derive_key(chain.blocks[i].iv_clear, iterations); };
    if (options.workers > 1 && n_blocks > 1) {
        const unsigned workers = std::min<unsigned>(options.workers, static_cast<unsigned>(n_blocks));
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t pos = w; pos < order.size(); pos += workers) derive(order[pos]);
            });
        }
        for (auto& t : pool) t.join();
    } else {
        for (auto i : order) derive(i);
    }

    for (std::size_t i = 0; i < n_blocks; ++i) {
        auto& b = chain.blocks[i];
        b.key_commitment = commit_key(chain.keys[i]);
        b.iv_published = i == 0 ? b.iv_clear : b.iv_clear ^ chain.keys[i - 1];
    }
    return chain;
}

std::vector<PublicBlock> PuzzleChain::published() const
{
    std::vector<PublicBlock> out;
    out.reserve(blocks.size());
    for (const auto& b : blocks) out.push_back({b.index, b.iv_published, b.iterations, b.key_commitment, b.value});
    return out;
}

bool operator==(const PuzzleChain& a, const PuzzleChain& b)
{
    if (a.keys != b.keys || a.blocks.size() != b.blocks.size()) return false;
    for (std::size_t i = 0; i < a.blocks.size(); ++i) {
        const auto& x = a.blocks[i];
        const auto& y = b.blocks[i];
        if (x.index != y.index || x.iv_clear != y.iv_clear || x.iv_published != y.iv_published ||
            x.iterations != y.iterations || x.key_commitment != y.key_commitment || x.value != y.value)
            return false;
    }
    return true;
}

void to_json(nlohmann::json& j, const PublicBlock& block)
{
    j = nlohmann::json{{"index", block.index},
                       {"iv_published", block.iv_published.hex()},
                       {"iterations", block.iterations},
                       {"key_commitment", block.key_commitment.hex()},
                       {"value", block.value}};
}

void from_json(const nlohmann::json& j, PublicBlock& block)
{
    const auto iv = j.at("iv_published").get<std::string>();
    const auto commitment = j.at("key_commitment").get<std::string>();
    if (!is_lower_hex64(iv)) throw std::invalid_argument("iv_published must be 64 lowercase hex characters");
    if (!is_lower_hex64(commitment)) throw std::invalid_argument("key_commitment must be 64 lowercase hex characters");
    block.index = j.at("index").get<std::uint32_t>();
    block.iv_published = Block32::from_hex(iv);
    block.iterations = j.at("iterations").get<std::uint64_t>();
    block.key_commitment = Block32::from_hex(commitment);
    block.value = j.at("value").get<Amount>();
}

std::string to_publication_line(const PublicBlock& block)
{
    return std::to_string(block.index) + "," + block.iv_published.hex() + "," + std::to_string(block.iterations) +
           "," + block.key_commitment.hex() + "," + std::to_string(block.value);
}

}  // namespace kadupul::timelock
