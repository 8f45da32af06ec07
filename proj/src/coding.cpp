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

#include "kadupul/coding.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace kadupul::coding {

namespace {

struct Tables {
    std::array<std::uint8_t, 512> exp{};
    std::array<std::uint8_t, 256> log{};

    constexpr Tables()
    {
        // 0x03 generates the multiplicative group under 0x11b.
        unsigned x = 1;
        for (unsigned i = 0; i < 255; ++i) {
            exp[i] = static_cast<std::uint8_t>(x);
            log[x] = static_cast<std::uint8_t>(i);
            unsigned doubled = x << 1;
            if (doubled & 0x100) doubled ^= 0x11b;
            x ^= doubled;
        }
        for (unsigned i = 255; i < 512; ++i) exp[i] = exp[i - 255];
    }
};

constexpr Tables kTables;

}  // namespace

std::uint8_t gf256_mul(std::uint8_t a, std::uint8_t b)
{
    if (a == 0 || b == 0) return 0;
    return kTables.exp[kTables.log[a] + kTables.log[b]];
}

std::uint8_t gf256_inv(std::uint8_t a)
{
    if (a == 0) throw std::domain_error("gf256_inv: zero has no inverse");
    return kTables.exp[255 - kTables.log[a]];
}

std::uint8_t gf256_div(std::uint8_t a, std::uint8_t b) { return gf256_mul(a, gf256_inv(b)); }

void gf256_axpy(std::span<std::uint8_t> dst, std::uint8_t c, std::span<const std::uint8_t> src)
{
    if (dst.size() != src.size()) throw std::invalid_argument("gf256_axpy: length mismatch");
    if (c == 0) return;
    const unsigned lc = kTables.log[c];
    for (std::size_t i = 0; i < dst.size(); ++i)
        if (src[i] != 0) dst[i] ^= kTables.exp[lc + kTables.log[src[i]]];
}

void gf256_scale(std::span<std::uint8_t> dst, std::uint8_t c)
{
    for (auto& v : dst) v = gf256_mul(v, c);
}

Generation Generation::from_message(std::uint32_t generation_id, std::span<const std::uint8_t> message, std::size_t k)
{
    if (k < 1 || k > kMaxGenerationSize) throw std::invalid_argument("generation size must be in 1..255");
    if (message.empty()) throw std::invalid_argument("cannot build a generation from an empty message");
    Generation g;
    g.generation_id = generation_id;
    g.k = k;
    g.message_length = message.size();
    g.symbol_size = (message.size() + k - 1) / k;
    g.source_symbols.assign(k, Bytes(g.symbol_size, 0));
    for (std::size_t i = 0; i < message.size(); ++i) g.source_symbols[i / g.symbol_size][i % g.symbol_size] = message[i];
    return g;
}

CodedPacket encode_with(const Generation& generation, std::span<const std::uint8_t> coefficients)
{
    if (coefficients.size() != generation.k) throw std::invalid_argument("encode: coefficient count must equal k");
    CodedPacket p;
    p.generation_id = generation.generation_id;
    p.coefficients.assign(coefficients.begin(), coefficients.end());
    p.payload.assign(generation.symbol_size, 0);
    for (std::size_t j = 0; j < generation.k; ++j) gf256_axpy(p.payload, coefficients[j], generation.source_symbols[j]);
    return p;
}

CodedPacket encode(const Generation& generation, DeterministicRng& rng)
{
    std::vector<std::uint8_t> coefficients(generation.k);
    for (auto& c : coefficients) c = rng.next_byte();
    return encode_with(generation, coefficients);
}

CodedPacket recode_with(std::span<const CodedPacket> held, std::span<const std::uint8_t> scalars)
{
    if (held.empty()) throw std::invalid_argument("recode: no packets held");
    if (scalars.size() != held.size()) throw std::invalid_argument("recode: one scalar per held packet required");
    const auto& first = held.front();
    CodedPacket out;
    out.generation_id = first.generation_id;
    out.coefficients.assign(first.coefficients.size(), 0);
    out.payload.assign(first.payload.size(), 0);
    for (std::size_t i = 0; i < held.size(); ++i) {
        const auto& p = held[i];
        if (p.generation_id != first.generation_id) throw std::invalid_argument("recode: mixed generations");
        if (p.coefficients.size() != out.coefficients.size() || p.payload.size() != out.payload.size())
            throw std::invalid_argument("recode: packet shape mismatch");
        gf256_axpy(out.coefficients, scalars[i], p.coefficients);
        gf256_axpy(out.payload, scalars[i], p.payload);
    }
    return out;
}

CodedPacket recode(std::span<const CodedPacket> held, DeterministicRng& rng)
{
    if (held.empty()) throw std::invalid_argument("recode: no packets held");
    std::vector<std::uint8_t> scalars(held.size());
    for (auto& s : scalars) s = rng.next_byte();
    return recode_with(held, scalars);
}

Decoder::Decoder(std::uint32_t generation_id, std::size_t k, std::size_t symbol_size)
    : generation_id_(generation_id), k_(k), symbol_size_(symbol_size)
{
    if (k < 1 || k > kMaxGenerationSize) throw std::invalid_argument("generation size must be in 1..255");
}

bool Decoder::accept(const CodedPacket& packet)
{
    if (packet.generation_id != generation_id_) throw std::invalid_argument("decoder: generation mismatch");
    if (packet.coefficients.size() != k_ || packet.payload.size() != symbol_size_)
        throw std::invalid_argument("decoder: packet shape mismatch");
    if (complete()) return false;

    auto coeffs = packet.coefficients;
    auto payload = packet.payload;
    for (const auto& row : rows_) {
        const std::uint8_t c = coeffs[row.pivot];
        if (c == 0) continue;
        gf256_axpy(coeffs, c, row.coefficients);
        gf256_axpy(payload, c, row.payload);
    }

    auto lead = std::find_if(coeffs.begin(), coeffs.end(), [](std::uint8_t c) { return c != 0; });
    if (lead == coeffs.end()) return false;

    const std::size_t pivot = static_cast<std::size_t>(lead - coeffs.begin());
    const std::uint8_t inv = gf256_inv(*lead);
    gf256_scale(coeffs, inv);
    gf256_scale(payload, inv);

    // Clear the new pivot column from existing rows to stay fully reduced.
    for (auto& row : rows_) {
        const std::uint8_t c = row.coefficients[pivot];
        if (c == 0) continue;
        gf256_axpy(row.coefficients, c, coeffs);
        gf256_axpy(row.payload, c, payload);
    }

    auto pos = std::lower_bound(rows_.begin(), rows_.end(), pivot,
                                [](const Row& r, std::size_t p) { return r.pivot < p; });
    rows_.insert(pos, Row{pivot, std::move(coeffs), std::move(payload)});
    return true;
}

std::vector<Bytes> Decoder::decoded_symbols() const
{
    if (!complete()) throw std::logic_error("decoder: rank deficient, cannot decode yet");
    std::vector<Bytes> out;
    out.reserve(k_);
    for (const auto& row : rows_) out.push_back(row.payload);
    return out;
}

Bytes Decoder::decoded_message(std::size_t message_length) const
{
    Bytes out;
    out.reserve(k_ * symbol_size_);
    for (const auto& s : decoded_symbols()) out.insert(out.end(), s.begin(), s.end());
    if (message_length > out.size()) throw std::invalid_argument("decoder: message longer than generation");
    out.resize(message_length);
    return out;
}

}  // namespace kadupul::coding
