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
#include "kadupul/rng.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kadupul::coding {

// GF(2^8) with the AES reduction polynomial x^8 + x^4 + x^3 + x + 1.
std::uint8_t gf256_mul(std::uint8_t a, std::uint8_t b);
// Throws std::domain_error for a == 0.
std::uint8_t gf256_inv(std::uint8_t a);
std::uint8_t gf256_div(std::uint8_t a, std::uint8_t b);
// dst[i] ^= c * src[i]
void gf256_axpy(std::span<std::uint8_t> dst, std::uint8_t c, std::span<const std::uint8_t> src);
void gf256_scale(std::span<std::uint8_t> dst, std::uint8_t c);

inline constexpr std::size_t kMaxGenerationSize = 255;

struct Generation {
    std::uint32_t generation_id = 0;
    std::size_t k = 0;
    std::size_t symbol_size = 0;
    std::size_t message_length = 0;
    std::vector<Bytes> source_symbols;

    // Splits a message into k symbols, zero-padding the last one.
    static Generation from_message(std::uint32_t generation_id, std::span<const std::uint8_t> message, std::size_t k);
};

struct CodedPacket {
    std::uint32_t generation_id = 0;
    std::vector<std::uint8_t> coefficients;
    Bytes payload;
    std::string last_hop;
};

CodedPacket encode(const Generation& generation, DeterministicRng& rng);
// Deterministic combination with caller-chosen coefficients.
CodedPacket encode_with(const Generation& generation, std::span<const std::uint8_t> coefficients);

// Throws std::invalid_argument on an empty input or mixed generations.
CodedPacket recode(std::span<const CodedPacket> held, DeterministicRng& rng);
CodedPacket recode_with(std::span<const CodedPacket> held, std::span<const std::uint8_t> scalars);

// Incremental Gauss-Jordan decoder. Rows are kept in reduced row echelon form
// so the payloads equal the source symbols once rank reaches k.
class Decoder {
public:
    Decoder(std::uint32_t generation_id, std::size_t k, std::size_t symbol_size);

    // Returns true iff the packet increased the rank. Throws
    // std::invalid_argument on a generation or shape mismatch.
    bool accept(const CodedPacket& packet);

    std::uint32_t generation_id() const { return generation_id_; }
    std::size_t k() const { return k_; }
    std::size_t rank() const { return rows_.size(); }
    bool complete() const { return rank() == k_; }

    // Available once complete().
    std::vector<Bytes> decoded_symbols() const;
    Bytes decoded_message(std::size_t message_length) const;

private:
    struct Row {
        std::size_t pivot;
        std::vector<std::uint8_t> coefficients;
        Bytes payload;
    };

    std::uint32_t generation_id_;
    std::size_t k_;
    std::size_t symbol_size_;
    std::vector<Row> rows_;  // sorted by pivot
};

}  // namespace kadupul::coding
