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

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kadupul {

using Bytes = std::vector<std::uint8_t>;
using ByteSpan = std::span<const std::uint8_t>;

// Fixed 32-byte value shared by IVs, keys, masks, secrets, nonces and digests.
struct Block32 {
    std::array<std::uint8_t, 32> bytes{};

    static Block32 zero() { return {}; }
    static Block32 from_span(ByteSpan data);
    static Block32 from_hex(std::string_view hex);

    std::string hex() const;
    // First `n` hex characters, for compact trace output.
    std::string short_hex(std::size_t n = 12) const;
    ByteSpan span() const { return {bytes.data(), bytes.size()}; }
    bool is_zero() const;

    Block32& operator^=(const Block32& other);
    friend Block32 operator^(Block32 lhs, const Block32& rhs) { return lhs ^= rhs; }
    friend bool operator==(const Block32&, const Block32&) = default;
    friend auto operator<=>(const Block32&, const Block32&) = default;
};

std::string to_hex(ByteSpan data);
Bytes from_hex(std::string_view hex);

}  // namespace kadupul
