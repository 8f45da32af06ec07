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

#include "kadupul/bytes.hpp"

#include <algorithm>
#include <stdexcept>

namespace kadupul {

namespace {

int nibble(char c)
{
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

std::string to_hex(ByteSpan data)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (auto b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

Bytes from_hex(std::string_view hex)
{
    if (hex.size() % 2 != 0) throw std::invalid_argument("hex string has odd length");
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int hi = nibble(hex[2 * i]);
        int lo = nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw std::invalid_argument("invalid hex digit");
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return out;
}

Block32 Block32::from_span(ByteSpan data)
{
    if (data.size() != 32) throw std::invalid_argument("expected exactly 32 bytes, got " + std::to_string(data.size()));
    Block32 b;
    std::copy(data.begin(), data.end(), b.bytes.begin());
    return b;
}

Block32 Block32::from_hex(std::string_view hex)
{
    if (hex.size() != 64) throw std::invalid_argument("expected 64 hex characters");
    auto raw = kadupul::from_hex(hex);
    return from_span(raw);
}

std::string Block32::hex() const { return to_hex(span()); }

std::string Block32::short_hex(std::size_t n) const { return hex().substr(0, n); }

bool Block32::is_zero() const
{
    return std::all_of(bytes.begin(), bytes.end(), [](std::uint8_t b) { return b == 0; });
}

Block32& Block32::operator^=(const Block32& other)
{
    for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] ^= other.bytes[i];
    return *this;
}

}  // namespace kadupul
