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

#include "kadupul/rng.hpp"

#include <stdexcept>

namespace kadupul {

namespace {

// splitmix64 finaliser, used to decorrelate (seed, stream) pairs.
std::uint64_t mix(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

DeterministicRng::DeterministicRng(std::uint64_t seed, std::uint64_t stream)
    : engine_(mix(seed ^ mix(stream + 0x5bd1e995ULL)))
{
}

std::uint8_t DeterministicRng::next_byte()
{
    if (buffered_bytes_ == 0) {
        buffered_ = engine_();
        buffered_bytes_ = 8;
    }
    auto b = static_cast<std::uint8_t>(buffered_ & 0xff);
    buffered_ >>= 8;
    --buffered_bytes_;
    return b;
}

Block32 DeterministicRng::next_block()
{
    Block32 out;
    for (auto& b : out.bytes) b = next_byte();
    return out;
}

Bytes DeterministicRng::next_bytes(std::size_t n)
{
    Bytes out(n);
    for (auto& b : out) b = next_byte();
    return out;
}

double DeterministicRng::next_unit()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t DeterministicRng::next_below(std::uint64_t bound)
{
    if (bound == 0) throw std::invalid_argument("next_below: bound must be positive");
    // Rejection sampling to avoid modulo bias.
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % bound;
}

}  // namespace kadupul
