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

#include <cstdint>
#include <random>

namespace kadupul {

// Seeded deterministic generator. Uses only raw engine output so streams are
// identical across standard library implementations. Not a CSPRNG.
class DeterministicRng {
public:
    explicit DeterministicRng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64() { return engine_(); }
    std::uint8_t next_byte();
    Block32 next_block();
    Bytes next_bytes(std::size_t n);
    // Uniform in [0, 1).
    double next_unit();
    // Uniform in [0, bound); bound > 0.
    std::uint64_t next_below(std::uint64_t bound);

private:
    std::mt19937_64 engine_;
    std::uint64_t buffered_ = 0;
    int buffered_bytes_ = 0;
};

}  // namespace kadupul
