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

#include <memory>

namespace kadupul {

Block32 sha256(ByteSpan data);
inline Block32 sha256(const Block32& block) { return sha256(block.span()); }
Block32 sha256(std::string_view text);

// Streaming SHA-256. Memory use is constant in the number of bytes absorbed.
class Sha256Stream {
public:
    Sha256Stream();
    ~Sha256Stream();
    Sha256Stream(const Sha256Stream& other);
    Sha256Stream& operator=(const Sha256Stream& other);
    Sha256Stream(Sha256Stream&&) noexcept;
    Sha256Stream& operator=(Sha256Stream&&) noexcept;

    // Throws std::logic_error once finalize() has been called.
    void update(ByteSpan chunk);
    Block32 finalize();
    bool finalized() const { return finalized_; }
    std::uint64_t bytes_absorbed() const { return absorbed_; }

private:
    struct Ctx;
    std::unique_ptr<Ctx> ctx_;
    bool finalized_ = false;
    std::uint64_t absorbed_ = 0;
};

}  // namespace kadupul
