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
#include "kadupul/rng.hpp"
#include "kadupul/sha256.hpp"
#include "kadupul/sim_time.hpp"

#include <doctest.h>

#include <set>

using namespace kadupul;

// Reference digests computed with Python's hashlib.
namespace oracle {
constexpr const char* sha_empty = "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855";
constexpr const char* sha_abc = "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad";
}  // namespace oracle

TEST_CASE("hex round trip")
{
    const auto b = Block32::from_hex(oracle::sha_abc);
    CHECK(b.hex() == oracle::sha_abc);
    CHECK(b.short_hex() == "ba7816bf8f01");
    CHECK(to_hex(from_hex("00ff10")) == "00ff10");
    CHECK_THROWS(Block32::from_hex("abc"));
    CHECK_THROWS(from_hex("zz"));
}

TEST_CASE("xor algebra")
{
    DeterministicRng rng(3);
    const auto a = rng.next_block();
    const auto b = rng.next_block();
    CHECK((a ^ b ^ b) == a);
    CHECK((a ^ Block32::zero()) == a);
    CHECK((a ^ a).is_zero());
}

TEST_CASE("sha256 known answers")
{
    CHECK(sha256(std::string_view{}).hex() == oracle::sha_empty);
    CHECK(sha256(std::string_view{"abc"}).hex() == oracle::sha_abc);
}

TEST_CASE("streaming hash matches one-shot for any split")
{
    DeterministicRng rng(9);
    const auto msg = rng.next_bytes(5000);
    const auto expected = sha256(ByteSpan(msg));
    for (std::size_t step : {1u, 7u, 64u, 1000u}) {
        Sha256Stream s;
        for (std::size_t off = 0; off < msg.size(); off += step)
            s.update(ByteSpan(msg).subspan(off, std::min(step, msg.size() - off)));
        s.update(ByteSpan{});
        CHECK(s.bytes_absorbed() == msg.size());
        CHECK(s.finalize() == expected);
    }
}

TEST_CASE("stream rejects update after finalize")
{
    Sha256Stream s;
    s.finalize();
    CHECK(s.finalized());
    const Bytes one{1};
    CHECK_THROWS_AS(s.update(one), std::logic_error);
}

TEST_CASE("stream copies are independent")
{
    Sha256Stream a;
    a.update(Bytes{'a', 'b'});
    Sha256Stream b = a;
    a.update(Bytes{'c'});
    b.update(Bytes{'c'});
    CHECK(a.finalize() == b.finalize());
}

TEST_CASE("rng is deterministic per seed and stream")
{
    DeterministicRng a(42, 1), b(42, 1), c(42, 2), d(43, 1);
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
    CHECK(x != d.next_u64());
}

TEST_CASE("rng helpers stay in range")
{
    DeterministicRng rng(1);
    for (int i = 0; i < 1000; ++i) {
        const double u = rng.next_unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(rng.next_below(7) < 7);
    }
    std::set<Block32> blocks;
    for (int i = 0; i < 64; ++i) blocks.insert(rng.next_block());
    CHECK(blocks.size() == 64);
}

TEST_CASE("time formatting is exact")
{
    CHECK(format_time(1'500'000'001) == "1.500000001");
    CHECK(format_time(0) == "0.000000000");
    CHECK(format_time(-5) == "-0.000000005");
    CHECK(seconds_to_time(0.0003) == 300'000);
    CHECK_THROWS(seconds_to_time(std::numeric_limits<double>::infinity()));
}
