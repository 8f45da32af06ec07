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

#include "kadupul/ledger.hpp"
#include "kadupul/rng.hpp"

#include <doctest.h>

using namespace kadupul;
using namespace kadupul::ledger;

namespace {

timelock::PuzzleChain chain3(std::vector<Amount> v = {100, 40, 60}) { return timelock::generate_chain(v.size(), 5, v, 17); }

}  // namespace

TEST_CASE("publication delay and fresh ids")
{
    Ledger led({0, 5});
    const auto c = chain3();
    const auto a = led.publish_chain(c.published(), 0, "S");
    const auto b = led.publish_chain(c.published(), 0, "S");
    CHECK(a != b);
    CHECK(led.entry(a).visible_at == 5);
    CHECK(led.entry(a).publisher == "S");
    CHECK(led.submit_claim(a, 0, c.keys[0], "F", 4).rejection == RejectReason::not_visible);
    CHECK(led.submit_claim(a, 0, c.keys[0], "F", 5).accepted());
}

TEST_CASE("malformed publications are rejected")
{
    Ledger led;
    CHECK_THROWS(led.publish_chain({}, 0));
    auto blocks = chain3().published();
    blocks[1].index = 7;
    CHECK_THROWS(led.publish_chain(blocks, 0));
    CHECK_THROWS(Ledger({-1, 0}));
}

TEST_CASE("claim conditions")
{
    Ledger led;
    const auto c = chain3();
    const auto id = led.publish_chain(c.published(), 0);
    CHECK(led.submit_claim(id, 1, c.keys[1], "F2", 1).rejection == RejectReason::out_of_order);
    CHECK(led.submit_claim(id, 0, c.keys[1], "F1", 1).rejection == RejectReason::bad_key);
    CHECK(led.submit_claim(id, 0, c.keys[0], "F1", 1).accepted());
    CHECK(led.submit_claim(id, 0, c.keys[0], "X", 2).rejection == RejectReason::already_claimed);
    CHECK(led.submit_claim(id + 10, 0, c.keys[0], "X", 2).rejection == RejectReason::unknown_chain);
    CHECK(led.submit_claim(id, 3, c.keys[0], "X", 2).rejection == RejectReason::unknown_block);
    CHECK(led.claim_log().size() == 6);
    CHECK(led.entry(id).next_unclaimed() == 1u);
}

TEST_CASE("keys are revealed instantly while credit waits")
{
    Ledger led({20, 0});
    const auto c = chain3();
    const auto id = led.publish_chain(c.published(), 0);
    CHECK(led.revealed_keys(id, 0).empty());
    REQUIRE(led.submit_claim(id, 0, c.keys[0], "F1", 10).accepted());
    CHECK(led.revealed_keys(id, 10).size() == 1);
    CHECK(led.revealed_keys(id, 9).empty());
    CHECK(led.confirmed_balance("F1", 29) == 0);
    CHECK(led.confirmed_balance("F1", 30) == 100);
    CHECK(led.confirmed_balance("nobody", 1000) == 0);
    CHECK_THROWS_AS(led.revealed_keys(id + 1, 0), std::out_of_range);
}

TEST_CASE("balances add up and reach the chain total")
{
    Ledger led;
    const auto c = chain3({10, 40, 60});
    const auto id = led.publish_chain(c.published(), 0);
    REQUIRE(led.submit_claim(id, 0, c.keys[0], "A", 1).accepted());
    REQUIRE(led.submit_claim(id, 1, c.keys[1], "B", 2).accepted());
    REQUIRE(led.submit_claim(id, 2, c.keys[2], "B", 3).accepted());
    CHECK(led.confirmed_balance("B", 3) == 100);
    const auto keys = led.revealed_keys(id, 3);
    REQUIRE(keys.size() == 3);
    std::uint32_t expect = 0;
    for (const auto& [idx, key] : keys) {
        CHECK(idx == expect++);
        CHECK(timelock::verify_key(key, c.blocks[idx].key_commitment));
    }
    CHECK(led.confirmed_value(3) == 110);
    Amount total = 0;
    for (const auto& [node, v] : led.confirmed_balances(3)) total += v;
    CHECK(total == 110);
    CHECK_FALSE(led.entry(id).next_unclaimed().has_value());
}

TEST_CASE("claimed indices always form a prefix")
{
    Ledger led;
    const auto c = timelock::generate_chain(6, 3, std::vector<Amount>(6, 1), 4);
    const auto id = led.publish_chain(c.published(), 0);
    DeterministicRng rng(8);
    for (int step = 0; step < 60; ++step) {
        const auto idx = static_cast<std::uint32_t>(rng.next_below(6));
        led.submit_claim(id, idx, c.keys[idx], "n" + std::to_string(step % 3), step);
        const auto& claims = led.entry(id).claims;
        bool gap = false;
        for (const auto& cl : claims) {
            if (!cl) gap = true;
            else CHECK_FALSE(gap);
        }
    }
}

TEST_CASE("replay yields identical state")
{
    const auto c = chain3();
    auto run = [&] {
        Ledger led({3, 1});
        const auto id = led.publish_chain(c.published(), 0, "S");
        led.submit_claim(id, 1, c.keys[1], "B", 1);
        led.submit_claim(id, 0, c.keys[0], "A", 2);
        led.submit_claim(id, 1, c.keys[1], "B", 3);
        return std::pair{led.confirmed_balances(100), led.claim_log().size()};
    };
    CHECK(run() == run());
}
