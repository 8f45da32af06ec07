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

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace kadupul {

// Simulated time and durations, in nanoseconds.
using SimTime = std::int64_t;

inline constexpr SimTime kNanosPerSecond = 1'000'000'000;

inline SimTime seconds_to_time(double seconds)
{
    if (!std::isfinite(seconds)) throw std::invalid_argument("time value is not finite");
    return static_cast<SimTime>(std::llround(seconds * 1e9));
}

inline double time_to_seconds(SimTime t) { return static_cast<double>(t) / 1e9; }

// Exact decimal rendering, e.g. 1500000001 -> "1.500000001".
inline std::string format_time(SimTime t)
{
    const bool negative = t < 0;
    const auto mag = negative ? -static_cast<unsigned long long>(t) : static_cast<unsigned long long>(t);
    auto frac = std::to_string(mag % kNanosPerSecond);
    frac.insert(0, 9 - frac.size(), '0');
    return (negative ? "-" : "") + std::to_string(mag / kNanosPerSecond) + "." + frac;
}

}  // namespace kadupul
