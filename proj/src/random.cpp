// SPDX-License-Identifier: Apache-2.0
//
// thzchan: space-time-frequency non-stationary THz MIMO channel simulator
// Copyright (C) 2026 The thzchan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "thzchan/random.hpp"

#include <cmath>

namespace thz
{

Rng make_stream(std::uint64_t seed, std::uint64_t drop, Stream stream, std::uint64_t sub, std::uint64_t extra)
{
    auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
    auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
    std::seed_seq seq{lo(seed), hi(seed), lo(drop), hi(drop), static_cast<std::uint32_t>(stream),
                      lo(sub),  hi(sub),  lo(extra), hi(extra)};
    return Rng(seq);
}

double uniform_open(Rng &rng)
{
    // 53 random bits centred in their bucket: never 0, never 1.
    const std::uint64_t bits = rng() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double uniform(Rng &rng, double lo, double hi) { return lo + (hi - lo) * uniform_open(rng); }

double normal(Rng &rng, double mean, double stddev)
{
    // Always consume a draw so stream positions do not depend on stddev.
    std::normal_distribution<double> dist(0.0, 1.0);
    return mean + stddev * dist(rng);
}

} // namespace thz
