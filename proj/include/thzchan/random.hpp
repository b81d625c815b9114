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

#ifndef THZCHAN_RANDOM_HPP
#define THZCHAN_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace thz
{

using Rng = std::mt19937_64;

// Stream identifiers used to derive independent generators from one seed.
enum class Stream : std::uint32_t
{
    Clusters = 1, // counts, delays, powers, angles, LOS phase, shadowing
    Rays = 2,     // per-cluster intra-cluster draws; sub-index = cluster
    Fresh = 3,    // fresh-draw frequency remapping; sub-index = cluster, extra = carrier bits
};

// Deterministic generator for (seed, drop, stream, sub, extra). Changing the
// number of rays never perturbs the cluster-level stream.
Rng make_stream(std::uint64_t seed, std::uint64_t drop, Stream stream, std::uint64_t sub = 0, std::uint64_t extra = 0);

// Uniform on the open interval (0, 1); safe to feed into log().
double uniform_open(Rng &rng);

double uniform(Rng &rng, double lo, double hi);
double normal(Rng &rng, double mean, double stddev);

// Negative exponential with mean `mean` via inverse CDF.
inline double nexp_from_uniform(double u, double mean) { return -(mean * std::log(u)); }

} // namespace thz

#endif
