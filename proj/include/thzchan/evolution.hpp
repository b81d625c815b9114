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

#ifndef THZCHAN_EVOLUTION_HPP
#define THZCHAN_EVOLUTION_HPP

#include "thzchan/geometry.hpp"
#include "thzchan/init.hpp"
#include "thzchan/pathloss.hpp"

#include <cstddef>
#include <vector>

namespace thz
{

// Carrier and loss model used when a cluster is displaced: power follows the
// path-loss change and the phase advances by 2 pi dD / lambda_c.
struct PropagationContext
{
    PathlossModel pathloss{};
    double carrier_hz = 300e9;
};

enum class FrequencyRemap
{
    Persisted, // inverse-CDF re-mapping of the stored base draws
    Fresh      // independent redraw per carrier
};

struct EvolutionSettings
{
    double rho_mu = 3.0;
    double rho_sigma = 3.0;
    FrequencyRemap remap = FrequencyRemap::Persisted;
};

struct EvolutionGrid
{
    std::vector<double> times;              // s, t0 = 0
    std::vector<std::size_t> tx_elements;   // 0-based
    std::vector<std::size_t> rx_elements;   // 0-based
    std::vector<double> carriers;           // Hz

    void validate() const;
};

struct ArrayPair
{
    ArrayGeometry tx{};
    ArrayGeometry rx{};
};

// Moves the Rx end of the virtual vector by `displacement` and re-derives
// distance, delay, arrival angles, departure angles (shifted by the same
// increment), power and phase. Intra-cluster parameters are left untouched.
ClusterState displace_cluster(const ClusterState &cluster, const Vec3 &displacement, const PropagationContext &ctx);

ClusterState evolve_time(const ClusterState &cluster, const Vec3 &v_rx, double dt, const PropagationContext &ctx);

// Element offsets take the place of the motion. The Tx offset is applied in
// the virtual frame as-is (the reflection plane is not part of the model).
ClusterState evolve_space(const ClusterState &cluster, const Vec3 &tx_offset, const Vec3 &rx_offset,
                          const PropagationContext &ctx);

// mu(fi) = mu(f0) (fi/f0)^rho_mu, sigma(fi) = sigma(f0) (fi/f0)^rho_sigma; every
// ray's relative delay and angles are recomputed from its persisted draws.
ClusterState evolve_frequency(const ClusterState &cluster, double f0, double fi, double rho_mu, double rho_sigma);

// Same scales, but base draws are replaced by fresh ones from `rng`.
ClusterState evolve_frequency_fresh(const ClusterState &cluster, double f0, double fi, double rho_mu, double rho_sigma,
                                    const InitConfig &cfg, Rng &rng);

PropagationContext propagation_context(const ChannelRealization &drop);

// Cluster states at (p, q, t, fi): space, then time, then frequency, each step
// starting from the initial drop.
std::vector<ClusterState> evolve_point(const ChannelRealization &drop, const ArrayPair &arrays, std::size_t p,
                                       std::size_t q, double t, double fi, const EvolutionSettings &settings);

// Evolved cluster sets for every grid cell, index ((p * Q + q) * T + t) * F + f.
struct EvolvedGrid
{
    std::size_t n_tx = 0, n_rx = 0, n_t = 0, n_f = 0;
    std::vector<std::vector<ClusterState>> cells;

    const std::vector<ClusterState> &at(std::size_t p, std::size_t q, std::size_t t, std::size_t f) const
    {
        return cells[((p * n_rx + q) * n_t + t) * n_f + f];
    }
};

EvolvedGrid realize_grid(const ChannelRealization &drop, const EvolutionGrid &grid, const ArrayPair &arrays,
                         const EvolutionSettings &settings);

} // namespace thz

#endif
