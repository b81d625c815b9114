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

#ifndef THZCHAN_INIT_HPP
#define THZCHAN_INIT_HPP

#include "thzchan/geometry.hpp"
#include "thzchan/pathloss.hpp"
#include "thzchan/random.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace thz
{

/// Parameters of the initial drop, generated for the first Tx/Rx element
/// pair at t0 and f0.
///
/// Times are seconds, angles radians, levels dB. Defaults for the decay
/// coefficient, LOS offset, per-cluster deviation, XPR and intra-cluster
/// scales are engineering choices, not measured values.
struct InitConfig
{
    std::map<int, double> pmf_first_order{{4, 0.35}, {5, 0.65}};
    int second_order_min = 7;
    int second_order_max = 13;

    double mu_dtau_1st = 2.73e-9; // mean inter-arrival of single-bounce clusters
    double mu_dtau_2nd = 4.8e-9;  // mean inter-arrival of double-bounce clusters

    // Intra-cluster scales at f0, per bounce order.
    double mu_ray_1st = 0.4e-9;
    double mu_ray_2nd = 0.4e-9;
    double sigma_ray_1st = 0.05;
    double sigma_ray_2nd = 0.05;

    AnglePair aod_mean{};
    AnglePair aoa_mean{};
    double angle_std = 1.2;

    double n_tau = 0.5e9; // dB per second (0.5 dB/ns)
    double delta_a_std_db = 1.0;
    double delta_p_los_db = 3.0;

    double xpr_mean_db = 8.0;
    double xpr_std_db = 2.0;

    std::size_t rays_per_cluster = 100;
    bool use_mea = false; // quantile (equal-area) relative angles instead of random ones

    std::uint64_t seed = 0;

    void validate() const;
};

enum class ClusterOrder
{
    Single,
    Double
};

struct RayState
{
    double rel_delay = 0.0;
    AnglePair rel_aod{};
    AnglePair rel_aoa{};
    std::array<double, 4> phases{}; // VV, VH, HV, HH
    double xpr = 1.0;               // linear cross-polarisation power ratio

    // Persisted draws; frequency evolution re-maps these through new scales.
    double base_uniform = 0.5;
    std::array<double, 4> base_normals{}; // AoD az, AoD el, AoA az, AoA el
};

struct ClusterState
{
    ClusterOrder order = ClusterOrder::Single;
    double delay = 0.0; // s
    double power = 0.0; // linear
    AnglePair aod{};
    AnglePair aoa{};
    Vec3 virtual_vector{}; // mirror point -> Rx
    double phase = 0.0;

    double mu_ray_f0 = 0.0;
    double sigma_ray_f0 = 0.0;
    double mu_ray = 0.0; // scales at the carrier the state was evolved to
    double sigma_ray = 0.0;

    std::vector<RayState> rays;
};

// Fixed environment of a drop: Rx position relative to Tx, initial carrier and
// propagation loss model.
struct DropEnvironment
{
    Vec3 initial_offset{3.0, 0.0, 0.0};
    double f0 = 300e9;
    PathlossModel pathloss{};
};

struct ChannelRealization
{
    std::vector<ClusterState> clusters;
    int n_first = 0;
    int n_second = 0;

    double los_delay = 0.0;
    double los_power = 0.0; // linear, at D0 and f0
    double los_phase = 0.0;
    double shadow_db = 0.0;
    double ricean_k = 0.0; // LOS power / total cluster power

    InitConfig config{};
    DropEnvironment env{};
    std::uint64_t drop_index = 0;
};

struct ClusterAngleDraw
{
    AnglePair aod{};
    AnglePair aoa{};
    std::array<double, 4> unwrapped{}; // AoD az, AoD el, AoA az, AoA el before wrapping
};

std::pair<int, int> draw_cluster_counts(const InitConfig &cfg, Rng &rng);

// First-order delays first, then second-order delays; each sequence is a
// cumulative sum of NEXP increments starting from the LOS delay.
std::vector<double> draw_cluster_delays(int n_first, int n_second, double los_delay, const InitConfig &cfg, Rng &rng);

// P_i[dB] = P_LOS - dP_LOS - n_tau (tau_i - tau_LOS) + da_i, returned linear.
std::vector<double> draw_cluster_powers(const std::vector<double> &delays, double los_delay, double los_power_db,
                                        const InitConfig &cfg, Rng &rng);

std::vector<ClusterAngleDraw> draw_cluster_angles(std::size_t n, const InitConfig &cfg, Rng &rng);

std::vector<RayState> draw_ray_states(std::size_t n_rays, double mu_ray, double sigma_angle, const InitConfig &cfg,
                                      Rng &rng);

// Equal-area discretisation of N(0, sigma^2): sigma * Phi^-1((m - 0.5) / M).
std::vector<double> mea_discretize(std::size_t n_rays, double sigma);

// Full initial drop; cluster-level and per-cluster ray draws use separate
// streams derived from (cfg.seed, drop_index).
ChannelRealization generate_drop(const InitConfig &cfg, const DropEnvironment &env, std::uint64_t drop_index);

} // namespace thz

#endif
