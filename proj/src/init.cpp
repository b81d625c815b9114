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

#include "thzchan/init.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace thz
{

namespace
{

void require(bool ok, const std::string &what)
{
    if (!ok)
        throw std::invalid_argument(what);
}

} // namespace

void InitConfig::validate() const
{
    require(!pmf_first_order.empty(), "pmf_first_order must not be empty");
    double total = 0.0;
    for (const auto &[count, prob] : pmf_first_order)
    {
        require(count >= 0, "pmf_first_order counts must be non-negative");
        require(prob >= 0.0 && prob <= 1.0, "pmf_first_order probabilities must lie in [0, 1]");
        total += prob;
    }
    require(std::abs(total - 1.0) <= 1e-12, "pmf_first_order must sum to 1");
    require(second_order_min >= 0 && second_order_max >= second_order_min,
            "second_order range must satisfy 0 <= min <= max");
    require(mu_dtau_1st > 0.0, "mu_dtau_1st must be > 0");
    require(mu_dtau_2nd > 0.0, "mu_dtau_2nd must be > 0");
    require(mu_ray_1st > 0.0, "mu_ray_1st must be > 0");
    require(mu_ray_2nd > 0.0, "mu_ray_2nd must be > 0");
    require(sigma_ray_1st >= 0.0, "sigma_ray_1st must be >= 0");
    require(sigma_ray_2nd >= 0.0, "sigma_ray_2nd must be >= 0");
    require(angle_std >= 0.0, "angle_std must be >= 0");
    require(n_tau >= 0.0, "n_tau must be >= 0");
    require(delta_a_std_db >= 0.0, "delta_a_std must be >= 0");
    require(xpr_std_db >= 0.0, "xpr_std must be >= 0");
    require(std::isfinite(xpr_mean_db), "xpr_mean must be finite");
    require(std::isfinite(delta_p_los_db), "delta_p_los must be finite");
    require(rays_per_cluster >= 1, "rays_per_cluster must be >= 1");
}

std::pair<int, int> draw_cluster_counts(const InitConfig &cfg, Rng &rng)
{
    double total = 0.0;
    for (const auto &[count, prob] : cfg.pmf_first_order)
        total += prob;
    if (cfg.pmf_first_order.empty() || std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("Malformed first-order cluster count PMF.");

    const double u = uniform_open(rng);
    int n_first = cfg.pmf_first_order.rbegin()->first;
    double cumulative = 0.0;
    for (const auto &[count, prob] : cfg.pmf_first_order)
    {
        cumulative += prob;
        if (u < cumulative)
        {
            n_first = count;
            break;
        }
    }

    const int span = cfg.second_order_max - cfg.second_order_min + 1;
    int offset = static_cast<int>(uniform_open(rng) * span);
    offset = std::min(offset, span - 1);
    return {n_first, cfg.second_order_min + offset};
}

std::vector<double> draw_cluster_delays(int n_first, int n_second, double los_delay, const InitConfig &cfg, Rng &rng)
{
    if (!(los_delay > 0.0))
        throw std::invalid_argument("LOS delay must be positive.");
    std::vector<double> delays;
    delays.reserve(static_cast<std::size_t>(n_first + n_second));

    double tau = los_delay;
    for (int i = 0; i < n_first; ++i)
    {
        tau += nexp_from_uniform(uniform_open(rng), cfg.mu_dtau_1st);
        delays.push_back(tau);
    }
    tau = los_delay;
    for (int i = 0; i < n_second; ++i)
    {
        tau += nexp_from_uniform(uniform_open(rng), cfg.mu_dtau_2nd);
        delays.push_back(tau);
    }
    return delays;
}

std::vector<double> draw_cluster_powers(const std::vector<double> &delays, double los_delay, double los_power_db,
                                        const InitConfig &cfg, Rng &rng)
{
    std::vector<double> powers;
    powers.reserve(delays.size());
    for (double tau : delays)
    {
        if (tau < los_delay)
            throw std::invalid_argument("Cluster delay precedes the LOS delay.");
        const double deviation = normal(rng, 0.0, cfg.delta_a_std_db);
        const double p_db = los_power_db - cfg.delta_p_los_db - cfg.n_tau * (tau - los_delay) + deviation;
        powers.push_back(std::pow(10.0, p_db / 10.0));
    }
    return powers;
}

std::vector<ClusterAngleDraw> draw_cluster_angles(std::size_t n, const InitConfig &cfg, Rng &rng)
{
    std::vector<ClusterAngleDraw> out(n);
    for (auto &draw : out)
    {
        draw.unwrapped[0] = normal(rng, cfg.aod_mean.azimuth, cfg.angle_std);
        draw.unwrapped[1] = normal(rng, cfg.aod_mean.elevation, cfg.angle_std);
        draw.unwrapped[2] = normal(rng, cfg.aoa_mean.azimuth, cfg.angle_std);
        draw.unwrapped[3] = normal(rng, cfg.aoa_mean.elevation, cfg.angle_std);
        draw.aod = wrap_angles({draw.unwrapped[0], draw.unwrapped[1]});
        draw.aoa = wrap_angles({draw.unwrapped[2], draw.unwrapped[3]});
    }
    return out;
}

std::vector<double> mea_discretize(std::size_t n_rays, double sigma)
{
    if (n_rays == 0)
        throw std::invalid_argument("MEA needs at least one ray.");
    const boost::math::normal_distribution<double> standard(0.0, 1.0);
    std::vector<double> angles(n_rays);
    const double m_total = static_cast<double>(n_rays);
    for (std::size_t m = 0; m < n_rays; ++m)
    {
        const double p = (static_cast<double>(m) + 0.5) / m_total;
        angles[m] = sigma * boost::math::quantile(standard, p);
    }
    // Enforce exact antisymmetry; quantile() is only accurate to a few ulp.
    for (std::size_t m = 0; m < n_rays / 2; ++m)
    {
        const double mag = 0.5 * (angles[n_rays - 1 - m] - angles[m]);
        angles[m] = -mag;
        angles[n_rays - 1 - m] = mag;
    }
    if (n_rays % 2 == 1)
        angles[n_rays / 2] = 0.0;
    return angles;
}

std::vector<RayState> draw_ray_states(std::size_t n_rays, double mu_ray, double sigma_angle, const InitConfig &cfg,
                                      Rng &rng)
{
    if (n_rays == 0)
        throw std::invalid_argument("A cluster needs at least one ray.");
    std::vector<RayState> rays(n_rays);

    // MEA: one quantile set per angle family, randomly paired across families.
    std::array<std::vector<double>, 4> quantiles;
    if (cfg.use_mea)
    {
        const auto base = mea_discretize(n_rays, 1.0);
        for (auto &q : quantiles)
        {
            q = base;
            std::shuffle(q.begin(), q.end(), rng);
        }
    }

    for (std::size_t m = 0; m < n_rays; ++m)
    {
        RayState &ray = rays[m];
        ray.base_uniform = uniform_open(rng);
        for (std::size_t k = 0; k < 4; ++k)
            ray.base_normals[k] = cfg.use_mea ? quantiles[k][m] : normal(rng, 0.0, 1.0);
        for (auto &phase : ray.phases)
            phase = uniform(rng, -kPi, kPi);
        ray.xpr = std::pow(10.0, normal(rng, cfg.xpr_mean_db, cfg.xpr_std_db) / 10.0);

        ray.rel_delay = nexp_from_uniform(ray.base_uniform, mu_ray);
        ray.rel_aod = {sigma_angle * ray.base_normals[0], sigma_angle * ray.base_normals[1]};
        ray.rel_aoa = {sigma_angle * ray.base_normals[2], sigma_angle * ray.base_normals[3]};
    }
    return rays;
}

ChannelRealization generate_drop(const InitConfig &cfg, const DropEnvironment &env, std::uint64_t drop_index)
{
    cfg.validate();
    env.pathloss.validate();
    if (!(env.f0 > 0.0))
        throw std::invalid_argument("f0 must be positive.");

    ChannelRealization drop;
    drop.config = cfg;
    drop.env = env;
    drop.drop_index = drop_index;

    Rng rng = make_stream(cfg.seed, drop_index, Stream::Clusters);

    const auto [n_first, n_second] = draw_cluster_counts(cfg, rng);
    drop.n_first = n_first;
    drop.n_second = n_second;

    const double d0 = env.initial_offset.norm();
    if (!(d0 > 0.0))
        throw GeometryError("Initial Tx-Rx distance must be positive.");
    drop.shadow_db = normal(rng, 0.0, env.pathloss.shadowing_sigma_db);
    drop.los_phase = uniform(rng, 0.0, 2.0 * kPi);
    drop.los_delay = d0 / kSpeedOfLight;
    const double los_power_db = -path_loss_db(d0, env.f0, env.pathloss, drop.shadow_db);
    drop.los_power = std::pow(10.0, los_power_db / 10.0);

    const auto delays = draw_cluster_delays(n_first, n_second, drop.los_delay, cfg, rng);
    const auto powers = draw_cluster_powers(delays, drop.los_delay, los_power_db, cfg, rng);
    const auto angles = draw_cluster_angles(delays.size(), cfg, rng);

    drop.clusters.resize(delays.size());
    double nlos_power = 0.0;
    for (std::size_t n = 0; n < delays.size(); ++n)
    {
        ClusterState &c = drop.clusters[n];
        c.order = static_cast<int>(n) < n_first ? ClusterOrder::Single : ClusterOrder::Double;
        c.delay = delays[n];
        c.power = powers[n];
        c.aod = angles[n].aod;
        c.aoa = angles[n].aoa;
        c.virtual_vector = initial_virtual_vector(c.delay, c.aoa);
        c.phase = uniform(rng, -kPi, kPi);

        const bool single = c.order == ClusterOrder::Single;
        c.mu_ray_f0 = c.mu_ray = single ? cfg.mu_ray_1st : cfg.mu_ray_2nd;
        c.sigma_ray_f0 = c.sigma_ray = single ? cfg.sigma_ray_1st : cfg.sigma_ray_2nd;

        Rng ray_rng = make_stream(cfg.seed, drop_index, Stream::Rays, n);
        c.rays = draw_ray_states(cfg.rays_per_cluster, c.mu_ray_f0, c.sigma_ray_f0, cfg, ray_rng);
        nlos_power += c.power;
    }
    drop.ricean_k = nlos_power > 0.0 ? drop.los_power / nlos_power : std::numeric_limits<double>::infinity();
    return drop;
}

} // namespace thz
