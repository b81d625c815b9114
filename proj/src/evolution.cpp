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

#include "thzchan/evolution.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace thz
{

void EvolutionGrid::validate() const
{
    if (times.empty() || tx_elements.empty() || rx_elements.empty() || carriers.empty())
        throw std::invalid_argument("Evolution grid axes must be non-empty.");
    auto ascending = [](const auto &axis) {
        for (std::size_t i = 1; i < axis.size(); ++i)
            if (!(axis[i] > axis[i - 1]))
                return false;
        return true;
    };
    if (!ascending(times) || !ascending(tx_elements) || !ascending(rx_elements) || !ascending(carriers))
        throw std::invalid_argument("Evolution grid axes must be strictly ascending.");
    if (times.front() < 0.0)
        throw std::invalid_argument("Evolution grid times must be >= t0 = 0.");
    if (!(carriers.front() > 0.0))
        throw std::invalid_argument("Evolution grid carriers must be positive.");
}

ClusterState displace_cluster(const ClusterState &cluster, const Vec3 &displacement, const PropagationContext &ctx)
{
    if (displacement.is_zero())
        return cluster;

    ClusterState out = cluster;
    out.virtual_vector = cluster.virtual_vector + displacement;

    const double d_old = cluster.virtual_vector.norm();
    const double d_new = out.virtual_vector.norm();
    if (!(d_new > 0.0))
        throw GeometryError("Displacement collapses the virtual vector onto the mirror point.");

    out.delay = d_new / kSpeedOfLight;
    out.aoa = vector_to_angles(out.virtual_vector);
    out.aod.azimuth = wrap_azimuth(cluster.aod.azimuth + wrap_azimuth(out.aoa.azimuth - cluster.aoa.azimuth));
    out.aod.elevation = reflect_elevation(cluster.aod.elevation + (out.aoa.elevation - cluster.aoa.elevation));

    const double loss_change = path_loss_db(d_new, ctx.carrier_hz, ctx.pathloss) -
                               path_loss_db(d_old, ctx.carrier_hz, ctx.pathloss);
    out.power = cluster.power * loss_db_to_gain(loss_change);

    const double lambda = kSpeedOfLight / ctx.carrier_hz;
    out.phase = wrap_azimuth(cluster.phase + 2.0 * kPi * (d_new - d_old) / lambda);
    return out;
}

ClusterState evolve_time(const ClusterState &cluster, const Vec3 &v_rx, double dt, const PropagationContext &ctx)
{
    if (dt < 0.0)
        throw std::invalid_argument("Time step must be non-negative.");
    if (dt == 0.0)
        return cluster;
    return displace_cluster(cluster, dt * v_rx, ctx);
}

ClusterState evolve_space(const ClusterState &cluster, const Vec3 &tx_offset, const Vec3 &rx_offset,
                          const PropagationContext &ctx)
{
    return displace_cluster(cluster, rx_offset - tx_offset, ctx);
}

namespace
{

struct Scales
{
    double mu = 0.0;
    double sigma = 0.0;
};

Scales frequency_scales(const ClusterState &cluster, double f0, double fi, double rho_mu, double rho_sigma)
{
    if (!(f0 > 0.0) || !(fi > 0.0))
        throw std::invalid_argument("Frequencies must be positive.");
    const double ratio = fi / f0;
    return {cluster.mu_ray_f0 * std::pow(ratio, rho_mu), cluster.sigma_ray_f0 * std::pow(ratio, rho_sigma)};
}

void remap_rays(ClusterState &cluster)
{
    for (auto &ray : cluster.rays)
    {
        ray.rel_delay = nexp_from_uniform(ray.base_uniform, cluster.mu_ray);
        ray.rel_aod = {cluster.sigma_ray * ray.base_normals[0], cluster.sigma_ray * ray.base_normals[1]};
        ray.rel_aoa = {cluster.sigma_ray * ray.base_normals[2], cluster.sigma_ray * ray.base_normals[3]};
    }
}

} // namespace

ClusterState evolve_frequency(const ClusterState &cluster, double f0, double fi, double rho_mu, double rho_sigma)
{
    const Scales s = frequency_scales(cluster, f0, fi, rho_mu, rho_sigma);
    ClusterState out = cluster;
    out.mu_ray = s.mu;
    out.sigma_ray = s.sigma;
    remap_rays(out);
    return out;
}

ClusterState evolve_frequency_fresh(const ClusterState &cluster, double f0, double fi, double rho_mu, double rho_sigma,
                                    const InitConfig &cfg, Rng &rng)
{
    const Scales s = frequency_scales(cluster, f0, fi, rho_mu, rho_sigma);
    ClusterState out = cluster;
    out.mu_ray = s.mu;
    out.sigma_ray = s.sigma;
    const auto fresh = draw_ray_states(out.rays.size(), s.mu, s.sigma, cfg, rng);
    for (std::size_t m = 0; m < out.rays.size(); ++m)
    {
        // Only the intra-cluster dispersion is redrawn; polarisation is kept.
        out.rays[m].base_uniform = fresh[m].base_uniform;
        out.rays[m].base_normals = fresh[m].base_normals;
    }
    remap_rays(out);
    return out;
}

PropagationContext propagation_context(const ChannelRealization &drop) { return {drop.env.pathloss, drop.env.f0}; }

std::vector<ClusterState> evolve_point(const ChannelRealization &drop, const ArrayPair &arrays, std::size_t p,
                                       std::size_t q, double t, double fi, const EvolutionSettings &settings)
{
    if (t < 0.0)
        throw std::invalid_argument("Evolution time must be >= t0 = 0.");
    const PropagationContext ctx = propagation_context(drop);
    const Vec3 &tx_offset = arrays.tx.offset(p);
    const Vec3 &rx_offset = arrays.rx.offset(q);
    const Vec3 v_rel = arrays.rx.velocity - arrays.tx.velocity;

    std::vector<ClusterState> out;
    out.reserve(drop.clusters.size());
    for (std::size_t n = 0; n < drop.clusters.size(); ++n)
    {
        ClusterState c = evolve_space(drop.clusters[n], tx_offset, rx_offset, ctx);
        c = evolve_time(c, v_rel, t, ctx);
        if (settings.remap == FrequencyRemap::Fresh && fi != drop.env.f0)
        {
            Rng rng = make_stream(drop.config.seed, drop.drop_index, Stream::Fresh, n, std::bit_cast<std::uint64_t>(fi));
            c = evolve_frequency_fresh(c, drop.env.f0, fi, settings.rho_mu, settings.rho_sigma, drop.config, rng);
        }
        else
        {
            c = evolve_frequency(c, drop.env.f0, fi, settings.rho_mu, settings.rho_sigma);
        }
        out.push_back(std::move(c));
    }
    return out;
}

EvolvedGrid realize_grid(const ChannelRealization &drop, const EvolutionGrid &grid, const ArrayPair &arrays,
                         const EvolutionSettings &settings)
{
    grid.validate();
    EvolvedGrid out;
    out.n_tx = grid.tx_elements.size();
    out.n_rx = grid.rx_elements.size();
    out.n_t = grid.times.size();
    out.n_f = grid.carriers.size();
    out.cells.reserve(out.n_tx * out.n_rx * out.n_t * out.n_f);
    for (std::size_t p : grid.tx_elements)
        for (std::size_t q : grid.rx_elements)
            for (double t : grid.times)
                for (double fi : grid.carriers)
                    out.cells.push_back(evolve_point(drop, arrays, p, q, t, fi, settings));
    return out;
}

} // namespace thz
