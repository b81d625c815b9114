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

#include "thzchan/ctf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace thz
{

AntennaPattern AntennaPattern::omni(cdouble v_gain, cdouble h_gain)
{
    AntennaPattern p;
    p.kind_ = Kind::Omni;
    p.omni_ = {v_gain, h_gain};
    return p;
}

AntennaPattern AntennaPattern::table(std::vector<double> elevations, std::vector<double> azimuths,
                                     std::vector<double> frequencies, std::vector<cdouble> v, std::vector<cdouble> h)
{
    if (elevations.empty() || azimuths.empty() || frequencies.empty())
        throw std::invalid_argument("Pattern table axes must be non-empty.");
    const std::size_t n = elevations.size() * azimuths.size() * frequencies.size();
    if (v.size() != n || h.size() != n)
        throw std::invalid_argument("Pattern table size does not match its axes.");
    auto ascending = [](const std::vector<double> &a) { return std::is_sorted(a.begin(), a.end()); };
    if (!ascending(elevations) || !ascending(azimuths) || !ascending(frequencies))
        throw std::invalid_argument("Pattern table axes must be ascending.");

    AntennaPattern p;
    p.kind_ = Kind::Table;
    p.el_ = std::move(elevations);
    p.az_ = std::move(azimuths);
    p.freq_ = std::move(frequencies);
    p.v_ = std::move(v);
    p.h_ = std::move(h);
    return p;
}

namespace
{

// Bracketing index and weight for linear interpolation, clamped at the ends.
std::pair<std::size_t, double> bracket(const std::vector<double> &axis, double x)
{
    if (axis.size() == 1 || x <= axis.front())
        return {0, 0.0};
    if (x >= axis.back())
        return {axis.size() - 2, 1.0};
    const auto hi = static_cast<std::size_t>(std::upper_bound(axis.begin(), axis.end(), x) - axis.begin());
    const std::size_t lo = hi - 1;
    return {lo, (x - axis[lo]) / (axis[hi] - axis[lo])};
}

} // namespace

PolarizedGain AntennaPattern::table_slice(std::size_t f_index, const AnglePair &lcs) const
{
    const std::size_t n_el = el_.size(), n_az = az_.size();
    const auto [ie, we] = bracket(el_, lcs.elevation);
    const auto [ia, wa] = bracket(az_, lcs.azimuth);
    const std::size_t ie1 = std::min(ie + 1, n_el - 1), ia1 = std::min(ia + 1, n_az - 1);
    const std::size_t base = f_index * n_el * n_az;
    auto lerp2 = [&](const std::vector<cdouble> &g) {
        const cdouble g00 = g[base + ie * n_az + ia], g01 = g[base + ie * n_az + ia1];
        const cdouble g10 = g[base + ie1 * n_az + ia], g11 = g[base + ie1 * n_az + ia1];
        return (1.0 - we) * ((1.0 - wa) * g00 + wa * g01) + we * ((1.0 - wa) * g10 + wa * g11);
    };
    return {lerp2(v_), lerp2(h_)};
}

PolarizedGain AntennaPattern::gain(const AnglePair &lcs, double frequency_hz) const
{
    if (kind_ == Kind::Omni)
        return omni_;
    const auto [i_f, w_f] = bracket(freq_, frequency_hz);
    const PolarizedGain lo = table_slice(i_f, lcs);
    if (freq_.size() == 1 || w_f == 0.0)
        return lo;
    const PolarizedGain hi = table_slice(i_f + 1, lcs);
    return {(1.0 - w_f) * lo.v + w_f * hi.v, (1.0 - w_f) * lo.h + w_f * hi.h};
}

AnglePair compose_angle(const AnglePair &cluster_angle, const AnglePair &rel_angle)
{
    return wrap_angles({cluster_angle.azimuth + rel_angle.azimuth, cluster_angle.elevation + rel_angle.elevation});
}

cdouble ctf_from_cir(const Cir &cir, double f)
{
    cdouble sum{};
    for (const Tap &tap : cir.taps)
        sum += tap.amplitude * std::polar(1.0, -2.0 * kPi * f * tap.delay);
    return sum;
}

Tap los_tap(const ChannelRealization &drop, const Link &link, std::size_t p, std::size_t q, double t, double fi)
{
    const Vec3 d = los_vector(link.arrays.tx, link.arrays.rx, p, q, drop.env.initial_offset, t);
    const double distance = d.norm();
    // Departure and arrival share the direction of the LOS vector.
    const AnglePair dir = vector_to_angles(d);
    const PolarizedGain ft = link.tx_pattern.gain(gcs_to_lcs(dir, link.arrays.tx.orientation), fi);
    const PolarizedGain fr = link.rx_pattern.gain(gcs_to_lcs(dir, link.arrays.rx.orientation), fi);

    const cdouble e = std::polar(1.0, drop.los_phase);
    const cdouble pol = ft.v * e * fr.v - ft.h * e * fr.h;
    const double power = loss_db_to_gain(path_loss_db(distance, fi, drop.env.pathloss, drop.shadow_db));

    Tap tap;
    tap.delay = distance / kSpeedOfLight;
    tap.amplitude = pol * std::sqrt(power);
    return tap;
}

cdouble h_los(const ChannelRealization &drop, const Link &link, std::size_t p, std::size_t q, double t, double fi,
              double f)
{
    const Tap tap = los_tap(drop, link, p, q, t, fi);
    return tap.amplitude * std::polar(1.0, -2.0 * kPi * f * tap.delay);
}

double cluster_power_at(const ClusterState &cluster, double f0, double fi, const PathlossModel &pathloss)
{
    if (fi == f0)
        return cluster.power;
    const double d = cluster.virtual_vector.norm();
    return cluster.power * loss_db_to_gain(path_loss_db(d, fi, pathloss) - path_loss_db(d, f0, pathloss));
}

cdouble nlos_ray_amplitude(const ClusterState &cluster, const RayState &ray, std::size_t rays_in_cluster,
                           double cluster_power, const Link &link, double fi)
{
    // Omni patterns ignore direction, so the angle bookkeeping is skipped.
    const bool omni = link.tx_pattern.kind() == AntennaPattern::Kind::Omni &&
                      link.rx_pattern.kind() == AntennaPattern::Kind::Omni;
    PolarizedGain ft, fr;
    if (omni)
    {
        ft = link.tx_pattern.gain({}, fi);
        fr = link.rx_pattern.gain({}, fi);
    }
    else
    {
        const AnglePair aod = compose_angle(cluster.aod, ray.rel_aod);
        const AnglePair aoa = compose_angle(cluster.aoa, ray.rel_aoa);
        ft = link.tx_pattern.gain(gcs_to_lcs(aod, link.arrays.tx.orientation), fi);
        fr = link.rx_pattern.gain(gcs_to_lcs(aoa, link.arrays.rx.orientation), fi);
    }

    const double inv_xpr = std::sqrt(1.0 / ray.xpr);
    const cdouble m_vv = inv_xpr * std::polar(1.0, ray.phases[0]);
    const cdouble m_vh = std::polar(1.0, ray.phases[1]);
    const cdouble m_hv = std::polar(1.0, ray.phases[2]);
    const cdouble m_hh = inv_xpr * std::polar(1.0, ray.phases[3]);

    const cdouble pol = ft.v * (m_vv * fr.v + m_vh * fr.h) + ft.h * (m_hv * fr.v + m_hh * fr.h);
    return pol * std::sqrt(cluster_power / static_cast<double>(rays_in_cluster));
}

cdouble h_nlos_ray(const ClusterState &cluster, const RayState &ray, std::size_t rays_in_cluster, double cluster_power,
                   const Link &link, double fi, double f)
{
    return nlos_ray_amplitude(cluster, ray, rays_in_cluster, cluster_power, link, fi) *
           std::polar(1.0, -2.0 * kPi * f * (cluster.delay + ray.rel_delay));
}

Cir channel_ir(const ChannelRealization &drop, const std::vector<ClusterState> &clusters, const Link &link,
               std::size_t p, std::size_t q, double t, double fi)
{
    Cir cir;
    std::size_t n_taps = 1;
    for (const auto &c : clusters)
        n_taps += c.rays.size();
    cir.taps.reserve(n_taps);
    cir.taps.push_back(los_tap(drop, link, p, q, t, fi));

    for (std::size_t n = 0; n < clusters.size(); ++n)
    {
        const ClusterState &c = clusters[n];
        const double power = cluster_power_at(c, drop.env.f0, fi, drop.env.pathloss);
        for (std::size_t m = 0; m < c.rays.size(); ++m)
        {
            Tap tap;
            tap.delay = c.delay + c.rays[m].rel_delay;
            tap.amplitude = nlos_ray_amplitude(c, c.rays[m], c.rays.size(), power, link, fi);
            tap.cluster = static_cast<int>(n);
            tap.ray = static_cast<int>(m);
            cir.taps.push_back(tap);
        }
    }
    return cir;
}

Cir channel_ir(const ChannelRealization &drop, const Link &link, std::size_t p, std::size_t q, double t, double fi,
               const EvolutionSettings &settings)
{
    return channel_ir(drop, evolve_point(drop, link.arrays, p, q, t, fi, settings), link, p, q, t, fi);
}

cdouble ctf_entry(const ChannelRealization &drop, const Link &link, std::size_t p, std::size_t q, double t, double fi,
                  double f, const EvolutionSettings &settings)
{
    return ctf_from_cir(channel_ir(drop, link, p, q, t, fi, settings), f);
}

void CtfTensor::validate() const
{
    if (tx_elements.empty() || rx_elements.empty() || times.empty() || carriers.empty() || offsets.empty())
        throw std::invalid_argument("CTF tensor axes must be non-empty.");
    if (values.size() != size())
        throw std::invalid_argument("CTF tensor payload does not match its dimensions.");
}

std::size_t ctf_tensor_bytes(std::size_t n_tx, std::size_t n_rx, std::size_t n_t, std::size_t n_fi, std::size_t n_f)
{
    return n_tx * n_rx * n_t * n_fi * n_f * sizeof(cdouble);
}

CtfTensor ctf_tensor(const ChannelRealization &drop, const EvolutionGrid &grid, const Link &link,
                     const EvolutionSettings &settings, const std::vector<double> &offsets)
{
    grid.validate();
    if (offsets.empty())
        throw std::invalid_argument("Frequency sample list must be non-empty.");
    if (grid.tx_elements.back() >= link.arrays.tx.size() || grid.rx_elements.back() >= link.arrays.rx.size())
        throw std::invalid_argument("Grid element indices exceed the array dimensions.");

    CtfTensor out;
    out.tx_elements.assign(grid.tx_elements.begin(), grid.tx_elements.end());
    out.rx_elements.assign(grid.rx_elements.begin(), grid.rx_elements.end());
    out.times = grid.times;
    out.carriers = grid.carriers;
    out.offsets = offsets;
    out.values.resize(out.size());

    for (std::size_t ip = 0; ip < grid.tx_elements.size(); ++ip)
        for (std::size_t iq = 0; iq < grid.rx_elements.size(); ++iq)
            for (std::size_t it = 0; it < grid.times.size(); ++it)
                for (std::size_t ifi = 0; ifi < grid.carriers.size(); ++ifi)
                {
                    const double fi = grid.carriers[ifi];
                    const Cir cir = channel_ir(drop, link, grid.tx_elements[ip], grid.rx_elements[iq], grid.times[it],
                                               fi, settings);
                    for (std::size_t k = 0; k < offsets.size(); ++k)
                        out.at(ip, iq, it, ifi, k) = ctf_from_cir(cir, fi + offsets[k]);
                }
    return out;
}

std::vector<double> frequency_comb(std::size_t points, double bandwidth_hz)
{
    if (points == 0)
        throw std::invalid_argument("Frequency comb needs at least one point.");
    if (points == 1)
        return {0.0};
    if (!(bandwidth_hz > 0.0))
        throw std::invalid_argument("Frequency comb bandwidth must be positive.");
    const double step = bandwidth_hz / static_cast<double>(points);
    const auto centre = static_cast<long>(points / 2);
    std::vector<double> out(points);
    for (std::size_t k = 0; k < points; ++k)
        out[k] = static_cast<double>(static_cast<long>(k) - centre) * step;
    return out;
}

} // namespace thz
