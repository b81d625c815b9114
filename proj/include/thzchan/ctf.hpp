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

#ifndef THZCHAN_CTF_HPP
#define THZCHAN_CTF_HPP

#include "thzchan/evolution.hpp"
#include "thzchan/geometry.hpp"
#include "thzchan/init.hpp"
#include "thzchan/pathloss.hpp"

#include <complex>
#include <cstddef>
#include <vector>

namespace thz
{

using cdouble = std::complex<double>;

struct PolarizedGain
{
    cdouble v{1.0, 0.0};
    cdouble h{0.0, 0.0};
};

// Element pattern evaluated in the array's local frame. The omni kind has
// the same gain everywhere; the table kind is interpolated bilinearly in
// (elevation, azimuth) and linearly in frequency.
class AntennaPattern
{
public:
    enum class Kind
    {
        Omni,
        Table
    };

    static AntennaPattern omni(cdouble v_gain = 1.0, cdouble h_gain = 0.0);

    // `v` and `h` are laid out [frequency][elevation][azimuth]; all grids ascending.
    static AntennaPattern table(std::vector<double> elevations, std::vector<double> azimuths,
                                std::vector<double> frequencies, std::vector<cdouble> v, std::vector<cdouble> h);

    Kind kind() const { return kind_; }
    PolarizedGain gain(const AnglePair &lcs, double frequency_hz) const;

private:
    Kind kind_ = Kind::Omni;
    PolarizedGain omni_{};
    std::vector<double> el_, az_, freq_;
    std::vector<cdouble> v_, h_;

    PolarizedGain table_slice(std::size_t f_index, const AnglePair &lcs) const;
};

// Arrays and their element patterns.
struct Link
{
    ArrayPair arrays{};
    AntennaPattern tx_pattern = AntennaPattern::omni();
    AntennaPattern rx_pattern = AntennaPattern::omni();
};

// Componentwise sum, azimuth wrapped to (-pi, pi], elevation mirror-wrapped.
AnglePair compose_angle(const AnglePair &cluster_angle, const AnglePair &rel_angle);

// Discrete multipath component; cluster == -1 marks the LOS tap.
struct Tap
{
    double delay = 0.0;
    cdouble amplitude{};
    int cluster = -1;
    int ray = -1;
};

// Impulse response at one (p, q, t, fi) cell. H(f) = sum a exp(-j 2 pi f tau).
struct Cir
{
    std::vector<Tap> taps;
    bool has_los() const { return !taps.empty() && taps.front().cluster < 0; }
};

cdouble ctf_from_cir(const Cir &cir, double f);

// LOS complex amplitude (without the delay phasor) and delay at (p, q, t, fi).
Tap los_tap(const ChannelRealization &drop, const Link &link, std::size_t p, std::size_t q, double t, double fi);

cdouble h_los(const ChannelRealization &drop, const Link &link, std::size_t p, std::size_t q, double t, double fi,
              double f);

// Cluster power at carrier fi: the stored power follows f0; the free-space and
// absorption change between f0 and fi is applied on top, as for the LOS path.
double cluster_power_at(const ClusterState &cluster, double f0, double fi, const PathlossModel &pathloss);

// Amplitude of one ray: Tx pattern x polarisation/XPR matrix x Rx pattern x sqrt(P_n / M_n).
cdouble nlos_ray_amplitude(const ClusterState &cluster, const RayState &ray, std::size_t rays_in_cluster,
                           double cluster_power, const Link &link, double fi);

cdouble h_nlos_ray(const ClusterState &cluster, const RayState &ray, std::size_t rays_in_cluster, double cluster_power,
                   const Link &link, double fi, double f);

// LOS tap first (if present), then every ray in cluster order.
Cir channel_ir(const ChannelRealization &drop, const Link &link, std::size_t p, std::size_t q, double t, double fi,
               const EvolutionSettings &settings);

// Builds the impulse response from already evolved cluster states.
Cir channel_ir(const ChannelRealization &drop, const std::vector<ClusterState> &clusters, const Link &link,
               std::size_t p, std::size_t q, double t, double fi);

cdouble ctf_entry(const ChannelRealization &drop, const Link &link, std::size_t p, std::size_t q, double t, double fi,
                  double f, const EvolutionSettings &settings);

/// Complex transfer values indexed (p, q, t, fi, f), p-major. The f axis
/// stores offsets relative to each carrier; the absolute evaluation
/// frequency of entry (.., fi, k) is carriers[fi] + offsets[k].
struct CtfTensor
{
    std::vector<double> tx_elements;
    std::vector<double> rx_elements;
    std::vector<double> times;
    std::vector<double> carriers;
    std::vector<double> offsets;
    std::vector<cdouble> values;

    std::size_t n_tx() const { return tx_elements.size(); }
    std::size_t n_rx() const { return rx_elements.size(); }
    std::size_t n_t() const { return times.size(); }
    std::size_t n_fi() const { return carriers.size(); }
    std::size_t n_f() const { return offsets.size(); }
    std::size_t size() const { return n_tx() * n_rx() * n_t() * n_fi() * n_f(); }

    std::size_t index(std::size_t p, std::size_t q, std::size_t t, std::size_t fi, std::size_t f) const
    {
        return (((p * n_rx() + q) * n_t() + t) * n_fi() + fi) * n_f() + f;
    }
    cdouble &at(std::size_t p, std::size_t q, std::size_t t, std::size_t fi, std::size_t f)
    {
        return values[index(p, q, t, fi, f)];
    }
    const cdouble &at(std::size_t p, std::size_t q, std::size_t t, std::size_t fi, std::size_t f) const
    {
        return values[index(p, q, t, fi, f)];
    }
    void validate() const;
};

std::size_t ctf_tensor_bytes(std::size_t n_tx, std::size_t n_rx, std::size_t n_t, std::size_t n_fi, std::size_t n_f);

CtfTensor ctf_tensor(const ChannelRealization &drop, const EvolutionGrid &grid, const Link &link,
                     const EvolutionSettings &settings, const std::vector<double> &offsets);

// Evenly spaced offsets covering [-bandwidth/2, bandwidth/2), always containing 0.
std::vector<double> frequency_comb(std::size_t points, double bandwidth_hz);

} // namespace thz

#endif
