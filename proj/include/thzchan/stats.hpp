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

#ifndef THZCHAN_STATS_HPP
#define THZCHAN_STATS_HPP

#include "thzchan/ctf.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <span>
#include <string>
#include <vector>

namespace thz
{

// ---------------------------------------------------------------- delay PSD

struct DelayPsd
{
    std::vector<double> delay_bins; // s
    std::vector<double> power;      // linear

    double total() const;
};

// Tap-domain PSD: |a|^2 placed at each tap delay. With bin_width == 0 every
// distinct delay is its own bin; otherwise taps fall into [k w, (k+1) w).
DelayPsd delay_psd(std::span<const Tap> taps, double bin_width = 0.0);
inline DelayPsd delay_psd(const Cir &cir, double bin_width = 0.0) { return delay_psd(std::span<const Tap>(cir.taps), bin_width); }

// PSD from the inverse DFT of CTF samples on a uniform comb with the given
// spacing. Bin l sits at l / (N * spacing); sum of bins == mean |H|^2.
DelayPsd delay_psd_from_ctf(std::span<const cdouble> ctf, double comb_spacing_hz);

// ------------------------------------------------------------- correlation

enum class Estimator
{
    Direct,     // E[H H'*] / sqrt(E|H|^2 E|H'|^2)
    Decomposed  // K/(K+1) R_LOS + 1/(K+1) R_NLOS, ray-matched NLOS sum
};

// Ensemble sums for one (base, shifted) pair of channel points.
struct LagSums
{
    cdouble cross{};
    double power_base = 0.0;
    double power_shift = 0.0;

    cdouble los_cross{};
    double los_base = 0.0;
    double los_shift = 0.0;

    cdouble nlos_cross{}; // sum over rays of h_nm h'_nm*
    double nlos_base = 0.0;
    double nlos_shift = 0.0;

    std::size_t count = 0;

    LagSums &operator+=(const LagSums &o);

    cdouble raw(Estimator e) const;
    cdouble normalized(Estimator e) const;
};

// Contribution of one drop. Taps of the two responses are matched by
// position, so both must come from the same drop.
LagSums correlate_pair(const Cir &base, const Cir &shifted, double f_base, double f_shifted);
LagSums correlate_values(cdouble h_base, cdouble h_shifted);

// Tap contributions a exp(-j 2 pi f tau), in tap order.
std::vector<cdouble> tap_values(const Cir &cir, double f);
// correlate_pair on precomputed tap values; `layout` supplies the LOS/NLOS split.
LagSums correlate_taps(const Cir &layout, std::span<const cdouble> base, std::span<const cdouble> shifted);

struct CorrelationCurve
{
    std::string lag_unit;
    std::vector<double> lags;
    std::vector<cdouble> raw;
    std::vector<cdouble> values; // normalised to 1 at zero lag
    Estimator estimator = Estimator::Direct;

    std::vector<double> magnitude() const;
};

CorrelationCurve make_curve(std::vector<double> lags, std::string unit, std::span<const LagSums> sums, Estimator e);

// Tensor-ensemble forms (direct estimator). Indices address tensor axes.
struct TensorIndex
{
    std::size_t p = 0, q = 0, t = 0, fi = 0, f = 0;
};
struct TensorShift
{
    long dp = 0, dq = 0, dt = 0, dfi = 0;
};

LagSums stf_sums(std::span<const CtfTensor> ensemble, const TensorIndex &base, const TensorShift &shift);
cdouble stf_correlation(std::span<const CtfTensor> ensemble, const TensorIndex &base, const TensorShift &shift,
                        bool normalized = true);

CorrelationCurve acf(std::span<const CtfTensor> ensemble, const TensorIndex &base, std::span<const long> dt);
CorrelationCurve ccf(std::span<const CtfTensor> ensemble, const TensorIndex &base,
                     std::span<const std::pair<long, long>> dpq);
CorrelationCurve fcf(std::span<const CtfTensor> ensemble, const TensorIndex &base, std::span<const long> dfi);

// --------------------------------------------------------------- K-factor

// |h_LOS|^2 / sum |h_nm|^2; +infinity when there is no NLOS power.
double ricean_k(const Cir &cir);
double ricean_k(const ChannelRealization &drop);

// --------------------------------------------------------------------- CMD

// tr{R1 R2} / (||R1||_F ||R2||_F): 1 for identical structure, 0 for orthogonal.
double cmd_similarity(const Eigen::MatrixXcd &r1, const Eigen::MatrixXcd &r2);
inline double cmd_distance(const Eigen::MatrixXcd &r1, const Eigen::MatrixXcd &r2) { return 1.0 - cmd_similarity(r1, r2); }

// Mean of h h^H over the given antenna-domain vectors.
Eigen::MatrixXcd spatial_covariance(std::span<const Eigen::VectorXcd> samples);

enum class IntervalDomain
{
    SpaceTx,
    SpaceRx,
    Time,
    Frequency
};

struct StationaryIntervalSample
{
    IntervalDomain domain = IntervalDomain::Time;
    double interval = 0.0; // domain units
    double c_th = 0.0;
    bool below_threshold = false; // similarity failed already at the first shift
    std::vector<double> similarity;
};

// matrices[0] is the base; matrices[k] sits k grid steps away. Returns the
// largest k * step for which every similarity up to k stays >= c_th. When
// the first shift already fails, one step is reported and flagged.
StationaryIntervalSample stationary_interval(std::span<const Eigen::MatrixXcd> matrices, double step, double c_th,
                                             IntervalDomain domain);

// -------------------------------------------------------------------- CCDF

struct CcdfPoint
{
    double value = 0.0;
    double probability = 0.0;
};

// P(X > x), right-continuous; evaluated at each distinct sample value.
std::vector<CcdfPoint> ccdf(std::span<const double> samples);
double ccdf_at(std::span<const double> samples, double x);

// ------------------------------------------------------------------ export

// Columns: lag, real, imag, magnitude (normalised values).
void write_curve_csv(const std::string &path, const CorrelationCurve &curve);
std::string curve_to_json(const CorrelationCurve &curve, const std::string &config_hash,
                          std::span<const std::uint64_t> seeds, std::size_t ensemble);
void write_ccdf_csv(const std::string &path, std::span<const CcdfPoint> points);

std::string format_double(double v);

} // namespace thz

#endif
