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

#include "oracles.hpp"

#include "thzchan/stats.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace thz;
namespace fs = std::filesystem;

namespace
{

constexpr double kF0 = 300e9;
const EvolutionSettings kSettings{};

Tap tap(double delay, cdouble a, int cluster = 0, int ray = 0) { return {delay, a, cluster, ray}; }

// Two single-ray clusters with random phases, as the unit tests need many such drops.
ChannelRealization two_cluster_drop(std::mt19937_64 &gen)
{
    std::uniform_real_distribution<double> u(-oracle::pi, oracle::pi);
    ChannelRealization d;
    d.config.seed = 1;
    d.config.rays_per_cluster = 1;
    d.los_delay = 3.0 / oracle::c0;
    d.los_phase = u(gen);
    const double delays[2] = {14e-9, 23e-9};
    const double powers[2] = {6e-10, 3e-10};
    const double az[2] = {0.8, -1.9};
    for (int n = 0; n < 2; ++n)
    {
        ClusterState c;
        c.delay = delays[n];
        c.power = powers[n];
        c.aoa = {az[n], 0.0};
        c.aod = {-az[n], 0.0};
        const double r = oracle::c0 * delays[n];
        c.virtual_vector = {r * std::cos(az[n]), r * std::sin(az[n]), 0.0};
        c.mu_ray_f0 = c.mu_ray = 0.4e-9;
        c.sigma_ray_f0 = c.sigma_ray = 0.05;
        RayState ray;
        ray.base_uniform = 1.0;
        ray.xpr = 1.0;
        ray.phases = {u(gen), u(gen), u(gen), u(gen)};
        c.rays.push_back(ray);
        d.clusters.push_back(c);
    }
    d.n_first = 2;
    return d;
}

Link moving_link(double speed)
{
    Link link;
    link.arrays.rx = make_ula(1, 0.5e-3, {}, speed * angles_to_unit_vector({kPi / 3.0, 0.0}));
    return link;
}

Eigen::MatrixXcd random_psd(std::mt19937_64 &gen, int n)
{
    std::normal_distribution<double> g;
    Eigen::MatrixXcd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a(i, j) = {g(gen), g(gen)};
    return a * a.adjoint();
}

} // namespace

TEST(DelayPsd, LosOnlyIsOneBin)
{
    const std::vector<Tap> taps{tap(10e-9, {3e-5, 4e-5}, -1)};
    const auto psd = delay_psd(std::span<const Tap>(taps));
    ASSERT_EQ(psd.power.size(), 1u);
    EXPECT_EQ(psd.delay_bins[0], 10e-9);
    EXPECT_NEAR(psd.power[0], 25e-10, 1e-24);
}

TEST(DelayPsd, ExactBinsKeepAllPower)
{
    InitConfig cfg;
    cfg.seed = 4;
    cfg.rays_per_cluster = 30;
    const auto d = generate_drop(cfg, DropEnvironment{}, 0);
    const Cir cir = channel_ir(d, Link{}, 0, 0, 0.0, kF0, kSettings);
    double sum = 0.0;
    for (const auto &t : cir.taps)
        sum += std::norm(t.amplitude);
    const auto psd = delay_psd(cir);
    EXPECT_NEAR(psd.total(), sum, 1e-13 * sum);
    EXPECT_TRUE(std::is_sorted(psd.delay_bins.begin(), psd.delay_bins.end()));
    for (double p : psd.power)
        EXPECT_GE(p, 0.0);
}

TEST(DelayPsd, TwoRaysInOneBin)
{
    const std::vector<Tap> taps{tap(10.2e-9, {1.0, 0.0}), tap(10.4e-9, {0.0, 2.0}), tap(11.6e-9, {1.0, 1.0})};
    const auto psd = delay_psd(std::span<const Tap>(taps), 1e-9);
    ASSERT_EQ(psd.power.size(), 2u);
    EXPECT_NEAR(psd.delay_bins[0], 10e-9, 1e-21);
    EXPECT_NEAR(psd.power[0], 1.0 + 4.0, 1e-15);
    EXPECT_NEAR(psd.power[1], 2.0, 1e-15);
    EXPECT_THROW(delay_psd(std::span<const Tap>(taps), -1.0), std::invalid_argument);
    const std::vector<Tap> negative{tap(-1e-9, {1.0, 0.0})};
    EXPECT_THROW(delay_psd(std::span<const Tap>(negative)), std::invalid_argument);
}

TEST(DelayPsd, IdftMatchesNaiveTransformAndParseval)
{
    std::mt19937_64 gen(3);
    std::normal_distribution<double> g;
    std::vector<cdouble> h(64);
    for (auto &x : h)
        x = {g(gen), g(gen)};
    const double spacing = 2e9 / 64.0;
    const auto psd = delay_psd_from_ctf(h, spacing);
    const auto naive = oracle::naive_idft(h);
    ASSERT_EQ(psd.power.size(), 64u);
    double mean_power = 0.0;
    for (const auto &x : h)
        mean_power += std::norm(x) / 64.0;
    for (std::size_t l = 0; l < 64; ++l)
    {
        EXPECT_NEAR(psd.power[l], std::norm(naive[l]), 1e-12);
        EXPECT_NEAR(psd.delay_bins[l], static_cast<double>(l) / (64.0 * spacing), 1e-21);
    }
    EXPECT_NEAR(psd.total(), mean_power, 1e-12 * mean_power);
    EXPECT_THROW(delay_psd_from_ctf(std::vector<cdouble>{}, spacing), std::invalid_argument);
    EXPECT_THROW(delay_psd_from_ctf(h, 0.0), std::invalid_argument);
}

TEST(DelayPsd, TapPowerMatchesCombPowerForResolvedTaps)
{
    // Delays on exact multiples of 1/bandwidth: the comb average of |H|^2 keeps no cross terms.
    const std::size_t n = 128;
    const double bw = 2e9;
    const double res = 1.0 / bw;
    const std::vector<Tap> taps{tap(20 * res, {1e-5, 0.0}, -1), tap(31 * res, {0.0, 4e-6}), tap(47 * res, {3e-6, 3e-6})};
    const Cir cir{taps};
    const auto comb = frequency_comb(n, bw);
    double mean = 0.0;
    std::vector<cdouble> h;
    for (double off : comb)
    {
        h.push_back(ctf_from_cir(cir, kF0 + off));
        mean += std::norm(h.back()) / static_cast<double>(n);
    }
    EXPECT_NEAR(delay_psd(cir).total(), mean, 0.02 * mean);
    EXPECT_NEAR(delay_psd_from_ctf(h, bw / n).total(), mean, 1e-12 * mean);
}

TEST(Correlation, LagSumEstimators)
{
    const Cir a{{tap(10e-9, {2.0, 0.0}, -1), tap(20e-9, {0.0, 1.0}, 0, 0), tap(21e-9, {0.5, 0.0}, 0, 1)}};
    const Cir b{{tap(10e-9, {0.0, 2.0}, -1), tap(20e-9, {1.0, 0.0}, 0, 0), tap(21e-9, {0.0, -0.5}, 0, 1)}};
    const LagSums s = correlate_pair(a, b, 0.0, 0.0);
    // Direct: H = 2 + j + 0.5, H' = 2j + 1 - 0.5j
    const cdouble h{2.5, 1.0}, hs{1.0, 1.5};
    EXPECT_NEAR(std::abs(s.raw(Estimator::Direct) - h * std::conj(hs)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(s.normalized(Estimator::Direct) - h * std::conj(hs) / (std::abs(h) * std::abs(hs))), 0.0,
                1e-15);
    // Decomposed: LOS 2 * conj(2j) = -4j, rays j*1 + 0.5*conj(-0.5j) = j + 0.25j.
    const cdouble r_los = cdouble(0.0, -4.0) / 4.0;
    const cdouble r_nlos = cdouble(0.0, 1.25) / 1.25;
    const double k = 4.0 / 1.25;
    EXPECT_NEAR(std::abs(s.normalized(Estimator::Decomposed) - (k / (k + 1.0) * r_los + 1.0 / (k + 1.0) * r_nlos)),
                0.0, 1e-15);
    EXPECT_NEAR(std::abs(s.raw(Estimator::Decomposed) - cdouble(0.0, -4.0 + 1.25)), 0.0, 1e-15);

    const LagSums z = correlate_pair(a, a, 0.0, 0.0);
    EXPECT_NEAR(std::abs(z.normalized(Estimator::Direct) - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(z.normalized(Estimator::Decomposed) - 1.0), 0.0, 1e-15);

    const Cir wrong{{tap(10e-9, {2.0, 0.0}, -1)}};
    EXPECT_THROW(correlate_pair(a, wrong, 0.0, 0.0), std::invalid_argument);
}

TEST(Correlation, TwoClusterEnsembleMatchesBruteForce)
{
    std::mt19937_64 gen(101);
    const Link link = moving_link(0.1);
    const double v[3] = {link.arrays.rx.velocity.x, link.arrays.rx.velocity.y, link.arrays.rx.velocity.z};
    const std::vector<double> times{0.0, 0.001, 0.002, 0.005, 0.01};
    std::vector<ChannelRealization> drops;
    std::vector<CtfTensor> tensors;
    for (int i = 0; i < 100; ++i)
    {
        drops.push_back(two_cluster_drop(gen));
        tensors.push_back(ctf_tensor(drops.back(), EvolutionGrid{times, {0}, {0}, {kF0}}, link, kSettings, {0.0}));
    }
    for (long k = 0; k < static_cast<long>(times.size()); ++k)
    {
        cdouble cross{};
        double p0 = 0.0, p1 = 0.0;
        for (const auto &d : drops)
        {
            const cdouble h0 = oracle::transfer(oracle::paths(d, v, 0.0), kF0);
            const cdouble h1 = oracle::transfer(oracle::paths(d, v, times[static_cast<std::size_t>(k)]), kF0);
            cross += h0 * std::conj(h1);
            p0 += std::norm(h0);
            p1 += std::norm(h1);
        }
        const cdouble expect = cross / std::sqrt(p0 * p1);
        const cdouble got = stf_correlation(tensors, {}, {0, 0, k, 0});
        EXPECT_NEAR(std::abs(got - expect), 0.0, 0.02) << "lag " << k;
        EXPECT_NEAR(std::abs(got - expect), 0.0, 1e-9) << "lag " << k;
        EXPECT_LE(std::abs(got), 1.0 + 1e-9);
    }
    EXPECT_NEAR(std::abs(stf_correlation(tensors, {}, {}) - 1.0), 0.0, 1e-12);
    EXPECT_THROW(stf_correlation(tensors, {}, {0, 0, 5, 0}), std::out_of_range);
    EXPECT_THROW(stf_correlation(tensors, {}, {0, 0, -1, 0}), std::out_of_range);
    EXPECT_THROW(stf_correlation(std::span<const CtfTensor>{}, {}, {}), std::invalid_argument);
}

TEST(Correlation, LosOnlyChannelKeepsUnitMagnitude)
{
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    const Link link = moving_link(0.1);
    std::vector<CtfTensor> tensors;
    for (int i = 0; i < 20; ++i)
    {
        ChannelRealization d;
        d.los_phase = u(gen);
        tensors.push_back(ctf_tensor(d, EvolutionGrid{{0.0, 0.5, 1.0}, {0}, {0}, {kF0}}, link, kSettings, {0.0}));
    }
    const std::vector<long> lags{0, 1, 2};
    const auto curve = acf(tensors, {}, lags);
    for (const auto &r : curve.values)
        EXPECT_NEAR(std::abs(r), 1.0, 1e-12);
}

TEST(Correlation, CurveSlices)
{
    std::mt19937_64 gen(8);
    Link link = moving_link(0.1);
    link.arrays.tx = make_ula(3, 0.5e-3);
    link.arrays.rx = make_ula(4, 0.5e-3, {}, link.arrays.rx.velocity);
    std::vector<CtfTensor> tensors;
    for (int i = 0; i < 30; ++i)
        tensors.push_back(ctf_tensor(two_cluster_drop(gen),
                                     EvolutionGrid{{0.0, 0.002, 0.004}, {0, 1, 2}, {0, 1, 2, 3}, {kF0, 310e9, 320e9}},
                                     link, kSettings, {0.0}));

    const std::vector<long> dt{0, 1, 2};
    const auto a = acf(tensors, {}, dt);
    EXPECT_EQ(a.lag_unit, "s");
    EXPECT_NEAR(a.lags[2], 0.004, 1e-15);
    EXPECT_NEAR(std::abs(a.values[0] - 1.0), 0.0, 1e-12);
    EXPECT_EQ(a.values[1], stf_correlation(tensors, {}, {0, 0, 1, 0}));

    const std::vector<std::pair<long, long>> rx{{0, 0}, {0, 1}, {0, 3}};
    const auto c = ccf(tensors, {}, rx);
    EXPECT_EQ(c.lag_unit, "rx elements");
    EXPECT_EQ(c.lags[2], 3.0);
    EXPECT_EQ(c.values[2], stf_correlation(tensors, {}, {0, 3, 0, 0}));
    const std::vector<std::pair<long, long>> tx{{0, 0}, {2, 0}};
    EXPECT_EQ(ccf(tensors, {}, tx).lag_unit, "tx elements");

    const std::vector<long> df{0, 2};
    const auto f = fcf(tensors, {}, df);
    EXPECT_EQ(f.lag_unit, "Hz");
    EXPECT_NEAR(f.lags[1], 20e9, 1e-3);
    EXPECT_EQ(f.values[1], stf_correlation(tensors, {}, {0, 0, 0, 2}));

    for (const auto *curve : {&a, &c, &f})
        for (const auto &v : curve->values)
            EXPECT_LE(std::abs(v), 1.0 + 1e-9);
}

TEST(Correlation, SingleElementCcfIsOnePoint)
{
    std::mt19937_64 gen(9);
    std::vector<CtfTensor> tensors;
    for (int i = 0; i < 5; ++i)
        tensors.push_back(
            ctf_tensor(two_cluster_drop(gen), EvolutionGrid{{0.0}, {0}, {0}, {kF0}}, Link{}, kSettings, {0.0}));
    const std::vector<std::pair<long, long>> zero{{0, 0}};
    const auto c = ccf(tensors, {}, zero);
    ASSERT_EQ(c.values.size(), 1u);
    EXPECT_NEAR(std::abs(c.values[0] - 1.0), 0.0, 1e-12);
    const std::vector<std::pair<long, long>> off{{0, 1}};
    EXPECT_THROW(ccf(tensors, {}, off), std::out_of_range);
}

TEST(Correlation, StaticEnsembleIsFlat)
{
    InitConfig cfg;
    cfg.seed = 12;
    cfg.rays_per_cluster = 10;
    std::vector<CtfTensor> tensors;
    for (std::uint64_t i = 0; i < 20; ++i)
        tensors.push_back(ctf_tensor(generate_drop(cfg, DropEnvironment{}, i),
                                     EvolutionGrid{{0.0, 0.01, 0.05, 0.1}, {0}, {0}, {kF0}}, Link{}, kSettings, {0.0}));
    const std::vector<long> dt{0, 1, 2, 3};
    for (const auto &r : acf(tensors, {}, dt).values)
        EXPECT_NEAR(std::abs(r - 1.0), 0.0, 1e-12);
}

TEST(Correlation, StandardErrorShrinksAsRootN)
{
    InitConfig cfg;
    cfg.seed = 77;
    cfg.rays_per_cluster = 10;
    const Link link = moving_link(0.1);
    std::uint64_t next = 0;
    auto estimate = [&](std::size_t n) {
        std::vector<CtfTensor> tensors;
        for (std::size_t i = 0; i < n; ++i)
            tensors.push_back(ctf_tensor(generate_drop(cfg, DropEnvironment{}, next++),
                                         EvolutionGrid{{0.0, 0.005}, {0}, {0}, {kF0}}, link, kSettings, {0.0}));
        return stf_correlation(tensors, {}, {0, 0, 1, 0}).real();
    };
    std::vector<double> spread;
    for (std::size_t n : {25u, 100u, 400u})
    {
        const int batches = 30;
        double s = 0.0, s2 = 0.0;
        for (int b = 0; b < batches; ++b)
        {
            const double x = estimate(n);
            s += x;
            s2 += x * x;
        }
        const double m = s / batches;
        spread.push_back(std::sqrt((s2 / batches - m * m) * batches / (batches - 1)));
    }
    EXPECT_NEAR(spread[0] / spread[1], 2.0, 0.8);
    EXPECT_NEAR(spread[1] / spread[2], 2.0, 0.8);
    EXPECT_NEAR(spread[0] / spread[2], 4.0, 1.6);
}

TEST(RiceanK, Examples)
{
    const Cir equal{{tap(10e-9, {1.0, 0.0}, -1), tap(20e-9, {0.0, std::sqrt(0.5)}), tap(30e-9, {std::sqrt(0.5), 0.0})}};
    EXPECT_NEAR(ricean_k(equal), 1.0, 1e-15);
    const Cir los{{tap(10e-9, {1.0, 0.0}, -1)}};
    EXPECT_TRUE(std::isinf(ricean_k(los)));
    const Cir none{{tap(20e-9, {1.0, 0.0})}};
    EXPECT_THROW(ricean_k(none), std::invalid_argument);
}

TEST(RiceanK, PhaseAveragedEstimate)
{
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    const int rays = 8;
    Cir cir;
    cir.taps.push_back(tap(10e-9, std::sqrt(0.8), -1));
    for (int m = 0; m < rays; ++m)
        cir.taps.push_back(tap(20e-9 + m * 1e-10, std::sqrt(0.2 / rays), 0, m));
    EXPECT_NEAR(ricean_k(cir), 4.0, 1e-12);
    double nlos = 0.0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i)
    {
        cdouble sum{};
        for (int m = 0; m < rays; ++m)
            sum += std::polar(std::sqrt(0.2 / rays), u(gen));
        nlos += std::norm(sum);
    }
    EXPECT_NEAR(0.8 / (nlos / draws), 4.0, 0.2);
}

TEST(RiceanK, DropValue)
{
    InitConfig cfg;
    cfg.seed = 3;
    const auto d = generate_drop(cfg, DropEnvironment{}, 0);
    EXPECT_EQ(ricean_k(d), d.ricean_k);
    EXPECT_GT(ricean_k(d), 0.0);
}

TEST(Cmd, Examples)
{
    std::mt19937_64 gen(2);
    const Eigen::MatrixXcd r = random_psd(gen, 4);
    EXPECT_NEAR(cmd_similarity(r, r), 1.0, 1e-12);
    EXPECT_NEAR(cmd_distance(r, r), 0.0, 1e-12);
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 2), b = Eigen::MatrixXcd::Zero(2, 2);
    a(0, 0) = 1.0;
    b(1, 1) = 1.0;
    EXPECT_EQ(cmd_similarity(a, b), 0.0);

    const Eigen::MatrixXcd s = random_psd(gen, 4);
    // Trace of the product through an explicit triple loop.
    double tr = 0.0, n1 = 0.0, n2 = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
        {
            tr += (r(i, j) * s(j, i)).real();
            n1 += std::norm(r(i, j));
            n2 += std::norm(s(i, j));
        }
    EXPECT_NEAR(cmd_similarity(r, s), tr / std::sqrt(n1 * n2), 1e-12);
    EXPECT_NEAR(cmd_similarity(r, s), cmd_similarity(s, r), 1e-15);
    EXPECT_GE(cmd_similarity(r, s), 0.0);
    EXPECT_LE(cmd_similarity(r, s), 1.0 + 1e-12);
}

TEST(Cmd, ScaleInvarianceAndErrors)
{
    std::mt19937_64 gen(6);
    const Eigen::MatrixXcd r = random_psd(gen, 8), s = random_psd(gen, 8);
    EXPECT_EQ(cmd_similarity(4.0 * r, s), cmd_similarity(r, s));
    EXPECT_NEAR(cmd_similarity(3.7 * r, s), cmd_similarity(r, s), 1e-15);
    EXPECT_THROW(cmd_similarity(Eigen::MatrixXcd::Zero(8, 8), s), std::invalid_argument);
    EXPECT_THROW(cmd_similarity(r, random_psd(gen, 4)), std::invalid_argument);
    EXPECT_THROW(cmd_similarity(Eigen::MatrixXcd::Ones(2, 3), Eigen::MatrixXcd::Ones(2, 3)), std::invalid_argument);
}

TEST(Cmd, SpatialCovariance)
{
    std::vector<Eigen::VectorXcd> samples(2, Eigen::VectorXcd(2));
    samples[0] << cdouble(1.0, 0.0), cdouble(0.0, 1.0);
    samples[1] << cdouble(2.0, 0.0), cdouble(0.0, 0.0);
    const auto r = spatial_covariance(samples);
    EXPECT_NEAR(std::abs(r(0, 0) - 2.5), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(r(0, 1) - cdouble(0.0, -0.5)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(r(1, 0) - cdouble(0.0, 0.5)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(r(1, 1) - 0.5), 0.0, 1e-15);
    EXPECT_THROW(spatial_covariance(std::vector<Eigen::VectorXcd>{}), std::invalid_argument);
}

TEST(StationaryInterval, StaticChannelSpansGrid)
{
    std::mt19937_64 gen(4);
    const Eigen::MatrixXcd r = random_psd(gen, 4);
    const std::vector<Eigen::MatrixXcd> same(6, r);
    const auto s = stationary_interval(same, 10e6, 0.9, IntervalDomain::Frequency);
    EXPECT_EQ(s.interval, 50e6);
    EXPECT_FALSE(s.below_threshold);
    EXPECT_EQ(s.similarity.size(), 5u);
}

TEST(StationaryInterval, ThresholdControlsLength)
{
    // Matrices drifting away from the base: similarity falls with the shift.
    std::mt19937_64 gen(5);
    const Eigen::MatrixXcd base = random_psd(gen, 4);
    const Eigen::MatrixXcd other = random_psd(gen, 4);
    std::vector<Eigen::MatrixXcd> seq;
    for (int k = 0; k < 8; ++k)
        seq.push_back(base + 0.1 * k * k * other);
    const auto loose = stationary_interval(seq, 1e-3, 0.5, IntervalDomain::Time);
    const auto tight = stationary_interval(seq, 1e-3, 0.999999, IntervalDomain::Time);
    EXPECT_GE(loose.interval, tight.interval);
    EXPECT_EQ(tight.interval, 1e-3);
    EXPECT_TRUE(tight.below_threshold);
    for (std::size_t k = 0; k < loose.similarity.size(); ++k)
    {
        const double lag = static_cast<double>(k + 1) * 1e-3;
        if (lag <= loose.interval + 1e-12)
        {
            EXPECT_GE(loose.similarity[k], 0.5);
        }
    }
    EXPECT_THROW(stationary_interval(seq, 1e-3, 1.0, IntervalDomain::Time), std::invalid_argument);
    EXPECT_THROW(stationary_interval(seq, 1e-3, 0.0, IntervalDomain::Time), std::invalid_argument);
    EXPECT_THROW(stationary_interval(std::span(seq).first(1), 1e-3, 0.5, IntervalDomain::Time), std::invalid_argument);
}

TEST(StationaryInterval, StopsAtFirstFailure)
{
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(2, 2);
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(2, 2);
    b(0, 0) = 1.0;
    // similarities: 1, 1/sqrt(2), 1
    const std::vector<Eigen::MatrixXcd> seq{a, a, b, a};
    const auto s = stationary_interval(seq, 2.0, 0.9, IntervalDomain::SpaceRx);
    EXPECT_EQ(s.interval, 2.0);
    EXPECT_FALSE(s.below_threshold);
}

TEST(Ccdf, Examples)
{
    const std::vector<double> one{3.0};
    EXPECT_EQ(ccdf_at(one, 2.999), 1.0);
    EXPECT_EQ(ccdf_at(one, 3.0), 0.0);
    EXPECT_EQ(ccdf_at(one, 4.0), 0.0);
    const std::vector<double> four{1.0, 2.0, 3.0, 4.0};
    EXPECT_EQ(ccdf_at(four, 2.5), 0.5);
    const std::vector<double> dup{5.0, 1.0, 3.0, 3.0, 2.0};
    const auto pts = ccdf(dup);
    ASSERT_EQ(pts.size(), 4u);
    EXPECT_EQ(pts[0].value, 1.0);
    EXPECT_NEAR(pts[0].probability, 0.8, 1e-15);
    EXPECT_NEAR(pts[2].probability, 0.2, 1e-15);
    EXPECT_EQ(pts[3].probability, 0.0);
    for (std::size_t i = 1; i < pts.size(); ++i)
        EXPECT_LE(pts[i].probability, pts[i - 1].probability);
    for (const auto &p : pts)
        EXPECT_EQ(p.probability, ccdf_at(dup, p.value));
    EXPECT_THROW(ccdf(std::vector<double>{}), std::invalid_argument);
}

TEST(Export, CsvAndJson)
{
    const std::vector<LagSums> sums{correlate_values({1.0, 0.0}, {1.0, 0.0}), correlate_values({1.0, 0.0}, {0.0, 1.0})};
    const auto curve = make_curve({0.0, 1e-3}, "s", sums, Estimator::Direct);
    const fs::path dir = fs::temp_directory_path() / "thz_stats_export";
    fs::create_directories(dir);
    const auto csv = (dir / "c.csv").string();
    write_curve_csv(csv, curve);
    std::ifstream in(csv);
    std::string header, row0, row1;
    std::getline(in, header);
    std::getline(in, row0);
    std::getline(in, row1);
    EXPECT_EQ(header, "lag,real,imag,magnitude");
    EXPECT_EQ(row0, "0,1,0,1");
    EXPECT_EQ(row1, "0.001,0,-1,1");

    const std::vector<std::uint64_t> seeds{7};
    const auto j = nlohmann::json::parse(curve_to_json(curve, "h", seeds, 2));
    EXPECT_EQ(j.at("lag_unit"), "s");
    EXPECT_EQ(j.at("config_hash"), "h");
    EXPECT_EQ(j.at("ensemble"), 2);
    EXPECT_EQ(j.at("seeds")[0], 7);
    EXPECT_EQ(j.at("imag")[1], -1.0);
    EXPECT_EQ(j.at("raw_imag")[1], -1.0);

    const auto ccsv = (dir / "ccdf.csv").string();
    const std::vector<double> samples{1.0, 2.0};
    write_ccdf_csv(ccsv, ccdf(samples));
    std::ifstream cin(ccsv);
    std::getline(cin, header);
    std::getline(cin, row0);
    EXPECT_EQ(header, "value,ccdf");
    EXPECT_EQ(row0, "1,0.5");
    fs::remove_all(dir);
    EXPECT_THROW(make_curve({0.0}, "s", sums, Estimator::Direct), std::invalid_argument);
}
