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

#include <gtest/gtest.h>

#include <cmath>

using namespace thz;

namespace
{

ChannelRealization drop(std::uint64_t seed = 3, std::uint64_t index = 0)
{
    InitConfig cfg;
    cfg.seed = seed;
    cfg.rays_per_cluster = 20;
    return generate_drop(cfg, DropEnvironment{}, index);
}

ClusterState simple_cluster(const Vec3 &d)
{
    ClusterState c;
    c.virtual_vector = d;
    c.delay = d.norm() / kSpeedOfLight;
    c.aoa = vector_to_angles(d);
    c.aod = {0.3, 0.1};
    c.power = 1e-9;
    c.mu_ray_f0 = c.mu_ray = 0.4e-9;
    c.sigma_ray_f0 = c.sigma_ray = 0.05;
    return c;
}

void expect_same(const ClusterState &a, const ClusterState &b)
{
    EXPECT_EQ(a.delay, b.delay);
    EXPECT_EQ(a.power, b.power);
    EXPECT_EQ(a.aod, b.aod);
    EXPECT_EQ(a.aoa, b.aoa);
    EXPECT_EQ(a.virtual_vector, b.virtual_vector);
    EXPECT_EQ(a.phase, b.phase);
    ASSERT_EQ(a.rays.size(), b.rays.size());
    for (std::size_t m = 0; m < a.rays.size(); ++m)
    {
        EXPECT_EQ(a.rays[m].rel_delay, b.rays[m].rel_delay);
        EXPECT_EQ(a.rays[m].rel_aod, b.rays[m].rel_aod);
        EXPECT_EQ(a.rays[m].rel_aoa, b.rays[m].rel_aoa);
    }
}

const PropagationContext ctx{};

} // namespace

TEST(Evolution, ZeroStepIsIdentity)
{
    const auto d = drop();
    for (const auto &c : d.clusters)
    {
        expect_same(evolve_time(c, {0.05, 0.0866, 0.0}, 0.0, ctx), c);
        expect_same(evolve_space(c, {}, {}, ctx), c);
    }
    EXPECT_THROW(evolve_time(d.clusters[0], {}, -1.0, ctx), std::invalid_argument);
}

TEST(Evolution, CollinearMotionAddsDistance)
{
    const ClusterState c = simple_cluster({3.0, 4.0, 0.0});
    const Vec3 v = 0.1 * Vec3{0.6, 0.8, 0.0};
    const ClusterState out = evolve_time(c, v, 2.0, ctx);
    EXPECT_NEAR(out.virtual_vector.norm(), 5.0 + 0.2, 1e-15);
    EXPECT_NEAR(out.delay, 5.2 / kSpeedOfLight, 1e-22);
    EXPECT_NEAR(out.aoa.azimuth, c.aoa.azimuth, 1e-15);
    EXPECT_NEAR(out.aod.azimuth, c.aod.azimuth, 1e-15);
}

TEST(Evolution, ObliqueMotionExample)
{
    const ClusterState c = simple_cluster({3.0, 0.0, 0.0});
    const Vec3 v = 0.1 * angles_to_unit_vector({kPi / 3.0, 0.0});
    const ClusterState out = evolve_time(c, v, 1.0, ctx);
    EXPECT_NEAR(out.virtual_vector.norm(), 3.051229, 1e-6);
    const double expect = std::hypot(3.0 + 0.1 * std::cos(kPi / 3.0), 0.1 * std::sin(kPi / 3.0));
    EXPECT_NEAR(out.virtual_vector.norm(), expect, 1e-12);
    EXPECT_NEAR(out.aoa.azimuth, std::atan2(0.1 * std::sin(kPi / 3.0), 3.05), 1e-12);
    // AoD follows the AoA increment.
    EXPECT_NEAR(out.aod.azimuth - c.aod.azimuth, out.aoa.azimuth - c.aoa.azimuth, 1e-12);
    // Power follows the distance: FSPL change 20 log10(d'/d) plus absorption of the extra path.
    const double db = 20.0 * std::log10(expect / 3.0) + 10.0 * (expect - 3.0) / 1000.0;
    EXPECT_NEAR(10.0 * std::log10(out.power / c.power), -db, 1e-9);
}

TEST(Evolution, SpaceOffsetEqualsTimeStep)
{
    const auto d = drop();
    const Vec3 v{0.05, 0.0866, 0.01};
    const double dt = 0.37;
    for (const auto &c : d.clusters)
        expect_same(evolve_space(c, {}, dt * v, ctx), evolve_time(c, v, dt, ctx));
}

TEST(Evolution, HalfWavelengthOffsetGivesPi)
{
    ClusterState c = simple_cluster({3.0, 0.0, 0.0});
    const double half = 0.5 * kSpeedOfLight / 300e9;
    EXPECT_NEAR(half, 0.4996e-3, 1e-7);
    const ClusterState out = evolve_space(c, {}, {half, 0.0, 0.0}, ctx);
    EXPECT_NEAR(std::abs(out.phase - c.phase), kPi, 1e-3);
}

TEST(Evolution, TxOffsetActsInVirtualFrame)
{
    const ClusterState c = simple_cluster({3.0, 1.0, 0.0});
    const Vec3 a{0.0, 1e-3, 0.0};
    expect_same(evolve_space(c, a, {}, ctx), evolve_space(c, {}, -1.0 * a, ctx));
}

TEST(Evolution, FrequencyIdentity)
{
    for (const auto &c : drop().clusters)
        expect_same(evolve_frequency(c, 300e9, 300e9, 3.0, 3.0), c);
}

TEST(Evolution, FrequencyDoublingScalesDelaysByEight)
{
    for (const auto &c : drop().clusters)
    {
        const ClusterState out = evolve_frequency(c, 300e9, 600e9, 3.0, 3.0);
        EXPECT_EQ(out.delay, c.delay);
        EXPECT_EQ(out.power, c.power);
        EXPECT_EQ(out.aoa, c.aoa);
        for (std::size_t m = 0; m < c.rays.size(); ++m)
        {
            EXPECT_EQ(out.rays[m].rel_delay, 8.0 * c.rays[m].rel_delay);
            EXPECT_EQ(out.rays[m].rel_aoa.azimuth, 8.0 * c.rays[m].rel_aoa.azimuth);
        }
    }
}

TEST(Evolution, AngleScaleAt1p1)
{
    for (const auto &c : drop().clusters)
    {
        const ClusterState out = evolve_frequency(c, 300e9, 330e9, 3.0, 3.0);
        for (std::size_t m = 0; m < c.rays.size(); ++m)
        {
            const auto &a = c.rays[m];
            const auto &b = out.rays[m];
            EXPECT_NEAR(b.rel_aod.azimuth, 1.331 * a.rel_aod.azimuth, 1e-12);
            EXPECT_NEAR(b.rel_aod.elevation, 1.331 * a.rel_aod.elevation, 1e-12);
            EXPECT_NEAR(b.rel_aoa.azimuth, 1.331 * a.rel_aoa.azimuth, 1e-12);
            EXPECT_NEAR(b.rel_aoa.elevation, 1.331 * a.rel_aoa.elevation, 1e-12);
        }
    }
}

TEST(Evolution, FrequencyMonotoneInDelay)
{
    const auto c = drop().clusters.front();
    ClusterState prev = c;
    for (double f = 310e9; f <= 400e9; f += 10e9)
    {
        const ClusterState next = evolve_frequency(c, 300e9, f, 3.0, 3.0);
        ASSERT_EQ(next.rays.size(), c.rays.size());
        for (std::size_t m = 0; m < c.rays.size(); ++m)
            EXPECT_GT(next.rays[m].rel_delay, prev.rays[m].rel_delay);
        prev = next;
    }
}

TEST(Evolution, FrequencyRejectsNonPositive)
{
    const auto c = drop().clusters.front();
    EXPECT_THROW(evolve_frequency(c, 300e9, 0.0, 3.0, 3.0), std::invalid_argument);
    EXPECT_THROW(evolve_frequency(c, -1.0, 300e9, 3.0, 3.0), std::invalid_argument);
}

TEST(Evolution, FreshModeRedrawsButKeepsClusterLevel)
{
    const auto d = drop();
    ArrayPair arrays;
    EvolutionSettings fresh;
    fresh.remap = FrequencyRemap::Fresh;
    const auto a = evolve_point(d, arrays, 0, 0, 0.0, 320e9, fresh);
    const auto b = evolve_point(d, arrays, 0, 0, 0.0, 320e9, fresh);
    const auto persisted = evolve_point(d, arrays, 0, 0, 0.0, 320e9, EvolutionSettings{});
    ASSERT_EQ(a.size(), d.clusters.size());
    bool differs = false;
    for (std::size_t n = 0; n < a.size(); ++n)
    {
        expect_same(a[n], b[n]);
        EXPECT_EQ(a[n].delay, persisted[n].delay);
        EXPECT_EQ(a[n].power, persisted[n].power);
        differs = differs || a[n].rays[0].rel_delay != persisted[n].rays[0].rel_delay;
    }
    EXPECT_TRUE(differs);
}

TEST(Evolution, SinglePointGridIsInitialDrop)
{
    const auto d = drop();
    EvolutionGrid grid{{0.0}, {0}, {0}, {d.env.f0}};
    const auto g = realize_grid(d, grid, ArrayPair{}, EvolutionSettings{});
    ASSERT_EQ(g.cells.size(), 1u);
    ASSERT_EQ(g.at(0, 0, 0, 0).size(), d.clusters.size());
    for (std::size_t n = 0; n < d.clusters.size(); ++n)
        expect_same(g.at(0, 0, 0, 0)[n], d.clusters[n]);
}

TEST(Evolution, StaticReceiverGivesIdenticalTimeSlices)
{
    const auto d = drop();
    EvolutionGrid grid{{0.0, 0.5}, {0}, {0}, {d.env.f0}};
    const auto g = realize_grid(d, grid, ArrayPair{}, EvolutionSettings{});
    for (std::size_t n = 0; n < d.clusters.size(); ++n)
        expect_same(g.at(0, 0, 0, 0)[n], g.at(0, 0, 1, 0)[n]);
}

TEST(Evolution, GridMatchesVirtualPointLaw)
{
    const auto d = drop();
    ArrayPair arrays;
    arrays.rx = make_ula(4, 0.5e-3, {}, {0.05, 0.0866, 0.0});
    arrays.tx = make_ula(2, 0.5e-3);
    EvolutionGrid grid{{0.0, 0.01, 0.1}, {0, 1}, {0, 3}, {300e9, 330e9}};
    const auto g = realize_grid(d, grid, arrays, EvolutionSettings{});
    EXPECT_EQ(g.cells.size(), 2u * 2u * 3u * 2u);
    for (std::size_t pi = 0; pi < 2; ++pi)
        for (std::size_t qi = 0; qi < 2; ++qi)
            for (std::size_t ti = 0; ti < 3; ++ti)
                for (std::size_t fi = 0; fi < 2; ++fi)
                {
                    const std::size_t p = grid.tx_elements[pi], q = grid.rx_elements[qi];
                    const auto &cells = g.at(pi, qi, ti, fi);
                    for (std::size_t n = 0; n < cells.size(); ++n)
                    {
                        const Vec3 want = d.clusters[n].virtual_vector + arrays.rx.offset(q) - arrays.tx.offset(p) +
                                          grid.times[ti] * arrays.rx.velocity;
                        EXPECT_NEAR((cells[n].virtual_vector - want).norm(), 0.0, 1e-14);
                        EXPECT_NEAR(cells[n].delay, cells[n].virtual_vector.norm() / kSpeedOfLight, 1e-22);
                    }
                }
}

TEST(Evolution, TimeStepsCompose)
{
    const auto d = drop();
    const Vec3 v{0.05, 0.0866, 0.0};
    for (const auto &c : d.clusters)
    {
        const ClusterState two = evolve_time(evolve_time(c, v, 0.3, ctx), v, 0.45, ctx);
        const ClusterState one = evolve_time(c, v, 0.75, ctx);
        EXPECT_NEAR(two.delay, one.delay, 1e-9 * one.delay);
        EXPECT_NEAR(two.power, one.power, 1e-9 * one.power);
        EXPECT_NEAR(two.aoa.azimuth, one.aoa.azimuth, 1e-9);
        EXPECT_NEAR(two.aod.azimuth, one.aod.azimuth, 1e-9);
        EXPECT_NEAR(two.aod.elevation, one.aod.elevation, 1e-9);
    }
}

TEST(Evolution, GridValidation)
{
    const auto d = drop();
    EXPECT_THROW(realize_grid(d, EvolutionGrid{{}, {0}, {0}, {300e9}}, ArrayPair{}, {}), std::invalid_argument);
    EXPECT_THROW(realize_grid(d, EvolutionGrid{{0.1, 0.0}, {0}, {0}, {300e9}}, ArrayPair{}, {}),
                 std::invalid_argument);
}

TEST(Evolution, Deterministic)
{
    const auto d = drop();
    ArrayPair arrays;
    arrays.rx = make_ula(3, 0.5e-3, {}, {0.05, 0.0866, 0.0});
    EvolutionGrid grid{{0.0, 0.05}, {0}, {0, 2}, {300e9, 310e9}};
    const auto a = realize_grid(d, grid, arrays, {});
    const auto b = realize_grid(d, grid, arrays, {});
    for (std::size_t i = 0; i < a.cells.size(); ++i)
        for (std::size_t n = 0; n < a.cells[i].size(); ++n)
            expect_same(a.cells[i][n], b.cells[i][n]);
}
