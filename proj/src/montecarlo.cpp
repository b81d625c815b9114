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

#include "thzchan/montecarlo.hpp"

#include "thzchan/ctf_io.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace thz
{

namespace fs = std::filesystem;
using nlohmann::json;

namespace
{

std::string drop_name(std::uint64_t drop, const char *ext)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "drop_%06llu%s", static_cast<unsigned long long>(drop), ext);
    return buf;
}

std::string label(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

void write_text(const fs::path &path, const std::string &text)
{
    // Write-then-rename so an interrupted run never leaves a half file behind.
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("Cannot open '" + tmp.string() + "' for writing.");
        out << text;
        if (!out)
            throw std::runtime_error("Write to '" + tmp.string() + "' failed.");
    }
    fs::rename(tmp, path);
}

std::string read_text(const fs::path &path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json sums_to_json(const LagSums &s)
{
    return json::array({s.cross.real(), s.cross.imag(), s.power_base, s.power_shift, s.los_cross.real(),
                        s.los_cross.imag(), s.los_base, s.los_shift, s.nlos_cross.real(), s.nlos_cross.imag(),
                        s.nlos_base, s.nlos_shift, s.count});
}

LagSums sums_from_json(const json &j)
{
    LagSums s;
    s.cross = {j.at(0).get<double>(), j.at(1).get<double>()};
    s.power_base = j.at(2).get<double>();
    s.power_shift = j.at(3).get<double>();
    s.los_cross = {j.at(4).get<double>(), j.at(5).get<double>()};
    s.los_base = j.at(6).get<double>();
    s.los_shift = j.at(7).get<double>();
    s.nlos_cross = {j.at(8).get<double>(), j.at(9).get<double>()};
    s.nlos_base = j.at(10).get<double>();
    s.nlos_shift = j.at(11).get<double>();
    s.count = j.at(12).get<std::size_t>();
    return s;
}

// Impulse responses at one carrier for any (p, q, t). With omni patterns the
// ray amplitudes do not depend on direction, so they are computed once and
// only the cluster-level geometry is evolved per point. The taps are
// bit-identical to channel_ir.
class CirSource
{
public:
    CirSource(const ChannelRealization &drop, const Link &link, double fi, const EvolutionSettings &settings)
        : drop_(drop), link_(link), fi_(fi), settings_(settings), ctx_(propagation_context(drop))
    {
        omni_ = link.tx_pattern.kind() == AntennaPattern::Kind::Omni &&
                link.rx_pattern.kind() == AntennaPattern::Kind::Omni;
        if (!omni_)
            return;
        const auto evolved = evolve_point(drop, link.arrays, 0, 0, 0.0, fi, settings);
        for (std::size_t n = 0; n < evolved.size(); ++n)
        {
            const ClusterState &c = evolved[n];
            const double m = static_cast<double>(c.rays.size());
            std::vector<std::pair<double, cdouble>> rays;
            for (const RayState &ray : c.rays)
                rays.emplace_back(ray.rel_delay, nlos_ray_amplitude(c, ray, c.rays.size(), m, link, fi));
            rays_.push_back(std::move(rays));
            bare_.push_back(drop.clusters[n]);
            bare_.back().rays.clear();
        }
    }

    Cir at(std::size_t p, std::size_t q, double t) const
    {
        if (!omni_)
            return channel_ir(drop_, link_, p, q, t, fi_, settings_);
        Cir cir;
        cir.taps.push_back(los_tap(drop_, link_, p, q, t, fi_));
        const Vec3 v_rel = link_.arrays.rx.velocity - link_.arrays.tx.velocity;
        for (std::size_t n = 0; n < bare_.size(); ++n)
        {
            ClusterState c = evolve_space(bare_[n], link_.arrays.tx.offset(p), link_.arrays.rx.offset(q), ctx_);
            c = evolve_time(c, v_rel, t, ctx_);
            const double power = cluster_power_at(c, drop_.env.f0, fi_, drop_.env.pathloss);
            const double scale = std::sqrt(power / static_cast<double>(rays_[n].size()));
            for (std::size_t m = 0; m < rays_[n].size(); ++m)
            {
                Tap tap;
                tap.delay = c.delay + rays_[n][m].first;
                tap.amplitude = rays_[n][m].second * scale;
                tap.cluster = static_cast<int>(n);
                tap.ray = static_cast<int>(m);
                cir.taps.push_back(tap);
            }
        }
        return cir;
    }

private:
    const ChannelRealization &drop_;
    const Link &link_;
    double fi_;
    const EvolutionSettings &settings_;
    PropagationContext ctx_;
    bool omni_ = false;
    std::vector<ClusterState> bare_;
    std::vector<std::vector<std::pair<double, cdouble>>> rays_;
};

// Correlation sums of one drop along a sequence of shifted CIRs.
std::vector<LagSums> lag_sums(const Cir &base, double f_base, const std::vector<Cir> &shifted,
                              const std::vector<double> &f_shifted)
{
    const auto vb = tap_values(base, f_base);
    std::vector<LagSums> out;
    out.reserve(shifted.size());
    for (std::size_t k = 0; k < shifted.size(); ++k)
    {
        const auto vs = tap_values(shifted[k], f_shifted[k]);
        out.push_back(correlate_taps(base, vb, vs));
    }
    return out;
}

std::vector<LagSums> acf_sums(const ChannelRealization &drop, const Link &link, const EvolutionSettings &settings,
                              double t_base, double step, std::size_t count, double fi)
{
    const CirSource source(drop, link, fi, settings);
    std::vector<Cir> cirs;
    for (std::size_t k = 0; k < count; ++k)
        cirs.push_back(source.at(0, 0, t_base + static_cast<double>(k) * step));
    return lag_sums(cirs.front(), fi, cirs, std::vector<double>(count, fi));
}

std::vector<LagSums> ccf_sums(const ChannelRealization &drop, const Link &link, const EvolutionSettings &settings,
                              std::size_t q_base, double fi)
{
    const std::size_t n_rx = link.arrays.rx.size();
    const CirSource source(drop, link, fi, settings);
    const Cir base = source.at(0, q_base, 0.0);
    std::vector<Cir> cirs;
    // Walk from the base element towards the far end of the array.
    for (std::size_t k = 0; k < n_rx; ++k)
    {
        const std::size_t q = q_base == 0 ? k : q_base - std::min(k, q_base);
        if (q_base != 0 && k > q_base)
            break;
        cirs.push_back(source.at(0, q, 0.0));
    }
    return lag_sums(base, fi, cirs, std::vector<double>(cirs.size(), fi));
}

std::vector<LagSums> fcf_sums(const ChannelRealization &drop, const Link &link, const EvolutionSettings &settings,
                              double f_base, double step, std::size_t count)
{
    std::vector<Cir> cirs;
    std::vector<double> freqs;
    for (std::size_t k = 0; k < count; ++k)
    {
        const double fi = f_base + static_cast<double>(k) * step;
        cirs.push_back(channel_ir(drop, link, 0, 0, 0.0, fi, settings));
        freqs.push_back(fi);
    }
    return lag_sums(cirs.front(), f_base, cirs, freqs);
}

std::vector<LagSums> reduce(const std::vector<std::vector<LagSums>> &per_drop)
{
    std::vector<LagSums> total(per_drop.front().size());
    for (const auto &d : per_drop)
        for (std::size_t k = 0; k < total.size(); ++k)
            total[k] += d[k];
    return total;
}

std::vector<double> scaled_lags(std::size_t count, double step)
{
    std::vector<double> lags(count);
    for (std::size_t k = 0; k < count; ++k)
        lags[k] = static_cast<double>(k) * step;
    return lags;
}

struct Timer
{
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

RunManifest base_manifest(const Scenario &s)
{
    RunManifest m;
    m.scenario_text = serialize_scenario(s);
    m.config_hash = sha256_hex(m.scenario_text);
    m.seed = s.init.seed;
    return m;
}

void finish_manifest(RunManifest &m, const fs::path &root, const Timer &timer)
{
    m.elapsed_seconds = timer.seconds();
    write_text(root / "scenario.cfg", m.scenario_text);
    write_text(root / "manifest.json", m.to_json());
}

void write_curve(const fs::path &stats_dir, const std::string &name, const CorrelationCurve &curve,
                 const Scenario &s, const std::string &hash, std::size_t ensemble, std::vector<std::string> &outputs)
{
    write_curve_csv((stats_dir / (name + ".csv")).string(), curve);
    const std::vector<std::uint64_t> seeds{s.init.seed};
    write_text(stats_dir / (name + ".json"), curve_to_json(curve, hash, seeds, ensemble));
    outputs.push_back("stats/" + name + ".csv");
    outputs.push_back("stats/" + name + ".json");
}

} // namespace

double median(std::vector<double> v)
{
    if (v.empty())
        throw std::invalid_argument("Median of an empty sample.");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string software_version() { return "thzchan 1.0.0"; }

std::string RunManifest::to_json() const
{
    json j;
    j["software_version"] = software_version();
    j["config_hash"] = config_hash;
    j["scenario"] = scenario_text;
    j["seed"] = seed;
    j["drops"] = drops;
    j["drop_outputs"] = drop_outputs;
    j["stat_outputs"] = stat_outputs;
    j["completed_drops"] = completed_drops;
    j["resumed_drops"] = resumed_drops;
    j["complete"] = complete;
    j["timing"] = {{"elapsed_seconds", elapsed_seconds}};
    return j.dump(2) + "\n";
}

std::size_t check_memory_budget(const Scenario &s, bool paper_scale)
{
    const std::size_t bytes = ctf_tensor_bytes(s.n_tx, s.n_rx, s.ctf_time_count, s.ctf_carrier_count, s.comb_points);
    const std::size_t budget = s.memory_budget_mb * 1024ull * 1024ull;
    if (bytes > budget && !paper_scale)
        throw BudgetError("CTF tensor of " + std::to_string(bytes / (1024 * 1024)) + " MiB per drop exceeds " +
                          "memory_budget_mb = " + std::to_string(s.memory_budget_mb) +
                          "; pass --paper-scale to run anyway");
    return bytes;
}

ChannelRealization scenario_drop(const Scenario &s, std::uint64_t drop_index, std::size_t rays_per_cluster)
{
    InitConfig cfg = s.init;
    cfg.rays_per_cluster = rays_per_cluster;
    return generate_drop(cfg, s.env, drop_index);
}

std::vector<cdouble> rx_snapshot(const ChannelRealization &drop, const Link &link, std::size_t p, double t, double fi,
                                 double f, const EvolutionSettings &settings)
{
    const std::size_t n_rx = link.arrays.rx.size();
    std::vector<cdouble> h(n_rx);
    const bool omni = link.tx_pattern.kind() == AntennaPattern::Kind::Omni &&
                      link.rx_pattern.kind() == AntennaPattern::Kind::Omni;
    if (!omni)
    {
        for (std::size_t q = 0; q < n_rx; ++q)
            h[q] = ctf_from_cir(channel_ir(drop, link, p, q, t, fi, settings), f);
        return h;
    }

    // Intra-cluster parameters do not depend on the element or the time, so
    // each cluster's ray sum is formed once with unit cluster power.
    const auto evolved = evolve_point(drop, link.arrays, p, 0, t, fi, settings);
    std::vector<cdouble> ray_sum(evolved.size());
    std::vector<ClusterState> bare(drop.clusters.size());
    for (std::size_t n = 0; n < evolved.size(); ++n)
    {
        const ClusterState &c = evolved[n];
        const double m = static_cast<double>(c.rays.size());
        for (const RayState &ray : c.rays)
            ray_sum[n] += nlos_ray_amplitude(c, ray, c.rays.size(), m, link, fi) *
                          std::polar(1.0, -2.0 * kPi * f * ray.rel_delay);
        ray_sum[n] /= std::sqrt(m);
        bare[n] = drop.clusters[n];
        bare[n].rays.clear();
    }

    const PropagationContext ctx = propagation_context(drop);
    const Vec3 v_rel = link.arrays.rx.velocity - link.arrays.tx.velocity;
    for (std::size_t q = 0; q < n_rx; ++q)
    {
        cdouble sum = h_los(drop, link, p, q, t, fi, f);
        for (std::size_t n = 0; n < bare.size(); ++n)
        {
            ClusterState c = evolve_space(bare[n], link.arrays.tx.offset(p), link.arrays.rx.offset(q), ctx);
            c = evolve_time(c, v_rel, t, ctx);
            const double power = cluster_power_at(c, drop.env.f0, fi, drop.env.pathloss);
            sum += std::sqrt(power) * std::polar(1.0, -2.0 * kPi * f * c.delay) * ray_sum[n];
        }
        h[q] = sum;
    }
    return h;
}

// ----------------------------------------------------------- contributions

std::string DropContribution::to_json(const std::string &config_hash) const
{
    json j;
    j["config_hash"] = config_hash;
    j["drop"] = drop;
    json c = json::object();
    for (const auto &[name, sums] : curves)
    {
        json arr = json::array();
        for (const auto &s : sums)
            arr.push_back(sums_to_json(s));
        c[name] = arr;
    }
    j["curves"] = c;
    j["psd"] = psd;
    j["ctf_power"] = ctf_power;
    // JSON has no infinity; the K factor is stored as text.
    j["ricean_k"] = format_double(ricean_k);
    return j.dump() + "\n";
}

bool DropContribution::from_json(const std::string &text, const std::string &config_hash, DropContribution &out)
{
    try
    {
        const json j = json::parse(text);
        if (j.at("config_hash").get<std::string>() != config_hash)
            return false;
        DropContribution d;
        d.drop = j.at("drop").get<std::uint64_t>();
        for (const auto &[name, arr] : j.at("curves").items())
            for (const auto &s : arr)
                d.curves[name].push_back(sums_from_json(s));
        d.psd = j.at("psd").get<std::vector<double>>();
        d.ctf_power = j.at("ctf_power").get<double>();
        d.ricean_k = std::strtod(j.at("ricean_k").get<std::string>().c_str(), nullptr);
        out = std::move(d);
        return true;
    }
    catch (const std::exception &)
    {
        return false;
    }
}

DropContribution compute_contribution(const Scenario &s, std::uint64_t drop_index)
{
    const ChannelRealization drop = scenario_drop(s, drop_index, s.init.rays_per_cluster);
    const Link link = s.link();
    const double f0 = s.env.f0;
    const auto wants = [&](const char *name) { return std::find(s.stats.begin(), s.stats.end(), name) != s.stats.end(); };

    DropContribution out;
    out.drop = drop_index;
    if (wants("acf"))
        out.curves["acf"] = acf_sums(drop, link, s.evolution, 0.0, s.time_step, s.time_count, f0);
    if (wants("ccf"))
        out.curves["ccf"] = ccf_sums(drop, link, s.evolution, 0, f0);
    if (wants("fcf"))
        out.curves["fcf"] = fcf_sums(drop, link, s.evolution, f0, s.carrier_step, s.carrier_count);
    if (wants("psd") || wants("k"))
    {
        const Cir cir = channel_ir(drop, link, 0, 0, 0.0, f0, s.evolution);
        if (wants("psd"))
        {
            const auto offsets = s.comb();
            std::vector<cdouble> h(offsets.size());
            double power = 0.0;
            for (std::size_t k = 0; k < offsets.size(); ++k)
            {
                h[k] = ctf_from_cir(cir, f0 + offsets[k]);
                power += std::norm(h[k]);
            }
            out.ctf_power = power / static_cast<double>(h.size());
            out.psd = delay_psd_from_ctf(h, s.comb_bandwidth / static_cast<double>(s.comb_points)).power;
        }
        if (wants("k"))
            out.ricean_k = ricean_k(cir);
    }
    return out;
}

// ------------------------------------------------------------------- runs

RunManifest run_montecarlo(const Scenario &s, const RunOptions &opt)
{
    s.validate();
    Timer timer;
    RunManifest m = base_manifest(s);
    const fs::path root(opt.out_dir);
    fs::create_directories(root / "drops");
    fs::create_directories(root / "stats");

    std::vector<DropContribution> parts(s.ensemble);
    std::vector<char> done(s.ensemble, 0), resumed(s.ensemble, 0);
    for (std::uint64_t d = 0; d < s.ensemble; ++d)
    {
        m.drops.push_back(d);
        m.drop_outputs.push_back("drops/" + drop_name(d, ".json"));
    }

    try
    {
        parallel_for(s.ensemble, opt.workers, [&](std::size_t i) {
            const fs::path file = root / m.drop_outputs[i];
            if (fs::exists(file) && DropContribution::from_json(read_text(file), m.config_hash, parts[i]) &&
                parts[i].drop == i)
            {
                resumed[i] = 1;
            }
            else
            {
                parts[i] = compute_contribution(s, i);
                write_text(file, parts[i].to_json(m.config_hash));
            }
            done[i] = 1;
        });
    }
    catch (...)
    {
        for (std::uint64_t d = 0; d < s.ensemble; ++d)
            if (done[d])
                m.completed_drops.push_back(d);
        finish_manifest(m, root, timer);
        throw;
    }
    for (std::uint64_t d = 0; d < s.ensemble; ++d)
    {
        m.completed_drops.push_back(d);
        m.resumed_drops += resumed[d] ? 1 : 0;
    }

    // Reduction in drop order.
    const fs::path stats_dir = root / "stats";
    const auto curve_of = [&](const std::string &name) {
        std::vector<std::vector<LagSums>> per_drop;
        for (const auto &p : parts)
            per_drop.push_back(p.curves.at(name));
        return reduce(per_drop);
    };
    const std::size_t n = s.ensemble;
    struct Axis
    {
        const char *name;
        std::vector<double> lags;
        const char *unit;
    };
    const std::vector<Axis> axes{{"acf", scaled_lags(s.time_count, s.time_step), "s"},
                                 {"ccf", scaled_lags(s.n_rx, s.element_spacing()), "m"},
                                 {"fcf", scaled_lags(s.carrier_count, s.carrier_step), "Hz"}};
    for (const auto &axis : axes)
    {
        if (!parts.front().curves.count(axis.name))
            continue;
        const auto sums = curve_of(axis.name);
        write_curve(stats_dir, axis.name, make_curve(axis.lags, axis.unit, sums, Estimator::Decomposed), s,
                    m.config_hash, n, m.stat_outputs);
        write_curve(stats_dir, std::string(axis.name) + "_direct",
                    make_curve(axis.lags, axis.unit, sums, Estimator::Direct), s, m.config_hash, n, m.stat_outputs);
    }

    const auto wants = [&](const char *name) { return std::find(s.stats.begin(), s.stats.end(), name) != s.stats.end(); };
    if (wants("psd"))
    {
        std::vector<double> mean(parts.front().psd.size(), 0.0);
        for (const auto &p : parts)
            for (std::size_t k = 0; k < mean.size(); ++k)
                mean[k] += p.psd[k];
        const double resolution = 1.0 / s.comb_bandwidth;
        std::ostringstream psd;
        psd << "delay_s,power\n";
        for (std::size_t k = 0; k < mean.size(); ++k)
            psd << format_double(static_cast<double>(k) * resolution) << ','
                << format_double(mean[k] / static_cast<double>(n)) << '\n';
        write_text(stats_dir / "psd.csv", psd.str());
        m.stat_outputs.push_back("stats/psd.csv");

        std::ostringstream check;
        check << "drop,psd_total,ctf_power,relative_error\n";
        for (const auto &p : parts)
        {
            double total = 0.0;
            for (double v : p.psd)
                total += v;
            check << p.drop << ',' << format_double(total) << ',' << format_double(p.ctf_power) << ','
                  << format_double(std::abs(total - p.ctf_power) / p.ctf_power) << '\n';
        }
        write_text(stats_dir / "power_check.csv", check.str());
        m.stat_outputs.push_back("stats/power_check.csv");
    }
    if (wants("k"))
    {
        std::ostringstream k;
        k << "drop,ricean_k\n";
        for (const auto &p : parts)
            k << p.drop << ',' << format_double(p.ricean_k) << '\n';
        write_text(stats_dir / "k.csv", k.str());
        m.stat_outputs.push_back("stats/k.csv");
    }

    m.complete = true;
    finish_manifest(m, root, timer);
    return m;
}

RunManifest generate_tensors(const Scenario &s, const RunOptions &opt)
{
    s.validate();
    check_memory_budget(s, opt.paper_scale);
    Timer timer;
    RunManifest m = base_manifest(s);
    const fs::path root(opt.out_dir);
    fs::create_directories(root / "ctf");

    EvolutionGrid grid;
    for (std::size_t p = 0; p < s.n_tx; ++p)
        grid.tx_elements.push_back(p);
    for (std::size_t q = 0; q < s.n_rx; ++q)
        grid.rx_elements.push_back(q);
    grid.times = scaled_lags(s.ctf_time_count, s.time_step);
    for (std::size_t k = 0; k < s.ctf_carrier_count; ++k)
        grid.carriers.push_back(s.env.f0 + static_cast<double>(k) * s.carrier_step);
    const auto offsets = s.comb();
    const Link link = s.link();

    std::vector<char> done(s.ensemble, 0), resumed(s.ensemble, 0);
    for (std::uint64_t d = 0; d < s.ensemble; ++d)
    {
        m.drops.push_back(d);
        m.drop_outputs.push_back("ctf/" + drop_name(d, ".ctf"));
    }
    try
    {
        parallel_for(s.ensemble, opt.workers, [&](std::size_t i) {
            const fs::path file = root / m.drop_outputs[i];
            const fs::path sidecar = file.string() + ".json";
            if (fs::exists(file) && fs::exists(sidecar))
            {
                try
                {
                    const json j = json::parse(read_text(sidecar));
                    if (j.at("config_hash").get<std::string>() == m.config_hash)
                    {
                        resumed[i] = 1;
                        done[i] = 1;
                        return;
                    }
                }
                catch (const std::exception &)
                {
                }
            }
            const ChannelRealization drop = scenario_drop(s, i, s.init.rays_per_cluster);
            const CtfTensor tensor = ctf_tensor(drop, grid, link, s.evolution, offsets);
            write_ctf(file.string(), tensor);
            write_ctf_sidecar(sidecar.string(), tensor, m.config_hash, s.init.seed, i);
            done[i] = 1;
        });
    }
    catch (...)
    {
        for (std::uint64_t d = 0; d < s.ensemble; ++d)
            if (done[d])
                m.completed_drops.push_back(d);
        finish_manifest(m, root, timer);
        throw;
    }
    for (std::uint64_t d = 0; d < s.ensemble; ++d)
    {
        m.completed_drops.push_back(d);
        m.resumed_drops += resumed[d] ? 1 : 0;
    }
    m.complete = true;
    finish_manifest(m, root, timer);
    return m;
}

std::vector<std::string> stats_from_tensors(const std::string &ctf_dir, const std::string &out_dir,
                                            const std::string &config_hash)
{
    std::vector<fs::path> files;
    for (const auto &entry : fs::directory_iterator(ctf_dir))
        if (entry.path().extension() == ".ctf")
            files.push_back(entry.path());
    if (files.empty())
        throw std::runtime_error("No .ctf containers found in '" + ctf_dir + "'.");
    std::sort(files.begin(), files.end());

    std::vector<CtfTensor> ensemble;
    for (const auto &f : files)
    {
        const fs::path sidecar = f.string() + ".json";
        if (!config_hash.empty() && fs::exists(sidecar) &&
            json::parse(read_text(sidecar)).value("config_hash", std::string()) != config_hash)
            throw std::runtime_error("Container '" + f.string() + "' was generated from a different configuration.");
        ensemble.push_back(read_ctf(f.string()));
        const auto &a = ensemble.front();
        const auto &b = ensemble.back();
        if (a.n_tx() != b.n_tx() || a.n_rx() != b.n_rx() || a.n_t() != b.n_t() || a.n_fi() != b.n_fi() ||
            a.n_f() != b.n_f())
            throw std::runtime_error("Container '" + f.string() + "' has different dimensions.");
    }

    const CtfTensor &first = ensemble.front();
    TensorIndex base;
    // Comb point closest to the carrier itself.
    for (std::size_t k = 0; k < first.n_f(); ++k)
        if (std::abs(first.offsets[k]) < std::abs(first.offsets[base.f]))
            base.f = k;

    const fs::path stats_dir = fs::path(out_dir) / "stats";
    fs::create_directories(stats_dir);
    std::vector<std::string> outputs;
    const std::size_t n = ensemble.size();
    const auto emit = [&](const std::string &name, const CorrelationCurve &c) {
        write_curve_csv((stats_dir / (name + ".csv")).string(), c);
        write_text(stats_dir / (name + ".json"), curve_to_json(c, config_hash, {}, n));
        outputs.push_back("stats/" + name + ".csv");
        outputs.push_back("stats/" + name + ".json");
    };

    std::vector<long> dt(first.n_t());
    for (std::size_t k = 0; k < dt.size(); ++k)
        dt[k] = static_cast<long>(k);
    emit("acf_direct", acf(ensemble, base, dt));

    std::vector<std::pair<long, long>> dq(first.n_rx());
    for (std::size_t k = 0; k < dq.size(); ++k)
        dq[k] = {0, static_cast<long>(k)};
    emit("ccf_direct", ccf(ensemble, base, dq));

    std::vector<long> dfi(first.n_fi());
    for (std::size_t k = 0; k < dfi.size(); ++k)
        dfi[k] = static_cast<long>(k);
    emit("fcf_direct", fcf(ensemble, base, dfi));

    if (first.n_f() > 1)
    {
        const double spacing = first.offsets[1] - first.offsets[0];
        std::vector<double> mean(first.n_f(), 0.0);
        std::ostringstream check;
        check << "drop,psd_total,ctf_power,relative_error\n";
        for (std::size_t d = 0; d < n; ++d)
        {
            const auto &t = ensemble[d];
            std::vector<cdouble> h(t.n_f());
            double power = 0.0;
            for (std::size_t k = 0; k < h.size(); ++k)
            {
                h[k] = t.at(0, 0, 0, 0, k);
                power += std::norm(h[k]);
            }
            power /= static_cast<double>(h.size());
            const DelayPsd psd = delay_psd_from_ctf(h, spacing);
            for (std::size_t k = 0; k < mean.size(); ++k)
                mean[k] += psd.power[k];
            check << d << ',' << format_double(psd.total()) << ',' << format_double(power) << ','
                  << format_double(std::abs(psd.total() - power) / power) << '\n';
        }
        std::ostringstream out;
        out << "delay_s,power\n";
        for (std::size_t k = 0; k < mean.size(); ++k)
            out << format_double(static_cast<double>(k) / (static_cast<double>(mean.size()) * spacing)) << ','
                << format_double(mean[k] / static_cast<double>(n)) << '\n';
        write_text(stats_dir / "psd.csv", out.str());
        write_text(stats_dir / "power_check.csv", check.str());
        outputs.push_back("stats/psd.csv");
        outputs.push_back("stats/power_check.csv");
    }
    return outputs;
}

// ---------------------------------------------------------------- figures

namespace
{

// Per-drop sums for a family of curves. Every family is evaluated on the
// model drop and, when `theory` is set, on the large-M drop sharing its
// cluster-level draws.
template <class Fn>
FigureCurves figure_curves(const Scenario &s, std::size_t workers, const std::vector<std::string> &bases,
                           const std::vector<std::vector<double>> &lags, const char *unit, Fn sums_for)
{
    const std::size_t n_bases = bases.size();
    // per_drop[drop][base * 2 + (theory ? 1 : 0)]
    std::vector<std::vector<std::vector<LagSums>>> per_drop(s.ensemble);
    parallel_for(s.ensemble, workers, [&](std::size_t d) {
        const ChannelRealization model = scenario_drop(s, d, s.init.rays_per_cluster);
        const ChannelRealization theory = scenario_drop(s, d, s.theory_rays);
        auto &slot = per_drop[d];
        for (std::size_t b = 0; b < n_bases; ++b)
        {
            slot.push_back(sums_for(model, b));
            slot.push_back(sums_for(theory, b));
        }
    });

    FigureCurves out;
    for (std::size_t b = 0; b < n_bases; ++b)
    {
        for (int kind = 0; kind < 2; ++kind)
        {
            std::vector<LagSums> total(per_drop.front()[b * 2 + kind].size());
            for (const auto &d : per_drop)
                for (std::size_t k = 0; k < total.size(); ++k)
                    total[k] += d[b * 2 + kind][k];
            if (kind == 0)
            {
                out.names.push_back(bases[b] + "_model");
                out.curves.push_back(make_curve(lags[b], unit, total, Estimator::Decomposed));
                out.names.push_back(bases[b] + "_result");
                out.curves.push_back(make_curve(lags[b], unit, total, Estimator::Direct));
            }
            else
            {
                out.names.push_back(bases[b] + "_theory");
                out.curves.push_back(make_curve(lags[b], unit, total, Estimator::Decomposed));
            }
        }
    }
    return out;
}

} // namespace

FigureCurves figure4_acf(const Scenario &s, std::size_t workers)
{
    s.validate();
    const Link link = s.link();
    std::vector<std::string> bases;
    std::vector<std::vector<double>> lags;
    for (double t : s.figure_times)
    {
        bases.push_back("acf_t" + label(t) + "s");
        lags.push_back(scaled_lags(s.time_count, s.time_step));
    }
    return figure_curves(s, workers, bases, lags, "s", [&](const ChannelRealization &drop, std::size_t b) {
        return acf_sums(drop, link, s.evolution, s.figure_times[b], s.time_step, s.time_count, s.env.f0);
    });
}

FigureCurves figure5_ccf(const Scenario &s, std::size_t workers)
{
    s.validate();
    const Link link = s.link();
    // The two extreme elements of the Rx array stand in for q = 1 and q = 1000.
    std::vector<std::size_t> q_bases{0};
    if (s.n_rx > 1)
        q_bases.push_back(s.n_rx - 1);
    std::vector<std::string> bases;
    std::vector<std::vector<double>> lags;
    for (std::size_t q : q_bases)
    {
        bases.push_back("ccf_q" + std::to_string(q + 1));
        lags.push_back(scaled_lags(s.n_rx, s.element_spacing()));
    }
    return figure_curves(s, workers, bases, lags, "m", [&](const ChannelRealization &drop, std::size_t b) {
        return ccf_sums(drop, link, s.evolution, q_bases[b], s.env.f0);
    });
}

FigureCurves figure6_fcf(const Scenario &s, std::size_t workers)
{
    s.validate();
    const Link link = s.link();
    std::vector<std::string> bases;
    std::vector<std::vector<double>> lags;
    for (double f : s.figure_carriers)
    {
        bases.push_back("fcf_" + label(f / 1e9) + "GHz");
        lags.push_back(scaled_lags(s.carrier_count, s.carrier_step));
    }
    return figure_curves(s, workers, bases, lags, "Hz", [&](const ChannelRealization &drop, std::size_t b) {
        return fcf_sums(drop, link, s.evolution, s.figure_carriers[b], s.carrier_step, s.carrier_count);
    });
}

std::vector<std::vector<StationaryIntervalSample>> figure7_intervals(const Scenario &s, std::size_t workers)
{
    s.validate();
    const Link link = s.link();
    const std::size_t n_car = s.figure_carriers.size();
    const std::size_t runs = s.interval_runs;
    const std::size_t shifts = s.carrier_count;
    if (shifts < 2)
        throw ConfigError("carrier_count must be >= 2 for stationary intervals");

    std::vector<std::vector<StationaryIntervalSample>> out(n_car, std::vector<StationaryIntervalSample>(runs));
    parallel_for(runs, workers, [&](std::size_t r) {
        // Run r owns drops [r E, (r + 1) E).
        std::vector<std::vector<Eigen::MatrixXcd>> cov(
            n_car, std::vector<Eigen::MatrixXcd>(shifts, Eigen::MatrixXcd::Zero(s.n_rx, s.n_rx)));
        for (std::size_t e = 0; e < s.interval_ensemble; ++e)
        {
            const ChannelRealization drop = scenario_drop(s, r * s.interval_ensemble + e, s.init.rays_per_cluster);
            for (std::size_t c = 0; c < n_car; ++c)
                for (std::size_t k = 0; k < shifts; ++k)
                {
                    const double fi = s.figure_carriers[c] + static_cast<double>(k) * s.carrier_step;
                    const auto h = rx_snapshot(drop, link, 0, 0.0, fi, fi, s.evolution);
                    const Eigen::Map<const Eigen::VectorXcd> v(h.data(), static_cast<Eigen::Index>(h.size()));
                    cov[c][k].noalias() += v * v.adjoint();
                }
        }
        for (std::size_t c = 0; c < n_car; ++c)
        {
            for (auto &m : cov[c])
                m /= static_cast<double>(s.interval_ensemble);
            out[c][r] = stationary_interval(cov[c], s.carrier_step, s.c_th, IntervalDomain::Frequency);
        }
    });
    return out;
}

std::vector<std::string> figure_names() { return {"fig4-acf", "fig5-ccf", "fig6-fcf", "fig7-ccdf"}; }

RunManifest reproduce_figure(const std::string &name, const Scenario &s, const RunOptions &opt)
{
    const auto names = figure_names();
    if (std::find(names.begin(), names.end(), name) == names.end())
        throw ConfigError("unknown figure '" + name + "'; expected fig4-acf, fig5-ccf, fig6-fcf or fig7-ccdf");
    s.validate();
    Timer timer;
    RunManifest m = base_manifest(s);
    const fs::path root(opt.out_dir);
    const fs::path stats_dir = root / "stats";
    fs::create_directories(stats_dir);

    if (name == "fig7-ccdf")
    {
        const auto samples = figure7_intervals(s, opt.workers);
        for (std::uint64_t d = 0; d < s.interval_runs * s.interval_ensemble; ++d)
            m.drops.push_back(d);
        std::ostringstream table;
        table << "run,carrier_hz,interval_hz,below_threshold\n";
        json summary;
        summary["config_hash"] = m.config_hash;
        summary["c_th"] = s.c_th;
        summary["runs"] = s.interval_runs;
        summary["drops_per_run"] = s.interval_ensemble;
        summary["seeds"] = std::vector<std::uint64_t>{s.init.seed};
        json carriers = json::array();
        for (std::size_t c = 0; c < samples.size(); ++c)
        {
            std::vector<double> values;
            for (std::size_t r = 0; r < samples[c].size(); ++r)
            {
                values.push_back(samples[c][r].interval);
                table << r << ',' << format_double(s.figure_carriers[c]) << ','
                      << format_double(samples[c][r].interval) << ',' << (samples[c][r].below_threshold ? 1 : 0)
                      << '\n';
            }
            const std::string file = "fig7_ccdf_" + label(s.figure_carriers[c] / 1e9) + "GHz.csv";
            write_ccdf_csv((stats_dir / file).string(), ccdf(values));
            m.stat_outputs.push_back("stats/" + file);
            carriers.push_back({{"carrier_hz", s.figure_carriers[c]}, {"median_interval_hz", median(values)}});
        }
        summary["carriers"] = carriers;
        write_text(stats_dir / "fig7_intervals.csv", table.str());
        write_text(stats_dir / "fig7_summary.json", summary.dump(2) + "\n");
        m.stat_outputs.push_back("stats/fig7_intervals.csv");
        m.stat_outputs.push_back("stats/fig7_summary.json");
    }
    else
    {
        const FigureCurves fc = name == "fig4-acf"   ? figure4_acf(s, opt.workers)
                                : name == "fig5-ccf" ? figure5_ccf(s, opt.workers)
                                                     : figure6_fcf(s, opt.workers);
        for (std::uint64_t d = 0; d < s.ensemble; ++d)
            m.drops.push_back(d);
        for (std::size_t i = 0; i < fc.curves.size(); ++i)
            write_curve(stats_dir, fc.names[i], fc.curves[i], s, m.config_hash, s.ensemble, m.stat_outputs);
    }
    m.completed_drops = m.drops;
    m.complete = true;
    finish_manifest(m, root, timer);
    return m;
}

} // namespace thz
