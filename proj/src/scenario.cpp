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

#include "thzchan/scenario.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <cstring>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace thz
{

namespace
{

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true)
    {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

double parse_real(const std::string &v)
{
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out))
        throw ConfigError("expected a finite number, got '" + v + "'");
    return out;
}

std::uint64_t parse_u64(const std::string &v)
{
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw ConfigError("expected a non-negative integer, got '" + v + "'");
    return out;
}

bool parse_bool(const std::string &v)
{
    if (v == "true" || v == "1" || v == "yes")
        return true;
    if (v == "false" || v == "0" || v == "no")
        return false;
    throw ConfigError("expected true or false, got '" + v + "'");
}

// Shortest round-trip decimal of v moved by 10^shift. The shift works on the
// digit string, so parse(render(x, -k), +k) returns x exactly.
std::string render_scaled(double v, int shift)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific);
    std::string sci(buf, res.ptr);
    const auto epos = sci.find('e');
    std::string mant = sci.substr(0, epos);
    int exp10 = std::stoi(sci.substr(epos + 1)) + shift;

    std::string sign;
    if (mant.front() == '-')
    {
        sign = "-";
        mant.erase(0, 1);
    }
    std::string digits;
    for (char c : mant)
        if (c != '.')
            digits += c;
    if (digits == "0")
        return "0";

    if (exp10 < -5 || exp10 > 15)
    {
        std::string out = sign + digits.substr(0, 1);
        if (digits.size() > 1)
            out += "." + digits.substr(1);
        return out + "e" + std::to_string(exp10);
    }
    // Fixed notation: decimal point after (exp10 + 1) digits.
    const int point = exp10 + 1;
    if (point <= 0)
        return sign + "0." + std::string(static_cast<std::size_t>(-point), '0') + digits;
    if (static_cast<std::size_t>(point) >= digits.size())
        return sign + digits + std::string(static_cast<std::size_t>(point) - digits.size(), '0');
    return sign + digits.substr(0, static_cast<std::size_t>(point)) + "." +
           digits.substr(static_cast<std::size_t>(point));
}

double parse_scaled(const std::string &v, int shift)
{
    const double user = parse_real(v);
    if (shift == 0 || user == 0.0)
        return user;
    return parse_real(render_scaled(user, shift));
}

std::string join(const std::vector<std::string> &parts)
{
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i)
        out += (i ? "," : "") + parts[i];
    return out;
}

struct KeySpec
{
    std::string name;
    std::function<void(Scenario &, const std::string &)> set;
    std::function<std::string(const Scenario &)> get;
};

template <class Access>
KeySpec real_key(std::string name, int shift, Access access)
{
    return {std::move(name), [=](Scenario &s, const std::string &v) { access(s) = parse_scaled(v, shift); },
            [=](const Scenario &s) { return render_scaled(access(const_cast<Scenario &>(s)), -shift); }};
}

template <class Access>
KeySpec size_key(std::string name, Access access)
{
    return {std::move(name),
            [=](Scenario &s, const std::string &v) { access(s) = static_cast<std::size_t>(parse_u64(v)); },
            [=](const Scenario &s) { return std::to_string(access(const_cast<Scenario &>(s))); }};
}

template <class Access>
KeySpec real_list_key(std::string name, int shift, Access access)
{
    return {std::move(name),
            [=](Scenario &s, const std::string &v) {
                std::vector<double> out;
                for (const auto &item : split(v, ','))
                    out.push_back(parse_scaled(item, shift));
                access(s) = out;
            },
            [=](const Scenario &s) {
                std::vector<std::string> parts;
                for (double x : access(const_cast<Scenario &>(s)))
                    parts.push_back(render_scaled(x, -shift));
                return join(parts);
            }};
}

const std::vector<KeySpec> &key_table()
{
    static const std::vector<KeySpec> table = [] {
        std::vector<KeySpec> k;
        k.push_back({"seed",
                     [](Scenario &s, const std::string &v) {
                         s.init.seed = parse_u64(v);
                         s.has_seed = true;
                     },
                     [](const Scenario &s) { return s.has_seed ? std::to_string(s.init.seed) : std::string(); }});
        k.push_back(size_key("ensemble", [](Scenario &s) -> std::size_t & { return s.ensemble; }));

        k.push_back({"n_first_order_pmf",
                     [](Scenario &s, const std::string &v) {
                         std::map<int, double> pmf;
                         for (const auto &item : split(v, ','))
                         {
                             const auto kv = split(item, ':');
                             if (kv.size() != 2)
                                 throw ConfigError("expected 'count:probability' pairs, got '" + item + "'");
                             const auto n = parse_u64(kv[0]);
                             if (n > 1000000)
                                 throw ConfigError("cluster count " + kv[0] + " is out of range");
                             if (!pmf.emplace(static_cast<int>(n), parse_real(kv[1])).second)
                                 throw ConfigError("cluster count " + kv[0] + " listed twice");
                         }
                         s.init.pmf_first_order = pmf;
                     },
                     [](const Scenario &s) {
                         std::vector<std::string> parts;
                         for (const auto &[n, p] : s.init.pmf_first_order)
                             parts.push_back(std::to_string(n) + ":" + render_scaled(p, 0));
                         return join(parts);
                     }});
        k.push_back({"n_second_order_min",
                     [](Scenario &s, const std::string &v) { s.init.second_order_min = static_cast<int>(parse_u64(v)); },
                     [](const Scenario &s) { return std::to_string(s.init.second_order_min); }});
        k.push_back({"n_second_order_max",
                     [](Scenario &s, const std::string &v) { s.init.second_order_max = static_cast<int>(parse_u64(v)); },
                     [](const Scenario &s) { return std::to_string(s.init.second_order_max); }});

        k.push_back(real_key("mu_dtau_1st_ns", -9, [](Scenario &s) -> double & { return s.init.mu_dtau_1st; }));
        k.push_back(real_key("mu_dtau_2nd_ns", -9, [](Scenario &s) -> double & { return s.init.mu_dtau_2nd; }));
        k.push_back(real_key("mu_ray_1st_ns", -9, [](Scenario &s) -> double & { return s.init.mu_ray_1st; }));
        k.push_back(real_key("mu_ray_2nd_ns", -9, [](Scenario &s) -> double & { return s.init.mu_ray_2nd; }));
        k.push_back(real_key("sigma_ray_1st_rad", 0, [](Scenario &s) -> double & { return s.init.sigma_ray_1st; }));
        k.push_back(real_key("sigma_ray_2nd_rad", 0, [](Scenario &s) -> double & { return s.init.sigma_ray_2nd; }));
        k.push_back(real_key("aod_mean_az_rad", 0, [](Scenario &s) -> double & { return s.init.aod_mean.azimuth; }));
        k.push_back(real_key("aod_mean_el_rad", 0, [](Scenario &s) -> double & { return s.init.aod_mean.elevation; }));
        k.push_back(real_key("aoa_mean_az_rad", 0, [](Scenario &s) -> double & { return s.init.aoa_mean.azimuth; }));
        k.push_back(real_key("aoa_mean_el_rad", 0, [](Scenario &s) -> double & { return s.init.aoa_mean.elevation; }));
        k.push_back(real_key("angle_std_rad", 0, [](Scenario &s) -> double & { return s.init.angle_std; }));
        k.push_back(real_key("n_tau_db_per_ns", 9, [](Scenario &s) -> double & { return s.init.n_tau; }));
        k.push_back(real_key("delta_a_std_db", 0, [](Scenario &s) -> double & { return s.init.delta_a_std_db; }));
        k.push_back(real_key("delta_p_los_db", 0, [](Scenario &s) -> double & { return s.init.delta_p_los_db; }));
        k.push_back(real_key("xpr_mean_db", 0, [](Scenario &s) -> double & { return s.init.xpr_mean_db; }));
        k.push_back(real_key("xpr_std_db", 0, [](Scenario &s) -> double & { return s.init.xpr_std_db; }));
        k.push_back(size_key("rays_per_cluster", [](Scenario &s) -> std::size_t & { return s.init.rays_per_cluster; }));
        k.push_back(size_key("theory_rays", [](Scenario &s) -> std::size_t & { return s.theory_rays; }));
        k.push_back({"mea", [](Scenario &s, const std::string &v) { s.init.use_mea = parse_bool(v); },
                     [](const Scenario &s) { return std::string(s.init.use_mea ? "true" : "false"); }});

        k.push_back({"freq_remap",
                     [](Scenario &s, const std::string &v) {
                         if (v == "persisted")
                             s.evolution.remap = FrequencyRemap::Persisted;
                         else if (v == "fresh")
                             s.evolution.remap = FrequencyRemap::Fresh;
                         else
                             throw ConfigError("expected 'persisted' or 'fresh', got '" + v + "'");
                     },
                     [](const Scenario &s) {
                         return std::string(s.evolution.remap == FrequencyRemap::Persisted ? "persisted" : "fresh");
                     }});
        k.push_back(real_key("rho_mu", 0, [](Scenario &s) -> double & { return s.evolution.rho_mu; }));
        k.push_back(real_key("rho_sigma", 0, [](Scenario &s) -> double & { return s.evolution.rho_sigma; }));

        k.push_back(real_key("f0_ghz", 9, [](Scenario &s) -> double & { return s.env.f0; }));
        k.push_back({"d0_m", [](Scenario &s, const std::string &v) { s.env.initial_offset = {parse_real(v), 0.0, 0.0}; },
                     [](const Scenario &s) { return render_scaled(s.env.initial_offset.x, 0); }});
        k.push_back({"absorption_table_ghz_db_per_km",
                     [](Scenario &s, const std::string &v) {
                         std::vector<AbsorptionPoint> table;
                         for (const auto &item : split(v, ','))
                         {
                             const auto kv = split(item, ':');
                             if (kv.size() != 2)
                                 throw ConfigError("expected 'GHz:dB_per_km' pairs, got '" + item + "'");
                             table.push_back({parse_scaled(kv[0], 9), parse_real(kv[1])});
                         }
                         s.env.pathloss.absorption_table = table;
                     },
                     [](const Scenario &s) {
                         std::vector<std::string> parts;
                         for (const auto &p : s.env.pathloss.absorption_table)
                             parts.push_back(render_scaled(p.frequency_hz, -9) + ":" + render_scaled(p.db_per_km, 0));
                         return join(parts);
                     }});
        k.push_back(real_key("shadowing_sigma_db", 0,
                             [](Scenario &s) -> double & { return s.env.pathloss.shadowing_sigma_db; }));

        k.push_back(real_key("rx_speed_mps", 0, [](Scenario &s) -> double & { return s.rx_speed; }));
        k.push_back(real_key("rx_dir_az_rad", 0, [](Scenario &s) -> double & { return s.rx_direction.azimuth; }));
        k.push_back(real_key("rx_dir_el_rad", 0, [](Scenario &s) -> double & { return s.rx_direction.elevation; }));
        k.push_back(real_key("tx_speed_mps", 0, [](Scenario &s) -> double & { return s.tx_speed; }));
        k.push_back(real_key("tx_dir_az_rad", 0, [](Scenario &s) -> double & { return s.tx_direction.azimuth; }));
        k.push_back(real_key("tx_dir_el_rad", 0, [](Scenario &s) -> double & { return s.tx_direction.elevation; }));

        k.push_back(size_key("n_tx", [](Scenario &s) -> std::size_t & { return s.n_tx; }));
        k.push_back(size_key("n_rx", [](Scenario &s) -> std::size_t & { return s.n_rx; }));
        k.push_back(real_key("element_spacing_lambda0", 0,
                             [](Scenario &s) -> double & { return s.element_spacing_lambda0; }));
        k.push_back(real_key("tx_orientation_az_rad", 0, [](Scenario &s) -> double & { return s.tx_orientation.azimuth; }));
        k.push_back(
            real_key("tx_orientation_el_rad", 0, [](Scenario &s) -> double & { return s.tx_orientation.elevation; }));
        k.push_back(real_key("rx_orientation_az_rad", 0, [](Scenario &s) -> double & { return s.rx_orientation.azimuth; }));
        k.push_back(
            real_key("rx_orientation_el_rad", 0, [](Scenario &s) -> double & { return s.rx_orientation.elevation; }));
        k.push_back({"omni_v_gain", [](Scenario &s, const std::string &v) { s.omni_v_gain = parse_real(v); },
                     [](const Scenario &s) { return render_scaled(s.omni_v_gain.real(), 0); }});
        k.push_back({"omni_h_gain", [](Scenario &s, const std::string &v) { s.omni_h_gain = parse_real(v); },
                     [](const Scenario &s) { return render_scaled(s.omni_h_gain.real(), 0); }});

        k.push_back(real_key("time_step_ms", -3, [](Scenario &s) -> double & { return s.time_step; }));
        k.push_back(size_key("time_count", [](Scenario &s) -> std::size_t & { return s.time_count; }));
        k.push_back(real_key("carrier_step_mhz", 6, [](Scenario &s) -> double & { return s.carrier_step; }));
        k.push_back(size_key("carrier_count", [](Scenario &s) -> std::size_t & { return s.carrier_count; }));
        k.push_back(size_key("comb_points", [](Scenario &s) -> std::size_t & { return s.comb_points; }));
        k.push_back(real_key("comb_bandwidth_ghz", 9, [](Scenario &s) -> double & { return s.comb_bandwidth; }));
        k.push_back({"stats",
                     [](Scenario &s, const std::string &v) {
                         s.stats.clear();
                         if (!v.empty())
                             s.stats = split(v, ',');
                     },
                     [](const Scenario &s) { return join(s.stats); }});

        k.push_back(real_list_key("figure_times_s", 0, [](Scenario &s) -> std::vector<double> & { return s.figure_times; }));
        k.push_back(real_list_key("figure_carriers_ghz", 9,
                                  [](Scenario &s) -> std::vector<double> & { return s.figure_carriers; }));
        k.push_back(real_key("c_th", 0, [](Scenario &s) -> double & { return s.c_th; }));
        k.push_back(size_key("interval_runs", [](Scenario &s) -> std::size_t & { return s.interval_runs; }));
        k.push_back(size_key("interval_ensemble", [](Scenario &s) -> std::size_t & { return s.interval_ensemble; }));

        k.push_back(size_key("ctf_time_count", [](Scenario &s) -> std::size_t & { return s.ctf_time_count; }));
        k.push_back(size_key("ctf_carrier_count", [](Scenario &s) -> std::size_t & { return s.ctf_carrier_count; }));
        k.push_back(size_key("memory_budget_mb", [](Scenario &s) -> std::size_t & { return s.memory_budget_mb; }));
        return k;
    }();
    return table;
}

const KeySpec *find_key(const std::string &name)
{
    for (const auto &k : key_table())
        if (k.name == name)
            return &k;
    return nullptr;
}

void apply(Scenario &s, const std::string &key, const std::string &value, const std::string &where)
{
    const KeySpec *spec = find_key(key);
    if (!spec)
        throw ConfigError(where + ": unknown key '" + key + "'");
    try
    {
        spec->set(s, value);
    }
    catch (const ConfigError &e)
    {
        throw ConfigError(where + ": key '" + key + "': " + e.what());
    }
}

void require(bool ok, const std::string &message)
{
    if (!ok)
        throw ConfigError(message);
}

} // namespace

// Library field names in validation messages are replaced by the config keys a user edits.
static std::string config_key_message(std::string msg)
{
    static const std::pair<const char *, const char *> names[] = {
        {"pmf_first_order", "n_first_order_pmf"},
        {"second_order range", "n_second_order_min/n_second_order_max"},
        {"mu_dtau_1st", "mu_dtau_1st_ns"},
        {"mu_dtau_2nd", "mu_dtau_2nd_ns"},
        {"mu_ray_1st", "mu_ray_1st_ns"},
        {"mu_ray_2nd", "mu_ray_2nd_ns"},
        {"sigma_ray_1st", "sigma_ray_1st_rad"},
        {"sigma_ray_2nd", "sigma_ray_2nd_rad"},
        {"angle_std", "angle_std_rad"},
        {"n_tau", "n_tau_db_per_ns"},
        {"delta_a_std", "delta_a_std_db"},
        {"delta_p_los", "delta_p_los_db"},
        {"xpr_std", "xpr_std_db"},
        {"xpr_mean", "xpr_mean_db"},
    };
    for (const auto &[field, key] : names)
        if (msg.rfind(field, 0) == 0 && (msg.size() == std::strlen(field) || msg[std::strlen(field)] == ' '))
            return key + msg.substr(std::strlen(field));
    return msg;
}

void Scenario::validate() const
{
    require(has_seed, "seed is required (no default seed is used)");
    try
    {
        init.validate();
        env.pathloss.validate();
    }
    catch (const std::invalid_argument &e)
    {
        throw ConfigError(config_key_message(e.what()));
    }
    require(ensemble >= 1, "ensemble must be >= 1");
    require(theory_rays >= 1, "theory_rays must be >= 1");
    require(env.f0 > 0.0, "f0_ghz must be > 0");
    require(env.initial_offset.x > 0.0, "d0_m must be > 0");
    require(std::isfinite(evolution.rho_mu), "rho_mu must be finite");
    require(std::isfinite(evolution.rho_sigma), "rho_sigma must be finite");
    require(rx_speed >= 0.0, "rx_speed_mps must be >= 0");
    require(tx_speed >= 0.0, "tx_speed_mps must be >= 0");
    require(n_tx >= 1, "n_tx must be >= 1");
    require(n_rx >= 1, "n_rx must be >= 1");
    require(element_spacing_lambda0 > 0.0, "element_spacing_lambda0 must be > 0");
    require(time_step > 0.0, "time_step_ms must be > 0");
    require(time_count >= 1, "time_count must be >= 1");
    require(carrier_step > 0.0, "carrier_step_mhz must be > 0");
    require(carrier_count >= 1, "carrier_count must be >= 1");
    require(comb_points >= 1, "comb_points must be >= 1");
    require(comb_bandwidth > 0.0, "comb_bandwidth_ghz must be > 0");
    require(!figure_times.empty(), "figure_times_s must list at least one time");
    for (double t : figure_times)
        require(t >= 0.0, "figure_times_s entries must be >= 0");
    require(!figure_carriers.empty(), "figure_carriers_ghz must list at least one carrier");
    for (double f : figure_carriers)
        require(f > 0.0, "figure_carriers_ghz entries must be > 0");
    require(c_th > 0.0 && c_th < 1.0, "c_th must lie in (0, 1)");
    require(interval_runs >= 1, "interval_runs must be >= 1");
    require(interval_ensemble >= 1, "interval_ensemble must be >= 1");
    require(ctf_time_count >= 1 && ctf_time_count <= time_count, "ctf_time_count must lie in [1, time_count]");
    require(ctf_carrier_count >= 1 && ctf_carrier_count <= carrier_count,
            "ctf_carrier_count must lie in [1, carrier_count]");
    require(memory_budget_mb >= 1, "memory_budget_mb must be >= 1");
    static const std::set<std::string> known{"acf", "ccf", "fcf", "psd", "k"};
    for (const auto &name : stats)
        require(known.count(name) == 1, "stats entry '" + name + "' is not one of acf, ccf, fcf, psd, k");
}

double Scenario::element_spacing() const { return element_spacing_lambda0 * kSpeedOfLight / env.f0; }

ArrayPair Scenario::arrays() const
{
    const Vec3 v_rx = rx_speed * angles_to_unit_vector(rx_direction);
    const Vec3 v_tx = tx_speed * angles_to_unit_vector(tx_direction);
    return {make_ula(n_tx, element_spacing(), tx_orientation, v_tx),
            make_ula(n_rx, element_spacing(), rx_orientation, v_rx)};
}

Link Scenario::link() const
{
    Link l;
    l.arrays = arrays();
    l.tx_pattern = AntennaPattern::omni(omni_v_gain, omni_h_gain);
    l.rx_pattern = AntennaPattern::omni(omni_v_gain, omni_h_gain);
    return l;
}

std::vector<double> Scenario::comb() const { return frequency_comb(comb_points, comb_bandwidth); }

Scenario parse_scenario(const std::string &text, const std::string &origin, const std::vector<std::string> &overrides)
{
    Scenario s;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const std::string body = trim(line);
        if (body.empty())
            continue;
        const std::string where = origin + ":" + std::to_string(line_no);
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where + ": expected 'key = value'");
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        if (!seen.insert(key).second)
            throw ConfigError(where + ": key '" + key + "' set twice");

        if (key == "absorption_table_file")
        {
            std::filesystem::path p(value);
            if (p.is_relative())
                p = std::filesystem::path(origin).parent_path() / p;
            try
            {
                s.env.pathloss.absorption_table = load_absorption_table(p.string());
            }
            catch (const std::exception &e)
            {
                throw ConfigError(where + ": key 'absorption_table_file': " + e.what());
            }
            continue;
        }
        apply(s, key, value, where);
    }
    for (const auto &ov : overrides)
    {
        const auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw ConfigError("override '" + ov + "': expected key=value");
        apply(s, trim(std::string_view(ov).substr(0, eq)), trim(std::string_view(ov).substr(eq + 1)),
              "override '" + ov + "'");
    }
    s.validate();
    return s;
}

Scenario load_scenario(const std::string &path, const std::vector<std::string> &overrides)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open scenario file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), path, overrides);
}

std::string serialize_scenario(const Scenario &s)
{
    std::string out;
    for (const auto &k : key_table())
    {
        const std::string v = k.get(s);
        if (k.name == "seed" && !s.has_seed)
            continue;
        out += k.name + " = " + v + "\n";
    }
    return out;
}

std::string sha256_hex(const std::string &data)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 computation failed.");
    static const char *hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i)
    {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

std::string scenario_hash(const Scenario &s) { return sha256_hex(serialize_scenario(s)); }

std::vector<std::string> scenario_keys()
{
    std::vector<std::string> out;
    for (const auto &k : key_table())
        out.push_back(k.name);
    out.push_back("absorption_table_file");
    return out;
}

} // namespace thz
