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

#ifndef THZCHAN_SCENARIO_HPP
#define THZCHAN_SCENARIO_HPP

#include "thzchan/ctf.hpp"
#include "thzchan/evolution.hpp"
#include "thzchan/init.hpp"

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace thz
{

// Raised for unreadable, malformed or out-of-range scenario files.
class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Complete description of a simulation run.
///
/// Every field maps to one key of the flat scenario file; key names carry
/// their units (for example `mu_dtau_1st_ns`), while the struct stores SI
/// units.
struct Scenario
{
    InitConfig init{};
    DropEnvironment env{};
    EvolutionSettings evolution{};
    bool has_seed = false;

    std::size_t ensemble = 100;
    std::size_t theory_rays = 2000; // large-M reference for the theoretical curves

    // Motion; the Tx is static unless tx_speed_mps is set.
    double rx_speed = 0.1;
    AnglePair rx_direction{kPi / 3.0, 0.0};
    double tx_speed = 0.0;
    AnglePair tx_direction{};

    // Uniform linear arrays, spacing in wavelengths at f0.
    std::size_t n_tx = 16;
    std::size_t n_rx = 16;
    double element_spacing_lambda0 = 0.5;
    AnglePair tx_orientation{};
    AnglePair rx_orientation{};
    cdouble omni_v_gain{1.0, 0.0};
    cdouble omni_h_gain{0.0, 0.0};

    // Statistics grids.
    double time_step = 1e-3;
    std::size_t time_count = 101;
    double carrier_step = 10e6;
    std::size_t carrier_count = 51;
    std::size_t comb_points = 512;
    double comb_bandwidth = 2e9;
    std::vector<std::string> stats{"acf", "ccf", "fcf", "psd", "k"};

    // Figure recipes.
    std::vector<double> figure_times{0.0, 5.0, 10.0};
    std::vector<double> figure_carriers{300e9, 325e9, 350e9};
    double c_th = 0.9;
    std::size_t interval_runs = 100;
    std::size_t interval_ensemble = 10;

    // Stored tensors (generate verb).
    std::size_t ctf_time_count = 1;
    std::size_t ctf_carrier_count = 1;
    std::size_t memory_budget_mb = 2048;

    void validate() const;

    ArrayPair arrays() const;
    Link link() const;
    double element_spacing() const;
    std::vector<double> comb() const;
};

// Parses scenario text. `origin` is used in diagnostics and to resolve a
// relative absorption_table_file. Overrides are "key=value" strings applied
// after the file, in order.
Scenario parse_scenario(const std::string &text, const std::string &origin = "<string>",
                        const std::vector<std::string> &overrides = {});
Scenario load_scenario(const std::string &path, const std::vector<std::string> &overrides = {});

// Canonical text: every key in a fixed order with round-trip number
// formatting. Parsing it yields the same scenario.
std::string serialize_scenario(const Scenario &s);

// Lower-case hex SHA-256 of the canonical text.
std::string scenario_hash(const Scenario &s);
std::string sha256_hex(const std::string &data);

// Keys accepted by the parser, in canonical order.
std::vector<std::string> scenario_keys();

} // namespace thz

#endif
