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

#include "thzchan/pathloss.hpp"

#include "thzchan/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace thz
{

double PathlossModel::absorption_db_per_km(double frequency_hz) const
{
    if (absorption_table.empty())
        return 0.0;
    if (frequency_hz <= absorption_table.front().frequency_hz)
        return absorption_table.front().db_per_km;
    if (frequency_hz >= absorption_table.back().frequency_hz)
        return absorption_table.back().db_per_km;
    auto hi = std::upper_bound(absorption_table.begin(), absorption_table.end(), frequency_hz,
                               [](double f, const AbsorptionPoint &p) { return f < p.frequency_hz; });
    auto lo = hi - 1;
    const double w = (frequency_hz - lo->frequency_hz) / (hi->frequency_hz - lo->frequency_hz);
    return lo->db_per_km + w * (hi->db_per_km - lo->db_per_km);
}

void PathlossModel::validate() const
{
    for (std::size_t i = 0; i < absorption_table.size(); ++i)
    {
        const auto &p = absorption_table[i];
        if (!(p.frequency_hz > 0.0))
            throw std::invalid_argument("Absorption table frequencies must be positive.");
        if (!(p.db_per_km >= 0.0))
            throw std::invalid_argument("Absorption table attenuation must be non-negative.");
        if (i > 0 && !(p.frequency_hz > absorption_table[i - 1].frequency_hz))
            throw std::invalid_argument("Absorption table must be sorted by strictly increasing frequency.");
    }
    if (!(shadowing_sigma_db >= 0.0))
        throw std::invalid_argument("Shadowing sigma must be non-negative.");
}

double path_loss_db(double distance_m, double frequency_hz, const PathlossModel &model, double shadow_db)
{
    if (!(distance_m > 0.0))
        throw GeometryError("Path loss distance must be positive.");
    if (!(frequency_hz > 0.0))
        throw std::invalid_argument("Path loss frequency must be positive.");
    const double lambda = kSpeedOfLight / frequency_hz;
    const double fspl = 20.0 * std::log10(4.0 * kPi * distance_m / lambda);
    return fspl + distance_m * model.absorption_db_per_km(frequency_hz) / 1000.0 + shadow_db;
}

double loss_db_to_gain(double loss_db) { return std::pow(10.0, -loss_db / 10.0); }

std::vector<AbsorptionPoint> load_absorption_table(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("Cannot open absorption table '" + path + "'.");
    std::vector<AbsorptionPoint> table;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double f_ghz = 0.0, att = 0.0;
        if (!(ss >> f_ghz))
            continue;
        if (!(ss >> att))
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected '<GHz>, <dB/km>'.");
        table.push_back({f_ghz * 1e9, att});
    }
    PathlossModel check{table, 0.0};
    check.validate();
    return table;
}

} // namespace thz
