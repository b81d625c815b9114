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

#ifndef THZCHAN_PATHLOSS_HPP
#define THZCHAN_PATHLOSS_HPP

#include <string>
#include <vector>

namespace thz
{

struct AbsorptionPoint
{
    double frequency_hz = 0.0;
    double db_per_km = 0.0;
};

// Free-space loss plus a distance-proportional absorption term interpolated
// from a frequency table. The default table is a flat 10 dB/km placeholder
// over 300-400 GHz; it is not a molecular absorption model.
struct PathlossModel
{
    std::vector<AbsorptionPoint> absorption_table{{300e9, 10.0}, {400e9, 10.0}};
    double shadowing_sigma_db = 0.0;

    // Linear interpolation, clamped to the table's end points.
    double absorption_db_per_km(double frequency_hz) const;
    void validate() const;
};

// 20 log10(4 pi D / lambda) + D * a(f) / 1000 + shadow_db
double path_loss_db(double distance_m, double frequency_hz, const PathlossModel &model, double shadow_db = 0.0);

// Loss in dB to linear power gain.
double loss_db_to_gain(double loss_db);

// Two-column CSV: frequency in GHz, attenuation in dB/km. '#' starts a comment.
std::vector<AbsorptionPoint> load_absorption_table(const std::string &path);

} // namespace thz

#endif
