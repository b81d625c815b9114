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

#include "thzchan/geometry.hpp"

#include <algorithm>
#include <string>

namespace thz
{

double wrap_azimuth(double angle)
{
    if (angle > -kPi && angle <= kPi)
        return angle;
    double wrapped = std::remainder(angle, 2.0 * kPi); // [-pi, pi]
    if (wrapped <= -kPi)
        wrapped += 2.0 * kPi;
    return wrapped;
}

double reflect_elevation(double angle)
{
    const double half_pi = 0.5 * kPi;
    if (angle >= -half_pi && angle <= half_pi)
        return angle;
    const double a = wrap_azimuth(angle);
    if (a > half_pi)
        return kPi - a;
    if (a < -half_pi)
        return -kPi - a;
    return a;
}

const Vec3 &ArrayGeometry::offset(std::size_t index) const
{
    if (index >= element_offsets.size())
        throw std::out_of_range("Antenna element index " + std::to_string(index) + " out of range (array has " +
                                std::to_string(element_offsets.size()) + " elements).");
    return element_offsets[index];
}

void ArrayGeometry::validate() const
{
    if (element_offsets.empty())
        throw std::invalid_argument("Array must contain at least one element.");
    if (!element_offsets.front().is_zero())
        throw std::invalid_argument("First array element offset must be the origin.");
    for (const auto &e : element_offsets)
        if (!std::isfinite(e.x) || !std::isfinite(e.y) || !std::isfinite(e.z))
            throw std::invalid_argument("Array element offsets must be finite.");
}

ArrayGeometry make_ula(std::size_t elements, double spacing_m, AnglePair orientation, Vec3 velocity)
{
    if (elements == 0)
        throw std::invalid_argument("ULA needs at least one element.");
    if (!(spacing_m > 0.0))
        throw std::invalid_argument("ULA element spacing must be positive.");

    // Local y-axis expressed in the GCS.
    const AnglePair axis_local{0.5 * kPi, 0.0};
    const Vec3 axis = angles_to_unit_vector(lcs_to_gcs(axis_local, orientation));

    ArrayGeometry array;
    array.orientation = orientation;
    array.velocity = velocity;
    array.element_offsets.resize(elements);
    for (std::size_t i = 1; i < elements; ++i)
        array.element_offsets[i] = (static_cast<double>(i) * spacing_m) * axis;
    return array;
}

Vec3 los_vector(const ArrayGeometry &tx, const ArrayGeometry &rx, std::size_t p, std::size_t q, const Vec3 &initial_offset,
                double t)
{
    const Vec3 &a_tx = tx.offset(p);
    const Vec3 &a_rx = rx.offset(q);
    Vec3 d = initial_offset + a_rx - a_tx;
    if (t != 0.0)
        d += t * (rx.velocity - tx.velocity);
    return d;
}

AnglePair vector_to_angles(const Vec3 &v)
{
    const double n = v.norm();
    if (!(n > 0.0))
        throw GeometryError("Cannot derive angles from a zero-length vector.");
    const double s = std::clamp(v.z / n, -1.0, 1.0);
    AnglePair a;
    a.elevation = std::asin(s);
    a.azimuth = (v.x == 0.0 && v.y == 0.0) ? 0.0 : std::atan2(v.y, v.x);
    return a;
}

Vec3 angles_to_unit_vector(const AnglePair &a)
{
    const double ce = std::cos(a.elevation);
    return {ce * std::cos(a.azimuth), ce * std::sin(a.azimuth), std::sin(a.elevation)};
}

Vec3 initial_virtual_vector(double cluster_delay, const AnglePair &aoa)
{
    if (!(cluster_delay > 0.0))
        throw GeometryError("Cluster delay must be positive.");
    return (kSpeedOfLight * cluster_delay) * angles_to_unit_vector(aoa);
}

AnglePair gcs_to_lcs(const AnglePair &angle, const AnglePair &array_orientation)
{
    if (array_orientation.azimuth == 0.0 && array_orientation.elevation == 0.0)
        return angle;
    const Vec3 u = angles_to_unit_vector(angle);
    const double ca = std::cos(array_orientation.azimuth), sa = std::sin(array_orientation.azimuth);
    const double ce = std::cos(array_orientation.elevation), se = std::sin(array_orientation.elevation);

    const double x1 = ca * u.x + sa * u.y;
    const double y1 = -sa * u.x + ca * u.y;
    const double z1 = u.z;

    return vector_to_angles({ce * x1 + se * z1, y1, -se * x1 + ce * z1});
}

AnglePair lcs_to_gcs(const AnglePair &angle, const AnglePair &array_orientation)
{
    if (array_orientation.azimuth == 0.0 && array_orientation.elevation == 0.0)
        return angle;
    const Vec3 u = angles_to_unit_vector(angle);
    const double ca = std::cos(array_orientation.azimuth), sa = std::sin(array_orientation.azimuth);
    const double ce = std::cos(array_orientation.elevation), se = std::sin(array_orientation.elevation);

    const double x1 = ce * u.x - se * u.z;
    const double z1 = se * u.x + ce * u.z;
    const double y1 = u.y;

    return vector_to_angles({ca * x1 - sa * y1, sa * x1 + ca * y1, z1});
}

} // namespace thz
