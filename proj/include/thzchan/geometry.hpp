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

#ifndef THZCHAN_GEOMETRY_HPP
#define THZCHAN_GEOMETRY_HPP

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace thz
{

inline constexpr double kSpeedOfLight = 299792458.0; // m/s
inline constexpr double kPi = std::numbers::pi;

// Raised when a direction is requested from a zero-length vector or a
// delay/distance is non-positive.
class GeometryError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

// 3D position (m) or velocity (m/s) in the global coordinate system.
struct Vec3
{
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3 &operator+=(const Vec3 &o)
    {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    constexpr Vec3 &operator-=(const Vec3 &o)
    {
        x -= o.x;
        y -= o.y;
        z -= o.z;
        return *this;
    }
    friend constexpr Vec3 operator+(Vec3 a, const Vec3 &b) { return a += b; }
    friend constexpr Vec3 operator-(Vec3 a, const Vec3 &b) { return a -= b; }
    friend constexpr Vec3 operator*(double s, const Vec3 &v) { return {s * v.x, s * v.y, s * v.z}; }
    friend constexpr Vec3 operator*(const Vec3 &v, double s) { return s * v; }
    friend constexpr bool operator==(const Vec3 &, const Vec3 &) = default;

    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    constexpr double dot(const Vec3 &o) const { return x * o.x + y * o.y + z * o.z; }
    bool is_zero() const { return x == 0.0 && y == 0.0 && z == 0.0; }
};

// Azimuth in (-pi, pi], elevation in [-pi/2, pi/2] measured from the xy-plane.
struct AnglePair
{
    double azimuth = 0.0;
    double elevation = 0.0;

    friend constexpr bool operator==(const AnglePair &, const AnglePair &) = default;
};

// Maps any angle onto (-pi, pi].
double wrap_azimuth(double angle);

// Mirror wrap for elevations: values beyond +-pi/2 are reflected back, so a
// symmetric distribution around 0 stays symmetric.
double reflect_elevation(double angle);

inline AnglePair wrap_angles(AnglePair a) { return {wrap_azimuth(a.azimuth), reflect_elevation(a.elevation)}; }

/// Antenna array layout. Element offsets are GCS vectors from the first
/// element (so `element_offsets[0]` is the origin); the orientation only
/// enters when converting directions into the array's local frame.
struct ArrayGeometry
{
    std::vector<Vec3> element_offsets{Vec3{}};
    AnglePair orientation{};
    Vec3 velocity{};

    std::size_t size() const { return element_offsets.size(); }
    const Vec3 &offset(std::size_t index) const;
    void validate() const;
};

// Uniform linear array along the local y-axis, rotated into the GCS by
// `orientation`.
ArrayGeometry make_ula(std::size_t elements, double spacing_m, AnglePair orientation = {}, Vec3 velocity = {});

// LOS vector from Tx element p to Rx element q at time t (t0 = 0).
//   D + A_q^R - A_p^T + (v_R - v_T) t
Vec3 los_vector(const ArrayGeometry &tx, const ArrayGeometry &rx, std::size_t p, std::size_t q, const Vec3 &initial_offset,
                double t);

// Azimuth atan2(y, x), elevation asin(z/|v|). At the poles the azimuth is 0.
AnglePair vector_to_angles(const Vec3 &v);
Vec3 angles_to_unit_vector(const AnglePair &a);

// Vector from the Tx mirror point to the Rx for a cluster of the given delay,
// pointing along the arrival direction. Fixed in the mirror frame while the Rx moves.
Vec3 initial_virtual_vector(double cluster_delay, const AnglePair &aoa);

// Rotates a GCS direction into an array's local frame: first by -psi_A about
// z, then by -psi_E about the rotated y-axis. Identity for orientation (0,0).
AnglePair gcs_to_lcs(const AnglePair &angle, const AnglePair &array_orientation);
AnglePair lcs_to_gcs(const AnglePair &angle, const AnglePair &array_orientation);

} // namespace thz

#endif
