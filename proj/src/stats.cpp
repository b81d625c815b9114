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

#include "thzchan/stats.hpp"

#include "json.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace thz
{

double DelayPsd::total() const { return std::accumulate(power.begin(), power.end(), 0.0); }

DelayPsd delay_psd(std::span<const Tap> taps, double bin_width)
{
    if (bin_width < 0.0)
        throw std::invalid_argument("Delay bin width must be non-negative.");
    // Ordered map keeps bins sorted and merges identical keys.
    std::map<double, double> bins;
    std::map<long long, double> indexed;
    for (const Tap &tap : taps)
    {
        if (tap.delay < 0.0)
            throw std::invalid_argument("Tap delays must be non-negative.");
        const double p = std::norm(tap.amplitude);
        if (bin_width == 0.0)
            bins[tap.delay] += p;
        else
            indexed[static_cast<long long>(std::floor(tap.delay / bin_width))] += p;
    }
    DelayPsd out;
    if (bin_width == 0.0)
    {
        for (const auto &[delay, p] : bins)
        {
            out.delay_bins.push_back(delay);
            out.power.push_back(p);
        }
    }
    else
    {
        for (const auto &[k, p] : indexed)
        {
            out.delay_bins.push_back(static_cast<double>(k) * bin_width);
            out.power.push_back(p);
        }
    }
    return out;
}

DelayPsd delay_psd_from_ctf(std::span<const cdouble> ctf, double comb_spacing_hz)
{
    if (ctf.empty())
        throw std::invalid_argument("CTF sample list must be non-empty.");
    if (!(comb_spacing_hz > 0.0))
        throw std::invalid_argument("Comb spacing must be positive.");
    const std::size_t n = ctf.size();

    std::vector<cdouble> in(ctf.begin(), ctf.end());
    std::vector<cdouble> out(n);
    {
        // FFTW planning is not thread-safe.
        static std::mutex planner;
        std::lock_guard lock(planner);
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex *>(in.data()),
                                          reinterpret_cast<fftw_complex *>(out.data()), FFTW_BACKWARD, FFTW_ESTIMATE);
        fftw_execute(plan);
        fftw_destroy_plan(plan);
    }

    DelayPsd psd;
    psd.delay_bins.resize(n);
    psd.power.resize(n);
    const double scale = 1.0 / static_cast<double>(n);
    const double resolution = 1.0 / (static_cast<double>(n) * comb_spacing_hz);
    for (std::size_t l = 0; l < n; ++l)
    {
        psd.delay_bins[l] = static_cast<double>(l) * resolution;
        psd.power[l] = std::norm(out[l] * scale);
    }
    return psd;
}

LagSums &LagSums::operator+=(const LagSums &o)
{
    cross += o.cross;
    power_base += o.power_base;
    power_shift += o.power_shift;
    los_cross += o.los_cross;
    los_base += o.los_base;
    los_shift += o.los_shift;
    nlos_cross += o.nlos_cross;
    nlos_base += o.nlos_base;
    nlos_shift += o.nlos_shift;
    count += o.count;
    return *this;
}

cdouble LagSums::raw(Estimator e) const
{
    if (count == 0)
        return {};
    const double n = static_cast<double>(count);
    if (e == Estimator::Direct)
        return cross / n;
    return (los_cross + nlos_cross) / n;
}

namespace
{

cdouble ratio(cdouble num, double a, double b)
{
    const double den = std::sqrt(a * b);
    return den > 0.0 ? num / den : cdouble{};
}

} // namespace

cdouble LagSums::normalized(Estimator e) const
{
    if (e == Estimator::Direct)
        return ratio(cross, power_base, power_shift);

    const cdouble r_los = ratio(los_cross, los_base, los_shift);
    const cdouble r_nlos = ratio(nlos_cross, nlos_base, nlos_shift);
    if (nlos_base <= 0.0)
        return r_los;
    const double k = los_base / nlos_base;
    return (k / (k + 1.0)) * r_los + (1.0 / (k + 1.0)) * r_nlos;
}

LagSums correlate_values(cdouble h_base, cdouble h_shifted)
{
    LagSums s;
    s.cross = h_base * std::conj(h_shifted);
    s.power_base = std::norm(h_base);
    s.power_shift = std::norm(h_shifted);
    s.count = 1;
    return s;
}

std::vector<cdouble> tap_values(const Cir &cir, double f)
{
    std::vector<cdouble> out(cir.taps.size());
    for (std::size_t i = 0; i < cir.taps.size(); ++i)
        out[i] = cir.taps[i].amplitude * std::polar(1.0, -2.0 * kPi * f * cir.taps[i].delay);
    return out;
}

LagSums correlate_taps(const Cir &layout, std::span<const cdouble> base, std::span<const cdouble> shifted)
{
    if (base.size() != layout.taps.size() || shifted.size() != layout.taps.size())
        throw std::invalid_argument("Correlated impulse responses must come from the same drop.");
    LagSums s;
    cdouble h_b{}, h_s{};
    for (std::size_t i = 0; i < base.size(); ++i)
    {
        const cdouble vb = base[i];
        const cdouble vs = shifted[i];
        h_b += vb;
        h_s += vs;
        const cdouble c = vb * std::conj(vs);
        if (layout.taps[i].cluster < 0)
        {
            s.los_cross += c;
            s.los_base += std::norm(vb);
            s.los_shift += std::norm(vs);
        }
        else
        {
            s.nlos_cross += c;
            s.nlos_base += std::norm(vb);
            s.nlos_shift += std::norm(vs);
        }
    }
    s.cross = h_b * std::conj(h_s);
    s.power_base = std::norm(h_b);
    s.power_shift = std::norm(h_s);
    s.count = 1;
    return s;
}

LagSums correlate_pair(const Cir &base, const Cir &shifted, double f_base, double f_shifted)
{
    if (base.taps.size() != shifted.taps.size() || base.has_los() != shifted.has_los())
        throw std::invalid_argument("Correlated impulse responses must come from the same drop.");
    const auto vb = tap_values(base, f_base);
    const auto vs = tap_values(shifted, f_shifted);
    return correlate_taps(base, vb, vs);
}

std::vector<double> CorrelationCurve::magnitude() const
{
    std::vector<double> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(), [](cdouble v) { return std::abs(v); });
    return out;
}

CorrelationCurve make_curve(std::vector<double> lags, std::string unit, std::span<const LagSums> sums, Estimator e)
{
    if (lags.size() != sums.size())
        throw std::invalid_argument("Lag axis and correlation sums differ in length.");
    CorrelationCurve c;
    c.lag_unit = std::move(unit);
    c.lags = std::move(lags);
    c.estimator = e;
    for (const LagSums &s : sums)
    {
        c.raw.push_back(s.raw(e));
        c.values.push_back(s.normalized(e));
    }
    return c;
}

namespace
{

std::size_t shifted_index(std::size_t base, long shift, std::size_t extent, const char *axis)
{
    const long idx = static_cast<long>(base) + shift;
    if (idx < 0 || static_cast<std::size_t>(idx) >= extent)
        throw std::out_of_range(std::string("Shift along ") + axis + " leaves the grid.");
    return static_cast<std::size_t>(idx);
}

} // namespace

LagSums stf_sums(std::span<const CtfTensor> ensemble, const TensorIndex &base, const TensorShift &shift)
{
    if (ensemble.empty())
        throw std::invalid_argument("Correlation ensemble must be non-empty.");
    LagSums total;
    for (const CtfTensor &t : ensemble)
    {
        if (base.p >= t.n_tx() || base.q >= t.n_rx() || base.t >= t.n_t() || base.fi >= t.n_fi() || base.f >= t.n_f())
            throw std::out_of_range("Correlation base index is off the grid.");
        const std::size_t p2 = shifted_index(base.p, shift.dp, t.n_tx(), "p");
        const std::size_t q2 = shifted_index(base.q, shift.dq, t.n_rx(), "q");
        const std::size_t t2 = shifted_index(base.t, shift.dt, t.n_t(), "t");
        const std::size_t f2 = shifted_index(base.fi, shift.dfi, t.n_fi(), "fi");
        total += correlate_values(t.at(base.p, base.q, base.t, base.fi, base.f), t.at(p2, q2, t2, f2, base.f));
    }
    return total;
}

cdouble stf_correlation(std::span<const CtfTensor> ensemble, const TensorIndex &base, const TensorShift &shift,
                        bool normalized)
{
    const LagSums s = stf_sums(ensemble, base, shift);
    return normalized ? s.normalized(Estimator::Direct) : s.raw(Estimator::Direct);
}

CorrelationCurve acf(std::span<const CtfTensor> ensemble, const TensorIndex &base, std::span<const long> dt)
{
    std::vector<LagSums> sums;
    std::vector<double> lags;
    for (long d : dt)
    {
        sums.push_back(stf_sums(ensemble, base, {0, 0, d, 0}));
        const auto &times = ensemble.front().times;
        lags.push_back(times[base.t + static_cast<std::size_t>(d)] - times[base.t]);
    }
    return make_curve(std::move(lags), "s", sums, Estimator::Direct);
}

CorrelationCurve ccf(std::span<const CtfTensor> ensemble, const TensorIndex &base,
                     std::span<const std::pair<long, long>> dpq)
{
    std::vector<LagSums> sums;
    std::vector<double> lags;
    const bool tx_side = std::all_of(dpq.begin(), dpq.end(), [](const auto &s) { return s.second == 0; }) &&
                         std::any_of(dpq.begin(), dpq.end(), [](const auto &s) { return s.first != 0; });
    for (const auto &[dp, dq] : dpq)
    {
        sums.push_back(stf_sums(ensemble, base, {dp, dq, 0, 0}));
        lags.push_back(static_cast<double>(tx_side ? dp : dq));
    }
    return make_curve(std::move(lags), tx_side ? "tx elements" : "rx elements", sums, Estimator::Direct);
}

CorrelationCurve fcf(std::span<const CtfTensor> ensemble, const TensorIndex &base, std::span<const long> dfi)
{
    std::vector<LagSums> sums;
    std::vector<double> lags;
    for (long d : dfi)
    {
        sums.push_back(stf_sums(ensemble, base, {0, 0, 0, d}));
        const auto &carriers = ensemble.front().carriers;
        lags.push_back(carriers[base.fi + static_cast<std::size_t>(d)] - carriers[base.fi]);
    }
    return make_curve(std::move(lags), "Hz", sums, Estimator::Direct);
}

double ricean_k(const Cir &cir)
{
    if (!cir.has_los())
        throw std::invalid_argument("Ricean K requires a LOS component.");
    double nlos = 0.0;
    for (std::size_t i = 1; i < cir.taps.size(); ++i)
        nlos += std::norm(cir.taps[i].amplitude);
    const double los = std::norm(cir.taps.front().amplitude);
    return nlos > 0.0 ? los / nlos : std::numeric_limits<double>::infinity();
}

double ricean_k(const ChannelRealization &drop) { return drop.ricean_k; }

double cmd_similarity(const Eigen::MatrixXcd &r1, const Eigen::MatrixXcd &r2)
{
    if (r1.rows() != r1.cols() || r2.rows() != r2.cols() || r1.rows() != r2.rows())
        throw std::invalid_argument("CMD needs two square matrices of equal dimension.");
    const double n1 = r1.norm();
    const double n2 = r2.norm();
    if (!(n1 > 0.0) || !(n2 > 0.0))
        throw std::invalid_argument("CMD is undefined for a zero-norm correlation matrix.");
    const double trace = (r1.cwiseProduct(r2.transpose())).sum().real();
    return trace / (n1 * n2);
}

Eigen::MatrixXcd spatial_covariance(std::span<const Eigen::VectorXcd> samples)
{
    if (samples.empty())
        throw std::invalid_argument("Covariance needs at least one sample.");
    const auto dim = samples.front().size();
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto &h : samples)
    {
        if (h.size() != dim)
            throw std::invalid_argument("Covariance samples differ in dimension.");
        r.noalias() += h * h.adjoint();
    }
    return r / static_cast<double>(samples.size());
}

StationaryIntervalSample stationary_interval(std::span<const Eigen::MatrixXcd> matrices, double step, double c_th,
                                             IntervalDomain domain)
{
    if (!(c_th > 0.0 && c_th < 1.0))
        throw std::invalid_argument("Stationarity threshold must lie in (0, 1).");
    if (matrices.size() < 2)
        throw std::invalid_argument("Stationary interval needs a base and at least one shifted matrix.");
    if (!(step > 0.0))
        throw std::invalid_argument("Grid step must be positive.");

    StationaryIntervalSample out;
    out.domain = domain;
    out.c_th = c_th;
    std::size_t steps = 0;
    bool intact = true;
    for (std::size_t k = 1; k < matrices.size(); ++k)
    {
        const double s = cmd_similarity(matrices[0], matrices[k]);
        out.similarity.push_back(s);
        if (intact && s >= c_th)
            steps = k;
        else
            intact = false;
    }
    if (steps == 0)
    {
        out.below_threshold = true;
        steps = 1;
    }
    out.interval = static_cast<double>(steps) * step;
    return out;
}

std::vector<CcdfPoint> ccdf(std::span<const double> samples)
{
    if (samples.empty())
        throw std::invalid_argument("CCDF needs at least one sample.");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    std::vector<CcdfPoint> out;
    for (std::size_t i = 0; i < sorted.size();)
    {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i])
            ++j;
        out.push_back({sorted[i], static_cast<double>(sorted.size() - j) / n});
        i = j;
    }
    return out;
}

double ccdf_at(std::span<const double> samples, double x)
{
    if (samples.empty())
        throw std::invalid_argument("CCDF needs at least one sample.");
    const auto above = std::count_if(samples.begin(), samples.end(), [x](double s) { return s > x; });
    return static_cast<double>(above) / static_cast<double>(samples.size());
}

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_curve_csv(const std::string &path, const CorrelationCurve &curve)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw std::runtime_error("Cannot open '" + path + "' for writing.");
    out << "lag,real,imag,magnitude\n";
    for (std::size_t i = 0; i < curve.lags.size(); ++i)
        out << format_double(curve.lags[i]) << ',' << format_double(curve.values[i].real()) << ','
            << format_double(curve.values[i].imag()) << ',' << format_double(std::abs(curve.values[i])) << '\n';
    if (!out)
        throw std::runtime_error("Write to '" + path + "' failed.");
}

std::string curve_to_json(const CorrelationCurve &curve, const std::string &config_hash,
                          std::span<const std::uint64_t> seeds, std::size_t ensemble)
{
    nlohmann::json j;
    j["lag_unit"] = curve.lag_unit;
    j["estimator"] = curve.estimator == Estimator::Direct ? "direct" : "decomposed";
    j["normalized"] = true;
    j["lags"] = curve.lags;
    std::vector<double> re, im, raw_re, raw_im;
    for (std::size_t i = 0; i < curve.values.size(); ++i)
    {
        re.push_back(curve.values[i].real());
        im.push_back(curve.values[i].imag());
        raw_re.push_back(curve.raw[i].real());
        raw_im.push_back(curve.raw[i].imag());
    }
    j["real"] = re;
    j["imag"] = im;
    j["magnitude"] = curve.magnitude();
    j["raw_real"] = raw_re;
    j["raw_imag"] = raw_im;
    j["config_hash"] = config_hash;
    j["seeds"] = std::vector<std::uint64_t>(seeds.begin(), seeds.end());
    j["ensemble"] = ensemble;
    return j.dump(2) + "\n";
}

void write_ccdf_csv(const std::string &path, std::span<const CcdfPoint> points)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw std::runtime_error("Cannot open '" + path + "' for writing.");
    out << "value,ccdf\n";
    for (const auto &p : points)
        out << format_double(p.value) << ',' << format_double(p.probability) << '\n';
}

} // namespace thz
