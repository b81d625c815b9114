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

#include "thzchan/ctf_io.hpp"

#include "json.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace thz
{

namespace
{

constexpr std::array<char, 8> kMagic{'T', 'H', 'Z', 'C', 'T', 'F', '0', '1'};

std::uint64_t to_le(std::uint64_t v)
{
    if constexpr (std::endian::native == std::endian::little)
        return v;
    else
        return __builtin_bswap64(v);
}

class Writer
{
public:
    explicit Writer(const std::string &path) : out_(path, std::ios::binary | std::ios::trunc)
    {
        if (!out_)
            throw std::runtime_error("Cannot open '" + path + "' for writing.");
    }
    void bytes(const char *data, std::size_t n) { out_.write(data, static_cast<std::streamsize>(n)); }
    void u64(std::uint64_t v)
    {
        const std::uint64_t le = to_le(v);
        bytes(reinterpret_cast<const char *>(&le), sizeof le);
    }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void finish(const std::string &path)
    {
        out_.flush();
        if (!out_)
            throw std::runtime_error("Write to '" + path + "' failed.");
    }

private:
    std::ofstream out_;
};

class Reader
{
public:
    explicit Reader(const std::string &path) : path_(path), in_(path, std::ios::binary)
    {
        if (!in_)
            throw std::runtime_error("Cannot open '" + path + "'.");
    }
    void bytes(char *data, std::size_t n)
    {
        in_.read(data, static_cast<std::streamsize>(n));
        if (in_.gcount() != static_cast<std::streamsize>(n))
            throw std::runtime_error("Truncated CTF container '" + path_ + "'.");
    }
    std::uint64_t u64()
    {
        std::uint64_t le = 0;
        bytes(reinterpret_cast<char *>(&le), sizeof le);
        return to_le(le);
    }
    double f64() { return std::bit_cast<double>(u64()); }
    bool at_end() { return in_.peek() == std::char_traits<char>::eof(); }

private:
    std::string path_;
    std::ifstream in_;
};

} // namespace

void write_ctf(const std::string &path, const CtfTensor &tensor)
{
    tensor.validate();
    Writer w(path);
    w.bytes(kMagic.data(), kMagic.size());
    for (std::size_t n : {tensor.n_tx(), tensor.n_rx(), tensor.n_t(), tensor.n_fi(), tensor.n_f()})
        w.u64(n);
    for (const auto *axis : {&tensor.tx_elements, &tensor.rx_elements, &tensor.times, &tensor.carriers, &tensor.offsets})
        for (double v : *axis)
            w.f64(v);
    for (const cdouble &v : tensor.values)
    {
        w.f64(v.real());
        w.f64(v.imag());
    }
    w.finish(path);
}

CtfTensor read_ctf(const std::string &path)
{
    Reader r(path);
    std::array<char, 8> magic{};
    r.bytes(magic.data(), magic.size());
    if (magic != kMagic)
        throw std::runtime_error("'" + path + "' is not a CTF container.");

    std::array<std::uint64_t, 5> dims{};
    for (auto &d : dims)
    {
        d = r.u64();
        if (d == 0 || d > (std::uint64_t{1} << 32))
            throw std::runtime_error("Implausible CTF dimension in '" + path + "'.");
    }

    CtfTensor t;
    std::array<std::vector<double> *, 5> axes{&t.tx_elements, &t.rx_elements, &t.times, &t.carriers, &t.offsets};
    for (std::size_t a = 0; a < axes.size(); ++a)
    {
        axes[a]->resize(dims[a]);
        for (double &v : *axes[a])
            v = r.f64();
    }
    t.values.resize(t.size());
    for (cdouble &v : t.values)
    {
        const double re = r.f64();
        const double im = r.f64();
        v = {re, im};
    }
    if (!r.at_end())
        throw std::runtime_error("Trailing bytes in CTF container '" + path + "'.");
    return t;
}

void write_ctf_sidecar(const std::string &path, const CtfTensor &tensor, const std::string &config_hash,
                       std::uint64_t seed, std::uint64_t drop_index)
{
    nlohmann::json j;
    j["format"] = "THZCTF01";
    j["layout"] = "p,q,t,fi,f (p-major), interleaved re/im float64 little-endian";
    j["dims"] = {tensor.n_tx(), tensor.n_rx(), tensor.n_t(), tensor.n_fi(), tensor.n_f()};
    j["axis_units"] = {"element index", "element index", "s", "Hz", "Hz offset from carrier"};
    j["config_hash"] = config_hash;
    j["seed"] = seed;
    j["drop"] = drop_index;
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw std::runtime_error("Cannot open '" + path + "' for writing.");
    out << j.dump(2) << '\n';
}

} // namespace thz
