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

#ifndef THZCHAN_CTF_IO_HPP
#define THZCHAN_CTF_IO_HPP

#include "thzchan/ctf.hpp"

#include <cstdint>
#include <string>

namespace thz
{

/// Binary CTF container, all fields little-endian:
///
///   char[8]   magic "THZCTF01"
///   u64[5]    n_tx, n_rx, n_t, n_fi, n_f
///   f64[...]  axes in that order: tx element indices, rx element indices,
///             times (s), carriers (Hz), carrier offsets (Hz)
///   f64[2*N]  payload, interleaved (re, im), p-major then q, t, fi, f
///
/// Readers reject truncated files and trailing bytes.
void write_ctf(const std::string &path, const CtfTensor &tensor);
CtfTensor read_ctf(const std::string &path);

// JSON sidecar describing a container: format tag, dimensions, config hash and seed.
void write_ctf_sidecar(const std::string &path, const CtfTensor &tensor, const std::string &config_hash,
                       std::uint64_t seed, std::uint64_t drop_index);

} // namespace thz

#endif
