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

#ifndef THZCHAN_MONTECARLO_HPP
#define THZCHAN_MONTECARLO_HPP

#include "thzchan/scenario.hpp"
#include "thzchan/stats.hpp"

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace thz
{

// Raised when a run would exceed the configured tensor memory budget.
class BudgetError : public ConfigError
{
public:
    using ConfigError::ConfigError;
};

// Runs fn(i) for i in [0, n) on up to `workers` threads (0 = hardware
// concurrency). The first exception thrown by any task is rethrown.
template <class Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn fn)
{
    if (workers == 0)
        workers = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    workers = std::min(workers, n);
    if (workers <= 1)
    {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++)
            {
                try
                {
                    fn(i);
                }
                catch (...)
                {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                    next = n;
                }
            }
        });
    for (auto &t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

struct RunOptions
{
    std::string out_dir = "run";
    bool paper_scale = false; // lifts the memory guard
    bool write_ctf = false;   // store raw tensors under ctf/
    std::size_t workers = 0;
};

struct RunManifest
{
    std::string config_hash;
    std::string scenario_text;
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> drops;           // drop indices, all derived from `seed`
    std::vector<std::string> drop_outputs;      // per-drop files, relative to the run directory
    std::vector<std::string> stat_outputs;      // statistics files, relative to the run directory
    std::vector<std::uint64_t> completed_drops;
    std::size_t resumed_drops = 0;
    bool complete = false;
    double elapsed_seconds = 0.0;

    std::string to_json() const;
};

std::string software_version();

// Tensor bytes of one drop for the stored-tensor grid of `s`; throws
// BudgetError above the budget unless paper_scale is set.
std::size_t check_memory_budget(const Scenario &s, bool paper_scale);

// Scenario drop settings.
ChannelRealization scenario_drop(const Scenario &s, std::uint64_t drop_index, std::size_t rays_per_cluster);

// Channel vector over all Rx elements for Tx element p at (t, fi), evaluated
// at absolute frequency f. Omni links take a shortcut that sums each
// cluster's rays once and reuses the sum for every Rx element.
std::vector<cdouble> rx_snapshot(const ChannelRealization &drop, const Link &link, std::size_t p, double t, double fi,
                                 double f, const EvolutionSettings &settings);

/// Per-drop partial results. Curves hold one LagSums per lag.
struct DropContribution
{
    std::uint64_t drop = 0;
    std::map<std::string, std::vector<LagSums>> curves;
    std::vector<double> psd;  // IDFT delay PSD over the comb
    double ctf_power = 0.0;   // mean |H|^2 over the comb
    double ricean_k = 0.0;

    std::string to_json(const std::string &config_hash) const;
    // Returns false when the text is unreadable or was written for another hash.
    static bool from_json(const std::string &text, const std::string &config_hash, DropContribution &out);
};

DropContribution compute_contribution(const Scenario &s, std::uint64_t drop_index);

// Inline statistics run: every drop in [0, ensemble), reduction in drop
// order, outputs under <out>/stats. Drops whose contribution file exists with
// the same config hash are loaded instead of recomputed.
RunManifest run_montecarlo(const Scenario &s, const RunOptions &opt);

// Writes one CTF container per drop under <out>/ctf.
RunManifest generate_tensors(const Scenario &s, const RunOptions &opt);

// Statistics from stored containers (direct estimator, IDFT delay PSD).
std::vector<std::string> stats_from_tensors(const std::string &ctf_dir, const std::string &out_dir,
                                            const std::string &config_hash);

// Figure curve sets, computed without touching the file system.
struct FigureCurves
{
    std::vector<std::string> names;
    std::vector<CorrelationCurve> curves;
};

FigureCurves figure4_acf(const Scenario &s, std::size_t workers = 0);
FigureCurves figure5_ccf(const Scenario &s, std::size_t workers = 0);
FigureCurves figure6_fcf(const Scenario &s, std::size_t workers = 0);

// Frequency-domain stationary intervals, one sample per Monte Carlo run and
// carrier; outer index follows figure_carriers.
std::vector<std::vector<StationaryIntervalSample>> figure7_intervals(const Scenario &s, std::size_t workers = 0);

std::vector<std::string> figure_names();

// Writes the CSV/JSON files of a figure under <out>/stats plus a manifest.
RunManifest reproduce_figure(const std::string &name, const Scenario &s, const RunOptions &opt);

double median(std::vector<double> v);

} // namespace thz

#endif
