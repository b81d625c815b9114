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

// Command-line front end: generate, stats, figure, validate-config.

#include "thzchan/ctf_io.hpp"
#include "thzchan/montecarlo.hpp"
#include "thzchan/scenario.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace
{

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Common
{
    std::string scenario;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> ensemble;
    std::string out = "run";
    std::vector<std::string> overrides;
    bool paper_scale = false;
    std::size_t jobs = 0;
};

void add_common(CLI::App *cmd, Common &c, bool need_scenario = true)
{
    auto *opt = cmd->add_option("--scenario", c.scenario, "Scenario file (key = value)");
    if (need_scenario)
        opt->required();
    cmd->add_option("--seed", c.seed, "Override the scenario seed");
    cmd->add_option("--ensemble", c.ensemble, "Override the number of drops");
    cmd->add_option("--out", c.out, "Output directory")->capture_default_str();
    cmd->add_option("--override", c.overrides, "key=value applied after the scenario file (repeatable)");
    cmd->add_flag("--paper-scale", c.paper_scale, "Lift the tensor memory guard");
    cmd->add_option("--jobs", c.jobs, "Worker threads (0 = all cores)")->capture_default_str();
}

thz::Scenario load(const Common &c)
{
    std::vector<std::string> ov = c.overrides;
    if (c.seed)
        ov.push_back("seed=" + std::to_string(*c.seed));
    if (c.ensemble)
        ov.push_back("ensemble=" + std::to_string(*c.ensemble));
    return thz::load_scenario(c.scenario, ov);
}

thz::RunOptions options(const Common &c)
{
    thz::RunOptions o;
    o.out_dir = c.out;
    o.paper_scale = c.paper_scale;
    o.workers = c.jobs;
    return o;
}

void report(const thz::RunManifest &m, const std::string &out)
{
    std::cout << "config hash " << m.config_hash << "\n"
              << m.completed_drops.size() << " drops (" << m.resumed_drops << " resumed), "
              << m.stat_outputs.size() << " statistics files under " << out << "\n";
}

// Hash recorded next to stored containers, if any.
std::string sidecar_hash(const std::string &dir)
{
    for (const auto &e : std::filesystem::directory_iterator(dir))
    {
        if (e.path().extension() != ".json")
            continue;
        std::ifstream in(e.path());
        try
        {
            const auto j = nlohmann::json::parse(in);
            if (j.contains("config_hash"))
                return j["config_hash"].get<std::string>();
        }
        catch (const std::exception &)
        {
        }
    }
    return {};
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"thzsim: THz space-time-frequency non-stationary MIMO channel simulator"};
    app.require_subcommand(1);

    Common gen, st, fig, val;
    std::string from_dir, figure_name;

    auto *generate = app.add_subcommand("generate", "Generate drops and store CTF tensors under <out>/ctf");
    add_common(generate, gen);

    auto *stats = app.add_subcommand("stats", "Compute statistics inline or from stored tensors");
    add_common(stats, st, false);
    stats->add_option("--from", from_dir, "Directory of stored .ctf containers");

    auto *figure = app.add_subcommand("figure", "Reproduce a figure's data (fig4-acf, fig5-ccf, fig6-fcf, fig7-ccdf)");
    figure->add_option("name", figure_name, "Figure name")->required();
    add_common(figure, fig);

    auto *validate = app.add_subcommand("validate-config", "Parse and validate a scenario, print its canonical form");
    add_common(validate, val);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try
    {
        if (*validate)
        {
            const thz::Scenario s = load(val);
            thz::check_memory_budget(s, val.paper_scale);
            std::cout << thz::serialize_scenario(s) << "# config hash " << thz::scenario_hash(s) << "\n";
        }
        else if (*generate)
        {
            const thz::Scenario s = load(gen);
            const auto m = thz::generate_tensors(s, options(gen));
            std::cout << "config hash " << m.config_hash << "\n"
                      << m.completed_drops.size() << " containers (" << m.resumed_drops << " resumed) under "
                      << gen.out << "/ctf\n";
        }
        else if (*stats)
        {
            if (!from_dir.empty())
            {
                std::string hash = sidecar_hash(from_dir);
                if (!st.scenario.empty())
                    hash = thz::scenario_hash(load(st));
                const auto files = thz::stats_from_tensors(from_dir, st.out, hash);
                std::cout << files.size() << " statistics files under " << st.out << "\n";
            }
            else
            {
                if (st.scenario.empty())
                    throw thz::ConfigError("stats needs --scenario or --from");
                const thz::Scenario s = load(st);
                thz::check_memory_budget(s, st.paper_scale);
                report(thz::run_montecarlo(s, options(st)), st.out);
            }
        }
        else if (*figure)
        {
            const thz::Scenario s = load(fig);
            thz::check_memory_budget(s, fig.paper_scale);
            report(thz::reproduce_figure(figure_name, s, options(fig)), fig.out);
        }
    }
    catch (const thz::ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
