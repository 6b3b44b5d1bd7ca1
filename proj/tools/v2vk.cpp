// SPDX-License-Identifier: Apache-2.0
//
// v2vk: time-varying K-factor analysis for vehicular fading channels
// Copyright (C) 2026 The v2vk Authors
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

// Command-line front end: synth, process, fit, report and profiles.

#include "v2vk/experiment.hpp"
#include "v2vk/io/json.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace {

void add_common(CLI::App* cmd, v2vk::ExperimentConfig& cfg, std::string& profiles) {
    cmd->add_option("--profiles", profiles, "Scenario catalog JSON replacing the built-in table")
        ->check(CLI::ExistingFile);
    cmd->add_option("--out-dir", cfg.out_dir, "Directory for output artifacts");
}

void add_grid(CLI::App* cmd, v2vk::ExperimentConfig& cfg) {
    cmd->add_option("--nc", cfg.nc, "Frequency bins per sub-band")->capture_default_str();
    cmd->add_option("--q", cfg.q, "Number of sub-bands")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sub-band K-factor analysis of vehicle-to-vehicle channels"};
    app.require_subcommand(1);

    v2vk::ExperimentConfig cfg;
    std::string profiles;
    std::string invalid_k = "exclude";
    std::size_t stride = 0;
    std::filesystem::path ctf_path;
    std::vector<std::filesystem::path> inputs;
    std::filesystem::path csv_path;
    bool no_cir = false;

    auto* synth = app.add_subcommand("synth", "Synthesize a transfer function for one scenario");
    synth->add_option("--scenario", cfg.scenario, "Scenario name from the catalog")->required();
    synth->add_option("--duration-s", cfg.duration_s, "Run duration in seconds")->capture_default_str();
    synth->add_option("--seed", cfg.seed, "64-bit master seed")->capture_default_str();
    synth->add_option("--large-scale-db", cfg.large_scale_db, "Depth of sinusoidal shadowing in dB");
    synth->add_option("--drift", cfg.drift_cycles, "Specular phase turns per K window")->capture_default_str();
    add_grid(synth, cfg);
    add_common(synth, cfg, profiles);

    auto* process = app.add_subcommand("process", "Sub-band CIRs and sliding K field from a transfer function");
    process->add_option("ctf", ctf_path, "Input .v2vctf file")->required();
    process->add_option("--scenario", cfg.scenario, "Scenario name; default taken from the synth sidecar");
    process->add_option("--stride", stride, "Window stride in snapshots (default s_k/10)");
    process->add_flag("--no-cir", no_cir, "Do not write the sub-band CIR file");
    process->add_flag("--envelope-report", cfg.envelope_report, "Write per-tap envelope fits and Weibull plot data");
    add_grid(process, cfg);
    add_common(process, cfg, profiles);

    auto* fit = app.add_subcommand("fit", "Fit the bimodal GMM to pooled K fields");
    fit->add_option("kfields", inputs, "K field CSV files")->required();
    fit->add_option("--scenario", cfg.scenario, "Reference scenario for the deltas");
    fit->add_option("--invalid-k", invalid_k, "Handling of invalid estimates")
        ->check(CLI::IsMember({"exclude", "floor"}))
        ->capture_default_str();
    add_common(fit, cfg, profiles);

    auto* report = app.add_subcommand("report", "Summary table of fit results in catalog order");
    report->add_option("fits", inputs, "fit.json files")->required();
    report->add_option("--csv", csv_path, "Also write the table as CSV");
    report->add_option("--profiles", profiles, "Scenario catalog JSON")->check(CLI::ExistingFile);

    auto* list = app.add_subcommand("profiles", "Print the scenario catalog as JSON");
    list->add_option("--profiles", profiles, "Scenario catalog JSON")->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return v2vk::exit_config;
    }

    if (!profiles.empty()) {
        cfg.profiles_file = profiles;
    }
    if (stride > 0) {
        cfg.stride = stride;
    }
    cfg.write_cir = !no_cir;
    cfg.invalid_k = invalid_k == "floor" ? v2vk::InvalidKPolicy::floor : v2vk::InvalidKPolicy::exclude;

    return v2vk::run_stage([&] {
        if (*synth) {
            const auto out = v2vk::cmd_synth(cfg);
            std::cout << "wrote " << out.ctf.string() << " (" << out.snapshots << " snapshots)\n";
        } else if (*process) {
            const auto out = v2vk::cmd_process(cfg, ctf_path);
            std::cout << "wrote " << out.kfield.string() << " (" << out.field.windows << " windows x "
                      << out.field.subbands << " sub-bands)\n";
        } else if (*fit) {
            const auto out = v2vk::cmd_fit(cfg, inputs);
            std::cout << "wrote " << out.fit.string() << " (n=" << out.record.n
                      << ", eps=" << out.record.epsilon << ")\n";
        } else if (*report) {
            const auto out = v2vk::collect_fits(cfg, inputs, std::cerr);
            v2vk::write_report_table(std::cout, out.rows);
            if (!csv_path.empty()) {
                std::ofstream os(csv_path, std::ios::trunc);
                if (!os) {
                    throw std::runtime_error("cannot open " + csv_path.string());
                }
                v2vk::write_report_csv(os, out.rows);
            }
        } else if (*list) {
            std::cout << v2vk::io::profiles_to_json(v2vk::load_catalog(cfg)).dump(2) << '\n';
        }
    });
}
