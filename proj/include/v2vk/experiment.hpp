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

#pragma once

#include "v2vk/error.hpp"
#include "v2vk/fit/gmm.hpp"
#include "v2vk/fit/survey.hpp"
#include "v2vk/io/binary.hpp"
#include "v2vk/io/csv.hpp"
#include "v2vk/io/json.hpp"
#include "v2vk/kfactor.hpp"
#include "v2vk/scenario.hpp"
#include "v2vk/subband.hpp"
#include "v2vk/synth.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

// File-based experiment stages: synth -> process -> fit -> report. Each
// stage reads the previous stage's artifacts, so stages can be rerun or
// cached independently.

namespace v2vk {

enum class InvalidKPolicy { exclude, floor };

/// Stand-in for invalid K estimates under InvalidKPolicy::floor; below
/// every nLOS mode of the catalog.
inline constexpr double invalid_k_floor_db = -60.0;

struct ExperimentConfig {
    std::string scenario;                                ///< empty: take it from the synth sidecar
    std::optional<std::filesystem::path> profiles_file;  ///< catalog JSON replacing the built-in one
    double duration_s = 10.0;
    std::uint64_t seed = 1;
    std::size_t nc = measurement::subband_bins;
    std::size_t q = measurement::subband_count;
    std::optional<std::size_t> stride;  ///< default s_k / 10
    InvalidKPolicy invalid_k = InvalidKPolicy::exclude;
    std::filesystem::path out_dir = ".";
    double large_scale_db = 0.0;  ///< depth of sinusoidal shadowing, 0 = none
    double drift_cycles = 0.1;
    bool write_cir = true;
    bool envelope_report = false;
    std::size_t diag_subband = 11;
    unsigned threads = default_thread_count();
};

namespace files {
inline constexpr const char* ctf = "channel.v2vctf";
inline constexpr const char* truth = "channel.truth.json";
inline constexpr const char* cir = "cir.v2vcir";
inline constexpr const char* kfield = "kfield.csv";
inline constexpr const char* kfield_summary = "kfield.summary.json";
inline constexpr const char* envelope = "envelope_fits.csv";
inline constexpr const char* weibull_plot = "weibull_plot.csv";
inline constexpr const char* fit = "fit.json";
inline constexpr const char* fit_cdf = "fit_cdf.csv";
}  // namespace files

inline std::vector<ScenarioProfile> load_catalog(const ExperimentConfig& config) {
    if (!config.profiles_file) {
        return builtin_profiles();
    }
    std::ifstream is(*config.profiles_file);
    if (!is) {
        throw config_error("cannot open profile catalog " + config.profiles_file->string());
    }
    try {
        return io::profiles_from_json(io::parse_json(is, config.profiles_file->string()));
    } catch (const format_error& e) {
        // a broken catalog is a configuration problem, not a data file problem
        throw config_error(std::string("profile catalog: ") + e.what());
    }
}

inline ScenarioProfile resolve_scenario(const std::vector<ScenarioProfile>& catalog, const std::string& name) {
    if (auto p = find_profile(catalog, name)) {
        return *p;
    }
    std::string msg = "unknown scenario '" + name + "'; valid names:";
    for (const auto& p : catalog) {
        msg += "\n  " + p.name;
    }
    throw config_error(msg);
}

namespace detail {

inline std::ofstream open_text(const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    return os;
}

inline void prepare_out_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
    }
}

}  // namespace detail

// ---- synth ---------------------------------------------------------------

struct SynthOutputs {
    std::filesystem::path ctf;
    std::filesystem::path truth;
    std::size_t snapshots = 0;
};

/// Synthesizes one run of the configured scenario and writes the transfer
/// function plus a JSON sidecar with the generating K trajectory.
inline SynthOutputs cmd_synth(const ExperimentConfig& config) {
    const auto catalog = load_catalog(config);
    if (config.scenario.empty()) {
        throw config_error("synth: --scenario is required");
    }
    const auto profile = resolve_scenario(catalog, config.scenario);
    if (!(config.duration_s > 0.0)) {
        throw config_error("synth: duration must be positive");
    }

    SynthSpec spec;
    spec.profile = profile;
    spec.duration_s = config.duration_s;
    spec.seed = config.seed;
    spec.drift_cycles = config.drift_cycles;
    spec.delay_bins = config.nc;
    spec.subbands = config.q;
    spec.bins = std::max(measurement::frequency_bins, required_bins(config.nc, config.q));
    const std::size_t s = spec.snapshots();
    if (s < profile.s_k) {
        throw config_error("synth: duration shorter than one K window of the scenario");
    }
    if (config.large_scale_db != 0.0) {
        spec.large_scale = sinusoidal_large_scale(s, 10.0 * static_cast<double>(profile.s_ls), config.large_scale_db);
    }
    SynthResult result;
    try {
        result = synthesize(spec, config.threads);
    } catch (const invalid_argument& e) {
        throw config_error(std::string("synth: ") + e.what());
    }

    detail::prepare_out_dir(config.out_dir);
    SynthOutputs out{config.out_dir / files::ctf, config.out_dir / files::truth, s};
    io::write_ctf(out.ctf, result.ctf);

    io::json truth = {{"scenario", profile.name},
                      {"seed", config.seed},
                      {"duration_s", config.duration_s},
                      {"snapshots", s},
                      {"bins", spec.bins},
                      {"t_s", spec.t_s},
                      {"f_s", spec.f_s},
                      {"carrier_freq_hz", spec.carrier_freq_hz},
                      {"delay_bins", spec.delay_bins},
                      {"subbands", spec.subbands},
                      {"tail_pdp", spec.tail_pdp},
                      {"drift_cycles", spec.drift_cycles},
                      {"large_scale_db", config.large_scale_db},
                      {"block_length", result.truth.block_length},
                      {"block_k_db", result.truth.block_values()},
                      {"profile", io::to_json(profile)}};
    auto os = detail::open_text(out.truth);
    os << truth.dump(2) << '\n';
    return out;
}

/// Ground truth written next to a synthesized transfer function.
struct SynthTruth {
    ScenarioProfile profile;
    std::size_t block_length = 0;
    std::vector<double> block_k_db;
};

inline std::filesystem::path truth_path_for(const std::filesystem::path& ctf_path) {
    return ctf_path.parent_path() / files::truth;
}

inline SynthTruth read_truth(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) {
        throw format_error("cannot open " + path.string());
    }
    const auto j = io::parse_json(is, path.string());
    SynthTruth t;
    try {
        t.profile = io::profile_from_json(j.at("profile"));
        t.block_length = j.at("block_length").get<std::size_t>();
        t.block_k_db = j.at("block_k_db").get<std::vector<double>>();
    } catch (const io::json::exception& e) {
        throw format_error("truth sidecar: " + std::string(e.what()));
    }
    return t;
}

// ---- process -------------------------------------------------------------

struct ProcessOutputs {
    std::filesystem::path cir;
    std::filesystem::path kfield;
    std::filesystem::path summary;
    KFactorField field;
    AlignmentReport alignment;
};

/// Sub-band transform, tap alignment, large-scale removal and the sliding
/// K field of tap 0 for one transfer function file.
inline ProcessOutputs cmd_process(const ExperimentConfig& config, const std::filesystem::path& ctf_path) {
    ScenarioProfile profile;
    if (!config.scenario.empty()) {
        profile = resolve_scenario(load_catalog(config), config.scenario);
    } else {
        const auto truth = truth_path_for(ctf_path);
        if (!std::filesystem::exists(truth)) {
            throw config_error("process: no --scenario given and no sidecar at " + truth.string());
        }
        profile = read_truth(truth).profile;
    }
    if (config.nc < 2 || config.q < 1) {
        throw config_error("process: need nc >= 2 and q >= 1");
    }
    if (config.stride && *config.stride == 0) {
        throw config_error("process: stride must be positive");
    }

    const auto ctf = io::read_ctf(ctf_path);
    if (ctf.bins < required_bins(config.nc, config.q)) {
        throw format_error("process: " + std::to_string(ctf.bins) + " bins cannot hold the requested sub-bands");
    }
    if (ctf.snapshots <= profile.s_ls || ctf.snapshots - profile.s_ls < profile.s_k) {
        throw insufficient_data("process: run too short for the scenario windows");
    }

    auto cir = subband_transform(ctf, config.nc, config.q, config.threads);
    auto [aligned, report] = align_first_tap(std::move(cir), profile.s_ls, config.threads);
    auto normalized = remove_large_scale(std::move(aligned), profile.s_ls, config.threads);
    const std::size_t stride = config.stride.value_or(default_stride(profile.s_k));
    auto field = sliding_k(normalized, 0, profile.s_k, stride, config.threads);

    detail::prepare_out_dir(config.out_dir);
    ProcessOutputs out{config.out_dir / files::cir, config.out_dir / files::kfield,
                       config.out_dir / files::kfield_summary, std::move(field), std::move(report)};
    if (config.write_cir) {
        io::write_cir(out.cir, normalized);
    }
    {
        auto os = detail::open_text(out.kfield);
        io::write_kfield_csv(os, out.field);
    }
    {
        auto summary = io::kfield_summary(out.field);
        summary["scenario"] = profile.name;
        auto os = detail::open_text(out.summary);
        os << summary.dump(2) << '\n';
    }
    if (config.envelope_report) {
        const std::size_t taps = std::min<std::size_t>(5, normalized.delay_bins);
        const auto survey = survey_envelopes(normalized, taps, 0, normalized.snapshots, config.threads);
        auto os = detail::open_text(config.out_dir / files::envelope);
        os << "subband_q,tap,samples,rician_k_db,rician_ks,rayleigh_sigma,rayleigh_ks,weibull_shape,"
              "weibull_scale,weibull_r2\n";
        for (const auto& s : survey) {
            os << s.subband << ',' << s.tap << ',' << s.samples << ',' << io::format_double(s.rician.k_db) << ','
               << io::format_double(s.rician_ks) << ',' << io::format_double(s.rayleigh.sigma) << ','
               << io::format_double(s.rayleigh_ks) << ',' << io::format_double(s.weibull.shape) << ','
               << io::format_double(s.weibull.scale) << ',' << io::format_double(s.weibull.r2) << '\n';
        }
        const std::size_t q = std::min(config.diag_subband, normalized.subbands - 1);
        auto plot = detail::open_text(config.out_dir / files::weibull_plot);
        plot << "subband_q,tap,ln_z,ln_neg_ln_1_minus_f\n";
        for (std::size_t n = 0; n < taps; ++n) {
            std::vector<double> envelope(normalized.snapshots);
            for (std::size_t m = 0; m < normalized.snapshots; ++m) {
                envelope[m] = std::abs(normalized.at(m, n, q));
            }
            const auto points = weibull_linearize(EmpiricalCdf(envelope));
            for (const auto& p : points.points) {
                plot << q << ',' << n << ',' << io::format_double(p.x) << ',' << io::format_double(p.y) << '\n';
            }
        }
    }
    return out;
}

// ---- fit -----------------------------------------------------------------

struct FitOutputs {
    std::filesystem::path fit;
    std::filesystem::path cdf;
    io::FitRecord record;
};

/// Pools K estimates from one or more field CSVs. Infinite estimates are
/// dropped; invalid ones are dropped or floored per the policy.
inline std::vector<double> pool_k_values(const std::vector<std::filesystem::path>& fields, InvalidKPolicy policy) {
    std::vector<double> pooled;
    for (const auto& path : fields) {
        std::ifstream is(path);
        if (!is) {
            throw format_error("cannot open K field " + path.string());
        }
        for (const auto& row : io::read_kfield_csv(is)) {
            if (row.valid && std::isfinite(row.k_db)) {
                pooled.push_back(row.k_db);
            } else if (!row.valid && policy == InvalidKPolicy::floor) {
                pooled.push_back(invalid_k_floor_db);
            }
        }
    }
    return pooled;
}

namespace detail {

/// Scenario named by the kfield.summary.json next to every field, or empty
/// when a summary is missing or the fields disagree.
inline std::string scenario_from_summaries(const std::vector<std::filesystem::path>& fields) {
    std::string name;
    for (const auto& f : fields) {
        std::ifstream is(f.parent_path() / files::kfield_summary);
        if (!is) {
            return {};
        }
        const auto j = io::json::parse(is, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("scenario") || !j["scenario"].is_string()) {
            return {};
        }
        const auto s = j["scenario"].get<std::string>();
        if (!name.empty() && s != name) {
            return {};
        }
        name = s;
    }
    return name;
}

}  // namespace detail

inline FitOutputs cmd_fit(const ExperimentConfig& config, const std::vector<std::filesystem::path>& fields) {
    if (fields.empty()) {
        throw config_error("fit: at least one K field file is required");
    }
    std::optional<ScenarioProfile> reference;
    std::string scenario = config.scenario.empty() ? detail::scenario_from_summaries(fields) : config.scenario;
    if (!scenario.empty()) {
        reference = resolve_scenario(load_catalog(config), scenario);
        scenario = reference->name;
    }
    const auto pooled = pool_k_values(fields, config.invalid_k);
    if (pooled.empty()) {
        throw insufficient_data("fit: no usable K estimates in the given fields");
    }
    const auto fit = fit_bimodal_gmm(pooled);

    detail::prepare_out_dir(config.out_dir);
    FitOutputs out{config.out_dir / files::fit, config.out_dir / files::fit_cdf,
                   io::make_fit_record(scenario, fit, fields.size(), reference)};
    {
        auto os = detail::open_text(out.fit);
        os << io::to_json(out.record).dump(2) << '\n';
    }
    {
        const EmpiricalCdf emp(pooled);
        const double lo = emp.sorted().front();
        const double hi = emp.sorted().back();
        constexpr std::size_t points = 201;
        auto os = detail::open_text(out.cdf);
        os << "k_db,empirical_cdf,fitted_cdf,fitted_pdf\n";
        for (std::size_t i = 0; i < points; ++i) {
            const double k = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
            os << io::format_double(k) << ',' << io::format_double(emp(k)) << ','
               << io::format_double(gmm_cdf(fit.params, k)) << ',' << io::format_double(gmm_pdf(fit.params, k))
               << '\n';
        }
    }
    return out;
}

// ---- report --------------------------------------------------------------

struct ReportOutputs {
    std::vector<io::FitRecord> rows;
    std::vector<std::filesystem::path> skipped;
};

/// Collects fit records in catalog order (unknown scenarios last, in input
/// order). Missing or unreadable files are reported on `warn` and skipped.
inline ReportOutputs collect_fits(const ExperimentConfig& config, const std::vector<std::filesystem::path>& paths,
                                  std::ostream& warn) {
    ReportOutputs out;
    for (const auto& path : paths) {
        std::ifstream is(path);
        if (!is) {
            warn << "warning: skipping missing fit file " << path.string() << '\n';
            out.skipped.push_back(path);
            continue;
        }
        try {
            out.rows.push_back(io::fit_record_from_json(io::parse_json(is, path.string())));
        } catch (const format_error& e) {
            warn << "warning: skipping " << path.string() << ": " << e.what() << '\n';
            out.skipped.push_back(path);
        }
    }
    const auto catalog = load_catalog(config);
    auto rank = [&](const io::FitRecord& r) {
        for (std::size_t i = 0; i < catalog.size(); ++i) {
            if (detail::lower(catalog[i].name) == detail::lower(r.scenario)) {
                return i;
            }
        }
        return catalog.size();
    };
    std::stable_sort(out.rows.begin(), out.rows.end(),
                     [&](const auto& a, const auto& b) { return rank(a) < rank(b); });
    return out;
}

inline void write_report_table(std::ostream& os, const std::vector<io::FitRecord>& rows) {
    os << std::left << std::setw(46) << "scenario" << std::right << std::setw(7) << "w" << std::setw(9) << "mu1"
       << std::setw(8) << "sigma1" << std::setw(8) << "mu2" << std::setw(8) << "sigma2" << std::setw(8) << "eps"
       << std::setw(6) << "runs" << '\n';
    os << std::fixed;
    for (const auto& r : rows) {
        os << std::left << std::setw(46) << (r.scenario.empty() ? "(unnamed)" : r.scenario) << std::right
           << std::setprecision(2) << std::setw(7) << r.params.w << std::setprecision(1) << std::setw(9)
           << r.params.mu1_db << std::setw(8) << r.params.sigma1_db << std::setw(8) << r.params.mu2_db
           << std::setw(8) << r.params.sigma2_db << std::setprecision(3) << std::setw(8) << r.epsilon << std::setw(6)
           << r.runs << '\n';
    }
    os << std::defaultfloat;
}

inline void write_report_csv(std::ostream& os, const std::vector<io::FitRecord>& rows) {
    os << "scenario,w,mu1_db,sigma1_db,mu2_db,sigma2_db,epsilon,runs\n";
    for (const auto& r : rows) {
        os << '"' << r.scenario << "\"," << io::format_double(r.params.w) << ',' << io::format_double(r.params.mu1_db)
           << ',' << io::format_double(r.params.sigma1_db) << ',' << io::format_double(r.params.mu2_db) << ','
           << io::format_double(r.params.sigma2_db) << ',' << io::format_double(r.epsilon) << ',' << r.runs << '\n';
    }
}

// ---- exit codes ----------------------------------------------------------

enum ExitCode : int { exit_ok = 0, exit_failure = 1, exit_config = 2, exit_format = 3, exit_data = 4 };

/// Runs a stage and maps its failure to the scripting exit-code contract.
template <typename Fn>
int run_stage(Fn&& fn, std::ostream& err = std::cerr) {
    try {
        fn();
        return exit_ok;
    } catch (const config_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_config;
    } catch (const invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return exit_config;
    } catch (const format_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_format;
    } catch (const insufficient_data& e) {
        err << "error: " << e.what() << '\n';
        return exit_data;
    } catch (const degenerate_input& e) {
        err << "error: " << e.what() << '\n';
        return exit_data;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
}

}  // namespace v2vk
