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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is
// nonzero when any criterion fails.

#include "oracles.hpp"

#include <v2vk/v2vk.hpp>

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace v2vk;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

struct Outcome {
    bool pass = true;
    std::string summary;
    std::vector<std::string> details;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), f, args...);
    return buf;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag)
        : path(fs::temp_directory_path() / ("v2vk_acceptance_" + std::to_string(::getpid()) + "_" + tag)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

// Thresholds
constexpr double ac1_w_tol = 0.05;
constexpr double ac1_db_tol = 0.5;
constexpr double ac1_eps = 0.06;
constexpr double ac1_seconds = 10.0;
constexpr double ac2_median_db = 1.0;
constexpr double ac2_seconds = 60.0;
constexpr double ac2_near_zero_db = 0.0;
// Calibration limits start at 0.5 / 1.5 dB and are tightened to the measured
// worst case (0.115 / 0.953 dB for this seed set) plus headroom.
constexpr double ac3_bias_db = 0.25;
constexpr double ac3_std_db = 1.1;
constexpr double ac4_eps = 0.04;
constexpr double ac4_shape_lo = 1.85;
constexpr double ac4_shape_hi = 2.15;
constexpr double ac4_shape_tap0 = 2.5;
constexpr double ac5_norm = 1e-6;
constexpr double ac5_parseval = 1e-10;
constexpr double ac5_invariance = 1e-12;

// ---- AC1 -----------------------------------------------------------------

Outcome ac1() {
    Outcome o;
    const auto t0 = clock_type::now();
    const auto catalog = builtin_profiles();
    std::size_t ok = 0;
    for (std::size_t i = 0; i < catalog.size(); ++i) {
        const auto& g = catalog[i].gmm;
        const auto k = sample_k_values(g, 10000, 1000 + i);
        const auto fit = fit_bimodal_gmm(k);
        const auto& f = fit.params;
        const double dw = f.w - g.w;
        const double d[4] = {f.mu1_db - g.mu1_db, f.sigma1_db - g.sigma1_db, f.mu2_db - g.mu2_db,
                             f.sigma2_db - g.sigma2_db};
        bool row_ok = std::abs(dw) <= ac1_w_tol && fit.epsilon < ac1_eps;
        for (double v : d) {
            row_ok = row_ok && std::abs(v) <= ac1_db_tol;
        }
        ok += row_ok;
        o.details.push_back(fmt("%-4s %-46s dw=%+.3f dmu1=%+.2f dsig1=%+.2f dmu2=%+.2f dsig2=%+.2f eps=%.4f",
                                row_ok ? "ok" : "MISS", catalog[i].name.c_str(), dw, d[0], d[1], d[2], d[3],
                                fit.epsilon));
    }
    const double secs = seconds_since(t0);
    o.pass = ok == catalog.size() && secs < ac1_seconds;
    o.summary = fmt("GMM round trip: %zu/%zu scenarios within w+-%.2f, mu/sigma+-%.1f dB, eps<%.2f; %.2f s (limit %.0f s)",
                    ok, catalog.size(), ac1_w_tol, ac1_db_tol, ac1_eps, secs, ac1_seconds);
    return o;
}

// ---- AC2 -----------------------------------------------------------------

Outcome ac2() {
    Outcome o;
    TempDir tmp("ac2");
    ExperimentConfig cfg;
    cfg.scenario = "general los obstruction - highway";
    cfg.duration_s = 20.0;
    cfg.seed = 1;
    cfg.out_dir = tmp.path;
    // stride 5 divides both the CIR start offset (s_ls/2 = 365) and the
    // block length 630, so one window per block lies exactly on the block
    cfg.stride = 5;
    cfg.write_cir = false;

    const auto t0 = clock_type::now();
    const auto synth = cmd_synth(cfg);
    const auto processed = cmd_process(cfg, synth.ctf);
    const double secs = seconds_since(t0);

    const auto truth = read_truth(synth.truth);
    const auto& field = processed.field;
    const std::size_t block = truth.block_length;
    std::vector<double> errors;
    std::size_t low_windows = 0;
    std::size_t low_flagged = 0;
    std::size_t low_blocks = 0;
    std::size_t mid_blocks = 0;
    for (std::size_t i = 0; i < field.windows; ++i) {
        const std::size_t start = field.first_snapshot + field.window_start(i);
        const std::size_t b = start / block;
        if (start % block != 0 || (start + field.window - 1) / block != b || b >= truth.block_k_db.size()) {
            continue;
        }
        const double k_true = truth.block_k_db[b];
        if (k_true >= 0.0 && k_true <= 20.0) {
            ++mid_blocks;
            for (std::size_t q = 0; q < field.subbands; ++q) {
                const auto& e = field.at(i, q);
                errors.push_back(e.valid ? std::abs(e.k_db - k_true) : std::numeric_limits<double>::infinity());
            }
        } else if (k_true < -20.0) {
            ++low_blocks;
            for (std::size_t q = 0; q < field.subbands; ++q) {
                const auto& e = field.at(i, q);
                ++low_windows;
                low_flagged += !e.valid || e.k_db < ac2_near_zero_db;
            }
        }
    }
    double median = std::numeric_limits<double>::infinity();
    if (!errors.empty()) {
        std::nth_element(errors.begin(), errors.begin() + errors.size() / 2, errors.end());
        median = errors[errors.size() / 2];
    }
    o.pass = median < ac2_median_db && low_flagged == low_windows && low_blocks > 0 && secs < ac2_seconds;
    o.details.push_back(fmt("snapshots=%zu blocks=%zu windows=%zu stride=%zu", synth.snapshots,
                            truth.block_k_db.size(), field.windows, field.stride));
    o.details.push_back(fmt("true K in [0,20] dB: %zu blocks, %zu estimates, median |error| %.3f dB", mid_blocks,
                            mid_blocks * field.subbands, median));
    o.details.push_back(fmt("true K < -20 dB: %zu blocks, %zu/%zu estimates invalid or below %.0f dB", low_blocks,
                            low_flagged, low_windows, ac2_near_zero_db));
    o.summary = fmt("Pipeline round trip: median |K error| %.3f dB (limit %.1f), low-K flagged %zu/%zu; %.1f s "
                    "(limit %.0f s)",
                    median, ac2_median_db, low_flagged, low_windows, secs, ac2_seconds);
    return o;
}

// ---- AC3 -----------------------------------------------------------------

Outcome ac3() {
    Outcome o;
    const std::size_t s_k = 630;
    const std::size_t trials = 200;
    double worst_bias = 0.0;
    double worst_std = 0.0;
    for (double k_db : {0.0, 5.0, 10.0, 15.0, 20.0}) {
        KTrajectory t;
        t.block_length = s_k;
        t.k_db.assign(s_k, k_db);
        std::vector<double> est;
        std::size_t invalid = 0;
        for (std::size_t trial = 0; trial < trials; ++trial) {
            const auto tap0 = synth_taps(t, {}, s_k, 500 + trial, 0.1, 1).column(0);
            const auto e = estimate_k_mom(tap0);
            if (e.valid && std::isfinite(e.k_db)) {
                est.push_back(e.k_db);
            } else {
                ++invalid;
            }
        }
        const double mean = std::accumulate(est.begin(), est.end(), 0.0) / est.size();
        double var = 0.0;
        for (double v : est) {
            var += (v - mean) * (v - mean);
        }
        const double sd = std::sqrt(var / (est.size() - 1));
        const double bias = mean - k_db;
        const bool ok = std::abs(bias) < ac3_bias_db && sd < ac3_std_db && invalid == 0;
        o.pass = o.pass && ok;
        worst_bias = std::max(worst_bias, std::abs(bias));
        worst_std = std::max(worst_std, sd);
        o.details.push_back(fmt("%-4s K=%4.1f dB: bias %+.3f dB, std %.3f dB, invalid %zu/%zu", ok ? "ok" : "MISS",
                                k_db, bias, sd, invalid, trials));
    }
    o.summary = fmt("Estimator calibration at S_K=630: max |bias| %.3f dB (limit %.2f), max std %.3f dB (limit %.2f)",
                    worst_bias, ac3_bias_db, worst_std, ac3_std_db);
    return o;
}

// ---- AC4 -----------------------------------------------------------------

Outcome ac4() {
    Outcome o;
    double worst_rice = 0.0;
    double worst_ray = 0.0;
    double shape_lo = 1e9;
    double shape_hi = 0.0;
    double tap0_min = 1e9;
    std::size_t fits = 0;
    for (double k_db : {0.0, 7.6, 11.16, 16.51}) {
        SynthSpec spec;
        spec.profile = *find_profile("general los obstruction - highway");
        spec.profile.gmm = {0.0, k_db, 1.0, k_db, 1e-9};
        spec.duration_s = 5.0;
        spec.seed = 4;
        const auto run = synthesize(spec);
        auto cir = subband_transform(run.ctf);
        cir = align_first_tap(std::move(cir), spec.profile.s_ls).first;
        cir = remove_large_scale(std::move(cir), spec.profile.s_ls);
        const auto survey = survey_envelopes(cir, 5, 0, cir.snapshots);
        double run_rice = 0.0;
        double run_ray = 0.0;
        double run_tap0 = 1e9;
        for (const auto& s : survey) {
            ++fits;
            if (s.tap == 0) {
                run_rice = std::max(run_rice, s.rician_ks);
                run_tap0 = std::min(run_tap0, s.weibull.shape);
            } else {
                run_ray = std::max(run_ray, s.rayleigh_ks);
                shape_lo = std::min(shape_lo, s.weibull.shape);
                shape_hi = std::max(shape_hi, s.weibull.shape);
            }
        }
        worst_rice = std::max(worst_rice, run_rice);
        worst_ray = std::max(worst_ray, run_ray);
        if (k_db > 5.0) {
            tap0_min = std::min(tap0_min, run_tap0);
        }
        o.details.push_back(fmt("K=%5.2f dB, %zu samples/fit: tap0 Rician eps max %.4f, Weibull k min %.2f; "
                                "taps1-4 Rayleigh eps max %.4f",
                                k_db, cir.snapshots, run_rice, run_tap0, run_ray));
    }
    o.details.push_back(fmt("taps 1-4 Weibull shape range [%.3f, %.3f]", shape_lo, shape_hi));
    o.pass = worst_rice < ac4_eps && worst_ray < ac4_eps && shape_lo >= ac4_shape_lo && shape_hi <= ac4_shape_hi &&
             tap0_min > ac4_shape_tap0;
    o.summary = fmt("Envelope identification over %zu fits: Rician eps %.4f, Rayleigh eps %.4f (limit %.2f); "
                    "Weibull k taps1-4 in [%.2f, %.2f], tap0 min %.2f (>%.1f when K>5 dB)",
                    fits, worst_rice, worst_ray, ac4_eps, shape_lo, shape_hi, tap0_min, ac4_shape_tap0);
    return o;
}

// ---- AC5 -----------------------------------------------------------------

Outcome ac5() {
    Outcome o;
    // windowed-power normalization on constant-power input
    SubbandCir cir(3000, 33, 24);
    std::mt19937 g(5);
    std::uniform_real_distribution<double> ph(0.0, 6.283185307179586);
    std::uniform_real_distribution<double> split(0.0, 1.0);
    for (std::size_t m = 0; m < cir.snapshots; ++m) {
        for (std::size_t q = 0; q < cir.subbands; ++q) {
            const double a = split(g);
            cir.at(m, 0, q) = std::polar(std::sqrt(3.0 * a), ph(g));
            cir.at(m, 7, q) = std::polar(std::sqrt(3.0 * (1.0 - a)), ph(g));
        }
    }
    const std::size_t s_ls = 730;
    const auto norm = remove_large_scale(cir, s_ls);
    double norm_err = 0.0;
    for (std::size_t q = 0; q < norm.subbands; ++q) {
        double window = 0.0;
        for (std::size_t m = 0; m < s_ls; ++m) {
            window += norm.total_power(m, q);
        }
        for (std::size_t start = 0;; ++start) {
            norm_err = std::max(norm_err, std::abs(window / s_ls - 1.0));
            if (start + s_ls >= norm.snapshots) {
                break;
            }
            window += norm.total_power(start + s_ls, q) - norm.total_power(start, q);
        }
        for (std::size_t m = 0; m < norm.snapshots; ++m) {
            norm_err = std::max(norm_err, std::abs(norm.total_power(m, q) - 1.0));
        }
    }

    // Parseval against direct summation
    ChannelTransferFunction ctf(8, 769, measurement::snapshot_interval_s, measurement::bin_spacing_hz,
                                measurement::carrier_freq_hz);
    std::normal_distribution<float> d(0.0f, 1.0f);
    for (auto& v : ctf.samples) {
        v = {d(g), d(g)};
    }
    const auto h = subband_transform(ctf);
    const auto w = oracle::hann(33);
    double parseval_err = 0.0;
    for (std::size_t m = 0; m < 8; ++m) {
        for (std::size_t q = 0; q < 24; ++q) {
            long double ref = 0.0L;
            for (std::size_t c = 0; c < 33; ++c) {
                const auto v = ctf.at(m, q * 32 + c);
                ref += (static_cast<long double>(v.real()) * v.real() + static_cast<long double>(v.imag()) * v.imag()) *
                       w[c] * w[c];
            }
            parseval_err = std::max(parseval_err, std::abs(h.total_power(m, q) / static_cast<double>(ref) - 1.0));
        }
    }

    // estimator scale and phase invariance
    double inv_err = 0.0;
    for (unsigned seed = 0; seed < 20; ++seed) {
        const auto x = oracle::rician(630, 0.8, 0.2, 900 + seed);
        const auto base = estimate_k_mom(x);
        for (const std::complex<double> c : {std::complex<double>(2.5, -0.7), std::polar(1.0, 0.3 + seed),
                                             std::complex<double>(1e-4, 3e-4), std::complex<double>(-40.0, 0.0)}) {
            auto y = x;
            for (auto& v : y) {
                v *= c;
            }
            inv_err = std::max(inv_err, std::abs(estimate_k_mom(y).k_linear / base.k_linear - 1.0));
        }
    }
    o.pass = norm_err < ac5_norm && parseval_err < ac5_parseval && inv_err < ac5_invariance;
    o.summary = fmt("Invariants: normalization err %.2e (limit %.0e), Parseval rel err %.2e (limit %.0e), "
                    "K invariance rel err %.2e (limit %.0e)",
                    norm_err, ac5_norm, parseval_err, ac5_parseval, inv_err, ac5_invariance);
    return o;
}

// ---- AC6 -----------------------------------------------------------------

Outcome ac6() {
    Outcome o;
    TempDir tmp("ac6");
    std::vector<std::string> names{files::ctf, files::truth, files::cir, files::kfield, files::kfield_summary,
                                   files::fit, files::fit_cdf};
    auto run = [&](const std::string& tag, unsigned threads) {
        ExperimentConfig cfg;
        cfg.scenario = "traffic congestion - approaching traffic jam";
        cfg.duration_s = 4.0;
        cfg.seed = 99;
        cfg.threads = threads;
        cfg.out_dir = tmp.path / tag;
        const auto s = cmd_synth(cfg);
        const auto p = cmd_process(cfg, s.ctf);
        cmd_fit(cfg, {p.kfield});
        std::vector<std::string> bytes;
        for (const auto& n : names) {
            bytes.push_back(slurp(cfg.out_dir / n));
        }
        return bytes;
    };
    const auto a = run("a", 1);
    const auto b = run("b", 1);
    const auto c = run("c", 4);
    std::size_t same = 0;
    for (std::size_t i = 0; i < names.size(); ++i) {
        const bool eq = !a[i].empty() && a[i] == b[i] && a[i] == c[i];
        same += eq;
        if (!eq) {
            o.details.push_back("differs: " + names[i]);
        }
    }
    o.pass = same == names.size();
    o.summary = fmt("Determinism: %zu/%zu artifacts byte-identical across repeated runs and 1 vs 4 threads", same,
                    names.size());
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5}, {"AC6", ac6}};
    int failed = 0;
    for (const auto& [id, fn] : criteria) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.pass = false;
            o.summary = std::string("error: ") + e.what();
        }
        for (const auto& d : o.details) {
            std::cout << "    " << d << '\n';
        }
        std::cout << id << ' ' << (o.pass ? "PASS" : "FAIL") << "  " << o.summary << std::endl;
        failed += !o.pass;
    }
    return failed == 0 ? 0 : 1;
}
