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

#include "v2vk/channel.hpp"
#include "v2vk/error.hpp"
#include "v2vk/measurement.hpp"
#include "v2vk/parallel.hpp"
#include "v2vk/random.hpp"
#include "v2vk/scenario.hpp"
#include "v2vk/subband.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace v2vk {

/// Complex tap gains h[m, n]: one row per snapshot, one column per delay tap.
struct TapMatrix {
    std::size_t snapshots = 0;
    std::size_t taps = 0;
    std::vector<std::complex<double>> values;

    TapMatrix() = default;
    TapMatrix(std::size_t s, std::size_t t) : snapshots(s), taps(t), values(s * t) {}

    std::complex<double>& at(std::size_t m, std::size_t n) { return values[m * taps + n]; }
    const std::complex<double>& at(std::size_t m, std::size_t n) const { return values[m * taps + n]; }

    std::span<const std::complex<double>> row(std::size_t m) const { return {values.data() + m * taps, taps}; }

    std::vector<std::complex<double>> column(std::size_t n) const {
        std::vector<std::complex<double>> out(snapshots);
        for (std::size_t m = 0; m < snapshots; ++m) {
            out[m] = at(m, n);
        }
        return out;
    }
};

/// Piecewise-constant K [dB] per snapshot; block b covers snapshots
/// [b*block_length, (b+1)*block_length).
struct KTrajectory {
    std::vector<double> k_db;
    std::size_t block_length = 0;

    std::size_t blocks() const { return block_length == 0 ? 0 : (k_db.size() + block_length - 1) / block_length; }
    double block_k_db(std::size_t b) const { return k_db[b * block_length]; }
    std::vector<double> block_values() const {
        std::vector<double> out(blocks());
        for (std::size_t b = 0; b < out.size(); ++b) {
            out[b] = block_k_db(b);
        }
        return out;
    }
};

/// Relative tail tap powers at -10, -13, -16 and -19 dB below tap 0.
inline std::vector<double> default_tail_pdp() {
    return {std::pow(10.0, -1.0), std::pow(10.0, -1.3), std::pow(10.0, -1.6), std::pow(10.0, -1.9)};
}

inline std::size_t snapshot_count(double duration_s, double t_s) {
    detail::require(std::isfinite(duration_s) && duration_s > 0.0, "duration must be positive");
    detail::require(std::isfinite(t_s) && t_s > 0.0, "snapshot interval must be positive");
    return static_cast<std::size_t>(std::llround(duration_s / t_s));
}

/// Block-wise K trajectory: one independent mixture draw per block of s_k
/// snapshots, held constant within the block.
inline KTrajectory generate_k_trajectory(const ScenarioProfile& profile, std::size_t snapshots, std::uint64_t seed) {
    profile.validate();
    if (snapshots < profile.s_k) {
        throw invalid_argument("generate_k_trajectory: " + std::to_string(snapshots) +
                               " snapshots are fewer than one K window (" + std::to_string(profile.s_k) + ")");
    }
    const std::size_t blocks = (snapshots + profile.s_k - 1) / profile.s_k;
    auto engine = substream(seed, "k-trajectory");
    const auto draws = sample_k_values(profile.gmm, blocks, engine);
    KTrajectory traj;
    traj.block_length = profile.s_k;
    traj.k_db.resize(snapshots);
    for (std::size_t m = 0; m < snapshots; ++m) {
        traj.k_db[m] = draws[m / profile.s_k];
    }
    return traj;
}

namespace detail {

struct RicianSplit {
    double specular;  // r^2
    double diffuse;   // 2 sigma^2
};

// Unit-power split of a K value in dB; +-inf select the pure specular and
// pure diffuse limits.
inline RicianSplit unit_power_split(double k_db) {
    if (std::isnan(k_db)) {
        throw invalid_argument("K trajectory contains NaN");
    }
    if (k_db == std::numeric_limits<double>::infinity()) {
        return {1.0, 0.0};
    }
    if (k_db == -std::numeric_limits<double>::infinity()) {
        return {0.0, 1.0};
    }
    const double k = std::pow(10.0, k_db / 10.0);
    return {k / (1.0 + k), 1.0 / (1.0 + k)};
}

}  // namespace detail

/// Tap gains for a K trajectory.
///
/// Tap 0 is Rician with unit mean power: a specular term of power
/// K/(1+K) with a random phase per block plus a linear phase drift of
/// `drift_cycles` turns per block, and i.i.d. complex Gaussian diffuse
/// power 1/(1+K) per snapshot. Taps 1.. are zero-mean complex Gaussian
/// with mean powers tail_pdp. Each block draws from its own substream.
inline TapMatrix synth_taps(const KTrajectory& traj, std::span<const double> tail_pdp, std::size_t snapshots,
                            std::uint64_t seed, double drift_cycles = 0.1, unsigned threads = default_thread_count()) {
    detail::require(traj.k_db.size() == snapshots, "synth_taps: trajectory length differs from snapshot count");
    detail::require(traj.block_length > 0, "synth_taps: trajectory has no block length");
    detail::require(std::isfinite(drift_cycles), "synth_taps: drift must be finite");
    for (double p : tail_pdp) {
        detail::require(std::isfinite(p) && p > 0.0, "synth_taps: tail powers must be positive");
    }
    TapMatrix taps(snapshots, 1 + tail_pdp.size());
    const std::size_t block_len = traj.block_length;
    const std::size_t blocks = traj.blocks();

    parallel_for(blocks, threads, [&](std::size_t b) {
        auto engine = substream(seed, "taps", b);
        std::uniform_real_distribution<double> phase_dist(0.0, 2.0 * std::numbers::pi);
        std::normal_distribution<double> unit(0.0, 1.0);
        const double phase0 = phase_dist(engine);
        const std::size_t begin = b * block_len;
        const std::size_t end = std::min(begin + block_len, snapshots);
        for (std::size_t m = begin; m < end; ++m) {
            const auto split = detail::unit_power_split(traj.k_db[m]);
            const double phase = phase0 + 2.0 * std::numbers::pi * drift_cycles * static_cast<double>(m - begin) /
                                              static_cast<double>(block_len);
            const double sigma = std::sqrt(split.diffuse / 2.0);
            const double x = unit(engine);
            const double y = unit(engine);
            taps.at(m, 0) = std::polar(std::sqrt(split.specular), phase) + std::complex<double>(sigma * x, sigma * y);
            for (std::size_t n = 1; n < taps.taps; ++n) {
                const double s = std::sqrt(tail_pdp[n - 1] / 2.0);
                const double xr = unit(engine);
                const double xi = unit(engine);
                taps.at(m, n) = {s * xr, s * xi};
            }
        }
    });
    return taps;
}

/// Multiplies every tap of snapshot m by the amplitude gain g[m].
inline TapMatrix apply_large_scale(TapMatrix taps, std::span<const double> gain) {
    detail::require(gain.size() == taps.snapshots, "apply_large_scale: gain length differs from snapshot count");
    for (std::size_t m = 0; m < taps.snapshots; ++m) {
        if (!(std::isfinite(gain[m]) && gain[m] > 0.0)) {
            throw invalid_argument("apply_large_scale: gain at snapshot " + std::to_string(m) + " is not positive");
        }
        for (std::size_t n = 0; n < taps.taps; ++n) {
            taps.at(m, n) *= gain[m];
        }
    }
    return taps;
}

/// Slow sinusoidal shadowing: amplitude gain whose power swings by
/// +-depth_db around 0 dB with the given period in snapshots.
inline std::vector<double> sinusoidal_large_scale(std::size_t snapshots, double period, double depth_db) {
    detail::require(period > 0.0, "sinusoidal_large_scale: period must be positive");
    std::vector<double> g(snapshots);
    for (std::size_t m = 0; m < snapshots; ++m) {
        const double db = depth_db * std::sin(2.0 * std::numbers::pi * static_cast<double>(m) / period);
        g[m] = std::pow(10.0, db / 20.0);
    }
    return g;
}

enum class TapPlacement {
    /// Plain DFT over the sub-band delay grid: H[m,b] = sum_n h[m,n] e^{-j2pi b n/nc}.
    /// The analysis window leaks each tap into its neighbours.
    flat,
    /// Pre-divides by the analysis window so that subband_transform returns
    /// exactly the tap gains at bins 0..T-1 of every sub-band.
    window_compensated,
};

/// Frequency response whose sub-band CIRs carry the given taps.
///
/// In window_compensated mode the zero first window sample forces every
/// sub-band CIR to sum to zero over its nc delay bins, so the negated tap
/// sum is spread evenly over the unused bins T..nc-1 (a floor far below
/// tap 0). Bin 0 and bins past the last sub-band are left at zero.
inline ChannelTransferFunction taps_to_ctf(const TapMatrix& taps, std::size_t bins, double f_s, double t_s,
                                           double carrier_freq_hz,
                                           TapPlacement placement = TapPlacement::window_compensated,
                                           std::size_t nc = measurement::subband_bins,
                                           std::size_t q_count = measurement::subband_count,
                                           unsigned threads = default_thread_count()) {
    detail::require(taps.taps >= 1 && taps.snapshots >= 1, "taps_to_ctf: empty tap matrix");
    detail::require(bins >= 2 * taps.taps, "taps_to_ctf: need at least two bins per tap");
    detail::require(taps.taps < nc, "taps_to_ctf: more taps than delay bins per sub-band");
    ChannelTransferFunction ctf(taps.snapshots, bins, t_s, f_s, carrier_freq_hz);
    const std::size_t t_count = taps.taps;

    // e^{-j 2 pi k / nc}
    std::vector<std::complex<double>> twiddle(nc);
    for (std::size_t k = 0; k < nc; ++k) {
        twiddle[k] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(nc));
    }

    if (placement == TapPlacement::flat) {
        parallel_for(taps.snapshots, threads, [&](std::size_t m) {
            const auto h = taps.row(m);
            auto out = ctf.row(m);
            for (std::size_t b = 0; b < bins; ++b) {
                std::complex<double> acc = 0.0;
                for (std::size_t n = 0; n < t_count; ++n) {
                    acc += h[n] * twiddle[(b * n) % nc];
                }
                out[b] = std::complex<float>(acc);
            }
        });
        return ctf;
    }

    detail::require(bins >= required_bins(nc, q_count), "taps_to_ctf: too few bins for the sub-band layout");
    const auto window = hanning_window(nc);
    const double scale = 1.0 / std::sqrt(static_cast<double>(nc));
    parallel_for(taps.snapshots, threads, [&](std::size_t m) {
        const auto h = taps.row(m);
        std::complex<double> sum = 0.0;
        for (const auto& v : h) {
            sum += v;
        }
        const std::complex<double> floor = -sum / static_cast<double>(nc - t_count);
        // Spectrum of the sub-band CIR [h_0..h_{T-1}, floor, ..., floor];
        // for c != 0 the floor bins contribute -floor * sum_{n<T} e^{-j2pi cn/nc}.
        std::vector<std::complex<float>> spectrum(nc);
        for (std::size_t c = 1; c < nc; ++c) {
            std::complex<double> acc = 0.0;
            for (std::size_t n = 0; n < t_count; ++n) {
                acc += (h[n] - floor) * twiddle[(c * n) % nc];
            }
            spectrum[c] = std::complex<float>(scale * acc / window[c]);
        }
        auto out = ctf.row(m);
        for (std::size_t q = 0; q < q_count; ++q) {
            for (std::size_t c = 1; c < nc; ++c) {
                out[q * (nc - 1) + c] = spectrum[c];
            }
        }
    });
    return ctf;
}

/// Everything needed to synthesize one run.
struct SynthSpec {
    ScenarioProfile profile;
    double duration_s = 10.0;
    std::vector<double> tail_pdp = default_tail_pdp();
    std::optional<std::vector<double>> large_scale;  ///< amplitude gain per snapshot
    std::uint64_t seed = 0;
    double drift_cycles = 0.1;  ///< specular phase turns per K window
    double t_s = measurement::snapshot_interval_s;
    double f_s = measurement::bin_spacing_hz;
    double carrier_freq_hz = measurement::carrier_freq_hz;
    std::size_t bins = measurement::frequency_bins;
    std::size_t delay_bins = measurement::subband_bins;
    std::size_t subbands = measurement::subband_count;
    TapPlacement placement = TapPlacement::window_compensated;

    std::size_t snapshots() const { return snapshot_count(duration_s, t_s); }
};

struct SynthResult {
    ChannelTransferFunction ctf;
    KTrajectory truth;
};

inline SynthResult synthesize(const SynthSpec& spec, unsigned threads = default_thread_count()) {
    spec.profile.validate();
    const std::size_t s = spec.snapshots();
    auto traj = generate_k_trajectory(spec.profile, s, spec.seed);
    auto taps = synth_taps(traj, spec.tail_pdp, s, spec.seed, spec.drift_cycles, threads);
    if (spec.large_scale) {
        taps = apply_large_scale(std::move(taps), *spec.large_scale);
    }
    auto ctf = taps_to_ctf(taps, spec.bins, spec.f_s, spec.t_s, spec.carrier_freq_hz, spec.placement,
                           spec.delay_bins, spec.subbands, threads);
    return {std::move(ctf), std::move(traj)};
}

}  // namespace v2vk
