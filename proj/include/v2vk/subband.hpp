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

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace v2vk {

/// Periodic Hanning window of length n scaled to unit sum of squares.
inline std::vector<double> hanning_window(std::size_t n) {
    detail::require(n >= 2, "hanning_window: length must be at least 2");
    std::vector<double> w(n);
    double energy = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        w[c] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(c) / static_cast<double>(n)));
        energy += w[c] * w[c];
    }
    const double scale = 1.0 / std::sqrt(energy);
    for (auto& v : w) {
        v *= scale;
    }
    return w;
}

/// Minimum number of frequency bins for q sub-bands of nc bins that share
/// their edge bins.
constexpr std::size_t required_bins(std::size_t nc, std::size_t q) { return q * (nc - 1) + 1; }

/// Per-sub-band channel impulse responses h[m, n; q].
///
/// Storage is sub-band major ([q][m][n]) so each sub-band is one
/// contiguous block and can be processed independently.
struct SubbandCir {
    std::size_t snapshots = 0;
    std::size_t delay_bins = 0;
    std::size_t subbands = 0;
    double t_s = 0.0;
    double f_s = 0.0;
    double carrier_freq_hz = 0.0;
    std::size_t source_bins = 0;     ///< bin count of the transfer function it came from
    std::size_t first_snapshot = 0;  ///< absolute snapshot index of row 0
    std::vector<std::complex<double>> values;

    SubbandCir() = default;

    SubbandCir(std::size_t s, std::size_t nc, std::size_t q)
        : snapshots(s), delay_bins(nc), subbands(q), values(s * nc * q) {}

    std::size_t offset(std::size_t m, std::size_t n, std::size_t q) const {
        return (q * snapshots + m) * delay_bins + n;
    }

    std::complex<double>& at(std::size_t m, std::size_t n, std::size_t q) { return values[offset(m, n, q)]; }
    const std::complex<double>& at(std::size_t m, std::size_t n, std::size_t q) const {
        return values[offset(m, n, q)];
    }

    /// Delay profile of one snapshot in one sub-band.
    std::span<std::complex<double>> profile(std::size_t m, std::size_t q) {
        return {values.data() + offset(m, 0, q), delay_bins};
    }
    std::span<const std::complex<double>> profile(std::size_t m, std::size_t q) const {
        return {values.data() + offset(m, 0, q), delay_bins};
    }

    /// Time series of delay bin n in sub-band q.
    std::vector<std::complex<double>> tap_series(std::size_t n, std::size_t q) const {
        std::vector<std::complex<double>> out(snapshots);
        for (std::size_t m = 0; m < snapshots; ++m) {
            out[m] = at(m, n, q);
        }
        return out;
    }

    double total_power(std::size_t m, std::size_t q) const {
        double p = 0.0;
        for (const auto& v : profile(m, q)) {
            p += std::norm(v);
        }
        return p;
    }

    double time_s(std::size_t m) const { return static_cast<double>(first_snapshot + m) * t_s; }

    double center_freq_hz(std::size_t q) const {
        return subband_center_freq_hz(q, delay_bins, source_bins, f_s, carrier_freq_hz);
    }

    void validate() const {
        detail::require(snapshots > 0 && delay_bins > 0 && subbands > 0, "SubbandCir: empty shape");
        detail::require(values.size() == snapshots * delay_bins * subbands, "SubbandCir: value count does not match shape");
        detail::require(source_bins >= required_bins(delay_bins, subbands), "SubbandCir: source bin count too small");
        for (const auto& v : values) {
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                throw invalid_argument("SubbandCir: non-finite entry");
            }
        }
    }
};

/// Windowed inverse DFT of each sub-band of a transfer function.
///
/// Sub-band q starts at bin q*(nc-1), so neighbours share one edge bin.
/// The transform carries a 1/sqrt(nc) factor, which together with the
/// unit-energy window makes it energy preserving:
///   sum_n |h[m,n;q]|^2 == sum_c |H[m,q(nc-1)+c] W[c]|^2.
inline SubbandCir subband_transform(const ChannelTransferFunction& ctf,
                                    std::size_t nc = measurement::subband_bins,
                                    std::size_t q_count = measurement::subband_count,
                                    unsigned threads = default_thread_count()) {
    detail::require(nc >= 2 && q_count >= 1, "subband_transform: need nc >= 2 and q >= 1");
    if (ctf.bins < required_bins(nc, q_count)) {
        throw invalid_argument("subband_transform: " + std::to_string(ctf.bins) + " bins cannot hold " +
                               std::to_string(q_count) + " sub-bands of " + std::to_string(nc) + " bins");
    }
    detail::require(ctf.samples.size() == ctf.snapshots * ctf.bins, "subband_transform: malformed transfer function");

    SubbandCir cir(ctf.snapshots, nc, q_count);
    cir.t_s = ctf.t_s;
    cir.f_s = ctf.f_s;
    cir.carrier_freq_hz = ctf.carrier_freq_hz;
    cir.source_bins = ctf.bins;

    const auto window = hanning_window(nc);
    const double scale = 1.0 / std::sqrt(static_cast<double>(nc));
    // kernel[n][c] = exp(j 2 pi c n / nc) / sqrt(nc), split for vectorization
    std::vector<double> kernel_re(nc * nc);
    std::vector<double> kernel_im(nc * nc);
    for (std::size_t n = 0; n < nc; ++n) {
        for (std::size_t c = 0; c < nc; ++c) {
            const double phase = 2.0 * std::numbers::pi * static_cast<double>((c * n) % nc) / static_cast<double>(nc);
            kernel_re[n * nc + c] = scale * std::cos(phase);
            kernel_im[n * nc + c] = scale * std::sin(phase);
        }
    }

    parallel_for(q_count, threads, [&](std::size_t q) {
        std::vector<double> g_re(nc);
        std::vector<double> g_im(nc);
        const std::size_t first_bin = q * (nc - 1);
        for (std::size_t m = 0; m < ctf.snapshots; ++m) {
            const auto row = ctf.row(m);
            for (std::size_t c = 0; c < nc; ++c) {
                g_re[c] = static_cast<double>(row[first_bin + c].real()) * window[c];
                g_im[c] = static_cast<double>(row[first_bin + c].imag()) * window[c];
            }
            auto out = cir.profile(m, q);
            for (std::size_t n = 0; n < nc; ++n) {
                const double* kr = kernel_re.data() + n * nc;
                const double* ki = kernel_im.data() + n * nc;
                double acc_re = 0.0;
                double acc_im = 0.0;
                for (std::size_t c = 0; c < nc; ++c) {
                    acc_re += g_re[c] * kr[c] - g_im[c] * ki[c];
                    acc_im += g_re[c] * ki[c] + g_im[c] * kr[c];
                }
                out[n] = {acc_re, acc_im};
            }
        }
    });
    return cir;
}

/// Delay shift applied to each (chunk, sub-band) by align_first_tap.
struct AlignmentReport {
    std::size_t chunk_length = 0;
    std::size_t chunks = 0;
    std::size_t subbands = 0;
    std::vector<std::size_t> shifts;  ///< [chunk][q]

    std::size_t shift(std::size_t chunk, std::size_t q) const { return shifts[chunk * subbands + q]; }
};

/// Moves the strongest delay bin of every chunk of s_ls snapshots to n = 0.
///
/// The strongest bin is the one with the largest mean |h|^2 over the chunk
/// (first one on ties); all snapshots of the chunk are cyclically rotated
/// by that many bins, so per-snapshot power is unchanged. A trailing
/// partial chunk is aligned on its own.
inline std::pair<SubbandCir, AlignmentReport> align_first_tap(SubbandCir cir, std::size_t s_ls,
                                                              unsigned threads = default_thread_count()) {
    detail::require(s_ls >= 1, "align_first_tap: s_ls must be positive");
    if (cir.snapshots < s_ls) {
        throw invalid_argument("align_first_tap: " + std::to_string(cir.snapshots) +
                               " snapshots are fewer than the chunk length " + std::to_string(s_ls));
    }
    AlignmentReport report;
    report.chunk_length = s_ls;
    report.chunks = (cir.snapshots + s_ls - 1) / s_ls;
    report.subbands = cir.subbands;
    report.shifts.assign(report.chunks * report.subbands, 0);

    const std::size_t nc = cir.delay_bins;
    parallel_for(cir.subbands, threads, [&](std::size_t q) {
        std::vector<double> mean_power(nc);
        for (std::size_t chunk = 0; chunk < report.chunks; ++chunk) {
            const std::size_t begin = chunk * s_ls;
            const std::size_t end = std::min(begin + s_ls, cir.snapshots);
            std::fill(mean_power.begin(), mean_power.end(), 0.0);
            for (std::size_t m = begin; m < end; ++m) {
                const auto p = cir.profile(m, q);
                for (std::size_t n = 0; n < nc; ++n) {
                    mean_power[n] += std::norm(p[n]);
                }
            }
            const auto peak = static_cast<std::size_t>(
                std::distance(mean_power.begin(), std::max_element(mean_power.begin(), mean_power.end())));
            report.shifts[chunk * report.subbands + q] = peak;
            if (peak == 0) {
                continue;
            }
            for (std::size_t m = begin; m < end; ++m) {
                auto p = cir.profile(m, q);
                std::rotate(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(peak), p.end());
            }
        }
    });
    return {std::move(cir), std::move(report)};
}

/// Normalizes every snapshot by the moving average of the total sub-band
/// power over s_ls snapshots.
///
/// Output row i corresponds to input snapshot m = i + s_ls/2 and is divided
/// by sqrt(eps[m]) with eps[m] the mean of sum_n |h[m',n;q]|^2 over
/// m' in [m - s_ls/2, m - s_ls/2 + s_ls - 1]. Rows without a full window
/// are cropped, leaving snapshots - s_ls rows.
inline SubbandCir remove_large_scale(SubbandCir cir, std::size_t s_ls, unsigned threads = default_thread_count()) {
    detail::require(s_ls >= 1, "remove_large_scale: s_ls must be positive");
    if (cir.snapshots <= s_ls) {
        throw invalid_argument("remove_large_scale: window of " + std::to_string(s_ls) +
                               " snapshots exceeds the " + std::to_string(cir.snapshots) + " available");
    }
    const std::size_t in_len = cir.snapshots;
    const std::size_t out_len = in_len - s_ls;
    const std::size_t half = s_ls / 2;
    const std::size_t nc = cir.delay_bins;

    std::vector<int> degenerate(cir.subbands, 0);
    parallel_for(cir.subbands, threads, [&](std::size_t q) {
        std::vector<double> power(in_len);
        for (std::size_t m = 0; m < in_len; ++m) {
            power[m] = cir.total_power(m, q);
        }
        std::vector<double> scale(out_len);
        double window_sum = 0.0;
        for (std::size_t m = 0; m < s_ls; ++m) {
            window_sum += power[m];
        }
        for (std::size_t i = 0; i < out_len; ++i) {
            if (i > 0) {
                window_sum += power[i + s_ls - 1] - power[i - 1];
            }
            const double eps = window_sum / static_cast<double>(s_ls);
            if (!(eps > 0.0)) {
                degenerate[q] = 1;
                return;
            }
            scale[i] = 1.0 / std::sqrt(eps);
        }
        // Row i reads input row i + half >= i, so the forward in-place copy is safe.
        for (std::size_t i = 0; i < out_len; ++i) {
            const auto src = cir.profile(i + half, q);
            auto dst = cir.profile(i, q);
            for (std::size_t n = 0; n < nc; ++n) {
                dst[n] = src[n] * scale[i];
            }
        }
    });
    for (std::size_t q = 0; q < cir.subbands; ++q) {
        if (degenerate[q]) {
            throw degenerate_input("remove_large_scale: zero windowed power in sub-band " + std::to_string(q));
        }
    }
    // Compact the per-sub-band blocks from stride in_len to stride out_len.
    for (std::size_t q = 1; q < cir.subbands; ++q) {
        std::copy_n(cir.values.begin() + static_cast<std::ptrdiff_t>(q * in_len * nc), out_len * nc,
                    cir.values.begin() + static_cast<std::ptrdiff_t>(q * out_len * nc));
    }
    cir.values.resize(out_len * nc * cir.subbands);
    cir.snapshots = out_len;
    cir.first_snapshot += half;
    return cir;
}

}  // namespace v2vk
