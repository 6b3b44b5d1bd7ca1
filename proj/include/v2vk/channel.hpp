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

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace v2vk {

/// Sampled time-varying frequency response H[m, b] with m the snapshot
/// (time) index and b the frequency bin. Stored row-major, one row per
/// snapshot, in single precision to match the on-disk container.
struct ChannelTransferFunction {
    std::size_t snapshots = 0;
    std::size_t bins = 0;
    double t_s = 0.0;              ///< snapshot interval [s]
    double f_s = 0.0;              ///< bin spacing [Hz]
    double carrier_freq_hz = 0.0;  ///< frequency of the center bin
    std::vector<std::complex<float>> samples;

    ChannelTransferFunction() = default;

    ChannelTransferFunction(std::size_t s, std::size_t n, double ts, double fs, double carrier)
        : snapshots(s), bins(n), t_s(ts), f_s(fs), carrier_freq_hz(carrier), samples(s * n) {}

    std::complex<float>& at(std::size_t m, std::size_t b) { return samples[m * bins + b]; }
    const std::complex<float>& at(std::size_t m, std::size_t b) const { return samples[m * bins + b]; }

    std::span<std::complex<float>> row(std::size_t m) { return {samples.data() + m * bins, bins}; }
    std::span<const std::complex<float>> row(std::size_t m) const { return {samples.data() + m * bins, bins}; }

    double bin_frequency_hz(std::size_t b) const {
        return carrier_freq_hz + (static_cast<double>(b) - 0.5 * static_cast<double>(bins - 1)) * f_s;
    }

    double duration_s() const { return static_cast<double>(snapshots) * t_s; }

    void validate() const {
        detail::require(snapshots > 0 && bins > 0, "ChannelTransferFunction: empty shape");
        detail::require(samples.size() == snapshots * bins, "ChannelTransferFunction: sample count does not match shape");
        detail::require(std::isfinite(t_s) && t_s > 0.0 && std::isfinite(f_s) && f_s > 0.0 &&
                            std::isfinite(carrier_freq_hz) && carrier_freq_hz > 0.0,
                        "ChannelTransferFunction: sampling metadata must be positive");
        for (const auto& v : samples) {
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                throw invalid_argument("ChannelTransferFunction: non-finite entry");
            }
        }
    }
};

/// Center frequency of sub-band q when sub-bands of `delay_bins` bins
/// share one edge bin with their neighbours.
inline double subband_center_freq_hz(std::size_t q, std::size_t delay_bins, std::size_t source_bins, double f_s,
                                     double carrier_freq_hz) {
    const double center_bin = static_cast<double>(q * (delay_bins - 1)) + 0.5 * static_cast<double>(delay_bins - 1);
    return carrier_freq_hz + (center_bin - 0.5 * static_cast<double>(source_bins - 1)) * f_s;
}

}  // namespace v2vk
