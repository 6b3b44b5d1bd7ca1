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
#include "v2vk/parallel.hpp"
#include "v2vk/subband.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace v2vk {

/// Moment-based Rician fit of one window of samples.
struct MomEstimate {
    double k_linear = std::numeric_limits<double>::quiet_NaN();
    double k_db = std::numeric_limits<double>::quiet_NaN();
    double specular_power = std::numeric_limits<double>::quiet_NaN();  ///< r^2
    double diffuse_power = std::numeric_limits<double>::quiet_NaN();   ///< 2 sigma^2
    bool valid = false;
    bool infinite = false;  ///< no measurable diffuse power; k_linear = +inf

    friend bool operator==(const MomEstimate&, const MomEstimate&) = default;
};

inline constexpr std::size_t min_mom_samples = 8;

/// Windows whose diffuse power is below this fraction of the mean power are
/// reported as purely specular. Double-precision moments cannot resolve
/// K beyond ~120 dB, so this only catches rounding noise on constant input.
inline constexpr double specular_resolution = 1e-12;

/// Rician K from the first two moments of the power samples g_i:
///   r^4 = Ga^2 - Gv,  2 sigma^2 = Ga - r^2
/// with Ga the mean and Gv the unbiased variance of g. Over-dispersed
/// windows (Gv > Ga^2) have no Rician solution and are marked invalid.
inline MomEstimate estimate_k_from_power(std::span<const double> power) {
    if (power.size() < min_mom_samples) {
        throw invalid_argument("estimate_k_mom: need at least " + std::to_string(min_mom_samples) + " samples, got " +
                               std::to_string(power.size()));
    }
    const double n = static_cast<double>(power.size());
    double sum = 0.0;
    for (double g : power) {
        sum += g;
    }
    const double ga = sum / n;
    double ss = 0.0;
    for (double g : power) {
        const double d = g - ga;
        ss += d * d;
    }
    const double gv = ss / (n - 1.0);

    MomEstimate est;
    if (!(ga > 0.0) || !std::isfinite(gv)) {
        return est;
    }
    const double disc = ga * ga - gv;
    if (disc < 0.0) {
        return est;
    }
    const double specular = std::sqrt(disc);
    // ga - sqrt(ga^2 - gv) without cancellation
    const double diffuse = gv / (ga + specular);
    est.specular_power = specular;
    est.diffuse_power = diffuse;
    est.valid = true;
    if (diffuse <= specular_resolution * ga) {
        est.infinite = true;
        est.k_linear = std::numeric_limits<double>::infinity();
        est.k_db = std::numeric_limits<double>::infinity();
        return est;
    }
    est.k_linear = specular / diffuse;
    est.k_db = 10.0 * std::log10(est.k_linear);
    return est;
}

inline MomEstimate estimate_k_mom(std::span<const std::complex<double>> samples) {
    std::vector<double> power(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        power[i] = std::norm(samples[i]);
    }
    return estimate_k_from_power(power);
}

/// Time-frequency field of K estimates for one delay bin.
struct KFactorField {
    std::size_t windows = 0;
    std::size_t subbands = 0;
    std::size_t window = 0;  ///< samples per estimate (s_k)
    std::size_t stride = 0;  ///< samples between window starts
    std::size_t tap = 0;
    std::size_t first_snapshot = 0;  ///< absolute snapshot index of the first CIR row
    double t_s = 0.0;
    double f_s = 0.0;
    double carrier_freq_hz = 0.0;
    std::size_t delay_bins = 0;
    std::size_t source_bins = 0;
    std::vector<MomEstimate> estimates;  ///< [window][q]

    const MomEstimate& at(std::size_t i, std::size_t q) const { return estimates[i * subbands + q]; }

    /// First CIR row covered by window i.
    std::size_t window_start(std::size_t i) const { return i * stride; }

    /// Absolute snapshot index at the window center (start + window/2).
    std::size_t center_snapshot(std::size_t i) const { return first_snapshot + window_start(i) + window / 2; }

    double center_time_s(std::size_t i) const { return static_cast<double>(center_snapshot(i)) * t_s; }

    double center_freq_hz(std::size_t q) const {
        return subband_center_freq_hz(q, delay_bins, source_bins, f_s, carrier_freq_hz);
    }
};

inline std::size_t default_stride(std::size_t s_k) { return std::max<std::size_t>(1, s_k / 10); }

/// K estimates of delay bin `tap` on windows of s_k snapshots starting every
/// `stride` snapshots, for every sub-band. Entry (i, q) equals
/// estimate_k_mom on rows [i*stride, i*stride + s_k) of that tap.
inline KFactorField sliding_k(const SubbandCir& cir, std::size_t tap, std::size_t s_k, std::size_t stride,
                              unsigned threads = default_thread_count()) {
    detail::require(tap < cir.delay_bins, "sliding_k: tap outside the delay axis");
    detail::require(stride >= 1, "sliding_k: stride must be at least 1");
    detail::require(s_k >= min_mom_samples, "sliding_k: window shorter than the estimator minimum");
    if (s_k > cir.snapshots) {
        throw invalid_argument("sliding_k: window of " + std::to_string(s_k) + " exceeds the " +
                               std::to_string(cir.snapshots) + " available snapshots");
    }
    KFactorField field;
    field.windows = (cir.snapshots - s_k) / stride + 1;
    field.subbands = cir.subbands;
    field.window = s_k;
    field.stride = stride;
    field.tap = tap;
    field.first_snapshot = cir.first_snapshot;
    field.t_s = cir.t_s;
    field.f_s = cir.f_s;
    field.carrier_freq_hz = cir.carrier_freq_hz;
    field.delay_bins = cir.delay_bins;
    field.source_bins = cir.source_bins;
    field.estimates.resize(field.windows * field.subbands);

    parallel_for(cir.subbands, threads, [&](std::size_t q) {
        const auto series = cir.tap_series(tap, q);
        const std::span<const std::complex<double>> all(series);
        for (std::size_t i = 0; i < field.windows; ++i) {
            field.estimates[i * field.subbands + q] = estimate_k_mom(all.subspan(i * stride, s_k));
        }
    });
    return field;
}

}  // namespace v2vk
