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
#include "v2vk/measurement.hpp"
#include "v2vk/random.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace v2vk {

/// Bi-modal Gaussian mixture over K in dB. Component 1 is the low-K (nLOS)
/// mode with weight w, component 2 the LOS/oLOS mode with weight 1 - w.
struct GmmParams {
    double w = 0.5;
    double mu1_db = 0.0;
    double sigma1_db = 1.0;
    double mu2_db = 0.0;
    double sigma2_db = 1.0;

    void validate() const {
        detail::require(std::isfinite(w) && w >= 0.0 && w <= 1.0, "GmmParams: weight must lie in [0, 1]");
        detail::require(std::isfinite(mu1_db) && std::isfinite(mu2_db), "GmmParams: means must be finite");
        detail::require(std::isfinite(sigma1_db) && sigma1_db > 0.0 && std::isfinite(sigma2_db) && sigma2_db > 0.0,
                        "GmmParams: standard deviations must be positive");
        detail::require(mu1_db <= mu2_db, "GmmParams: components must be ordered mu1 <= mu2");
    }

    double mean_db() const { return w * mu1_db + (1.0 - w) * mu2_db; }

    friend bool operator==(const GmmParams&, const GmmParams&) = default;
};

struct ScenarioProfile {
    std::string name;
    double avg_speed_mps = 0.0;
    std::size_t s_k = 0;   ///< K estimation window [samples]
    std::size_t s_ls = 0;  ///< large-scale removal window [samples]
    GmmParams gmm;
    int runs = 0;                  ///< measurement runs behind the reference fit
    double reference_epsilon = 0;  ///< reported KS bound of the reference fit, 0 if unknown

    void validate() const {
        detail::require(!name.empty(), "ScenarioProfile: empty name");
        detail::require(std::isfinite(avg_speed_mps) && avg_speed_mps > 0.0,
                        "ScenarioProfile '" + name + "': average speed must be positive");
        detail::require(s_k > 0, "ScenarioProfile '" + name + "': s_k must be positive");
        detail::require(s_ls == s_k + 2 * measurement::large_scale_guard,
                        "ScenarioProfile '" + name + "': s_ls must equal s_k + 100");
        gmm.validate();
    }

    friend bool operator==(const ScenarioProfile&, const ScenarioProfile&) = default;
};

/// Scenario catalog. Each row pairs a fitted mixture with the speed and
/// K window of its scenario group; the four road-crossing variants share
/// the road-crossing speed row.
inline std::vector<ScenarioProfile> builtin_profiles() {
    constexpr std::size_t guard = 2 * measurement::large_scale_guard;
    auto row = [](std::string name, double speed, std::size_t s_k, GmmParams gmm, int runs, double eps) {
        return ScenarioProfile{std::move(name), speed, s_k, s_k + guard, gmm, runs, eps};
    };
    return {
        row("road crossing - suburban with traffic", 8.3, 2100, {0.27, -42.7, 7.5, 3.7, 5.2}, 3, 0.04),
        row("road crossing - suburban without traffic", 8.3, 2100, {0.13, -43.0, 7.7, 4.5, 5.5}, 11, 0.02),
        row("road crossing - urban single lane", 8.3, 2100, {0.51, -43.3, 6.6, -0.6, 5.6}, 5, 0.06),
        row("road crossing - urban multiple lane", 8.3, 2100, {0.38, -41.1, 7.2, 0.1, 4.7}, 5, 0.05),
        row("general los obstruction - highway", 27.8, 630, {0.05, -48.9, 7.9, 7.6, 7.5}, 12, 0.04),
        row("merging lanes - rural", 22.2, 790, {0.03, -29.9, 21.7, 14.2, 4.2}, 7, 0.02),
        row("traffic congestion - slow traffic", 5.5, 3100, {0.12, -43.1, 8.0, 4.4, 6.5}, 11, 0.02),
        row("traffic congestion - approaching traffic jam", 16.7, 1050, {0.03, -49.2, 7.9, 8.1, 6.5}, 7, 0.02),
        row("in-tunnel", 25.0, 700, {0.10, -43.1, 7.2, 4.7, 5.4}, 7, 0.02),
        row("on-bridge", 27.8, 630, {0.44, 10.9, 3.2, 14.6, 4.2}, 4, 0.02),
    };
}

namespace detail {

inline std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

}  // namespace detail

/// Case-insensitive lookup by exact name.
inline std::optional<ScenarioProfile> find_profile(const std::vector<ScenarioProfile>& profiles,
                                                   std::string_view name) {
    const std::string key = detail::lower(name);
    for (const auto& p : profiles) {
        if (detail::lower(p.name) == key) {
            return p;
        }
    }
    return std::nullopt;
}

inline std::optional<ScenarioProfile> find_profile(std::string_view name) {
    return find_profile(builtin_profiles(), name);
}

struct WindowLengths {
    std::size_t s_k;
    std::size_t s_ls;
};

/// K window covering 100 wavelengths of travel at the given average speed,
/// and the matching large-scale window.
inline WindowLengths compute_window_lengths(double avg_speed_mps, double carrier_freq_hz, double t_s) {
    detail::require(std::isfinite(avg_speed_mps) && avg_speed_mps > 0.0, "average speed must be positive");
    detail::require(std::isfinite(carrier_freq_hz) && carrier_freq_hz > 0.0, "carrier frequency must be positive");
    detail::require(std::isfinite(t_s) && t_s > 0.0, "snapshot interval must be positive");
    const double wavelength = measurement::speed_of_light_mps / carrier_freq_hz;
    const double samples = measurement::stationarity_wavelengths * wavelength / (avg_speed_mps * t_s);
    const double s_k = std::round(samples);
    if (!(s_k >= 2.0)) {
        throw invalid_argument("K window shorter than 2 samples; speed too high for the snapshot rate");
    }
    const auto n = static_cast<std::size_t>(s_k);
    return {n, n + 2 * measurement::large_scale_guard};
}

/// i.i.d. K draws [dB] from the mixture.
template <typename Engine>
std::vector<double> sample_k_values(const GmmParams& gmm, std::size_t count, Engine& engine) {
    gmm.validate();
    detail::require(count >= 1, "sample_k_values: count must be at least 1");
    std::uniform_real_distribution<double> pick(0.0, 1.0);
    std::normal_distribution<double> unit(0.0, 1.0);
    std::vector<double> out(count);
    for (auto& k : out) {
        const bool first = pick(engine) < gmm.w;
        const double z = unit(engine);
        k = first ? gmm.mu1_db + gmm.sigma1_db * z : gmm.mu2_db + gmm.sigma2_db * z;
    }
    return out;
}

inline std::vector<double> sample_k_values(const GmmParams& gmm, std::size_t count, std::uint64_t seed) {
    auto engine = substream(seed, "k-samples");
    return sample_k_values(gmm, count, engine);
}

}  // namespace v2vk
