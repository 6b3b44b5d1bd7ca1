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

#include <cstddef>

// Sounder configuration of the reference measurement campaign and the
// derived sub-band layout.

namespace v2vk::measurement {

inline constexpr double speed_of_light_mps = 299'792'458.0;

inline constexpr double carrier_freq_hz = 5.6e9;
inline constexpr double bandwidth_hz = 240e6;
inline constexpr std::size_t frequency_bins = 769;
inline constexpr double bin_spacing_hz = 312.1e3;
inline constexpr double snapshot_interval_s = 307.2e-6;

/// 10 MHz channel of IEEE 802.11p.
inline constexpr double subband_bandwidth_hz = 10e6;
inline constexpr std::size_t subband_bins = 33;
inline constexpr std::size_t subband_count = 24;

/// Guard added on each side of the K window to form the large-scale window.
inline constexpr std::size_t large_scale_guard = 50;

/// Stationarity distance in carrier wavelengths.
inline constexpr double stationarity_wavelengths = 100.0;

/// Link index of a 4x4 array pair; antennas are numbered 1..4 as
/// {left, back, front, right}. Only link 10 (front-front) is analyzed.
constexpr int link_index(int tx_antenna, int rx_antenna) {
    return 4 * (tx_antenna - 1) + (5 - rx_antenna);
}

inline constexpr int analyzed_link = link_index(3, 3);

}  // namespace v2vk::measurement
