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

#include <cstdint>
#include <random>
#include <string_view>

namespace v2vk {

using rng_engine = std::mt19937_64;

namespace detail {

constexpr std::uint64_t fnv1a(std::string_view label) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (char c : label) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

}  // namespace detail

/// Independent generator for one consumer of a run's randomness.
///
/// Every random quantity in a run derives from a single 64-bit seed; a
/// fixed text label names the consumer ("k-trajectory", "taps", ...) and
/// the index separates parallel work items (e.g. stationarity blocks), so
/// results do not depend on evaluation order.
inline rng_engine substream(std::uint64_t seed, std::string_view label, std::uint64_t index = 0) {
    const std::uint64_t tag = detail::fnv1a(label);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(tag),  static_cast<std::uint32_t>(tag >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return rng_engine(seq);
}

}  // namespace v2vk
