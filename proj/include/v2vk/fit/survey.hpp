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

#include "v2vk/fit/ecdf.hpp"
#include "v2vk/fit/envelope.hpp"
#include "v2vk/parallel.hpp"
#include "v2vk/subband.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace v2vk {

/// Goodness of fit of the three envelope laws for one (tap, sub-band).
struct EnvelopeSurvey {
    std::size_t tap = 0;
    std::size_t subband = 0;
    std::size_t samples = 0;
    RicianFit rician;
    double rician_ks = 1.0;
    RayleighFit rayleigh;
    double rayleigh_ks = 1.0;
    WeibullFit weibull;
};

inline EnvelopeSurvey survey_envelope(std::span<const double> envelope, std::size_t tap, std::size_t subband) {
    EnvelopeSurvey s;
    s.tap = tap;
    s.subband = subband;
    s.samples = envelope.size();
    const EmpiricalCdf emp(envelope);
    s.rician = fit_rician(envelope);
    s.rician_ks = ks_gof(emp, [&](double z) { return s.rician.cdf(z); });
    s.rayleigh = fit_rayleigh(envelope);
    s.rayleigh_ks = ks_gof(emp, [&](double z) { return s.rayleigh.cdf(z); });
    s.weibull = fit_weibull(envelope);
    return s;
}

/// Envelope fits of delay bins 0..taps-1 in every sub-band over CIR rows
/// [begin, begin + count). Results are ordered [q][tap].
inline std::vector<EnvelopeSurvey> survey_envelopes(const SubbandCir& cir, std::size_t taps, std::size_t begin,
                                                    std::size_t count, unsigned threads = default_thread_count()) {
    detail::require(taps >= 1 && taps <= cir.delay_bins, "survey_envelopes: tap count outside the delay axis");
    detail::require(begin + count <= cir.snapshots, "survey_envelopes: row range outside the CIR");
    std::vector<EnvelopeSurvey> out(cir.subbands * taps);
    parallel_for(cir.subbands, threads, [&](std::size_t q) {
        std::vector<double> envelope(count);
        for (std::size_t n = 0; n < taps; ++n) {
            for (std::size_t i = 0; i < count; ++i) {
                envelope[i] = std::abs(cir.at(begin + i, n, q));
            }
            out[q * taps + n] = survey_envelope(envelope, n, q);
        }
    });
    return out;
}

}  // namespace v2vk
