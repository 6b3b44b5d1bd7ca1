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

#include "oracles.hpp"

#include <v2vk/subband.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace v2vk;

namespace {

ChannelTransferFunction make_ctf(std::size_t s, std::size_t n) {
    return ChannelTransferFunction(s, n, measurement::snapshot_interval_s, measurement::bin_spacing_hz,
                                   measurement::carrier_freq_hz);
}

ChannelTransferFunction random_ctf(std::size_t s, std::size_t n, unsigned seed) {
    auto ctf = make_ctf(s, n);
    std::mt19937 g(seed);
    std::normal_distribution<float> d(0.0f, 1.0f);
    for (auto& v : ctf.samples) {
        v = {d(g), d(g)};
    }
    return ctf;
}

SubbandCir impulse_cir(std::size_t s, std::size_t nc, std::size_t q, std::size_t bin) {
    SubbandCir cir(s, nc, q);
    for (std::size_t m = 0; m < s; ++m) {
        for (std::size_t k = 0; k < q; ++k) {
            cir.at(m, bin, k) = {1.0, 0.5};
            cir.at(m, (bin + 1) % nc, k) = {0.1, 0.0};
        }
    }
    return cir;
}

}  // namespace

TEST(Hanning, UnitEnergyPeriodicShape) {
    const auto w = hanning_window(33);
    double e = 0.0;
    for (double v : w) {
        e += v * v;
    }
    EXPECT_NEAR(e, 1.0, 1e-15);
    EXPECT_EQ(w[0], 0.0);
    for (std::size_t c = 1; c < 33; ++c) {
        EXPECT_NEAR(w[c], w[33 - c], 1e-15);
    }
    const auto ref = oracle::hann(33);
    for (std::size_t c = 0; c < 33; ++c) {
        EXPECT_NEAR(w[c], static_cast<double>(ref[c]), 1e-15);
    }
}

TEST(SubbandTransform, FlatChannelConcentratesAtZeroDelay) {
    auto ctf = make_ctf(4, 769);
    for (auto& v : ctf.samples) {
        v = 1.0f;
    }
    const auto cir = subband_transform(ctf);
    for (std::size_t q = 0; q < 24; ++q) {
        for (std::size_t m = 0; m < 4; ++m) {
            const double e0 = std::norm(cir.at(m, 0, q));
            for (std::size_t n = 1; n < 33; ++n) {
                EXPECT_LT(std::norm(cir.at(m, n, q)), e0);
            }
            // Hann leakage leaves 1/4 of the peak power in each neighbour
            EXPECT_NEAR(e0 / cir.total_power(m, q), 2.0 / 3.0, 1e-6);
        }
    }
}

TEST(SubbandTransform, PureDelayPeaksAtThatBin) {
    auto ctf = make_ctf(2, 769);
    for (std::size_t m = 0; m < 2; ++m) {
        for (std::size_t b = 0; b < 769; ++b) {
            ctf.at(m, b) = std::polar(1.0f, static_cast<float>(-2.0 * std::numbers::pi * b * 3 / 33.0));
        }
    }
    const auto cir = subband_transform(ctf);
    for (std::size_t q = 0; q < 24; ++q) {
        const auto p = cir.profile(0, q);
        std::size_t peak = 0;
        for (std::size_t n = 1; n < 33; ++n) {
            if (std::norm(p[n]) > std::norm(p[peak])) {
                peak = n;
            }
        }
        EXPECT_EQ(peak, 3u);
    }
}

TEST(SubbandTransform, ParsevalAndDirectSummation) {
    const auto ctf = random_ctf(6, 769, 17);
    const auto cir = subband_transform(ctf);
    const auto w = oracle::hann(33);
    for (std::size_t m = 0; m < 6; ++m) {
        for (std::size_t q = 0; q < 24; ++q) {
            long double windowed = 0.0L;
            for (std::size_t c = 0; c < 33; ++c) {
                windowed += std::norm(std::complex<long double>(ctf.at(m, q * 32 + c).real(),
                                                                ctf.at(m, q * 32 + c).imag())) *
                            w[c] * w[c];
            }
            EXPECT_NEAR(cir.total_power(m, q) / static_cast<double>(windowed), 1.0, 1e-10);
        }
    }
    const auto row = std::vector<std::complex<float>>(ctf.row(3).begin(), ctf.row(3).end());
    for (std::size_t n : {0u, 1u, 7u, 32u}) {
        const auto ref = oracle::subband_coef(row, 33, 5, n);
        EXPECT_NEAR(std::abs(cir.at(3, n, 5) - std::complex<double>(ref)), 0.0, 1e-12);
    }
}

TEST(SubbandTransform, Linearity) {
    const auto a = random_ctf(3, 769, 1);
    const auto b = random_ctf(3, 769, 2);
    auto sum = make_ctf(3, 769);
    const std::complex<float> ca(2.0f, -1.0f);
    const std::complex<float> cb(0.5f, 0.0f);
    for (std::size_t i = 0; i < sum.samples.size(); ++i) {
        sum.samples[i] = ca * a.samples[i] + cb * b.samples[i];
    }
    const auto ta = subband_transform(a);
    const auto tb = subband_transform(b);
    const auto ts = subband_transform(sum);
    for (std::size_t i = 0; i < ts.values.size(); ++i) {
        const auto expect = std::complex<double>(ca) * ta.values[i] + std::complex<double>(cb) * tb.values[i];
        EXPECT_NEAR(std::abs(ts.values[i] - expect), 0.0, 1e-5);
    }
}

TEST(SubbandTransform, SharedEdgeBins) {
    EXPECT_EQ(required_bins(33, 24), 769u);
    EXPECT_THROW(subband_transform(random_ctf(2, 768, 3)), invalid_argument);
    EXPECT_NO_THROW(subband_transform(random_ctf(2, 200, 3), 9, 24));
}

TEST(SubbandTransform, MetadataAndThreadIndependence) {
    const auto ctf = random_ctf(40, 769, 4);
    const auto a = subband_transform(ctf, 33, 24, 1);
    const auto b = subband_transform(ctf, 33, 24, 5);
    EXPECT_EQ(a.values, b.values);
    EXPECT_EQ(a.snapshots, 40u);
    EXPECT_EQ(a.source_bins, 769u);
    EXPECT_EQ(a.first_snapshot, 0u);
    // sub-band centre at the middle bin of its 33
    EXPECT_NEAR(a.center_freq_hz(0), ctf.bin_frequency_hz(16), 1e-3);
    EXPECT_NEAR(a.center_freq_hz(23), ctf.bin_frequency_hz(23 * 32 + 16), 1e-3);
}

TEST(Align, PeakAtZeroIsIdentity) {
    const auto cir = impulse_cir(100, 8, 3, 0);
    const auto [out, report] = align_first_tap(cir, 30);
    EXPECT_EQ(out.values, cir.values);
    EXPECT_EQ(report.chunks, 4u);
    for (auto s : report.shifts) {
        EXPECT_EQ(s, 0u);
    }
}

TEST(Align, ImpulseShiftedToOrigin) {
    const auto cir = impulse_cir(60, 33, 2, 5);
    const auto [out, report] = align_first_tap(cir, 20);
    for (auto s : report.shifts) {
        EXPECT_EQ(s, 5u);
    }
    for (std::size_t m = 0; m < 60; ++m) {
        EXPECT_EQ(out.at(m, 0, 1), std::complex<double>(1.0, 0.5));
        EXPECT_EQ(out.at(m, 1, 1), std::complex<double>(0.1, 0.0));
    }
}

TEST(Align, TracksDriftingDelay) {
    const std::size_t chunk = 50;
    const std::size_t chunks = 9;
    SubbandCir cir(chunk * chunks, 33, 2);
    std::mt19937 g(5);
    std::normal_distribution<double> d(0.0, 0.05);
    for (std::size_t m = 0; m < cir.snapshots; ++m) {
        for (std::size_t q = 0; q < 2; ++q) {
            for (std::size_t n = 0; n < 33; ++n) {
                cir.at(m, n, q) = {d(g), d(g)};
            }
            cir.at(m, (m / chunk + 2 * q) % 33, q) += 1.0;
        }
    }
    const auto [out, report] = align_first_tap(cir, chunk);
    for (std::size_t c = 0; c < chunks; ++c) {
        for (std::size_t q = 0; q < 2; ++q) {
            EXPECT_EQ(report.shift(c, q), (c + 2 * q) % 33);
        }
    }
    for (std::size_t m = 0; m < cir.snapshots; ++m) {
        EXPECT_NEAR(out.total_power(m, 1), cir.total_power(m, 1), 1e-12);
    }
}

TEST(Align, TooShortThrows) {
    EXPECT_THROW(align_first_tap(impulse_cir(10, 8, 1, 0), 11), invalid_argument);
}

TEST(LargeScale, ConstantPowerNormalizesToOne) {
    SubbandCir cir(300, 8, 3);
    std::mt19937 g(9);
    std::uniform_real_distribution<double> ph(0.0, 2.0 * std::numbers::pi);
    for (std::size_t m = 0; m < 300; ++m) {
        for (std::size_t q = 0; q < 3; ++q) {
            // power 7 split unevenly over two bins with random phases
            cir.at(m, 0, q) = std::polar(std::sqrt(5.0), ph(g));
            cir.at(m, 3, q) = std::polar(std::sqrt(2.0), ph(g));
        }
    }
    const std::size_t s_ls = 101;
    const auto out = remove_large_scale(cir, s_ls);
    ASSERT_EQ(out.snapshots, 300u - s_ls);
    EXPECT_EQ(out.first_snapshot, s_ls / 2);
    for (std::size_t m = 0; m < out.snapshots; ++m) {
        for (std::size_t q = 0; q < 3; ++q) {
            EXPECT_NEAR(out.total_power(m, q), 1.0, 1e-6);
            EXPECT_NEAR(std::arg(out.at(m, 0, q)), std::arg(cir.at(m + s_ls / 2, 0, q)), 1e-12);
        }
    }
    // re-evaluating the window on the output
    for (std::size_t start = 0; start + s_ls <= out.snapshots; start += 13) {
        double acc = 0.0;
        for (std::size_t m = start; m < start + s_ls; ++m) {
            acc += out.total_power(m, 1);
        }
        EXPECT_NEAR(acc / s_ls, 1.0, 1e-6);
    }
}

TEST(LargeScale, MatchesDirectMovingAverage) {
    SubbandCir cir(120, 4, 2);
    std::mt19937 g(10);
    std::normal_distribution<double> d(0.0, 1.0);
    for (auto& v : cir.values) {
        v = {d(g), d(g)};
    }
    const std::size_t s_ls = 31;
    const auto out = remove_large_scale(cir, s_ls, 1);
    for (std::size_t i = 0; i < out.snapshots; ++i) {
        const std::size_t m = i + s_ls / 2;
        long double eps = 0.0L;
        for (std::size_t k = m - s_ls / 2; k < m - s_ls / 2 + s_ls; ++k) {
            eps += cir.total_power(k, 1);
        }
        eps /= s_ls;
        for (std::size_t n = 0; n < 4; ++n) {
            const auto ref = cir.at(m, n, 1) / std::sqrt(static_cast<double>(eps));
            EXPECT_NEAR(std::abs(out.at(i, n, 1) - ref), 0.0, 1e-12);
        }
    }
    EXPECT_EQ(remove_large_scale(cir, s_ls, 4).values, out.values);
}

TEST(LargeScale, ZeroPowerAndShortInput) {
    SubbandCir zero(200, 4, 2);
    for (std::size_t m = 0; m < 200; ++m) {
        zero.at(m, 0, 0) = 1.0;
    }
    EXPECT_THROW(remove_large_scale(zero, 50), degenerate_input);
    EXPECT_THROW(remove_large_scale(impulse_cir(50, 4, 1, 0), 50), invalid_argument);
}
