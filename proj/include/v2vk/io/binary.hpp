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
#include "v2vk/subband.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

// Binary containers for transfer functions ("V2VCTF1") and sub-band CIRs
// ("V2VCIR1"). All fields are little-endian:
//
//   CTF: magic[8] | u64 S | u64 N | f64 t_s | f64 f_s | f64 carrier
//        | S*N x (f32 re, f32 im), time-major
//   CIR: magic[8] | u64 S | u64 Nc | u64 Q | f64 t_s | f64 f_s | f64 carrier
//        | u64 source_bins | u64 first_snapshot
//        | S*Nc*Q x (f32 re, f32 im), ordered [m][n][q]
//
// The 7-character magic is padded with one NUL byte.

namespace v2vk::io {

static_assert(std::endian::native == std::endian::little, "container I/O assumes a little-endian host");

inline constexpr std::string_view ctf_magic = "V2VCTF1";
inline constexpr std::string_view cir_magic = "V2VCIR1";

namespace detail {

template <typename T>
void put(std::ostream& os, T value) {
    os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& is, const char* what) {
    T value{};
    if (!is.read(reinterpret_cast<char*>(&value), sizeof(T))) {
        throw format_error(std::string("truncated header: missing ") + what);
    }
    return value;
}

inline void put_magic(std::ostream& os, std::string_view magic) {
    std::array<char, 8> buf{};
    std::memcpy(buf.data(), magic.data(), magic.size());
    os.write(buf.data(), buf.size());
}

inline void expect_magic(std::istream& is, std::string_view magic) {
    std::array<char, 8> buf{};
    if (!is.read(buf.data(), buf.size())) {
        throw format_error("file too short for a container header");
    }
    if (std::string_view(buf.data(), magic.size()) != magic || buf[magic.size()] != '\0') {
        throw format_error("bad magic: expected " + std::string(magic));
    }
}

inline std::uint64_t checked_product(std::initializer_list<std::uint64_t> dims) {
    std::uint64_t total = 1;
    for (auto d : dims) {
        if (d == 0) {
            throw format_error("container declares an empty axis");
        }
        if (total > std::numeric_limits<std::uint64_t>::max() / 16 / d) {
            throw format_error("container shape overflows");
        }
        total *= d;
    }
    return total;
}

// Rejects a truncated payload before allocating for it, when the stream
// can report its remaining length.
inline void expect_payload(std::istream& is, std::uint64_t bytes) {
    const auto here = is.tellg();
    if (here < 0) {
        return;
    }
    is.seekg(0, std::ios::end);
    const auto end = is.tellg();
    is.seekg(here);
    if (end >= 0 && static_cast<std::uint64_t>(end - here) < bytes) {
        throw format_error("truncated payload");
    }
}

inline void read_floats(std::istream& is, std::vector<float>& buf) {
    if (!is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(float)))) {
        throw format_error("truncated payload");
    }
}

inline void expect_end(std::istream& is) {
    if (is.peek() != std::char_traits<char>::eof()) {
        throw format_error("trailing bytes after payload");
    }
}

inline void check_metadata(double t_s, double f_s, double carrier) {
    auto ok = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!ok(t_s) || !ok(f_s) || !ok(carrier)) {
        throw format_error("sampling metadata must be finite and positive");
    }
}

inline std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    return os;
}

inline std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw format_error("cannot open " + path.string());
    }
    return is;
}

}  // namespace detail

inline void write_ctf(std::ostream& os, const ChannelTransferFunction& ctf) {
    detail::put_magic(os, ctf_magic);
    detail::put<std::uint64_t>(os, ctf.snapshots);
    detail::put<std::uint64_t>(os, ctf.bins);
    detail::put<double>(os, ctf.t_s);
    detail::put<double>(os, ctf.f_s);
    detail::put<double>(os, ctf.carrier_freq_hz);
    // std::complex<float> is layout-compatible with float[2].
    os.write(reinterpret_cast<const char*>(ctf.samples.data()),
             static_cast<std::streamsize>(ctf.samples.size() * sizeof(std::complex<float>)));
    if (!os) {
        throw std::runtime_error("write_ctf: stream error");
    }
}

inline ChannelTransferFunction read_ctf(std::istream& is) {
    detail::expect_magic(is, ctf_magic);
    const auto s = detail::get<std::uint64_t>(is, "S");
    const auto n = detail::get<std::uint64_t>(is, "N");
    const auto t_s = detail::get<double>(is, "t_s");
    const auto f_s = detail::get<double>(is, "f_s");
    const auto carrier = detail::get<double>(is, "carrier_freq");
    const auto count = detail::checked_product({s, n});
    detail::check_metadata(t_s, f_s, carrier);
    detail::expect_payload(is, count * sizeof(std::complex<float>));
    ChannelTransferFunction ctf(s, n, t_s, f_s, carrier);
    if (!is.read(reinterpret_cast<char*>(ctf.samples.data()),
                 static_cast<std::streamsize>(ctf.samples.size() * sizeof(std::complex<float>)))) {
        throw format_error("truncated payload");
    }
    detail::expect_end(is);
    for (const auto& v : ctf.samples) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw format_error("non-finite sample in payload");
        }
    }
    return ctf;
}

inline void write_ctf(const std::filesystem::path& path, const ChannelTransferFunction& ctf) {
    auto os = detail::open_out(path);
    write_ctf(os, ctf);
}

inline ChannelTransferFunction read_ctf(const std::filesystem::path& path) {
    auto is = detail::open_in(path);
    return read_ctf(is);
}

inline void write_cir(std::ostream& os, const SubbandCir& cir) {
    detail::put_magic(os, cir_magic);
    detail::put<std::uint64_t>(os, cir.snapshots);
    detail::put<std::uint64_t>(os, cir.delay_bins);
    detail::put<std::uint64_t>(os, cir.subbands);
    detail::put<double>(os, cir.t_s);
    detail::put<double>(os, cir.f_s);
    detail::put<double>(os, cir.carrier_freq_hz);
    detail::put<std::uint64_t>(os, cir.source_bins);
    detail::put<std::uint64_t>(os, cir.first_snapshot);
    std::vector<float> row(2 * cir.delay_bins * cir.subbands);
    for (std::size_t m = 0; m < cir.snapshots; ++m) {
        std::size_t k = 0;
        for (std::size_t n = 0; n < cir.delay_bins; ++n) {
            for (std::size_t q = 0; q < cir.subbands; ++q) {
                const auto v = cir.at(m, n, q);
                row[k++] = static_cast<float>(v.real());
                row[k++] = static_cast<float>(v.imag());
            }
        }
        os.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size() * sizeof(float)));
    }
    if (!os) {
        throw std::runtime_error("write_cir: stream error");
    }
}

inline SubbandCir read_cir(std::istream& is) {
    detail::expect_magic(is, cir_magic);
    const auto s = detail::get<std::uint64_t>(is, "S");
    const auto nc = detail::get<std::uint64_t>(is, "Nc");
    const auto q_count = detail::get<std::uint64_t>(is, "Q");
    const auto t_s = detail::get<double>(is, "t_s");
    const auto f_s = detail::get<double>(is, "f_s");
    const auto carrier = detail::get<double>(is, "carrier_freq");
    const auto source_bins = detail::get<std::uint64_t>(is, "source_bins");
    const auto first = detail::get<std::uint64_t>(is, "first_snapshot");
    const auto count = detail::checked_product({s, nc, q_count});
    detail::check_metadata(t_s, f_s, carrier);
    detail::expect_payload(is, count * 2 * sizeof(float));
    if (nc < 2 || source_bins < required_bins(nc, q_count)) {
        throw format_error("CIR shape inconsistent with its source bin count");
    }
    SubbandCir cir(s, nc, q_count);
    cir.t_s = t_s;
    cir.f_s = f_s;
    cir.carrier_freq_hz = carrier;
    cir.source_bins = source_bins;
    cir.first_snapshot = first;
    std::vector<float> row(2 * nc * q_count);
    for (std::size_t m = 0; m < s; ++m) {
        detail::read_floats(is, row);
        std::size_t k = 0;
        for (std::size_t n = 0; n < nc; ++n) {
            for (std::size_t q = 0; q < q_count; ++q) {
                const float re = row[k++];
                const float im = row[k++];
                if (!std::isfinite(re) || !std::isfinite(im)) {
                    throw format_error("non-finite sample in payload");
                }
                cir.at(m, n, q) = {re, im};
            }
        }
    }
    detail::expect_end(is);
    return cir;
}

inline void write_cir(const std::filesystem::path& path, const SubbandCir& cir) {
    auto os = detail::open_out(path);
    write_cir(os, cir);
}

inline SubbandCir read_cir(const std::filesystem::path& path) {
    auto is = detail::open_in(path);
    return read_cir(is);
}

}  // namespace v2vk::io
