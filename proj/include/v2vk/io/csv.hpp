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
#include "v2vk/kfactor.hpp"
#include "v2vk/subband.hpp"

#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace v2vk::io {

/// Shortest decimal text that parses back to the same double; "inf",
/// "-inf" and "nan" for non-finite values.
inline std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text) {
    double v = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    if (!text.empty() && *first == '+') {
        ++first;
    }
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) {
        throw format_error("not a number: '" + std::string(text) + "'");
    }
    return v;
}

inline std::size_t parse_index(std::string_view text) {
    std::size_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw format_error("not an index: '" + std::string(text) + "'");
    }
    return v;
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

inline constexpr std::size_t max_csv_ctf_entries = 1'000'000;

/// Per-bin dump of a small transfer function.
inline void write_ctf_csv(std::ostream& os, const ChannelTransferFunction& ctf) {
    if (ctf.snapshots * ctf.bins > max_csv_ctf_entries) {
        throw invalid_argument("write_ctf_csv: transfer function too large for CSV export");
    }
    os << "snapshot,bin,time_s,freq_hz,re,im\n";
    for (std::size_t m = 0; m < ctf.snapshots; ++m) {
        for (std::size_t b = 0; b < ctf.bins; ++b) {
            const auto v = ctf.at(m, b);
            os << m << ',' << b << ',' << format_double(static_cast<double>(m) * ctf.t_s) << ','
               << format_double(ctf.bin_frequency_hz(b)) << ',' << format_double(v.real()) << ','
               << format_double(v.imag()) << '\n';
        }
    }
}

/// |h[m, n; q]| for the first `max_delay` delay bins, every `decimation`-th snapshot.
inline void write_cir_magnitude_csv(std::ostream& os, const SubbandCir& cir, std::size_t max_delay,
                                    std::size_t decimation = 1) {
    v2vk::detail::require(decimation >= 1, "write_cir_magnitude_csv: decimation must be positive");
    max_delay = std::min(max_delay, cir.delay_bins);
    os << "time_s,subband_q,delay_bin,abs\n";
    for (std::size_t m = 0; m < cir.snapshots; m += decimation) {
        for (std::size_t q = 0; q < cir.subbands; ++q) {
            for (std::size_t n = 0; n < max_delay; ++n) {
                os << format_double(cir.time_s(m)) << ',' << q << ',' << n << ','
                   << format_double(std::abs(cir.at(m, n, q))) << '\n';
            }
        }
    }
}

inline constexpr std::string_view kfield_header =
    "window_center_time_s,subband_q,subband_center_freq_hz,k_db,valid";

inline void write_kfield_csv(std::ostream& os, const KFactorField& field) {
    os << kfield_header << '\n';
    for (std::size_t i = 0; i < field.windows; ++i) {
        const std::string t = format_double(field.center_time_s(i));
        for (std::size_t q = 0; q < field.subbands; ++q) {
            const auto& e = field.at(i, q);
            os << t << ',' << q << ',' << format_double(field.center_freq_hz(q)) << ',' << format_double(e.k_db)
               << ',' << (e.valid ? 1 : 0) << '\n';
        }
    }
}

struct KFieldRow {
    double center_time_s = 0.0;
    std::size_t subband = 0;
    double center_freq_hz = 0.0;
    double k_db = 0.0;
    bool valid = false;
};

inline std::vector<KFieldRow> read_kfield_csv(std::istream& is) {
    std::string line;
    if (std::getline(is, line) && !line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (!is || line != kfield_header) {
        throw format_error("K field CSV: missing or unexpected header");
    }
    std::vector<KFieldRow> rows;
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto cols = split_csv_line(line);
        if (cols.size() != 5) {
            throw format_error("K field CSV line " + std::to_string(line_no) + ": expected 5 columns");
        }
        KFieldRow row;
        row.center_time_s = parse_double(cols[0]);
        row.subband = parse_index(cols[1]);
        row.center_freq_hz = parse_double(cols[2]);
        row.k_db = parse_double(cols[3]);
        if (cols[4] != "0" && cols[4] != "1") {
            throw format_error("K field CSV line " + std::to_string(line_no) + ": valid must be 0 or 1");
        }
        row.valid = cols[4] == "1";
        rows.push_back(row);
    }
    return rows;
}

}  // namespace v2vk::io
