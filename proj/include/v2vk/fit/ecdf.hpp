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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace v2vk {

/// Right-continuous step CDF of a sample: F(z) = #{x_i <= z} / n.
class EmpiricalCdf {
  public:
    explicit EmpiricalCdf(std::span<const double> samples) : sorted_(samples.begin(), samples.end()) {
        if (sorted_.size() < 2) {
            throw invalid_argument("EmpiricalCdf: need at least 2 samples");
        }
        for (double v : sorted_) {
            if (std::isnan(v)) {
                throw invalid_argument("EmpiricalCdf: NaN sample");
            }
        }
        std::sort(sorted_.begin(), sorted_.end());
    }

    double operator()(double z) const {
        const auto count = std::upper_bound(sorted_.begin(), sorted_.end(), z) - sorted_.begin();
        return static_cast<double>(count) / static_cast<double>(sorted_.size());
    }

    /// Left limit F(z-) = #{x_i < z} / n.
    double left_limit(double z) const {
        const auto count = std::lower_bound(sorted_.begin(), sorted_.end(), z) - sorted_.begin();
        return static_cast<double>(count) / static_cast<double>(sorted_.size());
    }

    std::size_t size() const { return sorted_.size(); }
    const std::vector<double>& sorted() const { return sorted_; }

  private:
    std::vector<double> sorted_;
};

/// Kolmogorov-Smirnov distance sup_z |F_emp(z) - F_0(z)|.
///
/// The supremum of a step function against a CDF is attained at a sample
/// point, either at the step or just before it, so both sides are checked
/// at each distinct sample. The reference's own left limit is taken one
/// ulp below the point, which keeps the distance exact when F_0 is itself
/// a step function.
template <typename Cdf>
double ks_gof(const EmpiricalCdf& emp, Cdf&& reference) {
    const auto& x = emp.sorted();
    const double n = static_cast<double>(x.size());
    double sup = 0.0;
    std::size_t i = 0;
    while (i < x.size()) {
        std::size_t j = i;
        while (j + 1 < x.size() && x[j + 1] == x[i]) {
            ++j;
        }
        const double below = static_cast<double>(i) / n;
        const double at = static_cast<double>(j + 1) / n;
        const double f_at = reference(x[i]);
        const double f_below = reference(std::nextafter(x[i], -std::numeric_limits<double>::infinity()));
        sup = std::max({sup, std::abs(at - f_at), std::abs(below - f_below)});
        i = j + 1;
    }
    return sup;
}

}  // namespace v2vk
