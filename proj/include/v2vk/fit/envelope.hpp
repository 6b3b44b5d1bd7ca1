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
#include "v2vk/fit/ecdf.hpp"
#include "v2vk/kfactor.hpp"

#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

// Envelope distributions: Rayleigh, Rician and Weibull fits of |h| samples.

namespace v2vk {

namespace detail {

inline void require_envelope(std::span<const double> z, std::size_t min_count, const char* who) {
    if (z.size() < min_count) {
        throw invalid_argument(std::string(who) + ": need at least " + std::to_string(min_count) + " samples");
    }
    for (double v : z) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw invalid_argument(std::string(who) + ": envelope samples must be finite and nonnegative");
        }
    }
}

}  // namespace detail

// ---- Rayleigh ------------------------------------------------------------

inline double rayleigh_cdf(double z, double sigma) {
    if (z <= 0.0) {
        return 0.0;
    }
    return -std::expm1(-z * z / (2.0 * sigma * sigma));
}

struct RayleighFit {
    double sigma = 0.0;

    double cdf(double z) const { return rayleigh_cdf(z, sigma); }
};

/// Moment estimate sigma^2 = mean(z^2) / 2.
inline RayleighFit fit_rayleigh(std::span<const double> envelope) {
    detail::require_envelope(envelope, 1, "fit_rayleigh");
    double sum = 0.0;
    for (double z : envelope) {
        sum += z * z;
    }
    const double mean_power = sum / static_cast<double>(envelope.size());
    if (!(mean_power > 0.0)) {
        throw degenerate_input("fit_rayleigh: all-zero envelope");
    }
    return {std::sqrt(mean_power / 2.0)};
}

// ---- Rician --------------------------------------------------------------

/// Rician envelope CDF for specular power r^2 and diffuse power 2 sigma^2.
///
/// z^2 / sigma^2 is noncentral chi-squared with two degrees of freedom and
/// noncentrality r^2 / sigma^2, so F(z) = 1 - Q_1(r/sigma, z/sigma).
/// Beyond K = 5000 the envelope is Gaussian around r to within 1e-4.
inline double rician_cdf(double z, double specular_power, double diffuse_power) {
    if (z <= 0.0) {
        return 0.0;
    }
    if (!(diffuse_power > 0.0)) {
        return z >= std::sqrt(specular_power) ? 1.0 : 0.0;
    }
    const double sigma2 = diffuse_power / 2.0;
    if (!(specular_power > 0.0)) {
        return -std::expm1(-z * z / (2.0 * sigma2));
    }
    const double noncentrality = specular_power / sigma2;
    if (specular_power / diffuse_power > 5000.0) {
        const boost::math::normal gauss(std::sqrt(specular_power), std::sqrt(sigma2));
        return boost::math::cdf(gauss, z);
    }
    const boost::math::non_central_chi_squared dist(2.0, noncentrality);
    return boost::math::cdf(dist, z * z / sigma2);
}

struct RicianFit {
    double k_db = std::numeric_limits<double>::quiet_NaN();
    double k_linear = std::numeric_limits<double>::quiet_NaN();
    double specular_power = 0.0;
    double diffuse_power = 0.0;
    double mean_power = 0.0;
    bool valid = false;
    bool infinite = false;

    /// Fitted CDF. An invalid (over-dispersed) fit falls back to K = 0,
    /// i.e. a Rayleigh law with the sample mean power.
    double cdf(double z) const {
        if (!valid) {
            return rician_cdf(z, 0.0, mean_power);
        }
        return rician_cdf(z, specular_power, diffuse_power);
    }
};

/// Method-of-moments Rician fit of envelope samples (squared internally).
inline RicianFit fit_rician(std::span<const double> envelope) {
    detail::require_envelope(envelope, min_mom_samples, "fit_rician");
    std::vector<double> power(envelope.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < envelope.size(); ++i) {
        power[i] = envelope[i] * envelope[i];
        sum += power[i];
    }
    const auto est = estimate_k_from_power(power);
    RicianFit fit;
    fit.k_db = est.k_db;
    fit.k_linear = est.k_linear;
    fit.specular_power = est.specular_power;
    fit.diffuse_power = est.diffuse_power;
    fit.mean_power = sum / static_cast<double>(power.size());
    fit.valid = est.valid;
    fit.infinite = est.infinite;
    return fit;
}

// ---- Weibull -------------------------------------------------------------

inline double weibull_cdf(double z, double shape, double scale) {
    if (z <= 0.0) {
        return 0.0;
    }
    return -std::expm1(-std::pow(z / scale, shape));
}

/// Weibull-plot coordinates of a CDF value: x = ln z, y = ln(-ln(1 - F)).
/// A Weibull CDF maps to the line y = shape * x - shape * ln(scale).
struct WeibullPoint {
    double x;
    double y;
};

inline WeibullPoint weibull_plot_point(double z, double cdf_value) {
    return {std::log(z), std::log(-std::log1p(-cdf_value))};
}

struct WeibullPlot {
    std::vector<WeibullPoint> points;
    std::size_t dropped_nonpositive = 0;
};

/// Weibull-plot points of every positive sample with F(z) < 1 (the top
/// sample and its ties are dropped, as are nonpositive samples).
inline WeibullPlot weibull_linearize(const EmpiricalCdf& emp) {
    WeibullPlot plot;
    for (double z : emp.sorted()) {
        if (!(z > 0.0)) {
            ++plot.dropped_nonpositive;
            continue;
        }
        const double f = emp(z);
        if (f >= 1.0) {
            continue;
        }
        plot.points.push_back(weibull_plot_point(z, f));
    }
    if (plot.points.empty()) {
        throw insufficient_data("weibull_linearize: no usable points after filtering");
    }
    return plot;
}

struct WeibullFit {
    double shape = 0.0;  ///< k
    double scale = 0.0;  ///< lambda
    double r2 = 0.0;     ///< coefficient of determination of the plot line
    std::size_t points = 0;

    double cdf(double z) const { return weibull_cdf(z, shape, scale); }
};

/// Least-squares line through the Weibull plot: shape = slope,
/// scale = exp(-intercept / shape).
inline WeibullFit fit_weibull(std::span<const double> envelope) {
    detail::require_envelope(envelope, 8, "fit_weibull");
    const EmpiricalCdf emp(envelope);
    const auto plot = weibull_linearize(emp);
    const auto& pts = plot.points;
    const double n = static_cast<double>(pts.size());
    double mx = 0.0;
    double my = 0.0;
    for (const auto& p : pts) {
        mx += p.x;
        my += p.y;
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (const auto& p : pts) {
        sxx += (p.x - mx) * (p.x - mx);
        sxy += (p.x - mx) * (p.y - my);
        syy += (p.y - my) * (p.y - my);
    }
    if (pts.size() < 2 || !(sxx > 0.0)) {
        throw degenerate_input("fit_weibull: envelope has no spread");
    }
    const double slope = sxy / sxx;
    if (!(slope > 0.0)) {
        throw degenerate_input("fit_weibull: nonpositive shape");
    }
    const double intercept = my - slope * mx;
    WeibullFit fit;
    fit.shape = slope;
    fit.scale = std::exp(-intercept / slope);
    fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    fit.points = pts.size();
    return fit;
}

}  // namespace v2vk
