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
#include "v2vk/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace v2vk {

/// Upper-tail probability of the standard normal distribution.
inline double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

inline double normal_pdf(double x, double mu, double sigma) {
    const double u = (x - mu) / sigma;
    return std::exp(-0.5 * u * u) / (std::sqrt(2.0 * std::numbers::pi) * sigma);
}

inline double gmm_pdf(const GmmParams& p, double k_db) {
    return p.w * normal_pdf(k_db, p.mu1_db, p.sigma1_db) + (1.0 - p.w) * normal_pdf(k_db, p.mu2_db, p.sigma2_db);
}

inline double gmm_cdf(const GmmParams& p, double k_db) {
    return p.w * (1.0 - q_function((k_db - p.mu1_db) / p.sigma1_db)) +
           (1.0 - p.w) * (1.0 - q_function((k_db - p.mu2_db) / p.sigma2_db));
}

struct GmmFitOptions {
    std::size_t max_iterations = 500;
    double tolerance = 1e-8;      ///< stop once the log-likelihood gain drops below this
    double sigma_floor_db = 1e-3;
    std::size_t min_samples = 50;
};

struct GmmFit {
    GmmParams params;
    double epsilon = 1.0;  ///< KS distance between the sample and the fitted CDF
    std::size_t iterations = 0;
    double loglik = -std::numeric_limits<double>::infinity();
    std::size_t n = 0;
    bool converged = false;
    bool sigma_floored = false;
    bool near_unimodal = false;
    std::vector<double> loglik_trace;  ///< log-likelihood before each M-step

    std::vector<std::string> flags() const {
        std::vector<std::string> out;
        if (!converged) {
            out.emplace_back("not_converged");
        }
        if (sigma_floored) {
            out.emplace_back("sigma_floored");
        }
        if (near_unimodal) {
            out.emplace_back("near_unimodal");
        }
        return out;
    }
};

/// A fit is reported as near-unimodal when the two modes are less than
/// 4 dB apart, when Ashman's separation D = sqrt(2)|mu2-mu1| /
/// sqrt(sigma1^2+sigma2^2) is below 2 (the mixture density has a single
/// peak), or when one weight is under 1 %.
inline bool is_near_unimodal(const GmmParams& p) {
    const double gap = std::abs(p.mu2_db - p.mu1_db);
    const double ashman = std::numbers::sqrt2 * gap / std::hypot(p.sigma1_db, p.sigma2_db);
    return gap < 4.0 || ashman < 2.0 || std::min(p.w, 1.0 - p.w) < 0.01;
}

namespace detail {

struct Moments {
    double mean;
    double sd;
};

inline Moments moments(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) {
        m += v;
    }
    m /= static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) {
        ss += (v - m) * (v - m);
    }
    return {m, std::sqrt(ss / static_cast<double>(x.size()))};
}

inline double log_normal_pdf(double x, double mu, double sigma) {
    const double u = (x - mu) / sigma;
    return -0.5 * u * u - std::log(sigma) - 0.5 * std::log(2.0 * std::numbers::pi);
}

}  // namespace detail

/// Two-component EM fit of K samples [dB].
///
/// Starts from a split at the sample median (w = 0.5, each component the
/// mean and spread of its half), so the result is deterministic. Stops when
/// the log-likelihood gain falls below `tolerance` or after
/// `max_iterations`. Components are returned ordered by mean.
inline GmmFit fit_bimodal_gmm(std::span<const double> samples, const GmmFitOptions& options = {}) {
    if (samples.size() < options.min_samples) {
        throw insufficient_data("fit_bimodal_gmm: need at least " + std::to_string(options.min_samples) +
                                " samples, got " + std::to_string(samples.size()));
    }
    for (double v : samples) {
        if (!std::isfinite(v)) {
            throw invalid_argument("fit_bimodal_gmm: samples must be finite");
        }
    }
    const std::size_t n = samples.size();
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t half = n / 2;
    const auto lower = detail::moments(std::span<const double>(sorted).first(half));
    const auto upper = detail::moments(std::span<const double>(sorted).subspan(half));

    GmmFit fit;
    fit.n = n;
    double w = 0.5;
    double mu1 = lower.mean;
    double mu2 = upper.mean;
    double s1 = lower.sd;
    double s2 = upper.sd;
    auto floor_sigma = [&](double& s) {
        if (!(s >= options.sigma_floor_db)) {
            s = options.sigma_floor_db;
            fit.sigma_floored = true;
        }
    };
    floor_sigma(s1);
    floor_sigma(s2);

    std::vector<double> resp(n);
    auto e_step = [&] {
        // Log domain; modes can sit tens of sigmas apart.
        const double lw1 = std::log(w);
        const double lw2 = std::log1p(-w);
        double loglik = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double a = lw1 + detail::log_normal_pdf(samples[i], mu1, s1);
            const double b = lw2 + detail::log_normal_pdf(samples[i], mu2, s2);
            const double top = std::max(a, b);
            const double lse = top + std::log(std::exp(a - top) + std::exp(b - top));
            loglik += lse;
            resp[i] = std::exp(a - lse);
        }
        return loglik;
    };

    double previous = -std::numeric_limits<double>::infinity();
    for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
        const double loglik = e_step();
        fit.loglik_trace.push_back(loglik);
        fit.loglik = loglik;
        fit.iterations = iter;
        if (loglik - previous < options.tolerance) {
            fit.converged = true;
            break;
        }
        previous = loglik;

        double r1 = 0.0;
        double sx1 = 0.0;
        double sx2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            r1 += resp[i];
            sx1 += resp[i] * samples[i];
            sx2 += (1.0 - resp[i]) * samples[i];
        }
        const double r2 = static_cast<double>(n) - r1;
        if (!(r1 > 0.0) || !(r2 > 0.0)) {
            // One component absorbed every sample; keep the last parameters.
            fit.converged = true;
            break;
        }
        mu1 = sx1 / r1;
        mu2 = sx2 / r2;
        double v1 = 0.0;
        double v2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            v1 += resp[i] * (samples[i] - mu1) * (samples[i] - mu1);
            v2 += (1.0 - resp[i]) * (samples[i] - mu2) * (samples[i] - mu2);
        }
        w = r1 / static_cast<double>(n);
        s1 = std::sqrt(v1 / r1);
        s2 = std::sqrt(v2 / r2);
        floor_sigma(s1);
        floor_sigma(s2);
        fit.iterations = iter + 1;
    }
    if (!fit.converged) {
        fit.loglik = e_step();
        fit.loglik_trace.push_back(fit.loglik);
    }

    if (mu1 > mu2) {
        std::swap(mu1, mu2);
        std::swap(s1, s2);
        w = 1.0 - w;
    }
    fit.params = {w, mu1, s1, mu2, s2};
    fit.near_unimodal = is_near_unimodal(fit.params);
    const EmpiricalCdf emp(samples);
    fit.epsilon = ks_gof(emp, [&](double k) { return gmm_cdf(fit.params, k); });
    return fit;
}

}  // namespace v2vk
