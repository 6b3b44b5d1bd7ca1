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

// Independent reference implementations used by the tests. They favour the
// textbook form over speed and share no code with the library.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using cld = std::complex<long double>;

inline long double normal_cdf(long double x, long double mu, long double sigma) {
    return 0.5L * std::erfc(-(x - mu) / (sigma * std::sqrt(2.0L)));
}

inline long double mixture_cdf(long double w, long double mu1, long double s1, long double mu2, long double s2,
                               long double x) {
    return w * normal_cdf(x, mu1, s1) + (1.0L - w) * normal_cdf(x, mu2, s2);
}

/// Periodic Hann window with unit sum of squares.
inline std::vector<long double> hann(std::size_t n) {
    std::vector<long double> w(n);
    long double e = 0.0L;
    for (std::size_t c = 0; c < n; ++c) {
        const long double s = std::sin(std::numbers::pi_v<long double> * c / n);
        w[c] = s * s;
        e += w[c] * w[c];
    }
    for (auto& v : w) {
        v /= std::sqrt(e);
    }
    return w;
}

/// One sub-band delay coefficient by direct summation.
inline cld subband_coef(const std::vector<std::complex<float>>& row, std::size_t nc, std::size_t q, std::size_t n) {
    const auto w = hann(nc);
    cld acc = 0.0L;
    for (std::size_t c = 0; c < nc; ++c) {
        const long double ph = 2.0L * std::numbers::pi_v<long double> * c * n / nc;
        const cld h(row[q * (nc - 1) + c].real(), row[q * (nc - 1) + c].imag());
        acc += h * w[c] * cld(std::cos(ph), std::sin(ph));
    }
    return acc / std::sqrt(static_cast<long double>(nc));
}

/// Greenstein moment estimator in extended precision; returns K linear or
/// NaN when no moment solution exists.
inline long double mom_k(const std::vector<std::complex<double>>& x) {
    const long double n = x.size();
    long double ga = 0.0L;
    for (const auto& v : x) {
        ga += std::norm(cld(v.real(), v.imag()));
    }
    ga /= n;
    long double gv = 0.0L;
    for (const auto& v : x) {
        const long double d = std::norm(cld(v.real(), v.imag())) - ga;
        gv += d * d;
    }
    gv /= (n - 1.0L);
    if (ga * ga < gv) {
        return NAN;
    }
    const long double r2 = std::sqrt(ga * ga - gv);
    return r2 / (ga - r2);
}

/// Rician envelope CDF by Simpson quadrature of the density.
inline double rician_cdf(double z, double specular, double diffuse) {
    const double s2 = diffuse / 2.0;
    const double nu = std::sqrt(specular);
    auto pdf = [&](double x) {
        const double a = x * nu / s2;
        // exp(-(x-nu)^2/2s2) * I0(a) exp(-a) keeps the terms bounded
        return x / s2 * std::exp(-(x - nu) * (x - nu) / (2.0 * s2)) * std::cyl_bessel_i(0.0, a) * std::exp(-a);
    };
    const std::size_t steps = 20000;
    const double h = z / steps;
    double acc = pdf(0.0) + pdf(z);
    for (std::size_t i = 1; i < steps; ++i) {
        acc += (i % 2 ? 4.0 : 2.0) * pdf(i * h);
    }
    return acc * h / 3.0;
}

/// Textbook KS statistic for a continuous reference and distinct samples.
inline double ks(std::vector<double> x, const std::function<double(double)>& f) {
    std::sort(x.begin(), x.end());
    const double n = x.size();
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double fi = f(x[i]);
        d = std::max({d, (i + 1) / n - fi, fi - i / n});
    }
    return d;
}

/// Least-squares line y = a + b x.
struct Line {
    double intercept;
    double slope;
};

inline Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    long double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const long double n = x.size();
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += static_cast<long double>(x[i]) * x[i];
        sxy += static_cast<long double>(x[i]) * y[i];
    }
    const long double b = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return {static_cast<double>((sy - b * sx) / n), static_cast<double>(b)};
}

/// Complex Rician samples with the given specular and diffuse powers.
inline std::vector<std::complex<double>> rician(std::size_t n, double specular, double diffuse, unsigned seed) {
    std::mt19937 g(seed);
    std::normal_distribution<double> nd(0.0, std::sqrt(diffuse / 2.0));
    std::uniform_real_distribution<double> ph(0.0, 2.0 * std::numbers::pi);
    const double r = std::sqrt(specular);
    const double phi = ph(g);
    std::vector<std::complex<double>> out(n);
    for (auto& v : out) {
        const double x = nd(g);
        const double y = nd(g);
        v = std::polar(r, phi) + std::complex<double>(x, y);
    }
    return out;
}

inline std::vector<double> abs_of(const std::vector<std::complex<double>>& x) {
    std::vector<double> out(x.size());
    std::transform(x.begin(), x.end(), out.begin(), [](const auto& v) { return std::abs(v); });
    return out;
}

/// Mixture log-likelihood in extended precision.
inline long double mixture_loglik(const std::vector<double>& x, double w, double mu1, double s1, double mu2,
                                  double s2) {
    const long double c = 1.0L / std::sqrt(2.0L * std::numbers::pi_v<long double>);
    long double ll = 0.0L;
    for (double v : x) {
        const long double a = (v - mu1) / static_cast<long double>(s1);
        const long double b = (v - mu2) / static_cast<long double>(s2);
        ll += std::log(w * c / s1 * std::exp(-0.5L * a * a) + (1.0L - w) * c / s2 * std::exp(-0.5L * b * b));
    }
    return ll;
}

}  // namespace oracle
