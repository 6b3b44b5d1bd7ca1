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
#include "v2vk/fit/gmm.hpp"
#include "v2vk/kfactor.hpp"
#include "v2vk/scenario.hpp"

#include <json.hpp>

#include <cmath>
#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace v2vk::io {

using json = nlohmann::json;

// ---- scenario profiles ---------------------------------------------------

inline json to_json(const GmmParams& g) {
    return {{"w", g.w}, {"mu1_db", g.mu1_db}, {"sigma1_db", g.sigma1_db}, {"mu2_db", g.mu2_db},
            {"sigma2_db", g.sigma2_db}};
}

inline json to_json(const ScenarioProfile& p) {
    return {{"name", p.name},
            {"avg_speed_mps", p.avg_speed_mps},
            {"s_k", p.s_k},
            {"s_ls", p.s_ls},
            {"gmm", to_json(p.gmm)},
            {"runs", p.runs},
            {"reference_epsilon", p.reference_epsilon}};
}

inline json profiles_to_json(const std::vector<ScenarioProfile>& profiles) {
    json out = json::array();
    for (const auto& p : profiles) {
        out.push_back(to_json(p));
    }
    return out;
}

inline GmmParams gmm_from_json(const json& j) {
    try {
        return {j.at("w").get<double>(), j.at("mu1_db").get<double>(), j.at("sigma1_db").get<double>(),
                j.at("mu2_db").get<double>(), j.at("sigma2_db").get<double>()};
    } catch (const json::exception& e) {
        throw format_error(std::string("gmm object: ") + e.what());
    }
}

/// Parses and validates one profile; `runs` and `reference_epsilon` are optional.
inline ScenarioProfile profile_from_json(const json& j) {
    ScenarioProfile p;
    try {
        p.name = j.at("name").get<std::string>();
        p.avg_speed_mps = j.at("avg_speed_mps").get<double>();
        p.s_k = j.at("s_k").get<std::size_t>();
        p.s_ls = j.at("s_ls").get<std::size_t>();
        p.gmm = gmm_from_json(j.at("gmm"));
        p.runs = j.value("runs", 0);
        p.reference_epsilon = j.value("reference_epsilon", 0.0);
    } catch (const json::exception& e) {
        throw format_error(std::string("profile object: ") + e.what());
    }
    try {
        p.validate();
    } catch (const invalid_argument& e) {
        throw config_error(e.what());
    }
    return p;
}

inline std::vector<ScenarioProfile> profiles_from_json(const json& j) {
    if (!j.is_array()) {
        throw format_error("profile document must be a JSON array");
    }
    std::vector<ScenarioProfile> out;
    for (const auto& item : j) {
        out.push_back(profile_from_json(item));
    }
    return out;
}

inline json parse_json(std::istream& is, const std::string& what) {
    try {
        return json::parse(is);
    } catch (const json::exception& e) {
        throw format_error(what + ": " + e.what());
    }
}

// ---- GMM fit results -----------------------------------------------------

/// Fit summary as exchanged between `fit` and `report`.
struct FitRecord {
    std::string scenario;
    std::size_t n = 0;
    GmmParams params;
    double epsilon = 0.0;
    std::size_t iterations = 0;
    std::vector<std::string> flags;
    double loglik = 0.0;
    std::size_t runs = 0;
    std::optional<ScenarioProfile> reference;
};

inline FitRecord make_fit_record(std::string scenario, const GmmFit& fit, std::size_t runs,
                                 std::optional<ScenarioProfile> reference) {
    return {std::move(scenario), fit.n, fit.params, fit.epsilon, fit.iterations, fit.flags(), fit.loglik, runs,
            std::move(reference)};
}

inline json to_json(const FitRecord& r) {
    json j = {{"scenario", r.scenario},
              {"n", r.n},
              {"w", r.params.w},
              {"mu1_db", r.params.mu1_db},
              {"sigma1_db", r.params.sigma1_db},
              {"mu2_db", r.params.mu2_db},
              {"sigma2_db", r.params.sigma2_db},
              {"epsilon", r.epsilon},
              {"iterations", r.iterations},
              {"flags", r.flags},
              {"loglik", r.loglik},
              {"runs", r.runs}};
    if (r.reference) {
        const auto& g = r.reference->gmm;
        j["reference"] = to_json(g);
        j["reference"]["epsilon_bound"] = r.reference->reference_epsilon;
        j["deltas"] = {{"w", r.params.w - g.w},
                       {"mu1_db", r.params.mu1_db - g.mu1_db},
                       {"sigma1_db", r.params.sigma1_db - g.sigma1_db},
                       {"mu2_db", r.params.mu2_db - g.mu2_db},
                       {"sigma2_db", r.params.sigma2_db - g.sigma2_db}};
    } else {
        j["reference"] = nullptr;
        j["deltas"] = nullptr;
    }
    return j;
}

inline FitRecord fit_record_from_json(const json& j) {
    FitRecord r;
    try {
        r.scenario = j.at("scenario").get<std::string>();
        r.n = j.at("n").get<std::size_t>();
        r.params = {j.at("w").get<double>(), j.at("mu1_db").get<double>(), j.at("sigma1_db").get<double>(),
                    j.at("mu2_db").get<double>(), j.at("sigma2_db").get<double>()};
        r.epsilon = j.at("epsilon").get<double>();
        r.iterations = j.at("iterations").get<std::size_t>();
        r.flags = j.at("flags").get<std::vector<std::string>>();
        // JSON has no infinities; a non-finite log-likelihood is written as null
        const auto ll = j.find("loglik");
        r.loglik = (ll == j.end() || ll->is_null()) ? -INFINITY : ll->get<double>();
        r.runs = j.value("runs", std::size_t{0});
        if (j.contains("reference") && !j.at("reference").is_null()) {
            const auto& ref = j.at("reference");
            ScenarioProfile p;
            p.name = r.scenario;
            p.gmm = gmm_from_json(ref);
            p.reference_epsilon = ref.value("epsilon_bound", 0.0);
            r.reference = std::move(p);
        }
    } catch (const json::exception& e) {
        throw format_error(std::string("fit record: ") + e.what());
    }
    return r;
}

// ---- K field summary -----------------------------------------------------

/// Per-sub-band min / max / mean of the finite valid K estimates.
inline json kfield_summary(const KFactorField& field) {
    json bands = json::array();
    for (std::size_t q = 0; q < field.subbands; ++q) {
        double lo = INFINITY;
        double hi = -INFINITY;
        double sum = 0.0;
        std::size_t finite = 0;
        std::size_t invalid = 0;
        std::size_t infinite = 0;
        for (std::size_t i = 0; i < field.windows; ++i) {
            const auto& e = field.at(i, q);
            if (!e.valid) {
                ++invalid;
            } else if (e.infinite) {
                ++infinite;
            } else {
                lo = std::min(lo, e.k_db);
                hi = std::max(hi, e.k_db);
                sum += e.k_db;
                ++finite;
            }
        }
        json band = {{"q", q},
                     {"center_freq_hz", field.center_freq_hz(q)},
                     {"finite", finite},
                     {"invalid", invalid},
                     {"infinite", infinite}};
        if (finite > 0) {
            band["min_db"] = lo;
            band["max_db"] = hi;
            band["mean_db"] = sum / static_cast<double>(finite);
        } else {
            band["min_db"] = nullptr;
            band["max_db"] = nullptr;
            band["mean_db"] = nullptr;
        }
        bands.push_back(std::move(band));
    }
    return {{"tap", field.tap},
            {"window", field.window},
            {"stride", field.stride},
            {"windows", field.windows},
            {"first_snapshot", field.first_snapshot},
            {"subbands", std::move(bands)}};
}

}  // namespace v2vk::io
