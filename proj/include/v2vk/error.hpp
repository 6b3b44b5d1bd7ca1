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

#include <stdexcept>
#include <string>

namespace v2vk {

// Violated precondition on an argument (bad size, nonpositive speed, ...).
class invalid_argument : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Input is well-formed but carries no usable information (zero power,
// zero variance).
class degenerate_input : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Malformed or truncated artifact file.
class format_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Not enough data to run an estimator or fit.
class insufficient_data : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Bad experiment configuration (unknown scenario, knob out of range).
class config_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
    if (!condition) {
        throw invalid_argument(message);
    }
}

}  // namespace detail
}  // namespace v2vk
