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
#include "v2vk/fit/ecdf.hpp"
#include "v2vk/fit/envelope.hpp"
#include "v2vk/fit/gmm.hpp"
#include "v2vk/fit/survey.hpp"
#include "v2vk/kfactor.hpp"
#include "v2vk/measurement.hpp"
#include "v2vk/scenario.hpp"
#include "v2vk/subband.hpp"
#include "v2vk/synth.hpp"
#include "v2vk/experiment.hpp"
