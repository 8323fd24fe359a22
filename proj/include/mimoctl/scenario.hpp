// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The mimoctl Authors
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

#ifndef MIMOCTL_SCENARIO_HPP
#define MIMOCTL_SCENARIO_HPP

#include "mimoctl/baselines.hpp"

#include <cstdint>
#include <string>

namespace mimoctl
{

struct SolverSettings
{
    double xi = 0.9;
    std::size_t sample_count = 100000;
    ToleranceProfile tol;
};

struct BaselineSettings
{
    double forgetting = 0.995;
    double init_scale = 0.01;
    double exploration = 0.1; // variance scale of the (1 + k)^{-1/2} schedule
    long policy_period = 0;   // slots between policy improvements, 0 = automatic
};

struct ScenarioConfig
{
    std::string name;
    PlantModel plant;
    CostWeights weights;
    ChannelConfig channel;
    StepSchedule schedule;
    long horizon = 10000;
    long runs = 100;
    std::uint64_t master_seed = 1;
    bool noise_free = false;
    bool literal_eq9 = false;
    SolverSettings solver;
    BaselineSettings baseline;
};

/// Reads a YAML scenario. Matrices are lists of rows, or {identity: n, scale: s}.
/// Errors name the offending field path.
ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario(const std::string& text, const std::string& origin = "<string>");

/// Canonical text form with every number at full precision.
std::string canonical_text(const ScenarioConfig& cfg);
/// 64-bit FNV-1a of canonical_text, as 16 hex digits.
std::string config_hash(const ScenarioConfig& cfg);

} // namespace mimoctl

#endif
