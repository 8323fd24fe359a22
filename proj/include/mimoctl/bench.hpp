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

#ifndef MIMOCTL_BENCH_HPP
#define MIMOCTL_BENCH_HPP

#include "mimoctl/experiment.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace mimoctl
{

struct BenchPoint
{
    std::string label; // sweep parameter, e.g. "S"
    double value = 0;
    ScenarioConfig cfg;
};

struct BenchRow
{
    std::string label;
    double value = 0;
    Scheme scheme = Scheme::proposed;
    double seconds = 0; // median over repetitions
};

struct BenchOptions
{
    long slots = 10000;  // timed slots per repetition
    long warmup = 200;   // untimed slots before each repetition
    int repetitions = 5;
};

/// Wall-clock of the per-slot controller work (action plus learning update)
/// on exogenous states x ~ N(0, I). Inputs are generated before the clock starts.
std::vector<BenchRow> bench_cpu(const std::vector<BenchPoint>& sweep, const std::vector<Scheme>& schemes,
                                const BenchOptions& opts = {});

void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows);

} // namespace mimoctl

#endif
