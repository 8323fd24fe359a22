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

#ifndef MIMOCTL_EXPERIMENT_HPP
#define MIMOCTL_EXPERIMENT_HPP

#include "mimoctl/scenario.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace mimoctl
{

enum class Scheme
{
    proposed = 0,
    b1 = 1,
    b2 = 2,
    b3 = 3
};

/// Accepts proposed, b1, b2, b3 and the bare digits 1, 2, 3.
Scheme parse_scheme(const std::string& s);
const char* to_string(Scheme s);

/// Log-spaced checkpoints 1, 2, 5, 10, 20, 50, ... up to horizon, with the
/// horizon itself appended when it is off the grid.
std::vector<long> checkpoints(long horizon);

/// Per-run averages over the slots (previous checkpoint, checkpoint].
struct WindowStats
{
    double x_norm_sq = 0.0;
    double u_err_sq = 0.0;
    double stage_cost = 0.0;
};

struct RunResult
{
    std::vector<WindowStats> windows; // one per checkpoint
    bool diverged = false;
    long diverged_at = 0; // first slot past the threshold, 0 if never
    double final_p_err = 0.0; // ||P_T - P*||, proposed scheme only
    long fallback_events = 0;
};

/// One closed-loop run of `scheme` on the stream (master_seed, run_index, scheme).
/// When `trace` is given every slot is logged there as well.
RunResult simulate_run(const ScenarioConfig& cfg, Scheme scheme, long run_index, const Matrix& p_star,
                       const std::vector<long>& grid, TrajectoryLog* trace = nullptr);

struct MetricsRow
{
    long k = 0;
    Scheme scheme = Scheme::proposed;
    double median_u_err_sq = 0.0;
    double mean_x_norm_sq = 0.0;
    double mean_stage_cost = 0.0;
    double diverged_fraction = 0.0;
};

/// Genie kernel for the scenario: fixed-point solve on the configured sample set.
SolveReport reference_kernel(const ScenarioConfig& cfg);

struct ExperimentResult
{
    std::vector<MetricsRow> rows;
    std::vector<std::vector<RunResult>> runs; // [scheme][run]
};

/// Every (scheme, run) pair on `workers` threads; output does not depend on the
/// worker count.
ExperimentResult run_experiment(const ScenarioConfig& cfg, const std::vector<Scheme>& schemes,
                                const Matrix& p_star, unsigned workers = 1);

std::string csv_header_comment(const ScenarioConfig& cfg, const char* kind);
void write_metrics_csv(std::ostream& os, const ScenarioConfig& cfg, const std::vector<MetricsRow>& rows);
void write_trajectory_csv(std::ostream& os, const ScenarioConfig& cfg, const TrajectoryLog& log);

} // namespace mimoctl

#endif
