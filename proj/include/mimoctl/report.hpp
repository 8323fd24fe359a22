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

#ifndef MIMOCTL_REPORT_HPP
#define MIMOCTL_REPORT_HPP

#include "mimoctl/experiment.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace mimoctl
{

struct ReportThresholds
{
    long early_k = 100;                 // reference checkpoint for the decay ratio
    double u_err_decay = 0.01;          // proposed: final / early median u_err_sq must be below this
    double stable_diverged_max = 0.0;   // proposed, b3
    double baseline_diverged_min = 0.9; // b1, b2 (or blow-up below)
    double baseline_blowup = 1e6;       // b1, b2 final mean_x_norm_sq
};

ReportThresholds load_thresholds(const std::string& path);

/// Parses a metrics CSV. Errors carry the origin and line number.
std::vector<MetricsRow> parse_metrics_csv(std::istream& in, const std::string& origin = "<stream>");

/// Final-checkpoint table per scheme with a pass/fail column.
std::string report(const std::vector<MetricsRow>& rows, const ReportThresholds& th = {});

} // namespace mimoctl

#endif
