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

#include "mimoctl/report.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <sstream>

namespace mimoctl
{

ReportThresholds load_thresholds(const std::string& path)
{
    ReportThresholds th;
    YAML::Node n;
    try
    {
        n = YAML::LoadFile(path);
    }
    catch (const YAML::Exception& e)
    {
        throw Error(path + ": " + e.what());
    }
    auto get = [&](const char* key, auto& field) {
        if (n[key])
            field = n[key].as<std::decay_t<decltype(field)>>();
    };
    get("early_k", th.early_k);
    get("u_err_decay", th.u_err_decay);
    get("stable_diverged_max", th.stable_diverged_max);
    get("baseline_diverged_min", th.baseline_diverged_min);
    get("baseline_blowup", th.baseline_blowup);
    return th;
}

std::vector<MetricsRow> parse_metrics_csv(std::istream& in, const std::string& origin)
{
    std::vector<MetricsRow> rows;
    std::string line;
    long lineno = 0;
    bool header = false;
    while (std::getline(in, line))
    {
        ++lineno;
        if (line.empty() || line[0] == '#')
            continue;
        if (!header)
        {
            if (line != "k,scheme,median_u_err_sq,mean_x_norm_sq,mean_stage_cost,diverged_fraction")
                throw Error(origin + ":" + std::to_string(lineno) + ": unexpected header");
            header = true;
            continue;
        }
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            f.push_back(cell);
        if (f.size() != 6)
            throw Error(origin + ":" + std::to_string(lineno) + ": expected 6 fields, got "
                        + std::to_string(f.size()));
        try
        {
            MetricsRow r;
            std::size_t used = 0;
            r.k = std::stol(f[0], &used);
            if (used != f[0].size())
                throw Error("bad integer");
            r.scheme = parse_scheme(f[1]);
            r.median_u_err_sq = std::stod(f[2]);
            r.mean_x_norm_sq = std::stod(f[3]);
            r.mean_stage_cost = std::stod(f[4]);
            r.diverged_fraction = std::stod(f[5]);
            rows.push_back(r);
        }
        catch (const std::exception& e)
        {
            throw Error(origin + ":" + std::to_string(lineno) + ": malformed row (" + e.what() + ")");
        }
    }
    if (rows.empty())
        throw Error(origin + ": no rows");
    return rows;
}

std::string report(const std::vector<MetricsRow>& rows, const ReportThresholds& th)
{
    if (rows.empty())
        throw Error("report: no rows");
    std::map<int, std::vector<const MetricsRow*>> by_scheme;
    for (const MetricsRow& r : rows)
        by_scheme[static_cast<int>(r.scheme)].push_back(&r);

    std::ostringstream os;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-9s %8s %16s %16s %16s %10s  %s\n", "scheme", "k", "median_u_err_sq",
                  "mean_x_norm_sq", "mean_stage_cost", "diverged", "check");
    os << buf;
    for (const auto& [id, list] : by_scheme)
    {
        const Scheme scheme = static_cast<Scheme>(id);
        const MetricsRow* last = list.front();
        const MetricsRow* early = nullptr;
        for (const MetricsRow* r : list)
        {
            if (r->k > last->k)
                last = r;
            if (r->k == th.early_k)
                early = r;
        }
        std::string check;
        switch (scheme)
        {
        case Scheme::proposed:
        {
            bool ok = last->diverged_fraction <= th.stable_diverged_max;
            if (early && early != last)
                ok = ok && last->median_u_err_sq < th.u_err_decay * early->median_u_err_sq;
            check = ok ? "PASS" : "FAIL";
            if (!early || early == last)
                check += " (no decay reference)";
            break;
        }
        case Scheme::b3:
            check = last->diverged_fraction <= th.stable_diverged_max ? "PASS" : "FAIL";
            break;
        case Scheme::b1:
        case Scheme::b2:
        {
            const bool blew = !(last->mean_x_norm_sq < th.baseline_blowup);
            check = (last->diverged_fraction >= th.baseline_diverged_min || blew) ? "PASS" : "FAIL";
            break;
        }
        }
        std::snprintf(buf, sizeof buf, "%-9s %8ld %16.6g %16.6g %16.6g %10.3f  %s\n", to_string(scheme), last->k,
                      last->median_u_err_sq, last->mean_x_norm_sq, last->mean_stage_cost, last->diverged_fraction,
                      check.c_str());
        os << buf;
    }
    return os.str();
}

} // namespace mimoctl
