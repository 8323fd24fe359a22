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

#include "mimoctl/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <thread>

namespace mimoctl
{

namespace
{

constexpr double kStateLimit = 1e12;

std::string fmt(double x)
{
    if (std::isnan(x))
        return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

Vector gaussian(Rng& rng, Eigen::Index n, double variance)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    const double sd = std::sqrt(variance);
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v(i) = sd * normal(rng);
    return v;
}

double median(std::vector<double> v)
{
    if (v.empty())
        return std::numeric_limits<double>::quiet_NaN();
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<long>(mid), v.end());
    const double hi = v[mid];
    if (v.size() % 2 == 1)
        return hi;
    const double lo = *std::max_element(v.begin(), v.begin() + static_cast<long>(mid));
    return 0.5 * (lo + hi);
}

} // namespace

Scheme parse_scheme(const std::string& s)
{
    if (s == "proposed")
        return Scheme::proposed;
    if (s == "b1" || s == "1")
        return Scheme::b1;
    if (s == "b2" || s == "2")
        return Scheme::b2;
    if (s == "b3" || s == "3")
        return Scheme::b3;
    throw Error("unknown scheme '" + s + "'");
}

const char* to_string(Scheme s)
{
    switch (s)
    {
    case Scheme::proposed:
        return "proposed";
    case Scheme::b1:
        return "b1";
    case Scheme::b2:
        return "b2";
    case Scheme::b3:
        return "b3";
    }
    return "?";
}

std::vector<long> checkpoints(long horizon)
{
    std::vector<long> out;
    for (long decade = 1; decade <= horizon; decade *= 10)
    {
        for (long m : {1L, 2L, 5L})
            if (m * decade <= horizon)
                out.push_back(m * decade);
        if (decade > horizon / 10)
            break;
    }
    if (out.empty() || out.back() != horizon)
        out.push_back(horizon);
    return out;
}

RunResult simulate_run(const ScenarioConfig& cfg, Scheme scheme, long run_index, const Matrix& p_star,
                       const std::vector<long>& grid, TrajectoryLog* trace)
{
    const PlantModel& plant = cfg.plant;
    const CostWeights& w = cfg.weights;
    const Eigen::Index nt = cfg.channel.n_t;
    Rng rng = make_stream(cfg.master_seed, static_cast<std::uint64_t>(run_index), static_cast<std::uint64_t>(scheme));

    RunResult res;
    res.windows.resize(grid.size());
    const long horizon = grid.back();

    LearnerState ls;
    ls.p = Matrix::Identity(plant.state_dim(), plant.state_dim());
    ls.schedule = cfg.schedule;

    QKernel qk;
    if (scheme == Scheme::b1)
        qk = QKernel(baseline1_dim(plant.state_dim(), cfg.channel.n_t), cfg.channel.n_t, cfg.baseline.init_scale,
                     cfg.baseline.forgetting, cfg.baseline.policy_period);
    else if (scheme == Scheme::b2)
        qk = QKernel(baseline2_dim(plant.state_dim(), cfg.channel.n_r, cfg.channel.n_t), cfg.channel.n_t,
                     cfg.baseline.init_scale, cfg.baseline.forgetting, cfg.baseline.policy_period);

    ExtendedState st;
    st.x = plant.x0();
    st.draw = sample_channel(rng, cfg.channel);
    Vector u;
    if (scheme == Scheme::b1)
        u = greedy_action(qk, baseline1_state(st.x)) + gaussian(rng, nt, exploration_variance(0, cfg.baseline.exploration));
    else if (scheme == Scheme::b2)
        u = greedy_action(qk, baseline2_state(st)) + gaussian(rng, nt, exploration_variance(0, cfg.baseline.exploration));

    std::size_t win = 0;
    long win_start = 0;
    WindowStats acc;
    for (long k = 1; k <= horizon; ++k)
    {
        if (!res.diverged)
        {
            if (scheme == Scheme::proposed)
                u = control_action(ls.p, st, plant, w, cfg.literal_eq9);
            else if (scheme == Scheme::b3)
                u = baseline3_action(p_star, st, plant, w);
            const Vector u_star = control_action(p_star, st, plant, w, cfg.literal_eq9);
            const double cost = stage_cost(st, u, w);
            acc.x_norm_sq += st.x.squaredNorm();
            acc.u_err_sq += (u - u_star).squaredNorm();
            acc.stage_cost += cost;
            TrajectoryRow row{k, st.x.squaredNorm(), (u - u_star).squaredNorm(), 0.0, cost};

            Vector next = plant_step(plant, st, u, rng, cfg.noise_free);
            bool blew_up = !next.allFinite() || next.norm() > kStateLimit;
            if (!blew_up)
            {
                try
                {
                    if (scheme == Scheme::proposed)
                        ls = sa_step(std::move(ls), st.draw, plant, w);
                    else if (scheme == Scheme::b1 || scheme == Scheme::b2)
                    {
                        ExtendedState nx{next, sample_channel(rng, cfg.channel)};
                        const Vector expl = gaussian(rng, nt, exploration_variance(k, cfg.baseline.exploration));
                        if (scheme == Scheme::b1)
                            u = baseline1_step(qk, Transition{st.x, u, cost, next}, expl);
                        else
                            u = baseline2_step(qk, ExtendedTransition{st, u, cost, nx}, expl);
                        st = std::move(nx);
                        if (!u.allFinite())
                            blew_up = true;
                    }
                    if (scheme == Scheme::proposed || scheme == Scheme::b3)
                    {
                        st.x = next;
                        st.draw = sample_channel(rng, cfg.channel);
                    }
                }
                catch (const Error&)
                {
                    blew_up = true;
                }
            }
            if (blew_up)
            {
                res.diverged = true;
                res.diverged_at = k;
            }
            if (trace)
            {
                row.p_err = scheme == Scheme::proposed ? spectral_norm(ls.p - p_star)
                                                       : std::numeric_limits<double>::quiet_NaN();
                trace->rows.push_back(row);
            }
        }
        if (k == grid[win])
        {
            const double n = static_cast<double>(k - win_start);
            res.windows[win] = {acc.x_norm_sq / n, acc.u_err_sq / n, acc.stage_cost / n};
            acc = {};
            win_start = k;
            ++win;
        }
    }
    if (scheme == Scheme::proposed)
        res.final_p_err = spectral_norm(ls.p - p_star);
    res.fallback_events = qk.fallback_events;
    if (trace)
    {
        trace->final_p = ls.p;
        trace->plant_diverged = res.diverged;
    }
    return res;
}

SolveReport reference_kernel(const ScenarioConfig& cfg)
{
    Rng rng = make_stream(cfg.master_seed, 0, 0xface);
    const SampleSet draws = sample_set(rng, cfg.channel, cfg.solver.sample_count);
    return solve_fixed_point(cfg.plant, cfg.weights, draws, cfg.solver.xi, cfg.solver.tol);
}

ExperimentResult run_experiment(const ScenarioConfig& cfg, const std::vector<Scheme>& schemes,
                                const Matrix& p_star, unsigned workers)
{
    const std::vector<long> grid = checkpoints(cfg.horizon);
    const std::size_t runs = static_cast<std::size_t>(cfg.runs);
    ExperimentResult out;
    out.runs.assign(schemes.size(), std::vector<RunResult>(runs));

    const std::size_t tasks = schemes.size() * runs;
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t t = next++; t < tasks; t = next++)
        {
            const std::size_t si = t / runs;
            const std::size_t ri = t % runs;
            out.runs[si][ri] = simulate_run(cfg, schemes[si], static_cast<long>(ri), p_star, grid);
        }
    };
    workers = std::max(1u, workers);
    if (workers == 1)
        work();
    else
    {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < workers; ++i)
            pool.emplace_back(work);
        for (auto& t : pool)
            t.join();
    }

    for (std::size_t si = 0; si < schemes.size(); ++si)
        for (std::size_t c = 0; c < grid.size(); ++c)
        {
            MetricsRow row;
            row.k = grid[c];
            row.scheme = schemes[si];
            std::vector<double> u_err;
            double x_sum = 0.0, cost_sum = 0.0;
            std::size_t alive = 0, dead = 0;
            for (const RunResult& r : out.runs[si])
            {
                if (r.diverged && r.diverged_at <= grid[c])
                {
                    ++dead;
                    continue;
                }
                ++alive;
                u_err.push_back(r.windows[c].u_err_sq);
                x_sum += r.windows[c].x_norm_sq;
                cost_sum += r.windows[c].stage_cost;
            }
            const double nan = std::numeric_limits<double>::quiet_NaN();
            row.median_u_err_sq = median(u_err);
            row.mean_x_norm_sq = alive ? x_sum / static_cast<double>(alive) : nan;
            row.mean_stage_cost = alive ? cost_sum / static_cast<double>(alive) : nan;
            row.diverged_fraction = static_cast<double>(dead) / static_cast<double>(runs);
            out.rows.push_back(row);
        }
    return out;
}

std::string csv_header_comment(const ScenarioConfig& cfg, const char* kind)
{
    return std::string("# mimoctl ") + MIMOCTL_VERSION + " " + kind + " v1 scenario=" + cfg.name
           + " config_hash=" + config_hash(cfg);
}

void write_metrics_csv(std::ostream& os, const ScenarioConfig& cfg, const std::vector<MetricsRow>& rows)
{
    os << csv_header_comment(cfg, "metrics") << '\n';
    os << "k,scheme,median_u_err_sq,mean_x_norm_sq,mean_stage_cost,diverged_fraction\n";
    for (const MetricsRow& r : rows)
        os << r.k << ',' << to_string(r.scheme) << ',' << fmt(r.median_u_err_sq) << ',' << fmt(r.mean_x_norm_sq)
           << ',' << fmt(r.mean_stage_cost) << ',' << fmt(r.diverged_fraction) << '\n';
}

void write_trajectory_csv(std::ostream& os, const ScenarioConfig& cfg, const TrajectoryLog& log)
{
    os << csv_header_comment(cfg, "trajectory") << '\n';
    os << "k,x_norm_sq,u_err_sq,p_err,stage_cost\n";
    for (const TrajectoryRow& r : log.rows)
        os << r.k << ',' << fmt(r.x_norm_sq) << ',' << fmt(r.u_err_sq) << ',' << fmt(r.p_err) << ','
           << fmt(r.stage_cost) << '\n';
}

} // namespace mimoctl
