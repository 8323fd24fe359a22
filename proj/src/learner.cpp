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

#include "mimoctl/learner.hpp"

#include <cmath>

namespace mimoctl
{

double StepSchedule::alpha(long k) const
{
    return a0 / std::pow(1.0 + static_cast<double>(k) / tau, gamma_exp);
}

void StepSchedule::validate() const
{
    if (!(a0 > 0.0) || !(tau > 0.0))
        throw Error("schedule: a0 and tau must be positive");
    if (!(gamma_exp > 0.5 && gamma_exp <= 1.0))
        throw Error("schedule.gamma_exp: must lie in (0.5, 1]");
}

NoiseLog::NoiseLog(std::shared_ptr<const ResidualEvaluator> ref, double a_norm_)
    : reference(std::move(ref)), a_norm(a_norm_)
{
}

LearnerState sa_step(LearnerState state, const ChannelDraw& draw, const PlantModel& model,
                     const CostWeights& weights)
{
    require_finite(state.p, "sa_step: P");
    const Matrix fh = f_hat(state.p, draw, model, weights);
    if (state.noise_log)
    {
        state.noise_log->noise.push_back(fh - state.noise_log->reference->f(state.p));
        state.noise_log->p_norm.push_back(spectral_norm(state.p));
    }
    state.p = symmetrize(state.p + state.schedule.alpha(state.k) * fh);
    ++state.k;
    if (!state.p.allFinite() || state.p.cwiseAbs().maxCoeff() > 1e12 || spectral_norm(state.p) > 1e12)
        throw Error("learner diverged");
    if (min_eigenvalue(state.p) < -1e-6)
        ++state.psd_warnings;
    return state;
}

Vector control_action(const Matrix& p, const ExtendedState& state, const PlantModel& model,
                      const CostWeights& weights, bool literal_eq9)
{
    const Eigen::Index nt = weights.r.rows();
    const Matrix bh = model.b() * state.draw.h;
    const Vector rhs = bh.transpose() * (p * (model.a() * state.x));
    if (state.draw.delta)
    {
        const Matrix inner = bh.transpose() * p * bh + state.draw.h.transpose() * weights.m * state.draw.h + weights.r;
        return -inner.ldlt().solve(rhs);
    }
    if (literal_eq9)
        return -weights.r.ldlt().solve(rhs);
    return Vector::Zero(nt);
}

double value_estimate(const Matrix& p, const Vector& x)
{
    return x.dot(p * x);
}

TrajectoryLog run_online(const PlantModel& model, const CostWeights& weights, const ChannelConfig& cfg,
                         const StepSchedule& schedule, long horizon, std::uint64_t seed,
                         const OnlineOptions& options)
{
    if (horizon < 1)
        throw Error("run_online: horizon must be at least 1");
    schedule.validate();
    Rng rng = make_stream(seed);
    const Eigen::Index s = model.state_dim();
    LearnerState ls;
    ls.p = options.p0.size() ? options.p0 : Matrix::Identity(s, s);
    ls.schedule = schedule;
    const bool have_ref = options.reference.size() > 0;

    TrajectoryLog log;
    log.rows.reserve(static_cast<std::size_t>(horizon));
    ExtendedState st;
    st.x = model.x0();
    for (long k = 1; k <= horizon; ++k)
    {
        st.draw = sample_channel(rng, cfg);
        const Vector u = control_action(ls.p, st, model, weights, options.literal_eq9);
        TrajectoryRow row;
        row.k = k;
        row.x_norm_sq = st.x.squaredNorm();
        row.stage_cost = stage_cost(st, u, weights);
        if (have_ref)
            row.u_err_sq =
                (u - control_action(options.reference, st, model, weights, options.literal_eq9)).squaredNorm();
        Vector next = st.x;
        if (options.apply_to_plant && !log.plant_diverged)
        {
            next = plant_step(model, st, u, rng, options.noise_free);
            if (!next.allFinite() || next.norm() > 1e12)
            {
                log.plant_diverged = true;
                next = st.x;
            }
        }
        try
        {
            ls = sa_step(std::move(ls), st.draw, model, weights);
        }
        catch (const Error& e)
        {
            throw Error(std::string(e.what()) + " at slot " + std::to_string(k));
        }
        if (have_ref)
            row.p_err = spectral_norm(ls.p - options.reference);
        st.x = next;
        log.rows.push_back(row);
    }
    log.final_p = ls.p;
    return log;
}

MartingaleReport martingale_diagnostics(const NoiseLog& log)
{
    if (log.noise.empty())
        throw Error("martingale_diagnostics: empty noise log");
    const Eigen::Index s = log.noise.front().rows();
    const Eigen::Index dim = s * (s + 1) / 2;
    const double n = static_cast<double>(log.noise.size());
    MartingaleReport r;
    r.samples = log.noise.size();
    r.mean = Vector::Zero(dim);
    Vector sq = Vector::Zero(dim);
    double bound = 0.0;
    for (std::size_t t = 0; t < log.noise.size(); ++t)
    {
        const Matrix& nk = log.noise[t];
        Eigen::Index c = 0;
        for (Eigen::Index i = 0; i < s; ++i)
            for (Eigen::Index j = i; j < s; ++j, ++c)
            {
                r.mean(c) += nk(i, j);
                sq(c) += nk(i, j) * nk(i, j);
            }
        const double nn = spectral_norm(nk);
        r.second_moment += nn * nn;
        bound += 2.0 * log.a_norm * log.a_norm * (1.0 + log.p_norm[t] * log.p_norm[t]);
    }
    r.mean /= n;
    const Vector var = ((sq / n) - r.mean.cwiseProduct(r.mean)) * (n / std::max(1.0, n - 1.0));
    r.std_error = (var.cwiseMax(0.0) / n).cwiseSqrt();
    r.mean_covers_zero = (r.mean.cwiseAbs().array() <= 3.0 * r.std_error.array()).all();
    r.second_moment /= n;
    r.bound = bound / n;
    r.bound_holds = r.second_moment <= 1.1 * r.bound;
    return r;
}

namespace
{

std::vector<Matrix> fixed_point_path(const ResidualEvaluator& ev, Matrix p, double xi, long steps)
{
    std::vector<Matrix> path;
    path.reserve(static_cast<std::size_t>(steps) + 1);
    path.push_back(p);
    for (long i = 0; i < steps; ++i)
    {
        p = symmetrize(p + xi * ev.f(p));
        path.push_back(p);
    }
    return path;
}

} // namespace

double trajectory_gap(double xi, double horizon, const PlantModel& model, const CostWeights& weights,
                      const SampleSet& draws)
{
    if (!(xi > 0.0 && xi < 1.0))
        throw Error("trajectory_gap: xi must lie in (0, 1)");
    const ResidualEvaluator ev(model, weights, draws);
    const Matrix p0 = Matrix::Identity(model.state_dim(), model.state_dim());
    const long coarse = static_cast<long>(std::ceil(horizon / xi));
    const auto path1 = fixed_point_path(ev, p0, xi, coarse);
    const auto path2 = fixed_point_path(ev, p0, xi / 2.0, 2 * coarse);
    // Breakpoints of the fine path include all coarse ones; the coarse
    // interpolant at odd fine indices is the midpoint of its neighbours.
    double gap = 0.0;
    for (long j = 0; j <= 2 * coarse; ++j)
    {
        const Matrix c = (j % 2 == 0) ? path1[static_cast<std::size_t>(j / 2)]
                                      : Matrix(0.5 * (path1[static_cast<std::size_t>(j / 2)]
                                                      + path1[static_cast<std::size_t>(j / 2 + 1)]));
        gap = std::max(gap, spectral_norm(c - path2[static_cast<std::size_t>(j)]));
    }
    return gap;
}

double trajectory_gap(double xi, double horizon, const PlantModel& model, const CostWeights& weights,
                      const ChannelConfig& cfg, std::uint64_t seed, std::size_t sample_count)
{
    Rng rng = make_stream(seed);
    return trajectory_gap(xi, horizon, model, weights, sample_set(rng, cfg, sample_count));
}

} // namespace mimoctl
