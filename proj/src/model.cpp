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

#include "mimoctl/model.hpp"

#include <string>

namespace mimoctl
{

namespace
{

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::string shape(const Matrix& m)
{
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_shape(const Matrix& m, Eigen::Index rows, Eigen::Index cols, const std::string& name)
{
    if (m.rows() != rows || m.cols() != cols)
        throw Error(name + ": expected " + std::to_string(rows) + "x" + std::to_string(cols) + ", got " + shape(m));
}

void require_spd(const Matrix& m, const std::string& name)
{
    require_finite(m, name);
    if (asymmetry(m) > 1e-10)
        throw Error(name + ": matrix is not symmetric");
    if (!(min_eigenvalue(m) > 0.0))
        throw Error(name + ": matrix is not positive definite");
}

} // namespace

Rng make_stream(std::uint64_t master_seed, std::uint64_t run_index, std::uint64_t scheme_id)
{
    std::uint64_t s = splitmix64(master_seed);
    s = splitmix64(s ^ splitmix64(run_index + 0x51ed2701ULL));
    s = splitmix64(s ^ splitmix64(scheme_id + 0xa24baed4ULL));
    return Rng(s);
}

PlantModel::PlantModel(Matrix a, Matrix b, Matrix w, Vector x0)
    : a_(std::move(a)), b_(std::move(b)), w_(std::move(w)), x0_(std::move(x0))
{
    const Eigen::Index s = a_.rows();
    if (s == 0)
        throw Error("plant.A: empty matrix");
    require_shape(a_, s, s, "plant.A");
    if (b_.rows() != s || b_.cols() == 0)
        throw Error("plant.B: expected " + std::to_string(s) + " rows and at least one column, got " + shape(b_));
    require_shape(w_, s, s, "plant.W");
    require_finite(a_, "plant.A");
    require_finite(b_, "plant.B");
    require_finite(w_, "plant.W");
    if (x0_.size() == 0)
        x0_ = Vector::Zero(s);
    if (x0_.size() != s)
        throw Error("plant.x0: expected length " + std::to_string(s) + ", got " + std::to_string(x0_.size()));
    if (asymmetry(w_) > 1e-10)
        throw Error("plant.W: matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(w_));
    const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    if (es.eigenvalues()(0) < -1e-12 * scale)
        throw Error("plant.W: matrix is not positive semidefinite");
    w_factor_ = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

void validate(const ChannelConfig& cfg)
{
    if (cfg.n_r < 1 || cfg.n_t < 1)
        throw Error("channel: n_r and n_t must be at least 1");
    if (!(cfg.p_access >= 0.0 && cfg.p_access <= 1.0))
        throw Error("channel.p_access: must lie in [0, 1]");
}

void validate(const CostWeights& weights, const PlantModel& plant, const ChannelConfig& cfg)
{
    validate(cfg);
    if (plant.input_dim() != cfg.n_r)
        throw Error("channel.n_r: plant.B has " + std::to_string(plant.input_dim()) + " columns but n_r = "
                    + std::to_string(cfg.n_r));
    require_shape(weights.q, plant.state_dim(), plant.state_dim(), "weights.Q");
    require_shape(weights.r, cfg.n_t, cfg.n_t, "weights.R");
    require_shape(weights.m, cfg.n_r, cfg.n_r, "weights.M");
    require_spd(weights.q, "weights.Q");
    require_spd(weights.r, "weights.R");
    require_spd(weights.m, "weights.M");
}

ChannelDraw sample_channel(Rng& rng, const ChannelConfig& cfg)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    std::bernoulli_distribution access(cfg.p_access);
    ChannelDraw d;
    d.h.resize(cfg.n_r, cfg.n_t);
    for (Eigen::Index j = 0; j < d.h.cols(); ++j)
        for (Eigen::Index i = 0; i < d.h.rows(); ++i)
            d.h(i, j) = normal(rng);
    d.delta = access(rng);
    return d;
}

SampleSet sample_set(Rng& rng, const ChannelConfig& cfg, std::size_t n)
{
    SampleSet out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(sample_channel(rng, cfg));
    return out;
}

SampleSet static_sample_set(const ChannelConfig& cfg, std::size_t n)
{
    if (cfg.n_r != cfg.n_t)
        throw Error("static_sample_set: H = I needs n_r == n_t");
    return SampleSet(n, ChannelDraw{Matrix::Identity(cfg.n_r, cfg.n_t), true});
}

Vector plant_step(const PlantModel& plant, const ExtendedState& state, const Vector& u, Rng& rng, bool noise_free)
{
    require_finite(u, "plant_step: u");
    Vector next = plant.a() * state.x;
    if (state.draw.delta)
        next.noalias() += plant.b() * (state.draw.h * u);
    if (noise_free)
        return next;
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector v(plant.input_dim());
    for (Eigen::Index i = 0; i < v.size(); ++i)
        v(i) = normal(rng);
    Vector e(plant.state_dim());
    for (Eigen::Index i = 0; i < e.size(); ++i)
        e(i) = normal(rng);
    next.noalias() += plant.b() * v;
    next.noalias() += plant.w_factor() * e;
    return next;
}

double stage_cost(const ExtendedState& state, const Vector& u, const CostWeights& weights)
{
    double c = state.x.dot(weights.q * state.x) + u.dot(weights.r * u) + weights.m.trace();
    if (state.draw.delta)
    {
        const Vector hu = state.draw.h * u;
        c += hu.dot(weights.m * hu);
    }
    return c;
}

} // namespace mimoctl
