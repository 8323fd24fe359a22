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

#include "mimoctl/baselines.hpp"

#include <algorithm>
#include <cmath>

namespace mimoctl
{

namespace
{

Eigen::Index upper_size(Eigen::Index d)
{
    return d * (d + 1) / 2;
}

// phi(z) such that theta^T phi(z) = z^T Psi z for theta the upper triangle of Psi.
Vector quad_features(const Vector& z)
{
    const Eigen::Index d = z.size();
    Vector phi(upper_size(d));
    Eigen::Index c = 0;
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = i; j < d; ++j, ++c)
            phi(c) = (i == j ? 1.0 : 2.0) * z(i) * z(j);
    return phi;
}

void unpack(QKernel& qk)
{
    const Eigen::Index d = qk.psi.rows();
    Eigen::Index c = 0;
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = i; j < d; ++j, ++c)
            qk.psi(i, j) = qk.psi(j, i) = qk.theta(c);
}

Vector pack(const Matrix& psi, double rho)
{
    const Eigen::Index d = psi.rows();
    Vector theta(upper_size(d) + 1);
    Eigen::Index c = 0;
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = i; j < d; ++j, ++c)
            theta(c) = psi(i, j);
    theta(c) = rho;
    return theta;
}

Vector concat(const Vector& a, const Vector& b)
{
    Vector z(a.size() + b.size());
    z << a, b;
    return z;
}

} // namespace

QKernel::QKernel(int dim, int n_u_, double init_scale, double forgetting_, long policy_period_, double cov_scale_)
    : forgetting(forgetting_), cov_scale(cov_scale_), n_u(n_u_)
{
    if (dim < 1 || n_u_ < 1 || n_u_ > dim)
        throw Error("QKernel: invalid dimensions");
    psi = init_scale * Matrix::Identity(dim, dim);
    theta = pack(psi, 0.0);
    rls_cov = cov_scale * Matrix::Identity(theta.size(), theta.size());
    policy_period = policy_period_ > 0 ? policy_period_ : std::max<long>(100, 4 * theta.size());
    gain = Matrix::Zero(n_u, dim - n_u);
    improve_policy(*this);
}

Vector greedy_action(const QKernel& qk, const Vector& s)
{
    return -(qk.gain * s);
}

void improve_policy(QKernel& qk)
{
    const Eigen::Index nu = qk.n_u;
    const Eigen::Index ns = qk.psi.rows() - nu;
    Eigen::LLT<Matrix> llt(qk.psi.bottomRightCorner(nu, nu));
    Matrix g;
    if (llt.info() == Eigen::Success)
        g = llt.solve(qk.psi.block(ns, 0, nu, ns));
    if (llt.info() != Eigen::Success || !g.allFinite())
    {
        ++qk.fallback_events;
        qk.gain.setZero();
        return;
    }
    qk.gain = g;
}

void rls_td_update(QKernel& qk, const Vector& z, const Vector& z_next, double cost)
{
    const Eigen::Index n = qk.theta.size();
    Vector g(n), h(n);
    g.head(n - 1) = quad_features(z);
    h.head(n - 1) = g.head(n - 1) - quad_features(z_next);
    g(n - 1) = 1.0;
    h(n - 1) = 1.0;
    const Vector pg = qk.rls_cov * g;
    const double denom = qk.forgetting + h.dot(pg);
    const Vector gain = pg / denom;
    const double err = cost - h.dot(qk.theta);
    const Vector theta = qk.theta + gain * err;
    const Matrix cov = (qk.rls_cov - gain * (h.transpose() * qk.rls_cov)) / qk.forgetting;
    if (!theta.allFinite() || !cov.allFinite() || !std::isfinite(denom))
    {
        ++qk.resets;
        qk.rls_cov = qk.cov_scale * Matrix::Identity(n, n);
        return;
    }
    qk.theta = theta;
    qk.rls_cov = cov;
    unpack(qk);
}

double exploration_variance(long k, double scale)
{
    return scale / std::sqrt(1.0 + static_cast<double>(k));
}

Vector baseline1_state(const Vector& x)
{
    return x;
}

Vector baseline2_state(const ExtendedState& st)
{
    const Eigen::Index s = st.x.size();
    const Eigen::Index nh = st.draw.h.size();
    Vector z(s + 1 + nh);
    z.head(s) = st.x;
    z(s) = st.draw.delta ? 1.0 : 0.0;
    z.tail(nh) = Eigen::Map<const Vector>(st.draw.h.data(), nh);
    return z;
}

int baseline1_dim(int s, int n_t)
{
    return s + n_t;
}

int baseline2_dim(int s, int n_r, int n_t)
{
    return 1 + s + n_r * n_t + n_t;
}

namespace
{

Vector td_step(QKernel& qk, const Vector& s, const Vector& u, double cost, const Vector& s_next,
               const Vector& exploration)
{
    rls_td_update(qk, concat(s, u), concat(s_next, greedy_action(qk, s_next)), cost);
    if (++qk.since_improvement >= qk.policy_period)
    {
        improve_policy(qk);
        qk.since_improvement = 0;
        qk.rls_cov = qk.cov_scale * Matrix::Identity(qk.theta.size(), qk.theta.size());
    }
    return greedy_action(qk, s_next) + exploration;
}

} // namespace

Vector baseline1_step(QKernel& qk, const Transition& obs, const Vector& exploration)
{
    return td_step(qk, baseline1_state(obs.x), obs.u, obs.cost, baseline1_state(obs.x_next), exploration);
}

Vector baseline2_step(QKernel& qk, const ExtendedTransition& obs, const Vector& exploration)
{
    return td_step(qk, baseline2_state(obs.state), obs.u, obs.cost, baseline2_state(obs.next), exploration);
}

Vector baseline3_action(const Matrix& p_star, const ExtendedState& state, const PlantModel& model,
                        const CostWeights& weights)
{
    return control_action(p_star, state, model, weights);
}

} // namespace mimoctl
