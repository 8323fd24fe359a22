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

#ifndef MIMOCTL_BASELINES_HPP
#define MIMOCTL_BASELINES_HPP

#include "mimoctl/learner.hpp"

namespace mimoctl
{

/// Quadratic Q-model z^T Psi z fitted by average-cost RLS temporal differences.
/// The action occupies the last n_u coordinates of z. The acting policy
/// u = -gain s is held fixed for `policy_period` updates and then moved to the
/// argmin of the current Psi (policy iteration).
struct QKernel
{
    QKernel() = default;
    /// policy_period <= 0 selects max(100, 4 * number of regression parameters).
    QKernel(int dim, int n_u, double init_scale = 0.01, double forgetting = 0.995, long policy_period = 0,
            double cov_scale = 1e3);

    Matrix psi;       // d x d, symmetric
    Matrix rls_cov;   // inverse correlation of the regression
    Vector theta;     // upper triangle of psi, then the average-cost estimate
    double forgetting = 0.995;
    double cov_scale = 1e3;
    int n_u = 0;
    Matrix gain;              // n_u x (d - n_u)
    long policy_period = 100;
    long since_improvement = 0;
    long fallback_events = 0; // improvements where Psi_uu was not PD
    long resets = 0;          // RLS restarts after a non-finite update

    int dim() const { return static_cast<int>(psi.rows()); }
    double average_cost() const { return theta(theta.size() - 1); }
};

/// Action of the current policy, -gain s.
Vector greedy_action(const QKernel& qk, const Vector& s);

/// gain = Psi_uu^{-1} Psi_us. When Psi_uu is not PD the gain becomes zero and
/// the event is counted.
void improve_policy(QKernel& qk);

/// One RLS-TD step on cost = Q(z) - Q(z') + rho, with the features of z as instruments.
void rls_td_update(QKernel& qk, const Vector& z, const Vector& z_next, double cost);

/// Gaussian exploration variance scale (1 + k)^{-1/2}.
double exploration_variance(long k, double scale = 0.1);

struct Transition
{
    Vector x;
    Vector u;
    double cost = 0.0;
    Vector x_next;
};

/// Static-channel Q-learning on z = [x; u]. Returns the next action for
/// x_next: greedy plus `exploration`.
Vector baseline1_step(QKernel& qk, const Transition& obs, const Vector& exploration);

struct ExtendedTransition
{
    ExtendedState state;
    Vector u;
    double cost = 0.0;
    ExtendedState next;
};

/// Brute-force Q-learning on z = [x; delta; vec(H); u] without state reduction.
Vector baseline2_step(QKernel& qk, const ExtendedTransition& obs, const Vector& exploration);

/// Baseline 1 features without the action: x.
Vector baseline1_state(const Vector& x);
/// Baseline 2 features without the action: [x; delta; vec(H)] (column-major).
Vector baseline2_state(const ExtendedState& st);

int baseline1_dim(int s, int n_t);
int baseline2_dim(int s, int n_r, int n_t);

/// Genie-aided optimal action with the known P*.
Vector baseline3_action(const Matrix& p_star, const ExtendedState& state, const PlantModel& model,
                        const CostWeights& weights);

} // namespace mimoctl

#endif
