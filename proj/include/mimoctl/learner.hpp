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

#ifndef MIMOCTL_LEARNER_HPP
#define MIMOCTL_LEARNER_HPP

#include "mimoctl/nme.hpp"

#include <memory>
#include <string>
#include <vector>

namespace mimoctl
{

/// alpha_k = a0 / (1 + k / tau)^gamma_exp
struct StepSchedule
{
    double a0 = 0.02;
    double tau = 250.0;
    double gamma_exp = 1.0;

    double alpha(long k) const;
    void validate() const;
};

/// Records N_k = f_hat(P_k) - f(P_k) against a frozen reference set.
struct NoiseLog
{
    explicit NoiseLog(std::shared_ptr<const ResidualEvaluator> reference, double a_norm);

    std::shared_ptr<const ResidualEvaluator> reference;
    double a_norm = 0.0;
    std::vector<Matrix> noise;
    std::vector<double> p_norm; // ||P_k|| at the time of each sample
};

struct LearnerState
{
    Matrix p;
    long k = 0;
    StepSchedule schedule;
    std::shared_ptr<NoiseLog> noise_log; // optional
    long psd_warnings = 0;               // slots where min eig(P_k) < -1e-6
};

/// P_{k+1} = P_k + alpha_k f_hat(P_k) for the slot's draw. Throws "learner diverged"
/// once ||P_{k+1}|| exceeds 1e12.
LearnerState sa_step(LearnerState state, const ChannelDraw& draw, const PlantModel& model,
                     const CostWeights& weights);

/// u = -(H^T B^T P B H + H^T M H + R)^{-1} H^T B^T P A x when delta = 1, else 0.
/// With literal_eq9 the delta = 0 branch becomes -R^{-1} H^T B^T P A x.
Vector control_action(const Matrix& p, const ExtendedState& state, const PlantModel& model,
                      const CostWeights& weights, bool literal_eq9 = false);

/// x^T P x
double value_estimate(const Matrix& p, const Vector& x);

struct TrajectoryRow
{
    long k = 0;
    double x_norm_sq = 0.0;
    double u_err_sq = 0.0;
    double p_err = 0.0;
    double stage_cost = 0.0;
};

struct OnlineOptions
{
    Matrix reference;          // P* for u_err and p_err; empty disables both
    Matrix p0;                 // initial kernel, identity when empty
    bool apply_to_plant = true;
    bool noise_free = false;
    bool literal_eq9 = false;
};

struct TrajectoryLog
{
    std::vector<TrajectoryRow> rows;
    Matrix final_p;
    bool plant_diverged = false;
};

/// Closed loop for `horizon` slots. Row k describes slot k-1 -> k: the state
/// and action before the transition and ||P_k - P*|| after the k-th update.
TrajectoryLog run_online(const PlantModel& model, const CostWeights& weights, const ChannelConfig& cfg,
                         const StepSchedule& schedule, long horizon, std::uint64_t seed,
                         const OnlineOptions& options = {});

struct MartingaleReport
{
    std::size_t samples = 0;
    Vector mean;       // upper-triangle coordinates of N, row-major
    Vector std_error;
    bool mean_covers_zero = false; // every |mean| <= 3 std_error
    double second_moment = 0.0;    // mean ||N_k||^2
    double bound = 0.0;            // mean 2 ||A||^2 (1 + ||P_k||^2)
    bool bound_holds = false;      // second_moment <= 1.1 bound
};

MartingaleReport martingale_diagnostics(const NoiseLog& log);

/// Sup-norm gap between the piecewise-linear interpolants of the fixed-point
/// process at steps xi and xi/2 over [0, horizon], same P0 = I and draws.
double trajectory_gap(double xi, double horizon, const PlantModel& model, const CostWeights& weights,
                      const SampleSet& draws);

double trajectory_gap(double xi, double horizon, const PlantModel& model, const CostWeights& weights,
                      const ChannelConfig& cfg, std::uint64_t seed, std::size_t sample_count = 10000);

} // namespace mimoctl

#endif
