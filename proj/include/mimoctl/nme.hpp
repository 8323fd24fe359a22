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

#ifndef MIMOCTL_NME_HPP
#define MIMOCTL_NME_HPP

#include "mimoctl/cone_decomp.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mimoctl
{

/// Sample-average NME map over a frozen set of draws. Per-draw products are
/// cached so repeated evaluations only cost one pass over the set.
class ResidualEvaluator
{
  public:
    ResidualEvaluator(const PlantModel& model, const CostWeights& weights, const SampleSet& draws);

    /// f(P) = mean[A^T P A - delta A^T P B H (delta H^T B^T P B H + delta H^T M H + R)^{-1} H^T B^T P A] - P + Q
    Matrix f(const Matrix& p) const;
    /// g(P) = f(P) + P
    Matrix g(const Matrix& p) const;

    std::size_t size() const { return n_; }

  private:
    Matrix a_, q_;
    Matrix g_all_; // B H_i for every draw with access, side by side
    Matrix n_all_; // H_i^T M H_i + R, side by side
    Eigen::Index n_t_ = 0;
    std::size_t active_ = 0;
    std::size_t n_ = 0;
};

Matrix f_residual(const Matrix& p, const SampleSet& draws, const PlantModel& model, const CostWeights& weights);

/// Single-draw estimator of f(P).
Matrix f_hat(const Matrix& p, const ChannelDraw& draw, const PlantModel& model, const CostWeights& weights);

/// Gap between the two Woodbury forms of the per-draw map for a PD kernel.
double woodbury_check(const Matrix& p, const EffectiveInput& psi, const PlantModel& model);

struct SolveReport
{
    Matrix p_star;
    long iterations = 0;
    double residual_norm = 0.0;
    std::optional<double> bracket_gap;
    bool converged = false;
    std::string diagnosis;
    std::vector<double> residual_history;
};

/// P <- A^T P A - A^T P B (B^T P B + M + R)^{-1} B^T P A + Q from P0 = Q. Needs N_r == N_t.
SolveReport solve_dare(const PlantModel& model, const CostWeights& weights, const ToleranceProfile& tol = {},
                       long max_iterations = 10000);

/// P <- P + xi f(P) on a frozen sample set, from p0 (identity when empty).
SolveReport solve_fixed_point(const PlantModel& model, const CostWeights& weights, const SampleSet& draws, double xi,
                              const ToleranceProfile& tol = {}, const Matrix& p0 = {}, long max_iterations = 100000);

/// Same, on sample_count draws from make_stream(seed).
SolveReport solve_fixed_point(const PlantModel& model, const CostWeights& weights, const ChannelConfig& cfg, double xi,
                              std::size_t sample_count, std::uint64_t seed, const ToleranceProfile& tol = {});

enum class Trilean
{
    yes,
    no,
    inconclusive
};

const char* to_string(Trilean t);

struct ExistenceCertificate
{
    double estimate = 0.0;
    double ci_halfwidth = 0.0;
    std::size_t n_samples = 0;
    Trilean satisfied = Trilean::inconclusive;
    double mean_inv_trace = 0.0; // E[Tr((Lambda)_gamma^{-1})]
};

/// Monte-Carlo estimate of ||E[A^T V^T (I - Pi) V A]|| with a 10-batch-means 99% CI.
ExistenceCertificate existence_condition(const PlantModel& model, const CostWeights& weights,
                                         const ChannelConfig& cfg, std::size_t n_samples, std::uint64_t seed,
                                         const ToleranceProfile& tol = {});

struct BracketResult
{
    SolveReport lower;
    SolveReport upper;
    double theta = 0.0;
    std::vector<std::string> warnings;
    double min_lower_increment = 0.0; // smallest eigenvalue over all lower increments
    double max_upper_increment = 0.0; // largest eigenvalue over all upper increments
};

/// Ascending g-iteration from 0 and descending one from theta I on the frozen set.
BracketResult solve_bracket(const PlantModel& model, const CostWeights& weights, const SampleSet& draws,
                            const ExistenceCertificate& cert, const ToleranceProfile& tol = {},
                            long max_iterations = 100000);

BracketResult solve_bracket(const PlantModel& model, const CostWeights& weights, const ChannelConfig& cfg,
                            std::size_t sample_count, std::uint64_t seed, const ToleranceProfile& tol = {});

/// Tr(M + P W + B^T P B)
double average_cost(const Matrix& p_star, const PlantModel& model, const CostWeights& weights);

} // namespace mimoctl

#endif
