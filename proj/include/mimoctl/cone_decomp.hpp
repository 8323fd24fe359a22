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

#ifndef MIMOCTL_CONE_DECOMP_HPP
#define MIMOCTL_CONE_DECOMP_HPP

#include "mimoctl/model.hpp"

#include <string>

namespace mimoctl
{

struct EffectiveInput
{
    Matrix psi; // S x N_t, zero when delta = 0
};

/// psi = delta B H (delta H^T M H + R)^{-1/2}.
EffectiveInput effective_input(const PlantModel& model, const ChannelDraw& draw, const CostWeights& weights);

/// Psi Psi^T = V^T diag(lambda) V. Rows of V are eigenvectors, lambda descending.
struct DecompBasis
{
    Matrix v;
    Vector lambda;
    int gamma = 0;
    Matrix pi; // diag(1,...,1,0,...,0) with gamma ones
};

DecompBasis decomp_basis(const EffectiveInput& psi, const ToleranceProfile& tol = {});

struct ConeSplit
{
    Matrix p_c;
    Matrix p_uc;
    Matrix sigma_coupling; // gamma x (S - gamma)
    double block_condition = 1.0;
    std::string warning; // set when the leading block is badly conditioned
};

/// Splits P into the controllable and uncontrollable cones of the basis.
/// Throws on asymmetric or non-PSD p.
ConeSplit cone_decompose(const Matrix& p, const DecompBasis& basis, const ToleranceProfile& tol = {});

/// Q + mean over draws of [A^T P^uc A + A^T P^c A
///   - delta A^T P^c B H (H^T B^T P^c B H + H^T M H + R)^{-1} H^T B^T P^c A] - P.
Matrix decomposed_nme_residual(const Matrix& p, const SampleSet& draws, const PlantModel& model,
                               const CostWeights& weights, const ToleranceProfile& tol = {});

} // namespace mimoctl

#endif
