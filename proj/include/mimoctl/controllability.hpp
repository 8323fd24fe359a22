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

#ifndef MIMOCTL_CONTROLLABILITY_HPP
#define MIMOCTL_CONTROLLABILITY_HPP

#include "mimoctl/model.hpp"

#include <complex>
#include <string>
#include <vector>

namespace mimoctl
{

/// PBH test: rank [a - lambda I | b] == S at every eigenvalue of a.
/// Rank is taken in complex arithmetic, relative to the largest singular value.
bool pbh_controllable(const Matrix& a, const Matrix& b, const ToleranceProfile& tol = {});

struct StructureData
{
    Matrix u;        // S x S, columns are eigenvectors of B B^T
    Vector xi;       // singular values of B B^T, descending
    int eta_b = 0;   // rank of B
    Matrix a_tilde;  // U^T A U
    Matrix a11, a12, a21, a22;
};

/// Rotates A into the SVD basis of B B^T and splits it at eta_B.
StructureData structure_transform(const PlantModel& model, const ToleranceProfile& tol = {});

enum class Regime
{
    AlmostSureControllable,
    IntermittentlyControllable,
    AlmostSureUncontrollable
};

const char* to_string(Regime r);

struct EigenRankRow
{
    std::complex<double> lambda;
    int rank = 0; // rank(A_tilde - lambda I)
};

struct Verdict
{
    Regime regime = Regime::AlmostSureControllable;
    std::string matched_condition; // "a.1" ... "c.2"
    std::string details;
    int eta_b = 0;
    std::vector<EigenRankRow> rank_table;
};

/// Controllability regime of (A, delta B H). Throws when (A, B) fails PBH or p_access == 0.
Verdict classify(const PlantModel& model, const ChannelConfig& cfg, const ToleranceProfile& tol = {});

/// Eigenvalues of a with near-coincident values merged to their cluster mean.
/// Repeated eigenvalues of defective matrices come back from the QR algorithm
/// split by O(eps^(1/k)); rank tests at the split values would miss the defect.
std::vector<std::complex<double>> clustered_eigenvalues(const Matrix& a);

/// numeric_rank for complex matrices.
int numeric_rank_complex(const Eigen::MatrixXcd& m, const ToleranceProfile& tol = {});

} // namespace mimoctl

#endif
