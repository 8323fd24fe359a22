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

#ifndef MIMOCTL_NUMERICS_HPP
#define MIMOCTL_NUMERICS_HPP

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <string_view>

namespace mimoctl
{

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Thresholds shared by rank, PSD and convergence decisions.
struct ToleranceProfile
{
    double rank_rel_tol = 1e-10;
    double psd_eig_tol = 1e-9;
    double residual_tol = 1e-8;

    /// Throws Error unless every tolerance is strictly positive.
    void validate() const;
};

struct SvdResult
{
    Matrix u;
    Vector sigma; // descending, nonnegative
    Matrix v;
};

/// Full SVD m = U diag(sigma) V^T with singular values sorted descending.
SvdResult svd_descending(const Matrix& m);

/// Number of singular values above rank_rel_tol * sigma_max. The zero matrix has rank 0.
int numeric_rank(const Matrix& m, const ToleranceProfile& tol = {});

/// PSD test on (m + m^T)/2: min eigenvalue >= -psd_eig_tol * max(1, ||m||).
/// Throws when m is asymmetric beyond 1e-12 relative.
bool is_psd(const Matrix& m, const ToleranceProfile& tol = {});

double spectral_radius(const Matrix& a);
double spectral_norm(const Matrix& a);

/// Smallest eigenvalue of the symmetric part of m.
double min_eigenvalue(const Matrix& m);

Matrix symmetrize(const Matrix& m);

/// Relative asymmetry ||m - m^T|| / max(1, ||m||).
double asymmetry(const Matrix& m);

/// Inverse square root of a symmetric positive definite matrix.
Matrix inverse_sqrt_spd(const Matrix& m);

/// Pseudo-inverse of a symmetric matrix dropping eigenvalues below
/// rel_tol * max|eig|. `condition` is max|eig| / min|eig| before truncation.
struct SymPinv
{
    Matrix pinv;
    double condition = 1.0;
};
SymPinv pinv_symmetric(const Matrix& m, double rel_tol);

/// Throws Error naming `what` if any entry is NaN or infinite.
void require_finite(const Matrix& m, std::string_view what);

/// Kalman controllability matrix [b, ab, ..., a^{S-1} b].
Matrix kalman_matrix(const Matrix& a, const Matrix& b);

} // namespace mimoctl

#endif
