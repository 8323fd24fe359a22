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

#include "mimoctl/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace mimoctl
{

void ToleranceProfile::validate() const
{
    if (!(rank_rel_tol > 0.0) || !(psd_eig_tol > 0.0) || !(residual_tol > 0.0))
        throw Error("tolerance profile: all tolerances must be strictly positive");
}

void require_finite(const Matrix& m, std::string_view what)
{
    if (!m.allFinite())
        throw Error(std::string(what) + ": non-finite entry");
}

SvdResult svd_descending(const Matrix& m)
{
    require_finite(m, "svd_descending");
    if (m.size() == 0)
        return {Matrix::Identity(m.rows(), m.rows()), Vector(), Matrix::Identity(m.cols(), m.cols())};
    // Eigen's JacobiSVD already sorts the singular values in decreasing order.
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

int numeric_rank(const Matrix& m, const ToleranceProfile& tol)
{
    require_finite(m, "numeric_rank");
    if (m.size() == 0)
        return 0;
    Eigen::JacobiSVD<Matrix> svd(m);
    const Vector& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0)
        return 0;
    const double cut = tol.rank_rel_tol * s(0);
    return static_cast<int>((s.array() > cut).count());
}

double asymmetry(const Matrix& m)
{
    if (m.rows() != m.cols())
        throw Error("asymmetry: matrix is not square");
    if (m.size() == 0)
        return 0.0;
    return spectral_norm(m - m.transpose()) / std::max(1.0, spectral_norm(m));
}

Matrix symmetrize(const Matrix& m)
{
    return 0.5 * (m + m.transpose());
}

double min_eigenvalue(const Matrix& m)
{
    if (m.size() == 0)
        return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

bool is_psd(const Matrix& m, const ToleranceProfile& tol)
{
    require_finite(m, "is_psd");
    if (asymmetry(m) > 1e-12)
        throw Error("is_psd: matrix is not symmetric");
    if (m.size() == 0)
        return true;
    return min_eigenvalue(m) >= -tol.psd_eig_tol * std::max(1.0, spectral_norm(m));
}

double spectral_radius(const Matrix& a)
{
    require_finite(a, "spectral_radius");
    if (a.rows() != a.cols())
        throw Error("spectral_radius: matrix is not square");
    if (a.size() == 0)
        return 0.0;
    Eigen::EigenSolver<Matrix> es(a, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

double spectral_norm(const Matrix& a)
{
    if (a.size() == 0)
        return 0.0;
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues()(0);
}

Matrix inverse_sqrt_spd(const Matrix& m)
{
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m));
    const Vector& ev = es.eigenvalues();
    if (ev.size() > 0 && !(ev(0) > 0.0))
        throw Error("inverse_sqrt_spd: matrix is not positive definite");
    return es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
}

SymPinv pinv_symmetric(const Matrix& m, double rel_tol)
{
    SymPinv out;
    out.pinv = Matrix::Zero(m.cols(), m.rows());
    if (m.size() == 0)
        return out;
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m));
    const Vector& ev = es.eigenvalues();
    const double top = ev.cwiseAbs().maxCoeff();
    if (top == 0.0)
        return out;
    Vector inv = Vector::Zero(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (std::abs(ev(i)) > rel_tol * top)
            inv(i) = 1.0 / ev(i);
    out.pinv = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
    const double smallest = ev.cwiseAbs().minCoeff();
    out.condition = smallest > 0.0 ? top / smallest : std::numeric_limits<double>::infinity();
    return out;
}

Matrix kalman_matrix(const Matrix& a, const Matrix& b)
{
    const Eigen::Index n = a.rows();
    Matrix k(n, n * b.cols());
    Matrix block = b;
    for (Eigen::Index i = 0; i < n; ++i)
    {
        k.middleCols(i * b.cols(), b.cols()) = block;
        block = a * block;
    }
    return k;
}

} // namespace mimoctl
