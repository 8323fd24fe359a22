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

#include "mimoctl/cone_decomp.hpp"

#include <cstdio>

namespace mimoctl
{

EffectiveInput effective_input(const PlantModel& model, const ChannelDraw& draw, const CostWeights& weights)
{
    EffectiveInput e;
    const Eigen::Index nt = weights.r.rows();
    if (!draw.delta)
    {
        e.psi = Matrix::Zero(model.state_dim(), nt);
        return e;
    }
    const Matrix inner = draw.h.transpose() * weights.m * draw.h + weights.r;
    e.psi = model.b() * draw.h * inverse_sqrt_spd(inner);
    return e;
}

DecompBasis decomp_basis(const EffectiveInput& psi, const ToleranceProfile& tol)
{
    const Eigen::Index s = psi.psi.rows();
    DecompBasis d;
    const Matrix gram = psi.psi * psi.psi.transpose();
    const SvdResult svd = svd_descending(gram);
    d.v = svd.u.transpose();
    d.lambda = svd.sigma;
    d.gamma = numeric_rank(gram, tol);
    d.pi = Matrix::Zero(s, s);
    d.pi.topLeftCorner(d.gamma, d.gamma).setIdentity();
    return d;
}

ConeSplit cone_decompose(const Matrix& p, const DecompBasis& basis, const ToleranceProfile& tol)
{
    require_finite(p, "cone_decompose: p");
    if (!is_psd(p, tol))
        throw Error("cone_decompose: p is not positive semidefinite");
    const Eigen::Index s = p.rows();
    const Eigen::Index g = basis.gamma;
    const Eigen::Index r = s - g;

    const Matrix pt = symmetrize(basis.v * p * basis.v.transpose());
    const Matrix p11 = pt.topLeftCorner(g, g);
    const Matrix p12 = pt.topRightCorner(g, r);
    const Matrix p22 = pt.bottomRightCorner(r, r);

    ConeSplit out;
    Matrix p11_inv = Matrix::Zero(g, g);
    if (g > 0)
    {
        const SymPinv pi = pinv_symmetric(p11, tol.rank_rel_tol);
        p11_inv = pi.pinv;
        out.block_condition = pi.condition;
        if (pi.condition > 1e12)
        {
            char buf[96];
            std::snprintf(buf, sizeof buf, "leading block condition number %.3g exceeds 1e12", pi.condition);
            out.warning = buf;
        }
    }
    out.sigma_coupling = p11_inv * p12;
    const Matrix& sg = out.sigma_coupling;

    Matrix ptc(s, s);
    ptc.topLeftCorner(g, g) = p11;
    ptc.topRightCorner(g, r) = p11 * sg;
    ptc.bottomLeftCorner(r, g) = sg.transpose() * p11;
    ptc.bottomRightCorner(r, r) = sg.transpose() * p11 * sg;

    Matrix ptuc = Matrix::Zero(s, s);
    ptuc.bottomRightCorner(r, r) = p22 - sg.transpose() * p11 * sg;

    out.p_c = symmetrize(basis.v.transpose() * ptc * basis.v);
    out.p_uc = symmetrize(basis.v.transpose() * ptuc * basis.v);
    return out;
}

Matrix decomposed_nme_residual(const Matrix& p, const SampleSet& draws, const PlantModel& model,
                               const CostWeights& weights, const ToleranceProfile& tol)
{
    if (draws.empty())
        throw Error("decomposed_nme_residual: empty sample set");
    const Matrix& a = model.a();
    const Matrix& b = model.b();
    Matrix acc = Matrix::Zero(p.rows(), p.cols());
    for (const ChannelDraw& d : draws)
    {
        const ConeSplit split = cone_decompose(p, decomp_basis(effective_input(model, d, weights), tol), tol);
        acc.noalias() += a.transpose() * (split.p_uc + split.p_c) * a;
        if (d.delta)
        {
            const Matrix bh = b * d.h;
            const Matrix pa = split.p_c * a;
            const Matrix inner = bh.transpose() * split.p_c * bh + d.h.transpose() * weights.m * d.h + weights.r;
            const Matrix t = bh.transpose() * pa;
            acc.noalias() -= t.transpose() * inner.ldlt().solve(t);
        }
    }
    acc /= static_cast<double>(draws.size());
    return symmetrize(weights.q + acc - p);
}

} // namespace mimoctl
