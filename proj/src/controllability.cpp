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

#include "mimoctl/controllability.hpp"

#include <cmath>
#include <sstream>

namespace mimoctl
{

int numeric_rank_complex(const Eigen::MatrixXcd& m, const ToleranceProfile& tol)
{
    if (m.size() == 0)
        return 0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const Vector s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0)
        return 0;
    return static_cast<int>((s.array() > tol.rank_rel_tol * s(0)).count());
}

std::vector<std::complex<double>> clustered_eigenvalues(const Matrix& a)
{
    if (a.rows() == 0)
        return {};
    Eigen::EigenSolver<Matrix> es(a, false);
    const Eigen::VectorXcd ev = es.eigenvalues();
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    const double radius = 1e-5 * scale;
    std::vector<bool> used(ev.size(), false);
    std::vector<std::complex<double>> out;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
    {
        if (used[i])
            continue;
        std::complex<double> sum = 0.0;
        int count = 0;
        for (Eigen::Index j = i; j < ev.size(); ++j)
            if (!used[j] && std::abs(ev(j) - ev(i)) <= radius)
            {
                used[j] = true;
                sum += ev(j);
                ++count;
            }
        out.push_back(sum / static_cast<double>(count));
    }
    return out;
}

bool pbh_controllable(const Matrix& a, const Matrix& b, const ToleranceProfile& tol)
{
    require_finite(a, "pbh_controllable: a");
    require_finite(b, "pbh_controllable: b");
    const Eigen::Index s = a.rows();
    if (s == 0)
        return true;
    Eigen::MatrixXcd m(s, s + b.cols());
    m.rightCols(b.cols()) = b.cast<std::complex<double>>();
    for (const auto& lambda : clustered_eigenvalues(a))
    {
        m.leftCols(s) = a.cast<std::complex<double>>();
        m.leftCols(s).diagonal().array() -= lambda;
        if (numeric_rank_complex(m, tol) < s)
            return false;
    }
    return true;
}

StructureData structure_transform(const PlantModel& model, const ToleranceProfile& tol)
{
    const Matrix& b = model.b();
    if (b.cwiseAbs().maxCoeff() == 0.0)
        throw Error("structure_transform: B = 0 has no block structure");
    StructureData d;
    const SvdResult svd = svd_descending(b * b.transpose());
    d.u = svd.u;
    d.xi = svd.sigma;
    d.eta_b = numeric_rank(b, tol);
    d.a_tilde = d.u.transpose() * model.a() * d.u;
    const Eigen::Index e = d.eta_b;
    const Eigen::Index r = model.state_dim() - e;
    d.a11 = d.a_tilde.topLeftCorner(e, e);
    d.a12 = d.a_tilde.topRightCorner(e, r);
    d.a21 = d.a_tilde.bottomLeftCorner(r, e);
    d.a22 = d.a_tilde.bottomRightCorner(r, r);
    return d;
}

const char* to_string(Regime r)
{
    switch (r)
    {
    case Regime::AlmostSureControllable:
        return "AlmostSureControllable";
    case Regime::IntermittentlyControllable:
        return "IntermittentlyControllable";
    case Regime::AlmostSureUncontrollable:
        return "AlmostSureUncontrollable";
    }
    return "?";
}

Verdict classify(const PlantModel& model, const ChannelConfig& cfg, const ToleranceProfile& tol)
{
    validate(cfg);
    if (!pbh_controllable(model.a(), model.b(), tol))
        throw Error("pair (A,B) uncontrollable; Lemma 2 inapplicable");
    if (cfg.p_access == 0.0)
        throw Error("classify: p_access = 0 means no slot ever has access");

    const StructureData sd = structure_transform(model, tol);
    const int s = model.state_dim();
    const int nt = cfg.n_t;
    const bool always = cfg.p_access == 1.0;

    Verdict v;
    v.eta_b = sd.eta_b;

    // Only eigenvalues can lower rank(A_tilde - lambda I) below S, so the
    // "for all lambda in C" conditions reduce to a finite check.
    const int s_dim = static_cast<int>(sd.a_tilde.rows());
    Eigen::MatrixXcd shifted(s_dim, s_dim);
    for (const auto& lambda : clustered_eigenvalues(sd.a_tilde))
    {
        shifted = sd.a_tilde.cast<std::complex<double>>();
        shifted.diagonal().array() -= lambda;
        v.rank_table.push_back({lambda, numeric_rank_complex(shifted, tol)});
    }

    auto pick = [&](const char* a_label, const char* b_label, const std::string& why) {
        v.regime = always ? Regime::AlmostSureControllable : Regime::IntermittentlyControllable;
        v.matched_condition = always ? a_label : b_label;
        v.details = why;
    };

    std::ostringstream why;
    if (nt >= s)
    {
        why << "N_t=" << nt << " >= S=" << s;
        pick("a.1", "b.1", why.str());
    }
    else if (nt >= sd.eta_b)
    {
        // Empty A22 (eta_B == S) cannot occur here since N_t < S, but keep the
        // vacuous case explicit.
        const bool ctrl = sd.a22.rows() == 0 || pbh_controllable(sd.a22, sd.a12.transpose(), tol);
        why << "eta_B=" << sd.eta_b << " <= N_t=" << nt << " < S=" << s << ", (A22, A12^T) "
            << (ctrl ? "controllable" : "uncontrollable");
        if (ctrl)
            pick("a.2", "b.2", why.str());
        else
        {
            v.regime = Regime::AlmostSureUncontrollable;
            v.matched_condition = "c.1";
            v.details = why.str();
        }
    }
    else
    {
        const int bound = s - sd.eta_b + nt;
        const EigenRankRow* hit = nullptr;
        for (const auto& row : v.rank_table)
            if (row.rank <= bound)
            {
                hit = &row;
                break;
            }
        why << "N_t=" << nt << " < eta_B=" << sd.eta_b << ", rank bound S-eta_B+N_t=" << bound;
        if (hit)
        {
            why << ", rank(A-lambda I)=" << hit->rank << " at lambda=" << hit->lambda.real() << "+"
                << hit->lambda.imag() << "i";
            v.regime = Regime::AlmostSureUncontrollable;
            v.matched_condition = "c.2";
            v.details = why.str();
        }
        else
            pick("a.3", "b.3", why.str());
    }
    return v;
}

} // namespace mimoctl
