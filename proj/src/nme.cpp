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

#include "mimoctl/nme.hpp"

#include <algorithm>
#include <cmath>

namespace mimoctl
{

namespace
{

constexpr double kDivergence = 1e12;

double sym_norm(const Matrix& m)
{
    if (m.size() == 0)
        return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

double min_eig(const Matrix& m)
{
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

double max_eig(const Matrix& m)
{
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(es.eigenvalues().size() - 1);
}

} // namespace

ResidualEvaluator::ResidualEvaluator(const PlantModel& model, const CostWeights& weights, const SampleSet& draws)
    : a_(model.a()), q_(weights.q), n_t_(weights.r.rows()), n_(draws.size())
{
    if (draws.empty())
        throw Error("residual evaluator: empty sample set");
    for (const ChannelDraw& d : draws)
        active_ += d.delta ? 1 : 0;
    const Eigen::Index s = model.state_dim();
    g_all_.resize(s, static_cast<Eigen::Index>(active_) * n_t_);
    n_all_.resize(n_t_, static_cast<Eigen::Index>(active_) * n_t_);
    Eigen::Index col = 0;
    for (const ChannelDraw& d : draws)
    {
        if (!d.delta)
            continue;
        g_all_.middleCols(col, n_t_) = model.b() * d.h;
        n_all_.middleCols(col, n_t_) = d.h.transpose() * weights.m * d.h + weights.r;
        col += n_t_;
    }
}

Matrix ResidualEvaluator::g(const Matrix& p) const
{
    const Eigen::Index s = p.rows();
    Matrix k = Matrix::Zero(s, s);
    if (active_ > 0)
    {
        const Matrix y = p * g_all_;
        Matrix t(n_t_, n_t_);
        for (std::size_t i = 0; i < active_; ++i)
        {
            const Eigen::Index c = static_cast<Eigen::Index>(i) * n_t_;
            const auto gi = g_all_.middleCols(c, n_t_);
            const auto yi = y.middleCols(c, n_t_);
            t.noalias() = gi.transpose() * yi;
            t += n_all_.middleCols(c, n_t_);
            Eigen::LLT<Matrix> llt(t);
            k.noalias() += yi * llt.solve(yi.transpose());
        }
    }
    Matrix out = a_.transpose() * (p - k / static_cast<double>(n_)) * a_ + q_;
    return symmetrize(out);
}

Matrix ResidualEvaluator::f(const Matrix& p) const
{
    return symmetrize(g(p) - p);
}

Matrix f_residual(const Matrix& p, const SampleSet& draws, const PlantModel& model, const CostWeights& weights)
{
    require_finite(p, "f_residual: p");
    return ResidualEvaluator(model, weights, draws).f(p);
}

Matrix f_hat(const Matrix& p, const ChannelDraw& draw, const PlantModel& model, const CostWeights& weights)
{
    const Matrix& a = model.a();
    Matrix out = a.transpose() * p * a - p + weights.q;
    if (draw.delta)
    {
        const Matrix bh = model.b() * draw.h;
        const Matrix t = bh.transpose() * p * a;
        const Matrix inner = bh.transpose() * p * bh + draw.h.transpose() * weights.m * draw.h + weights.r;
        out.noalias() -= t.transpose() * inner.ldlt().solve(t);
    }
    return symmetrize(out);
}

double woodbury_check(const Matrix& p, const EffectiveInput& psi, const PlantModel& model)
{
    require_finite(p, "woodbury_check: p");
    Eigen::LLT<Matrix> llt(symmetrize(p));
    if (llt.info() != Eigen::Success)
        throw Error("woodbury_check: p is singular or not positive definite");
    const Matrix& a = model.a();
    const Matrix& ps = psi.psi;
    const Eigen::Index s = p.rows();
    const Matrix inner = ps.transpose() * p * ps + Matrix::Identity(ps.cols(), ps.cols());
    const Matrix pp = p * ps;
    const Matrix lhs = a.transpose() * (p - pp * inner.ldlt().solve(pp.transpose())) * a;
    const Matrix p_inv = llt.solve(Matrix::Identity(s, s));
    const Matrix rhs = a.transpose() * (ps * ps.transpose() + p_inv).inverse() * a;
    return spectral_norm(lhs - rhs);
}

SolveReport solve_dare(const PlantModel& model, const CostWeights& weights, const ToleranceProfile& tol,
                       long max_iterations)
{
    tol.validate();
    if (weights.r.rows() != weights.m.rows())
        throw Error("solve_dare: static channel H = I needs N_r == N_t");
    const Matrix& a = model.a();
    const Matrix& b = model.b();
    const Matrix mr = weights.m + weights.r;
    SolveReport rep;
    Matrix p = weights.q;
    for (long it = 1; it <= max_iterations; ++it)
    {
        const Matrix t = b.transpose() * p * a;
        const Matrix inner = b.transpose() * p * b + mr;
        const Matrix next = symmetrize(a.transpose() * p * a - t.transpose() * inner.ldlt().solve(t) + weights.q);
        const double step = sym_norm(next - p);
        p = next;
        rep.iterations = it;
        rep.residual_history.push_back(step);
        if (!p.allFinite() || sym_norm(p) > kDivergence)
        {
            rep.diagnosis = "iteration diverged";
            break;
        }
        if (step <= tol.residual_tol * std::max(1.0, sym_norm(p)))
        {
            rep.converged = true;
            break;
        }
    }
    // Residual of the final iterate under the same map.
    const Matrix t = b.transpose() * p * a;
    const Matrix inner = b.transpose() * p * b + mr;
    rep.residual_norm = sym_norm(a.transpose() * p * a - t.transpose() * inner.ldlt().solve(t) + weights.q - p);
    rep.converged = rep.converged && rep.residual_norm <= tol.residual_tol * std::max(1.0, sym_norm(p));
    if (!rep.converged && rep.diagnosis.empty())
        rep.diagnosis = "iteration cap reached";
    rep.p_star = p;
    return rep;
}

SolveReport solve_fixed_point(const PlantModel& model, const CostWeights& weights, const SampleSet& draws, double xi,
                              const ToleranceProfile& tol, const Matrix& p0, long max_iterations)
{
    tol.validate();
    if (!(xi > 0.0 && xi < 1.0 + 1e-15))
        throw Error("solve_fixed_point: xi must lie in (0, 1]");
    const ResidualEvaluator ev(model, weights, draws);
    const Eigen::Index s = model.state_dim();
    Matrix p = p0.size() ? p0 : Matrix::Identity(s, s);
    SolveReport rep;
    Matrix f = ev.f(p);
    rep.residual_norm = sym_norm(f);
    for (long it = 0; it < max_iterations; ++it)
    {
        const double pn = sym_norm(p);
        if (rep.residual_norm <= tol.residual_tol * std::max(1.0, pn))
        {
            rep.converged = true;
            break;
        }
        p = symmetrize(p + xi * f);
        rep.iterations = it + 1;
        if (!p.allFinite() || sym_norm(p) > kDivergence)
        {
            rep.diagnosis = "existence condition likely violated";
            break;
        }
        f = ev.f(p);
        rep.residual_norm = sym_norm(f);
        rep.residual_history.push_back(rep.residual_norm);
    }
    if (!rep.converged && rep.diagnosis.empty())
        rep.diagnosis = "iteration cap reached";
    rep.p_star = p;
    return rep;
}

SolveReport solve_fixed_point(const PlantModel& model, const CostWeights& weights, const ChannelConfig& cfg, double xi,
                              std::size_t sample_count, std::uint64_t seed, const ToleranceProfile& tol)
{
    Rng rng = make_stream(seed);
    return solve_fixed_point(model, weights, sample_set(rng, cfg, sample_count), xi, tol);
}

const char* to_string(Trilean t)
{
    switch (t)
    {
    case Trilean::yes:
        return "yes";
    case Trilean::no:
        return "no";
    case Trilean::inconclusive:
        return "inconclusive";
    }
    return "?";
}

ExistenceCertificate existence_condition(const PlantModel& model, const CostWeights& weights,
                                         const ChannelConfig& cfg, std::size_t n_samples, std::uint64_t seed,
                                         const ToleranceProfile& tol)
{
    constexpr std::size_t kBatches = 10;
    constexpr double kQuantile = 2.58;
    if (n_samples < 100)
        throw Error("existence_condition: need at least 100 samples");
    const Eigen::Index s = model.state_dim();
    const Matrix& a = model.a();
    Rng rng = make_stream(seed);

    Matrix total = Matrix::Zero(s, s);
    Matrix batch = Matrix::Zero(s, s);
    std::vector<double> batch_norms;
    std::size_t in_batch = 0;
    double inv_trace = 0.0;
    const std::size_t per_batch = n_samples / kBatches;
    for (std::size_t i = 0; i < n_samples; ++i)
    {
        const ChannelDraw d = sample_channel(rng, cfg);
        const DecompBasis basis = decomp_basis(effective_input(model, d, weights), tol);
        const Matrix va = basis.v * a;
        const Matrix term = va.transpose() * (Matrix::Identity(s, s) - basis.pi) * va;
        total += term;
        batch += term;
        for (int j = 0; j < basis.gamma; ++j)
            inv_trace += 1.0 / basis.lambda(j);
        if (++in_batch == per_batch && batch_norms.size() < kBatches)
        {
            batch_norms.push_back(sym_norm(batch / static_cast<double>(per_batch)));
            batch.setZero();
            in_batch = 0;
        }
    }
    ExistenceCertificate c;
    c.n_samples = n_samples;
    c.estimate = sym_norm(total / static_cast<double>(n_samples));
    c.mean_inv_trace = inv_trace / static_cast<double>(n_samples);
    double mean = 0.0;
    for (double x : batch_norms)
        mean += x;
    mean /= static_cast<double>(batch_norms.size());
    double var = 0.0;
    for (double x : batch_norms)
        var += (x - mean) * (x - mean);
    var /= static_cast<double>(batch_norms.size() - 1);
    c.ci_halfwidth = kQuantile * std::sqrt(var / static_cast<double>(batch_norms.size()));
    if (c.estimate + c.ci_halfwidth < 1.0)
        c.satisfied = Trilean::yes;
    else if (c.estimate - c.ci_halfwidth >= 1.0)
        c.satisfied = Trilean::no;
    else
        c.satisfied = Trilean::inconclusive;
    return c;
}

namespace
{

SolveReport g_iteration(const ResidualEvaluator& ev, Matrix p, const ToleranceProfile& tol, long max_iterations,
                        double& extreme_increment, bool ascending)
{
    SolveReport rep;
    extreme_increment = 0.0;
    for (long it = 1; it <= max_iterations; ++it)
    {
        const Matrix next = ev.g(p);
        const Matrix inc = next - p;
        extreme_increment =
            ascending ? std::min(extreme_increment, min_eig(inc)) : std::max(extreme_increment, max_eig(inc));
        p = next;
        rep.iterations = it;
        if (!p.allFinite() || sym_norm(p) > kDivergence)
        {
            rep.diagnosis = "existence condition likely violated";
            break;
        }
        if (sym_norm(inc) <= tol.residual_tol * std::max(1.0, sym_norm(p)))
            break;
    }
    rep.residual_norm = sym_norm(ev.f(p));
    rep.converged = rep.diagnosis.empty() && rep.residual_norm <= tol.residual_tol * std::max(1.0, sym_norm(p));
    if (!rep.converged && rep.diagnosis.empty())
        rep.diagnosis = "iteration cap reached";
    rep.p_star = p;
    return rep;
}

} // namespace

BracketResult solve_bracket(const PlantModel& model, const CostWeights& weights, const SampleSet& draws,
                            const ExistenceCertificate& cert, const ToleranceProfile& tol, long max_iterations)
{
    tol.validate();
    const ResidualEvaluator ev(model, weights, draws);
    const Eigen::Index s = model.state_dim();
    BracketResult out;
    if (cert.satisfied == Trilean::yes)
    {
        const double an = spectral_norm(model.a());
        out.theta = (spectral_norm(weights.q) + an * an * cert.mean_inv_trace) / (1.0 - cert.estimate);
    }
    else
    {
        out.theta = 1e6;
        out.warnings.push_back(std::string("existence certificate is '") + to_string(cert.satisfied)
                               + "'; upper seed theta = 1e6 is heuristic");
    }
    out.lower = g_iteration(ev, Matrix::Zero(s, s), tol, max_iterations, out.min_lower_increment, true);
    out.upper =
        g_iteration(ev, out.theta * Matrix::Identity(s, s), tol, max_iterations, out.max_upper_increment, false);
    const double slack_lo = 1e-9 * std::max(1.0, sym_norm(out.lower.p_star));
    const double slack_hi = 1e-9 * std::max(1.0, out.theta);
    if (out.min_lower_increment < -slack_lo)
        out.warnings.push_back("lower sequence not monotone nondecreasing");
    if (out.max_upper_increment > slack_hi)
        out.warnings.push_back("upper sequence not monotone nonincreasing");
    const double gap = sym_norm(out.upper.p_star - out.lower.p_star);
    out.lower.bracket_gap = gap;
    out.upper.bracket_gap = gap;
    return out;
}

BracketResult solve_bracket(const PlantModel& model, const CostWeights& weights, const ChannelConfig& cfg,
                            std::size_t sample_count, std::uint64_t seed, const ToleranceProfile& tol)
{
    Rng rng = make_stream(seed);
    const SampleSet draws = sample_set(rng, cfg, sample_count);
    const ExistenceCertificate cert = existence_condition(model, weights, cfg, std::max<std::size_t>(sample_count, 100),
                                                          seed ^ 0x5bd1e995ULL, tol);
    return solve_bracket(model, weights, draws, cert, tol);
}

double average_cost(const Matrix& p_star, const PlantModel& model, const CostWeights& weights)
{
    return weights.m.trace() + (p_star * model.w()).trace() + (model.b().transpose() * p_star * model.b()).trace();
}

} // namespace mimoctl
