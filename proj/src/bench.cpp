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

#include "mimoctl/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ostream>

namespace mimoctl
{

namespace
{

struct SlotInput
{
    ExtendedState state;
    Vector x_next;
    Vector exploration;
};

std::vector<SlotInput> make_inputs(const ScenarioConfig& cfg, long n, std::uint64_t seed)
{
    Rng rng = make_stream(seed, 0, 0xbe);
    std::normal_distribution<double> normal(0.0, 1.0);
    const Eigen::Index s = cfg.plant.state_dim();
    std::vector<SlotInput> in(static_cast<std::size_t>(n));
    for (auto& slot : in)
    {
        slot.state.x.resize(s);
        for (Eigen::Index i = 0; i < s; ++i)
            slot.state.x(i) = normal(rng);
        slot.state.draw = sample_channel(rng, cfg.channel);
        slot.x_next.resize(s);
        for (Eigen::Index i = 0; i < s; ++i)
            slot.x_next(i) = normal(rng);
        slot.exploration.resize(cfg.channel.n_t);
        for (Eigen::Index i = 0; i < slot.exploration.size(); ++i)
            slot.exploration(i) = 0.1 * normal(rng);
    }
    return in;
}

// Runs the controller over `in`. Returns a checksum so the work is not elided.
double drive(const ScenarioConfig& cfg, Scheme scheme, const std::vector<SlotInput>& in, const Matrix& p_star,
             LearnerState& ls, QKernel& qk)
{
    double sink = 0.0;
    Vector u = Vector::Zero(cfg.channel.n_t);
    for (std::size_t i = 0; i + 1 < in.size(); ++i)
    {
        const SlotInput& s = in[i];
        switch (scheme)
        {
        case Scheme::proposed:
            u = control_action(ls.p, s.state, cfg.plant, cfg.weights);
            ls = sa_step(std::move(ls), s.state.draw, cfg.plant, cfg.weights);
            break;
        case Scheme::b3:
            u = baseline3_action(p_star, s.state, cfg.plant, cfg.weights);
            break;
        case Scheme::b1:
            u = baseline1_step(qk, Transition{s.state.x, u, 1.0, s.x_next}, s.exploration);
            break;
        case Scheme::b2:
        {
            ExtendedState nx{s.x_next, in[i + 1].state.draw};
            u = baseline2_step(qk, ExtendedTransition{s.state, u, 1.0, nx}, s.exploration);
            break;
        }
        }
        sink += u.sum();
    }
    return sink;
}

} // namespace

std::vector<BenchRow> bench_cpu(const std::vector<BenchPoint>& sweep, const std::vector<Scheme>& schemes,
                                const BenchOptions& opts)
{
    using clock = std::chrono::steady_clock;
    std::vector<BenchRow> rows;
    volatile double sink = 0.0;
    for (const BenchPoint& pt : sweep)
    {
        const ScenarioConfig& cfg = pt.cfg;
        const Eigen::Index s = cfg.plant.state_dim();
        const auto warm = make_inputs(cfg, opts.warmup + 1, cfg.master_seed ^ 0x77);
        const auto timed = make_inputs(cfg, opts.slots + 1, cfg.master_seed);
        // Timing does not depend on the kernel's value; a cheap stand-in for P* suffices.
        const Matrix p_star = Matrix::Identity(s, s);
        for (Scheme scheme : schemes)
        {
            std::vector<double> secs;
            for (int rep = 0; rep < opts.repetitions; ++rep)
            {
                LearnerState ls;
                ls.p = Matrix::Identity(s, s);
                ls.schedule = cfg.schedule;
                QKernel qk;
                if (scheme == Scheme::b1)
                    qk = QKernel(baseline1_dim(static_cast<int>(s), cfg.channel.n_t), cfg.channel.n_t);
                else if (scheme == Scheme::b2)
                    qk = QKernel(baseline2_dim(static_cast<int>(s), cfg.channel.n_r, cfg.channel.n_t),
                                 cfg.channel.n_t);
                sink = sink + drive(cfg, scheme, warm, p_star, ls, qk);
                const auto t0 = clock::now();
                sink = sink + drive(cfg, scheme, timed, p_star, ls, qk);
                secs.push_back(std::chrono::duration<double>(clock::now() - t0).count());
            }
            std::nth_element(secs.begin(), secs.begin() + static_cast<long>(secs.size() / 2), secs.end());
            rows.push_back({pt.label, pt.value, scheme, secs[secs.size() / 2]});
        }
    }
    return rows;
}

void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows)
{
    os << "# mimoctl " << MIMOCTL_VERSION << " bench v1\n";
    os << "parameter,value,scheme,seconds\n";
    char buf[64];
    for (const BenchRow& r : rows)
    {
        std::snprintf(buf, sizeof buf, "%g,%s,%.6e", r.value, to_string(r.scheme), r.seconds);
        os << r.label << ',' << buf << '\n';
    }
}

} // namespace mimoctl
