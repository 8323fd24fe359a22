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

#ifndef MIMOCTL_MODEL_HPP
#define MIMOCTL_MODEL_HPP

#include "mimoctl/numerics.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace mimoctl
{

using Rng = std::mt19937_64;

/// Deterministic stream for (master_seed, run_index, scheme_id). Each
/// component is folded in through a splitmix64 finalizer, so nearby
/// indices produce unrelated streams.
Rng make_stream(std::uint64_t master_seed, std::uint64_t run_index = 0, std::uint64_t scheme_id = 0);

/// Stochastic linear plant x' = A x + B u_rx + w, w ~ N(0, W).
class PlantModel
{
  public:
    PlantModel() = default;
    /// Validates dimensions and that W is symmetric PSD. x0 may be empty (zero state).
    PlantModel(Matrix a, Matrix b, Matrix w, Vector x0 = {});

    const Matrix& a() const { return a_; }
    const Matrix& b() const { return b_; }
    const Matrix& w() const { return w_; }
    const Vector& x0() const { return x0_; }
    /// Square-root factor L with L L^T = W.
    const Matrix& w_factor() const { return w_factor_; }

    int state_dim() const { return static_cast<int>(a_.rows()); }
    int input_dim() const { return static_cast<int>(b_.cols()); }

  private:
    Matrix a_, b_, w_, w_factor_;
    Vector x0_;
};

struct CostWeights
{
    Matrix q; // S x S, state
    Matrix r; // N_t x N_t, transmission
    Matrix m; // N_r x N_r, actuation
};

struct ChannelConfig
{
    int n_r = 1;
    int n_t = 1;
    double p_access = 1.0;
};

struct ChannelDraw
{
    Matrix h;          // N_r x N_t
    bool delta = true; // controller got channel access this slot
};

struct ExtendedState
{
    Vector x;
    ChannelDraw draw;
};

using SampleSet = std::vector<ChannelDraw>;

void validate(const ChannelConfig& cfg);
/// Checks shapes against the plant/channel and that Q, R, M are symmetric PD.
/// Error messages name the offending matrix.
void validate(const CostWeights& weights, const PlantModel& plant, const ChannelConfig& cfg);

/// H with i.i.d. N(0,1) entries (column-major fill), then delta ~ Bernoulli(p_access).
ChannelDraw sample_channel(Rng& rng, const ChannelConfig& cfg);

/// n successive draws from the stream.
SampleSet sample_set(Rng& rng, const ChannelConfig& cfg, std::size_t n);

/// n copies of the static channel H = I, delta = 1 (requires N_r == N_t).
SampleSet static_sample_set(const ChannelConfig& cfg, std::size_t n = 1);

/// One plant transition A x + delta B H u + B v + w. Draws v ~ N(0, I_{N_r})
/// then w ~ N(0, W) from rng unless noise_free is set, in which case nothing
/// is drawn.
Vector plant_step(const PlantModel& plant, const ExtendedState& state, const Vector& u, Rng& rng,
                  bool noise_free = false);

/// x^T Q x + u^T R u + delta u^T H^T M H u + Tr(M): the per-slot cost with the
/// channel noise integrated out.
double stage_cost(const ExtendedState& state, const Vector& u, const CostWeights& weights);

} // namespace mimoctl

#endif
