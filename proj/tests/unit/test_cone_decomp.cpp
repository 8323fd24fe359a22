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

#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace mimoctl;
using namespace mimoctl::test;

TEST_CASE("effective_input")
{
    const PlantModel p = fig3_plant();
    const CostWeights w = identity_weights(3, 2, 3);
    Rng rng(41);
    ChannelDraw d{gaussian(rng, 2, 3), false};
    CHECK(effective_input(p, d, w).psi.isZero(0.0));

    const PlantModel scalar(Matrix::Constant(1, 1, 0.9), Matrix::Ones(1, 1), Matrix::Zero(1, 1));
    const CostWeights sw{Matrix::Ones(1, 1), Matrix::Constant(1, 1, 2.0), Matrix::Constant(1, 1, 3.0)};
    const double psi = effective_input(scalar, {Matrix::Ones(1, 1), true}, sw).psi(0, 0);
    CHECK(psi == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-14));

    for (int t = 0; t < 50; ++t)
    {
        d = {gaussian(rng, 2, 3), true};
        const Matrix psi_m = effective_input(p, d, w).psi;
        const Matrix bh = p.b() * d.h;
        const Matrix direct = bh * (d.h.transpose() * w.m * d.h + w.r).inverse() * bh.transpose();
        REQUIRE((psi_m * psi_m.transpose() - direct).norm() < 1e-10);
    }
}

TEST_CASE("decomp_basis")
{
    const DecompBasis zero = decomp_basis({Matrix::Zero(3, 2)});
    CHECK(zero.gamma == 0);
    CHECK(zero.pi.isZero(0.0));

    Rng rng(42);
    const DecompBasis full = decomp_basis({gaussian(rng, 3, 4)});
    CHECK(full.gamma == 3);
    CHECK(full.pi.isIdentity(0.0));

    const PlantModel p = fig3_plant();
    const CostWeights w = identity_weights(3, 2, 3);
    for (int t = 0; t < 100; ++t)
    {
        const EffectiveInput e = effective_input(p, {gaussian(rng, 2, 3), true}, w);
        const DecompBasis b = decomp_basis(e);
        REQUIRE(b.gamma == 2);
        const Matrix recon = b.v.transpose() * b.lambda.asDiagonal() * b.v;
        REQUIRE((recon - e.psi * e.psi.transpose()).norm() < 1e-10);
        REQUIRE((b.pi * b.pi - b.pi).norm() == 0.0);
    }
}

TEST_CASE("cone_decompose edge cases")
{
    Rng rng(43);
    const Matrix p = random_pd(rng, 3);
    const ConeSplit full = cone_decompose(p, decomp_basis({gaussian(rng, 3, 3)}));
    CHECK((full.p_c - p).norm() < 1e-10 * p.norm());
    CHECK(full.p_uc.norm() < 1e-10 * p.norm());

    const ConeSplit none = cone_decompose(p, decomp_basis({Matrix::Zero(3, 3)}));
    CHECK(none.p_c.norm() == 0.0);
    CHECK((none.p_uc - p).norm() < 1e-12 * p.norm());

    Matrix neg = -Matrix::Identity(3, 3);
    CHECK_THROWS_AS(cone_decompose(neg, decomp_basis({Matrix::Zero(3, 3)})), Error);
    Matrix asym = Matrix::Identity(3, 3);
    asym(0, 2) = 0.3;
    CHECK_THROWS_AS(cone_decompose(asym, decomp_basis({Matrix::Zero(3, 3)})), Error);
}

TEST_CASE("cone_decompose satisfies the cone predicates directly")
{
    Rng rng(44);
    const PlantModel plant = fig3_plant();
    const CostWeights w = identity_weights(3, 2, 3);
    for (int t = 0; t < 200; ++t)
    {
        const Matrix p = random_pd(rng, 3);
        const ChannelDraw d{gaussian(rng, 2, 3), true};
        const DecompBasis basis = decomp_basis(effective_input(plant, d, w));
        REQUIRE(basis.gamma == 2);
        const ConeSplit cs = cone_decompose(p, basis);
        // Uncontrollable cone: delta B H H^T B^T T = 0.
        const Matrix bh = plant.b() * d.h;
        const Matrix g = bh * bh.transpose();
        REQUIRE((g * cs.p_uc).norm() <= 1e-8 * std::max(1.0, p.norm()));
        // Controllable cone: ker(G P^c) = ker(P^c). Compare null spaces via ranks.
        Matrix stacked(6, 3);
        stacked << g * cs.p_c, cs.p_c;
        const ToleranceProfile tol{1e-8};
        REQUIRE(numeric_rank(g * cs.p_c, tol) == numeric_rank(cs.p_c, tol));
        REQUIRE(numeric_rank(stacked, tol) == numeric_rank(cs.p_c, tol));
        REQUIRE((cs.p_c + cs.p_uc - p).norm() <= 1e-8 * std::max(1.0, p.norm()));
        REQUIRE(is_psd(cs.p_c));
        REQUIRE(is_psd(cs.p_uc));
    }
}

TEST_CASE("cone_decompose handles PSD kernels with a singular leading block")
{
    Rng rng(45);
    for (int t = 0; t < 200; ++t)
    {
        const int s = 2 + t % 5;
        const Matrix p = random_psd(rng, s, 1 + t % s);
        const DecompBasis basis = decomp_basis({gaussian(rng, s, 1 + t % s)});
        const ConeSplit cs = cone_decompose(p, basis);
        const Matrix g = basis.v.transpose() * basis.lambda.asDiagonal() * basis.v;
        const double scale = std::max(1.0, spectral_norm(p));
        REQUIRE(spectral_norm(cs.p_c + cs.p_uc - p) <= 1e-8 * scale);
        REQUIRE(spectral_norm(g * cs.p_uc) <= 1e-8 * scale);
        REQUIRE(is_psd(cs.p_c));
        REQUIRE(is_psd(cs.p_uc));
    }
}

TEST_CASE("decomposed residual special cases")
{
    // Static channel H = I, delta = 1 with square B: the uncontrollable part vanishes
    // and the residual is the DARE map residual.
    Rng rng(46);
    const PlantModel plant(gaussian(rng, 3, 3), gaussian(rng, 3, 3), Matrix::Zero(3, 3));
    const CostWeights w{random_pd(rng, 3), random_pd(rng, 3), random_pd(rng, 3)};
    const Matrix p = random_pd(rng, 3);
    const SampleSet stat = static_sample_set({3, 3, 1.0}, 4);
    const Matrix& a = plant.a();
    const Matrix& b = plant.b();
    const Matrix dare = a.transpose() * p * a
                        - a.transpose() * p * b * (b.transpose() * p * b + w.m + w.r).inverse() * b.transpose() * p * a
                        + w.q - p;
    CHECK((decomposed_nme_residual(p, stat, plant, w) - dare).norm() < 1e-9 * dare.norm());

    const SampleSet blocked(5, ChannelDraw{gaussian(rng, 3, 3), false});
    const Matrix lyap = a.transpose() * p * a + w.q - p;
    CHECK((decomposed_nme_residual(p, blocked, plant, w) - lyap).norm() < 1e-10 * lyap.norm());
}

TEST_CASE("decomposed residual equals the NME residual")
{
    const PlantModel plant = fig3_plant();
    const CostWeights w = identity_weights(3, 2, 3);
    Rng rng = make_stream(47);
    const SampleSet draws = sample_set(rng, fig3_channel(), 2000);
    for (int t = 0; t < 5; ++t)
    {
        const Matrix p = random_pd(rng, 3);
        const Matrix gap = decomposed_nme_residual(p, draws, plant, w) - f_residual(p, draws, plant, w);
        REQUIRE(spectral_norm(gap) <= 1e-8 * std::max(1.0, spectral_norm(p)));
    }
}
