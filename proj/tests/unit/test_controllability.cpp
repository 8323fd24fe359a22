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

using namespace mimoctl;
using namespace mimoctl::test;

namespace
{

PlantModel c1_plant()
{
    // First row of A only touches x1, so A12 vanishes in any basis that keeps
    // e1 first; x2 and x3 are still reached through the chain 1 -> 2 -> 3.
    Matrix a(3, 3), b = Matrix::Zero(3, 2);
    a << 0.5, 0, 0, 1, 0.3, 0, 0, 1, 0.2;
    b(0, 0) = 1.0;
    return PlantModel(a, b, Matrix::Zero(3, 3));
}

} // namespace

TEST_CASE("pbh_controllable")
{
    const PlantModel p = fig3_plant();
    CHECK(pbh_controllable(p.a(), p.b()));

    Matrix a = Matrix::Zero(2, 2);
    a(0, 0) = 2;
    a(1, 1) = 3;
    CHECK_FALSE(pbh_controllable(a, (Matrix(2, 1) << 1, 0).finished()));

    // Companion form of s^3 - 2 s^2 + 0.5 s + 4 with input on the last state.
    Matrix comp(3, 3);
    comp << 0, 1, 0, 0, 0, 1, -4, -0.5, 2;
    CHECK(pbh_controllable(comp, (Matrix(3, 1) << 0, 0, 1).finished()));
    CHECK(numeric_rank(kalman_matrix(comp, (Matrix(3, 1) << 0, 0, 1).finished())) == 3);
}

TEST_CASE("pbh_controllable sees through repeated eigenvalues")
{
    // Jordan block with input on the first state only: the chain is broken.
    Matrix a(3, 3);
    a << 1, 1, 0, 0, 1, 1, 0, 0, 1;
    CHECK_FALSE(pbh_controllable(a, (Matrix(3, 1) << 1, 0, 0).finished()));
    CHECK(pbh_controllable(a, (Matrix(3, 1) << 0, 0, 1).finished()));
    // Two identical scalar modes cannot both be steered by one input.
    CHECK_FALSE(pbh_controllable(Matrix::Identity(2, 2), (Matrix(2, 1) << 1, 1).finished()));
}

TEST_CASE("pbh agrees with Kalman rank on random pairs")
{
    Rng rng(31);
    for (int t = 0; t < 300; ++t)
    {
        const int s = 2 + t % 4;
        const Matrix a = gaussian(rng, s, s);
        Matrix b = gaussian(rng, s, 1 + t % 2);
        if (t % 3 == 0)
            b.row(0).setZero();
        REQUIRE(pbh_controllable(a, b) == (numeric_rank(kalman_matrix(a, b), ToleranceProfile{1e-9}) == s));
    }
}

TEST_CASE("structure_transform")
{
    const StructureData fig3 = structure_transform(fig3_plant());
    CHECK(fig3.eta_b == 2);
    CHECK(fig3.a22.rows() == 1);
    CHECK(fig3.a22.cols() == 1);
    CHECK((fig3.u.transpose() * fig3.u - Matrix::Identity(3, 3)).norm() < 1e-10);
    CHECK((fig3.a_tilde - fig3.u.transpose() * fig3_plant().a() * fig3.u).norm() < 1e-10);

    Rng rng(32);
    const PlantModel square(gaussian(rng, 3, 3), gaussian(rng, 3, 3), Matrix::Zero(3, 3));
    CHECK(structure_transform(square).eta_b == 3);
    CHECK(structure_transform(square).a22.size() == 0);

    Matrix b = fig3_plant().b();
    Matrix padded(3, 3);
    padded << b, Vector::Zero(3);
    CHECK(structure_transform(PlantModel(fig3_plant().a(), padded, Matrix::Zero(3, 3))).eta_b == 2);

    CHECK_THROWS_AS(structure_transform(PlantModel(Matrix::Identity(2, 2), Matrix::Zero(2, 1), Matrix::Zero(2, 2))),
                    Error);
}

TEST_CASE("classify the bundled scenarios")
{
    const PlantModel p = fig3_plant();
    const Verdict v = classify(p, fig3_channel());
    CHECK(v.regime == Regime::IntermittentlyControllable);
    CHECK(v.matched_condition == "b.1");

    const Verdict always = classify(p, ChannelConfig{2, 3, 1.0});
    CHECK(always.regime == Regime::AlmostSureControllable);
    CHECK(always.matched_condition == "a.1");

    const Verdict c1 = classify(c1_plant(), ChannelConfig{2, 2, 0.5});
    CHECK(c1.regime == Regime::AlmostSureUncontrollable);
    CHECK(c1.matched_condition == "c.1");
    CHECK(c1.eta_b == 1);
}

TEST_CASE("classify errors")
{
    Matrix a = Matrix::Zero(2, 2);
    a(0, 0) = 2;
    a(1, 1) = 3;
    const PlantModel bad(a, (Matrix(2, 1) << 1, 0).finished(), Matrix::Zero(2, 2));
    CHECK_THROWS_WITH_AS(classify(bad, ChannelConfig{1, 1, 0.5}), "pair (A,B) uncontrollable; Lemma 2 inapplicable",
                         Error);
    CHECK_THROWS_AS(classify(fig3_plant(), ChannelConfig{2, 3, 0.0}), Error);
}

TEST_CASE("classify covers every controllable random scenario")
{
    Rng rng(33);
    std::uniform_int_distribution<int> dim(2, 5);
    int seen = 0;
    for (int t = 0; t < 300; ++t)
    {
        const int s = dim(rng);
        const int nr = 1 + t % 3;
        const PlantModel p(gaussian(rng, s, s), gaussian(rng, s, nr), Matrix::Zero(s, s));
        if (!pbh_controllable(p.a(), p.b()))
            continue;
        ++seen;
        const int nt = 1 + t % 5;
        const double prob = (t % 2) ? 1.0 : 0.3;
        const Verdict v = classify(p, ChannelConfig{nr, nt, prob});
        REQUIRE(!v.matched_condition.empty());
        const char letter = v.matched_condition[0];
        REQUIRE(letter == (v.regime == Regime::AlmostSureControllable       ? 'a'
                           : v.regime == Regime::IntermittentlyControllable ? 'b'
                                                                            : 'c'));
        if (nt >= s)
            REQUIRE(v.regime == (prob == 1.0 ? Regime::AlmostSureControllable : Regime::IntermittentlyControllable));
    }
    CHECK(seen > 200);
}
