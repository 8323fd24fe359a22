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

TEST_CASE("sample_channel statistics")
{
    Rng rng = make_stream(3);
    ChannelConfig always{2, 3, 1.0};
    for (int i = 0; i < 1000; ++i)
        REQUIRE(sample_channel(rng, always).delta);

    const int n = 100000;
    ChannelConfig half{2, 3, 0.5};
    double access = 0.0, sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i)
    {
        const ChannelDraw d = sample_channel(rng, half);
        access += d.delta;
        sum += d.h(1, 2);
        sq += d.h(1, 2) * d.h(1, 2);
    }
    CHECK(std::abs(access / n - 0.5) < 0.01);
    const double mean = sum / n;
    CHECK(std::abs(sq / n - mean * mean - 1.0) < 0.02);
}

TEST_CASE("streams are reproducible and distinct")
{
    Rng a = make_stream(7, 1, 0), b = make_stream(7, 1, 0), c = make_stream(7, 2, 0), d = make_stream(7, 1, 1);
    const auto x = a();
    CHECK(x == b());
    CHECK(x != c());
    CHECK(x != d());
}

TEST_CASE("plant_step noise-free cases")
{
    const PlantModel plant = fig3_plant();
    Rng rng(1);
    ExtendedState st{Vector::Ones(3), {Matrix::Ones(2, 3), false}};
    const Vector u = (Vector(3) << 1, -2, 3).finished();
    CHECK(plant_step(plant, st, u, rng, true).isApprox(plant.a() * st.x));
    st.draw.delta = true;
    CHECK(plant_step(plant, st, Vector::Zero(3), rng, true).isApprox(plant.a() * st.x));
    CHECK(plant_step(plant, st, u, rng, true).isApprox(plant.a() * st.x + plant.b() * st.draw.h * u));

    Vector bad = u;
    bad(0) = std::nan("");
    CHECK_THROWS_AS(plant_step(plant, st, bad, rng), Error);
}

TEST_CASE("plant_step is linear in (x, u) without noise")
{
    const PlantModel plant = fig3_plant();
    Rng rng(2);
    for (int t = 0; t < 100; ++t)
    {
        const Matrix h = gaussian(rng, 2, 3);
        const Vector x1 = gaussian_vec(rng, 3), x2 = gaussian_vec(rng, 3);
        const Vector u1 = gaussian_vec(rng, 3), u2 = gaussian_vec(rng, 3);
        const double a = 0.7, b = -1.3;
        const Vector lhs = plant_step(plant, {a * x1 + b * x2, {h, true}}, a * u1 + b * u2, rng, true);
        const Vector rhs = a * plant_step(plant, {x1, {h, true}}, u1, rng, true)
                           + b * plant_step(plant, {x2, {h, true}}, u2, rng, true);
        REQUIRE((lhs - rhs).norm() <= 1e-12 * std::max(1.0, lhs.norm()));
    }
}

TEST_CASE("blocked access with no noise gives A^k x0")
{
    const PlantModel plant = fig3_plant();
    Rng rng(3);
    Vector x = (Vector(3) << 1, 0.5, -0.25).finished();
    const Vector x0 = x;
    Matrix ak = Matrix::Identity(3, 3);
    for (int k = 0; k < 20; ++k)
    {
        x = plant_step(plant, {x, {gaussian(rng, 2, 3), false}}, gaussian_vec(rng, 3), rng, true);
        ak = plant.a() * ak;
    }
    CHECK((x - ak * x0).norm() < 1e-10 * (ak * x0).norm());
}

TEST_CASE("plant_step matches a straight-line reimplementation")
{
    const PlantModel plant = fig3_plant();
    const ChannelConfig cfg = fig3_channel();
    Rng lib = make_stream(99), ref = make_stream(99);
    // Each phase of a slot (H, delta, v, w) draws through its own distribution
    // object, so no cached normal carries over between phases.
    std::bernoulli_distribution access(0.5);
    Vector x_lib = Vector::Ones(3), x_ref = Vector::Ones(3);
    Rng urng(5);
    for (int k = 0; k < 200; ++k)
    {
        const Vector u = gaussian_vec(urng, 3);
        const ChannelDraw d = sample_channel(lib, cfg);
        x_lib = plant_step(plant, {x_lib, d}, u, lib);

        std::normal_distribution<double> normal(0.0, 1.0);
        double h[2][3];
        for (int j = 0; j < 3; ++j)
            for (int i = 0; i < 2; ++i)
                h[i][j] = normal(ref);
        const bool delta = access(ref);
        normal.reset();
        double v[2];
        v[0] = normal(ref);
        v[1] = normal(ref);
        normal.reset();
        double e[3];
        for (double& ei : e)
            ei = normal(ref);
        double rx[2] = {v[0], v[1]};
        if (delta)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 3; ++j)
                    rx[i] += h[i][j] * u(j);
        Vector next(3);
        for (int i = 0; i < 3; ++i)
        {
            double s = std::sqrt(0.05) * e[i];
            for (int j = 0; j < 3; ++j)
                s += plant.a()(i, j) * x_ref(j);
            for (int j = 0; j < 2; ++j)
                s += plant.b()(i, j) * rx[j];
            next(i) = s;
        }
        x_ref = next;
        REQUIRE((x_lib - x_ref).norm() <= 1e-9 * std::max(1.0, x_ref.norm()));
    }
}

TEST_CASE("stage_cost closed form")
{
    const CostWeights w = identity_weights(3, 2, 3);
    const Vector x = (Vector(3) << 1, 2, 3).finished();
    ExtendedState st{x, {Matrix::Ones(2, 3), false}};
    CHECK(stage_cost(st, Vector::Zero(3), w) == doctest::Approx(14.0 + 2.0));
    st.x.setZero();
    CHECK(stage_cost(st, Vector::Zero(3), w) == doctest::Approx(2.0));
}

TEST_CASE("stage_cost matches a Monte-Carlo average over channel noise")
{
    Rng rng(21);
    CostWeights w{random_pd(rng, 3), random_pd(rng, 3), random_pd(rng, 2)};
    const Vector x = gaussian_vec(rng, 3), u = gaussian_vec(rng, 3);
    const Matrix h = gaussian(rng, 2, 3);
    const int n = 100000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i)
    {
        const Vector rx = h * u + gaussian_vec(rng, 2);
        const double c = x.dot(w.q * x) + u.dot(w.r * u) + rx.dot(w.m * rx);
        sum += c;
        sq += c * c;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sq / n - mean * mean) / n);
    CHECK(std::abs(stage_cost({x, {h, true}}, u, w) - mean) <= 3.0 * se);
}

TEST_CASE("stage_cost never falls below Tr(M)")
{
    Rng rng(22);
    ChannelConfig cfg{2, 3, 0.5};
    CostWeights w{random_pd(rng, 3), random_pd(rng, 3), random_pd(rng, 2)};
    for (int t = 0; t < 500; ++t)
    {
        const ExtendedState st{gaussian_vec(rng, 3), sample_channel(rng, cfg)};
        REQUIRE(stage_cost(st, gaussian_vec(rng, 3), w) >= w.m.trace() - 1e-12);
    }
}

TEST_CASE("model validation")
{
    CHECK_THROWS_AS(PlantModel(Matrix::Identity(3, 3), Matrix::Ones(2, 2), Matrix::Identity(3, 3)), Error);
    CHECK_THROWS_AS(PlantModel(Matrix::Identity(2, 2), Matrix::Ones(2, 1), -Matrix::Identity(2, 2)), Error);
    CHECK_THROWS_AS(validate(ChannelConfig{2, 3, 1.5}), Error);
    CostWeights w = identity_weights(3, 2, 3);
    w.q(2, 2) = -1.0;
    try
    {
        validate(w, fig3_plant(), fig3_channel());
        FAIL("expected an error");
    }
    catch (const Error& e)
    {
        CHECK(std::string(e.what()).find("weights.Q") != std::string::npos);
    }
}
