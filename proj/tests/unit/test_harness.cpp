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

#include <sstream>

using namespace mimoctl;
using namespace mimoctl::test;

namespace
{

const char* kBase = R"(
name: t
plant:
  A: [[0.5, 0.1], [0.0, 0.9]]
  B: [[1.0], [0.5]]
  W: {identity: 2, scale: 0.01}
weights:
  Q: {identity: 2}
  R: [[1.0]]
  M: [[2.0]]
channel: {n_r: 1, n_t: 1, p_access: 0.7}
run: {horizon: 50, runs: 4, master_seed: 9}
solver: {xi: 0.9, sample_count: 500}
)";

std::string error_of(const std::string& text)
{
    try
    {
        parse_scenario(text, "cfg");
    }
    catch (const Error& e)
    {
        return e.what();
    }
    return "";
}

std::string replace(std::string s, const std::string& from, const std::string& to)
{
    s.replace(s.find(from), from.size(), to);
    return s;
}

} // namespace

TEST_CASE("bundled fig3 config matches the caption")
{
    const ScenarioConfig cfg = load_scenario(config_path("fig3.cfg"));
    const PlantModel ref = fig3_plant();
    CHECK(cfg.plant.a() == ref.a());
    CHECK(cfg.plant.b() == ref.b());
    CHECK(cfg.plant.w().isApprox(ref.w()));
    CHECK(cfg.weights.q.isIdentity(0.0));
    CHECK(cfg.weights.r.isIdentity(0.0));
    CHECK(cfg.weights.r.rows() == 3);
    CHECK(cfg.weights.m.isIdentity(0.0));
    CHECK(cfg.weights.m.rows() == 2);
    CHECK(cfg.channel.n_t == 3);
    CHECK(cfg.channel.n_r == 2);
    CHECK(cfg.channel.p_access == 0.5);
    const ScenarioConfig fig4 = load_scenario(config_path("fig4.cfg"));
    CHECK(fig4.plant.a() == ref.a());
}

TEST_CASE("bundled sweep configs")
{
    for (int s = 4; s <= 12; ++s)
    {
        const ScenarioConfig cfg = load_scenario(config_path("fig5_S" + std::to_string(s) + ".cfg"));
        REQUIRE(cfg.plant.state_dim() == s);
        const Matrix& a = cfg.plant.a();
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < s; ++j)
            {
                const double want = i == j ? 1.01 : i == j - 1 ? -0.1 : i == j + 1 ? -0.2 : 0.0;
                REQUIRE(a(i, j) == want);
            }
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < 2; ++j)
                REQUIRE(cfg.plant.b()(i, j) == doctest::Approx(1.0 / (i + j + 2)));
    }
    for (int nt = 2; nt <= 6; ++nt)
        CHECK(load_scenario(config_path("fig6_Nt" + std::to_string(nt) + ".cfg")).channel.n_t == nt);
    for (int nr = 2; nr <= 6; ++nr)
    {
        const ScenarioConfig cfg = load_scenario(config_path("fig7_Nr" + std::to_string(nr) + ".cfg"));
        CHECK(cfg.plant.b().cols() == nr);
        CHECK(cfg.weights.m.rows() == nr);
    }
}

TEST_CASE("scenario errors are distinct")
{
    CHECK(error_of(kBase).empty());
    CHECK(error_of("plant: [unclosed").find("parse error") != std::string::npos);
    CHECK(error_of(replace(kBase, "B: [[1.0], [0.5]]", "B: [[1.0], [0.5], [1.0]]")).find("plant.B") != std::string::npos);
    CHECK(error_of(replace(kBase, "A: [[0.5, 0.1], [0.0, 0.9]]", "A: [[0.5, 0.1], [0.0]]")).find("dimension mismatch")
          != std::string::npos);
    const std::string q = error_of(replace(kBase, "Q: {identity: 2}", "Q: [[1.0, 0.0], [0.0, -1.0]]"));
    CHECK(q.find("weights.Q") != std::string::npos);
    CHECK(q.find("positive definite") != std::string::npos);
    CHECK(error_of(replace(kBase, "R: [[1.0]]", "")).find("missing field weights.R") != std::string::npos);
    CHECK(error_of(replace(kBase, "n_t: 1", "n_t: 2")).find("weights.R") != std::string::npos);
}

TEST_CASE("config hash tracks content")
{
    const ScenarioConfig a = parse_scenario(kBase);
    const ScenarioConfig b = parse_scenario(kBase);
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
    const ScenarioConfig c = parse_scenario(replace(kBase, "p_access: 0.7", "p_access: 0.71"));
    CHECK(config_hash(a) != config_hash(c));
}

TEST_CASE("checkpoint grid")
{
    CHECK(checkpoints(1) == std::vector<long>{1});
    CHECK(checkpoints(10) == std::vector<long>{1, 2, 5, 10});
    CHECK(checkpoints(10000).back() == 10000);
    CHECK(checkpoints(10000).size() == 13);
    CHECK(checkpoints(30) == std::vector<long>{1, 2, 5, 10, 20, 30});
}

TEST_CASE("run_experiment shape and determinism")
{
    ScenarioConfig cfg = parse_scenario(kBase);
    const Matrix p_star = reference_kernel(cfg).p_star;
    const std::vector<Scheme> all{Scheme::proposed, Scheme::b1, Scheme::b2, Scheme::b3};

    cfg.runs = 1;
    cfg.horizon = 1;
    const ExperimentResult one = run_experiment(cfg, all, p_star);
    CHECK(one.rows.size() == 4);

    cfg = parse_scenario(kBase);
    std::ostringstream a, b;
    write_metrics_csv(a, cfg, run_experiment(cfg, all, p_star, 1).rows);
    write_metrics_csv(b, cfg, run_experiment(cfg, all, p_star, 3).rows);
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("# mimoctl ", 0) == 0);
    CHECK(a.str().find("config_hash=" + config_hash(cfg)) != std::string::npos);
}

TEST_CASE("genie-controlled fig3 loop averages to the predicted cost")
{
    ScenarioConfig cfg = load_scenario(config_path("fig3.cfg"));
    cfg.solver.sample_count = 50000;
    const SolveReport ref = reference_kernel(cfg);
    REQUIRE(ref.converged);
    const RunResult r = simulate_run(cfg, Scheme::b3, 0, ref.p_star, {1000, 100000});
    REQUIRE_FALSE(r.diverged);
    const double predicted = average_cost(ref.p_star, cfg.plant, cfg.weights);
    CHECK(std::abs(r.windows[1].stage_cost - predicted) <= 0.05 * predicted);
}

TEST_CASE("report")
{
    std::istringstream empty("# header only\n");
    CHECK_THROWS_WITH_AS(parse_metrics_csv(empty, "x.csv"), "x.csv: no rows", Error);

    std::istringstream bad("k,scheme,median_u_err_sq,mean_x_norm_sq,mean_stage_cost,diverged_fraction\n"
                           "1,proposed,0,0,2,0\n"
                           "2,proposed,0,0\n");
    try
    {
        parse_metrics_csv(bad, "x.csv");
        FAIL("expected an error");
    }
    catch (const Error& e)
    {
        CHECK(std::string(e.what()).find("x.csv:3") != std::string::npos);
    }

    std::vector<MetricsRow> rows{{100, Scheme::proposed, 1.0, 5, 10, 0},
                                 {10000, Scheme::proposed, 0.005, 5, 10, 0},
                                 {10000, Scheme::b1, 0, 0, 0, 1.0},
                                 {10000, Scheme::b2, 0, 0, 0, 0.5},
                                 {10000, Scheme::b3, 0, 5, 10, 0}};
    const std::string text = report(rows);
    CHECK(text.find("proposed") != std::string::npos);
    CHECK(text.find("b3") != std::string::npos);
    ReportThresholds strict;
    strict.u_err_decay = 0.001;
    CHECK(report(rows, strict).find("FAIL") != std::string::npos);
    const std::string lines = report(rows);
    const auto b2 = lines.find("\nb2 ");
    REQUIRE(b2 != std::string::npos);
    CHECK(lines.substr(b2, lines.find('\n', b2 + 1) - b2).find("FAIL") != std::string::npos);
}
