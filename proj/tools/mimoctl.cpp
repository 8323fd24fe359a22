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

#include "mimoctl/mimoctl.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

using namespace mimoctl;

namespace
{

struct Common
{
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::optional<long> runs;
    std::optional<long> horizon;
};

ScenarioConfig load(const Common& c)
{
    ScenarioConfig cfg = load_scenario(c.config);
    if (c.seed)
        cfg.master_seed = *c.seed;
    if (c.runs)
        cfg.runs = *c.runs;
    if (c.horizon)
        cfg.horizon = *c.horizon;
    if (cfg.runs < 1 || cfg.horizon < 1)
        throw Error("--runs and --horizon must be at least 1");
    return cfg;
}

// Writes to --out when given, else stdout.
template <typename F>
void emit(const std::string& out, F&& f)
{
    if (out.empty())
    {
        f(std::cout);
        return;
    }
    std::ofstream os(out);
    if (!os)
        throw Error(out + ": cannot open for writing");
    f(os);
}

void print_matrix(const char* name, const Matrix& m)
{
    std::printf("%s =\n", name);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
    {
        std::printf(" ");
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            std::printf(" %12.6g", m(i, j));
        std::printf("\n");
    }
}

void cmd_classify(const Common& c)
{
    const ScenarioConfig cfg = load(c);
    const Verdict v = classify(cfg.plant, cfg.channel, cfg.solver.tol);
    std::printf("regime = %s\ncondition = %s\neta_B = %d\nS = %d\nN_t = %d\np_access = %g\ndetails = %s\n",
                to_string(v.regime), v.matched_condition.c_str(), v.eta_b, cfg.plant.state_dim(), cfg.channel.n_t,
                cfg.channel.p_access, v.details.c_str());
    std::printf("eigenvalue rank table (rank of A_tilde - lambda I):\n");
    for (const auto& row : v.rank_table)
        std::printf("  lambda = %+.6f %+.6fi  rank = %d\n", row.lambda.real(), row.lambda.imag(), row.rank);
}

void cmd_solve(const Common& c)
{
    const ScenarioConfig cfg = load(c);
    const SolveReport rep = reference_kernel(cfg);
    const ExistenceCertificate cert =
        existence_condition(cfg.plant, cfg.weights, cfg.channel, cfg.solver.sample_count, cfg.master_seed ^ 0xce,
                            cfg.solver.tol);
    std::printf("converged = %s\niterations = %ld\nresidual_norm = %.6e\n", rep.converged ? "true" : "false",
                rep.iterations, rep.residual_norm);
    if (!rep.diagnosis.empty())
        std::printf("diagnosis = %s\n", rep.diagnosis.c_str());
    print_matrix("p_star", rep.p_star);
    std::printf("average_cost = %.10g\n", average_cost(rep.p_star, cfg.plant, cfg.weights));
    std::printf("existence.estimate = %.6g\nexistence.ci_halfwidth = %.6g\nexistence.n_samples = %zu\n"
                "existence.satisfied = %s\n",
                cert.estimate, cert.ci_halfwidth, cert.n_samples, to_string(cert.satisfied));
    if (!c.out.empty())
        emit(c.out, [&](std::ostream& os) {
            os << csv_header_comment(cfg, "residuals") << "\niteration,residual_norm\n";
            char buf[64];
            for (std::size_t i = 0; i < rep.residual_history.size(); ++i)
            {
                std::snprintf(buf, sizeof buf, "%zu,%.10g\n", i + 1, rep.residual_history[i]);
                os << buf;
            }
        });
}

void cmd_trace(const Common& c, Scheme scheme)
{
    const ScenarioConfig cfg = load(c);
    const SolveReport ref = reference_kernel(cfg);
    if (!ref.converged)
        std::fprintf(stderr, "warning: reference kernel did not converge (%s)\n", ref.diagnosis.c_str());
    TrajectoryLog log;
    simulate_run(cfg, scheme, 0, ref.p_star, checkpoints(cfg.horizon), &log);
    if (log.plant_diverged)
        std::fprintf(stderr, "warning: run diverged; log stops at slot %zu\n", log.rows.size());
    emit(c.out, [&](std::ostream& os) { write_trajectory_csv(os, cfg, log); });
}

void cmd_run(const Common& c, const std::vector<std::string>& names, unsigned workers)
{
    const ScenarioConfig cfg = load(c);
    std::vector<Scheme> schemes;
    for (const auto& n : names)
        schemes.push_back(parse_scheme(n));
    if (schemes.empty())
        schemes = {Scheme::proposed, Scheme::b1, Scheme::b2, Scheme::b3};
    const SolveReport ref = reference_kernel(cfg);
    if (!ref.converged)
        std::fprintf(stderr, "warning: reference kernel did not converge (%s)\n", ref.diagnosis.c_str());
    const ExperimentResult res = run_experiment(cfg, schemes, ref.p_star, workers);
    emit(c.out, [&](std::ostream& os) { write_metrics_csv(os, cfg, res.rows); });
}

void cmd_bench(const std::vector<std::string>& configs, const std::string& sweep, const std::vector<std::string>& names,
               const BenchOptions& opts, const std::string& out)
{
    std::vector<BenchPoint> points;
    for (const auto& path : configs)
    {
        BenchPoint pt;
        pt.cfg = load_scenario(path);
        pt.label = sweep;
        if (sweep == "S")
            pt.value = pt.cfg.plant.state_dim();
        else if (sweep == "Nt")
            pt.value = pt.cfg.channel.n_t;
        else if (sweep == "Nr")
            pt.value = pt.cfg.channel.n_r;
        else
            throw Error("--sweep must be S, Nt or Nr");
        points.push_back(std::move(pt));
    }
    std::vector<Scheme> schemes;
    for (const auto& n : names)
        schemes.push_back(parse_scheme(n));
    if (schemes.empty())
        schemes = {Scheme::proposed, Scheme::b1, Scheme::b2, Scheme::b3};
    const auto rows = bench_cpu(points, schemes, opts);
    emit(out, [&](std::ostream& os) { write_bench_csv(os, rows); });
}

void cmd_report(const std::vector<std::string>& files, const std::string& thresholds)
{
    const ReportThresholds th = thresholds.empty() ? ReportThresholds{} : load_thresholds(thresholds);
    for (const auto& f : files)
    {
        std::ifstream in(f);
        if (!in)
            throw Error(f + ": cannot open file");
        std::printf("== %s\n%s", f.c_str(), report(parse_metrics_csv(in, f), th).c_str());
    }
}

void add_common(CLI::App* app, Common& c, bool with_runs)
{
    app->add_option("--config", c.config, "scenario file")->required()->check(CLI::ExistingFile);
    app->add_option("--seed", c.seed, "override master seed");
    app->add_option("--out", c.out, "output file (default stdout)");
    app->add_option("--horizon", c.horizon, "override horizon");
    if (with_runs)
        app->add_option("--runs", c.runs, "override number of runs");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Optimal control over random-access MIMO fading channels"};
    app.set_version_flag("--version", std::string(MIMOCTL_VERSION));
    app.require_subcommand(1);

    Common c;
    auto* classify_cmd = app.add_subcommand("classify", "controllability regime of a scenario");
    classify_cmd->add_option("--config", c.config, "scenario file")->required()->check(CLI::ExistingFile);

    auto* solve_cmd = app.add_subcommand("solve", "offline kernel, average cost and existence certificate");
    add_common(solve_cmd, c, false);

    auto* learn_cmd = app.add_subcommand("learn", "one online learning run as a trajectory CSV");
    add_common(learn_cmd, c, false);

    std::string scheme_name = "1";
    auto* base_cmd = app.add_subcommand("baseline", "one baseline run as a trajectory CSV");
    add_common(base_cmd, c, false);
    base_cmd->add_option("--scheme", scheme_name, "1, 2 or 3")->check(CLI::IsMember({"1", "2", "3", "b1", "b2", "b3"}));

    std::vector<std::string> schemes;
    unsigned workers = 1;
    auto* run_cmd = app.add_subcommand("run", "Monte-Carlo experiment, metrics CSV");
    add_common(run_cmd, c, true);
    run_cmd->add_option("--scheme", schemes, "proposed, b1, b2, b3 (repeatable; default all)");
    run_cmd->add_option("--workers", workers, "worker threads")->check(CLI::Range(1u, 256u));

    std::vector<std::string> bench_configs;
    std::string sweep = "S";
    BenchOptions bopts;
    std::string bench_out;
    auto* bench_cmd = app.add_subcommand("bench", "per-slot CPU time over a sweep of scenarios");
    bench_cmd->add_option("--config", bench_configs, "scenario files (repeatable)")->required()->check(CLI::ExistingFile);
    bench_cmd->add_option("--sweep", sweep, "S, Nt or Nr");
    bench_cmd->add_option("--scheme", schemes, "schemes (default all)");
    bench_cmd->add_option("--slots", bopts.slots, "timed slots per repetition");
    bench_cmd->add_option("--reps", bopts.repetitions, "repetitions");
    bench_cmd->add_option("--out", bench_out, "output file");

    std::vector<std::string> report_files;
    std::string thresholds;
    auto* report_cmd = app.add_subcommand("report", "summarize metrics CSV files");
    report_cmd->add_option("files", report_files, "metrics CSV files")->required();
    report_cmd->add_option("--thresholds", thresholds, "YAML threshold overrides");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*classify_cmd)
            cmd_classify(c);
        else if (*solve_cmd)
            cmd_solve(c);
        else if (*learn_cmd)
            cmd_trace(c, Scheme::proposed);
        else if (*base_cmd)
            cmd_trace(c, parse_scheme(scheme_name));
        else if (*run_cmd)
            cmd_run(c, schemes, workers);
        else if (*bench_cmd)
            cmd_bench(bench_configs, sweep, schemes, bopts, bench_out);
        else if (*report_cmd)
            cmd_report(report_files, thresholds);
    }
    catch (const std::exception& e)
    {
        std::fprintf(stderr, "mimoctl: %s\n", e.what());
        return 1;
    }
    return 0;
}
