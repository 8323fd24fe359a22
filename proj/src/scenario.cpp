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

#include "mimoctl/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace mimoctl
{

namespace
{

[[noreturn]] void fail(const std::string& origin, const std::string& msg)
{
    throw Error(origin + ": " + msg);
}

YAML::Node child(const YAML::Node& parent, const std::string& key, const std::string& path, const std::string& origin)
{
    const YAML::Node n = parent[key];
    if (!n)
        fail(origin, "missing field " + path);
    return n;
}

template <typename T>
T scalar(const YAML::Node& n, const std::string& path, const std::string& origin)
{
    if (!n.IsScalar())
        fail(origin, "field " + path + ": expected a scalar");
    try
    {
        return n.as<T>();
    }
    catch (const YAML::Exception&)
    {
        fail(origin, "field " + path + ": cannot convert '" + n.Scalar() + "'");
    }
}

template <typename T>
T optional(const YAML::Node& parent, const std::string& key, T fallback, const std::string& path,
           const std::string& origin)
{
    if (!parent || !parent[key])
        return fallback;
    return scalar<T>(parent[key], path + "." + key, origin);
}

Matrix matrix(const YAML::Node& n, const std::string& path, const std::string& origin)
{
    if (n.IsMap())
    {
        const int dim = scalar<int>(child(n, "identity", path + ".identity", origin), path + ".identity", origin);
        if (dim < 1)
            fail(origin, "field " + path + ".identity: must be at least 1");
        const double scale = optional<double>(n, "scale", 1.0, path, origin);
        return scale * Matrix::Identity(dim, dim);
    }
    if (!n.IsSequence() || n.size() == 0)
        fail(origin, "field " + path + ": expected a nonempty list of rows");
    const std::size_t rows = n.size();
    std::size_t cols = 0;
    Matrix m;
    for (std::size_t i = 0; i < rows; ++i)
    {
        const YAML::Node row = n[i];
        const std::string rp = path + "[" + std::to_string(i) + "]";
        if (!row.IsSequence())
            fail(origin, "field " + rp + ": expected a list of numbers");
        if (i == 0)
        {
            cols = row.size();
            if (cols == 0)
                fail(origin, "field " + rp + ": empty row");
            m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        }
        else if (row.size() != cols)
            fail(origin, "dimension mismatch in " + path + ": row " + std::to_string(i) + " has "
                             + std::to_string(row.size()) + " entries, expected " + std::to_string(cols));
        for (std::size_t j = 0; j < cols; ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                scalar<double>(row[j], rp + "[" + std::to_string(j) + "]", origin);
    }
    return m;
}

Vector vector(const YAML::Node& n, const std::string& path, const std::string& origin)
{
    if (!n.IsSequence())
        fail(origin, "field " + path + ": expected a list of numbers");
    Vector v(static_cast<Eigen::Index>(n.size()));
    for (std::size_t i = 0; i < n.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = scalar<double>(n[i], path + "[" + std::to_string(i) + "]", origin);
    return v;
}

void put(std::ostringstream& os, const char* key, const Matrix& m)
{
    os << key << '=' << m.rows() << 'x' << m.cols();
    char buf[32];
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
        {
            std::snprintf(buf, sizeof buf, ",%.17g", m(i, j));
            os << buf;
        }
    os << '\n';
}

void put(std::ostringstream& os, const char* key, double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    os << key << '=' << buf << '\n';
}

} // namespace

ScenarioConfig parse_scenario(const std::string& text, const std::string& origin)
{
    YAML::Node root;
    try
    {
        root = YAML::Load(text);
    }
    catch (const YAML::ParserException& e)
    {
        fail(origin, "parse error at line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
    }
    if (!root.IsMap())
        fail(origin, "parse error: top level must be a mapping");

    ScenarioConfig cfg;
    cfg.name = optional<std::string>(root, "name", "scenario", "", origin);

    const YAML::Node plant = child(root, "plant", "plant", origin);
    const Matrix a = matrix(child(plant, "A", "plant.A", origin), "plant.A", origin);
    const Matrix b = matrix(child(plant, "B", "plant.B", origin), "plant.B", origin);
    const Matrix w = matrix(child(plant, "W", "plant.W", origin), "plant.W", origin);
    Vector x0;
    if (plant["x0"])
        x0 = vector(plant["x0"], "plant.x0", origin);

    const YAML::Node weights = child(root, "weights", "weights", origin);
    cfg.weights.q = matrix(child(weights, "Q", "weights.Q", origin), "weights.Q", origin);
    cfg.weights.r = matrix(child(weights, "R", "weights.R", origin), "weights.R", origin);
    cfg.weights.m = matrix(child(weights, "M", "weights.M", origin), "weights.M", origin);

    const YAML::Node ch = child(root, "channel", "channel", origin);
    cfg.channel.n_r = scalar<int>(child(ch, "n_r", "channel.n_r", origin), "channel.n_r", origin);
    cfg.channel.n_t = scalar<int>(child(ch, "n_t", "channel.n_t", origin), "channel.n_t", origin);
    cfg.channel.p_access =
        scalar<double>(child(ch, "p_access", "channel.p_access", origin), "channel.p_access", origin);

    const YAML::Node sched = root["schedule"];
    cfg.schedule.a0 = optional<double>(sched, "a0", cfg.schedule.a0, "schedule", origin);
    cfg.schedule.tau = optional<double>(sched, "tau", cfg.schedule.tau, "schedule", origin);
    cfg.schedule.gamma_exp = optional<double>(sched, "gamma_exp", cfg.schedule.gamma_exp, "schedule", origin);

    const YAML::Node run = root["run"];
    cfg.horizon = optional<long>(run, "horizon", cfg.horizon, "run", origin);
    cfg.runs = optional<long>(run, "runs", cfg.runs, "run", origin);
    cfg.master_seed = optional<std::uint64_t>(run, "master_seed", cfg.master_seed, "run", origin);

    const YAML::Node solver = root["solver"];
    cfg.solver.xi = optional<double>(solver, "xi", cfg.solver.xi, "solver", origin);
    cfg.solver.sample_count = optional<std::size_t>(solver, "sample_count", cfg.solver.sample_count, "solver", origin);
    const YAML::Node tol = solver ? solver["tolerances"] : YAML::Node();
    cfg.solver.tol.rank_rel_tol =
        optional<double>(tol, "rank_rel_tol", cfg.solver.tol.rank_rel_tol, "solver.tolerances", origin);
    cfg.solver.tol.psd_eig_tol =
        optional<double>(tol, "psd_eig_tol", cfg.solver.tol.psd_eig_tol, "solver.tolerances", origin);
    cfg.solver.tol.residual_tol =
        optional<double>(tol, "residual_tol", cfg.solver.tol.residual_tol, "solver.tolerances", origin);

    const YAML::Node bl = root["baseline"];
    cfg.baseline.forgetting = optional<double>(bl, "forgetting", cfg.baseline.forgetting, "baseline", origin);
    cfg.baseline.init_scale = optional<double>(bl, "init_scale", cfg.baseline.init_scale, "baseline", origin);
    cfg.baseline.exploration = optional<double>(bl, "exploration", cfg.baseline.exploration, "baseline", origin);
    cfg.baseline.policy_period = optional<long>(bl, "policy_period", cfg.baseline.policy_period, "baseline", origin);

    const YAML::Node flags = root["flags"];
    cfg.noise_free = optional<bool>(flags, "noise_free", false, "flags", origin);
    cfg.literal_eq9 = optional<bool>(flags, "literal_eq9", false, "flags", origin);

    try
    {
        cfg.plant = PlantModel(a, b, w, x0);
        validate(cfg.weights, cfg.plant, cfg.channel);
        cfg.schedule.validate();
        cfg.solver.tol.validate();
    }
    catch (const Error& e)
    {
        fail(origin, e.what());
    }
    if (cfg.horizon < 1 || cfg.runs < 1)
        fail(origin, "field run: horizon and runs must be at least 1");
    if (!(cfg.solver.xi > 0.0 && cfg.solver.xi < 1.0))
        fail(origin, "field solver.xi: must lie in (0, 1)");
    if (cfg.solver.sample_count < 1)
        fail(origin, "field solver.sample_count: must be at least 1");
    if (!(cfg.baseline.forgetting > 0.0 && cfg.baseline.forgetting <= 1.0))
        fail(origin, "field baseline.forgetting: must lie in (0, 1]");
    if (cfg.baseline.policy_period < 0)
        fail(origin, "field baseline.policy_period: must be non-negative");
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), path);
}

std::string canonical_text(const ScenarioConfig& cfg)
{
    std::ostringstream os;
    os << "name=" << cfg.name << '\n';
    put(os, "A", cfg.plant.a());
    put(os, "B", cfg.plant.b());
    put(os, "W", cfg.plant.w());
    put(os, "x0", cfg.plant.x0());
    put(os, "Q", cfg.weights.q);
    put(os, "R", cfg.weights.r);
    put(os, "M", cfg.weights.m);
    os << "n_r=" << cfg.channel.n_r << "\nn_t=" << cfg.channel.n_t << '\n';
    put(os, "p_access", cfg.channel.p_access);
    put(os, "a0", cfg.schedule.a0);
    put(os, "tau", cfg.schedule.tau);
    put(os, "gamma_exp", cfg.schedule.gamma_exp);
    os << "horizon=" << cfg.horizon << "\nruns=" << cfg.runs << "\nmaster_seed=" << cfg.master_seed << '\n';
    put(os, "xi", cfg.solver.xi);
    os << "sample_count=" << cfg.solver.sample_count << '\n';
    put(os, "rank_rel_tol", cfg.solver.tol.rank_rel_tol);
    put(os, "psd_eig_tol", cfg.solver.tol.psd_eig_tol);
    put(os, "residual_tol", cfg.solver.tol.residual_tol);
    put(os, "forgetting", cfg.baseline.forgetting);
    put(os, "init_scale", cfg.baseline.init_scale);
    put(os, "exploration", cfg.baseline.exploration);
    put(os, "policy_period", cfg.baseline.policy_period);
    os << "noise_free=" << cfg.noise_free << "\nliteral_eq9=" << cfg.literal_eq9 << '\n';
    return os.str();
}

std::string config_hash(const ScenarioConfig& cfg)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical_text(cfg))
    {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace mimoctl
