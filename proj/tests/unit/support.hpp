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

#ifndef MIMOCTL_TEST_SUPPORT_HPP
#define MIMOCTL_TEST_SUPPORT_HPP

#include "mimoctl/mimoctl.hpp"

#include <random>
#include <string>

namespace mimoctl::test
{

inline std::string config_path(const std::string& name)
{
    return std::string(MIMOCTL_CONFIG_DIR) + "/" + name;
}

inline Matrix gaussian(Rng& rng, Eigen::Index r, Eigen::Index c, double sd = 1.0)
{
    std::normal_distribution<double> n(0.0, sd);
    Matrix m(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
        for (Eigen::Index i = 0; i < r; ++i)
            m(i, j) = n(rng);
    return m;
}

inline Vector gaussian_vec(Rng& rng, Eigen::Index n, double sd = 1.0)
{
    return gaussian(rng, n, 1, sd);
}

/// G G^T with G square: PD with probability one.
inline Matrix random_pd(Rng& rng, Eigen::Index n)
{
    const Matrix g = gaussian(rng, n, n);
    return g * g.transpose() + 1e-3 * Matrix::Identity(n, n);
}

/// Rank-deficient PSD matrix of the given rank.
inline Matrix random_psd(Rng& rng, Eigen::Index n, Eigen::Index rank)
{
    const Matrix g = gaussian(rng, n, rank);
    return g * g.transpose();
}

/// Fig. 3 plant written out independently of the bundled config.
inline PlantModel fig3_plant()
{
    Matrix a(3, 3), b(3, 2);
    a << 0.01, -1.02, 0.3, -0.1, 1.01, 0.2, -0.5, 0.1, 0.2;
    b << 1.1, 0.2, -0.2, 0.6, -0.3, 0.2;
    return PlantModel(a, b, 0.05 * Matrix::Identity(3, 3));
}

inline CostWeights identity_weights(int s, int n_r, int n_t)
{
    return {Matrix::Identity(s, s), Matrix::Identity(n_t, n_t), Matrix::Identity(n_r, n_r)};
}

inline ChannelConfig fig3_channel()
{
    return {2, 3, 0.5};
}

} // namespace mimoctl::test

#endif
