// Copyright 2026 The cvsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cvsim/dsl.hpp"
#include "cvsim/gaussian_state.hpp"

/// Monte-Carlo checks of the analytic paths.
///
/// Sample i always draws from its own generator, std::mt19937_64 seeded with
/// substream_seed(seed, i), so results do not depend on the thread count.
namespace cvsim::mc {

struct TrajectoryConfig {
    std::size_t n_samples = 100000;
    std::uint64_t seed = 0;
    double tolerance_sigmas = 5.0;
    /// 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
};

/// splitmix64 of seed combined with the sample index.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

struct Moments {
    std::size_t n_samples;
    Vector mean;
    Matrix cov;
};

/// Draws quadrature vectors from N(mean, cov). Throws Unphysical when cov is
/// not positive semidefinite.
Moments sample_state(const GaussianState& state, const TrajectoryConfig& cfg);

struct OutcomeStats {
    std::string name;
    double mean;
    double variance;
};

struct TrajectoryResult {
    Moments output;
    std::vector<OutcomeStats> outcomes;
    /// Largest entrywise difference between any trajectory's final
    /// conditional covariance and the first one's.
    double conditional_cov_spread;
    /// Empirical mean of the conditional output means.
    Vector conditional_mean_average;
};

/// Executes the plan sample by sample: homodyne outcomes are drawn from the
/// current conditional marginal, the state is projected, feedforward
/// displaces it, and a final quadrature sample is drawn.
TrajectoryResult run_trajectories(const dsl::Plan& plan, const std::optional<GaussianState>& input,
                                  const TrajectoryConfig& cfg);

struct Comparison {
    std::size_t entries;
    std::size_t failures;
    double max_abs_z;
    std::string worst;
    bool agree;
};

/// Per-entry z-scores of the sample mean and covariance against the analytic
/// state. Standard errors: sqrt(S_ii / N) for means and
/// sqrt((S_ii S_jj + S_ij^2) / (N - 1)) for covariances.
Comparison compare(const Moments& empirical, const GaussianState& analytic, double tolerance_sigmas);

struct GridSpec {
    /// Half-width in standard deviations along each principal axis.
    double half_width_sigmas = 8.0;
    std::size_t resolution = 400;
};

/// 4 pi times the grid sum of W_pure W_other over the principal axes of the
/// product Gaussian. Throws InvalidArgument when the estimated tail mass
/// outside the grid exceeds 1e-8.
double fidelity_overlap_oracle(const GaussianState& pure, const GaussianState& other, const GridSpec& grid = {});

/// Grid integral of a single-mode Wigner function.
double wigner_grid_integral(const GaussianState& state, const GridSpec& grid = {});

}  // namespace cvsim::mc
