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

#include "cvsim/mc_oracle.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <random>
#include <limits>
#include <thread>

#include "cvsim/kernels.hpp"

namespace cvsim::mc {
namespace {

using Column = std::vector<double>;

constexpr double kCovMatchTolerance = 1e-12;

Matrix factor(const Matrix& cov) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
    const Vector& lambda = eig.eigenvalues();
    const double scale = std::max(1.0, lambda.cwiseAbs().maxCoeff());
    if (lambda.minCoeff() < -kPhysicalityTolerance * scale) {
        throw Error(ErrorKind::Unphysical, "covariance is not positive semidefinite");
    }
    return eig.eigenvectors() * lambda.cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

unsigned thread_count(const TrajectoryConfig& cfg) {
    unsigned t = cfg.threads != 0 ? cfg.threads : std::thread::hardware_concurrency();
    return std::max(1u, t);
}

// Runs body(begin, end) over contiguous chunks, one per thread.
template <class Body>
void parallel_chunks(std::size_t n, unsigned threads, Body body) {
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    if (threads <= 1) {
        body(0, n);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; t++) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        pool.emplace_back([&, t, begin, end] {
            try {
                if (begin < end) body(begin, end);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

// Column-wise mean and unbiased covariance through the active kernels.
Moments column_moments(std::vector<Column> cols, std::size_t n) {
    const auto& k = kernels::active_kernels();
    const auto dim = static_cast<Eigen::Index>(cols.size());
    Moments m{n, Vector::Zero(dim), Matrix::Zero(dim, dim)};
    for (Eigen::Index j = 0; j < dim; j++) {
        auto& c = cols[static_cast<std::size_t>(j)];
        m.mean(j) = k.sum(c.data(), n) / static_cast<double>(n);
        k.add_scalar(-m.mean(j), c.data(), n);
    }
    const double denom = static_cast<double>(n > 1 ? n - 1 : 1);
    for (Eigen::Index i = 0; i < dim; i++) {
        for (Eigen::Index j = 0; j <= i; j++) {
            const double v = k.dot(cols[static_cast<std::size_t>(i)].data(), cols[static_cast<std::size_t>(j)].data(), n) / denom;
            m.cov(i, j) = v;
            m.cov(j, i) = v;
        }
    }
    return m;
}

// cols_out[j] = offset_j + sum_k L(j, k) z[k] over all samples.
void affine_columns(const Matrix& l, const std::vector<Column>& z, std::vector<Column>& out, std::size_t n) {
    const auto& k = kernels::active_kernels();
    for (Eigen::Index j = 0; j < l.rows(); j++) {
        auto& dst = out[static_cast<std::size_t>(j)];
        for (Eigen::Index c = 0; c < l.cols(); c++) {
            const double a = l(j, c);
            if (a != 0.0) {
                k.axpy(a, z[static_cast<std::size_t>(c)].data(), dst.data(), n);
            }
        }
    }
}

void check_samples(const TrajectoryConfig& cfg) {
    if (cfg.n_samples < 2) {
        throw Error(ErrorKind::InvalidArgument, "need at least two samples");
    }
}

GaussianState run_one(const dsl::Plan& plan, const GaussianState& start, std::mt19937_64& rng,
                      std::normal_distribution<double>& normal, std::vector<double>& outcomes) {
    GaussianState state = start;
    for (const dsl::TrajectoryStep& step : plan.steps) {
        switch (step.kind) {
            case dsl::TrajectoryStep::Kind::Gate:
                state = apply(*step.op, state, step.modes);
                break;
            case dsl::TrajectoryStep::Kind::Homodyne: {
                const FormStats m = homodyne_marginal(state, step.modes[0], step.angle);
                const double outcome = m.mean + std::sqrt(m.variance) * normal(rng);
                outcomes[step.slot] = outcome;
                state = homodyne_project(state, step.modes[0], step.angle, outcome);
                break;
            }
            case dsl::TrajectoryStep::Kind::FeedForward: {
                const double shift = step.gain * outcomes[step.slot];
                const SymplecticOp d = step.quadrature == 0 ? SymplecticOp::from_matrix(Matrix::Identity(2, 2), Eigen::Vector2d(shift, 0.0))
                                                            : SymplecticOp::from_matrix(Matrix::Identity(2, 2), Eigen::Vector2d(0.0, shift));
                state = apply(d, state, step.modes);
                break;
            }
        }
    }
    return state;
}

double normal_tail(double sigmas) { return std::erfc(sigmas / std::numbers::sqrt2); }

struct QuadraticTerm {
    Eigen::Vector2d mean;
    Eigen::Matrix2d precision;
    double log_norm;
};

QuadraticTerm wigner_term(const GaussianState& s) {
    const Eigen::Matrix2d v = s.cov();
    const double det = v.determinant();
    if (!(det > 0.0)) {
        throw Error(ErrorKind::SingularCovariance, "Wigner function of a singular covariance");
    }
    return QuadraticTerm{s.mean(), v.inverse(), -std::log(2.0 * std::numbers::pi * std::sqrt(det))};
}

// Grid sum of exp(sum of quadratic terms) over the principal axes of the
// combined Gaussian, times the cell area.
double grid_integral(const std::vector<QuadraticTerm>& terms, const GridSpec& grid) {
    if (grid.resolution < 8) {
        throw Error(ErrorKind::InvalidArgument, "grid resolution must be at least 8");
    }
    Eigen::Matrix2d k = Eigen::Matrix2d::Zero();
    Eigen::Vector2d h = Eigen::Vector2d::Zero();
    for (const auto& t : terms) {
        k += t.precision;
        h += t.precision * t.mean;
    }
    const Eigen::Matrix2d combined_cov = k.inverse();
    const Eigen::Vector2d centre = combined_cov * h;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(combined_cov);
    const Eigen::Matrix2d axes = eig.eigenvectors();
    const Eigen::Vector2d sigma = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    if (!(sigma.minCoeff() > 0.0)) {
        throw Error(ErrorKind::SingularCovariance, "degenerate product Gaussian");
    }

    // Union bound over the two principal axes.
    const double tail = 2.0 * normal_tail(grid.half_width_sigmas);
    if (tail > 1e-8) {
        throw Error(ErrorKind::InvalidArgument, "grid too small: estimated tail mass above 1e-8");
    }

    const std::size_t n = grid.resolution;
    const double w0 = grid.half_width_sigmas * sigma(0);
    const double w1 = grid.half_width_sigmas * sigma(1);
    const double step0 = 2.0 * w0 / static_cast<double>(n - 1);
    const double step1 = 2.0 * w1 / static_cast<double>(n - 1);
    Column u1(n);
    for (std::size_t j = 0; j < n; j++) {
        u1[j] = -w1 + step1 * static_cast<double>(j);
    }
    const Eigen::Vector2d r0 = axes.col(0);
    const Eigen::Vector2d r1 = axes.col(1);
    const auto& kern = kernels::active_kernels();

    double total = 0.0;
    for (std::size_t i = 0; i < n; i++) {
        const double u0 = -w0 + step0 * static_cast<double>(i);
        double a = 0.0;
        double b = 0.0;
        double c = 0.0;
        for (const auto& t : terms) {
            const Eigen::Vector2d e = centre - t.mean + r0 * u0;
            a += -0.5 * r1.dot(t.precision * r1);
            b += -r1.dot(t.precision * e);
            c += -0.5 * e.dot(t.precision * e) + t.log_norm;
        }
        total += kern.sum_exp_quadratic(u1.data(), n, a, b, c);
    }
    return total * step0 * step1;
}

}  // namespace

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

Moments sample_state(const GaussianState& state, const TrajectoryConfig& cfg) {
    check_samples(cfg);
    const Matrix l = factor(state.cov());
    const std::size_t n = cfg.n_samples;
    const auto dim = static_cast<std::size_t>(state.mean().size());
    std::vector<Column> z(dim, Column(n));
    parallel_chunks(n, thread_count(cfg), [&](std::size_t begin, std::size_t end) {
        std::normal_distribution<double> normal;
        for (std::size_t i = begin; i < end; i++) {
            std::mt19937_64 rng(substream_seed(cfg.seed, i));
            normal.reset();
            for (std::size_t j = 0; j < dim; j++) {
                z[j][i] = normal(rng);
            }
        }
    });
    std::vector<Column> x(dim);
    for (std::size_t j = 0; j < dim; j++) {
        x[j].assign(n, state.mean()(static_cast<Eigen::Index>(j)));
    }
    affine_columns(l, z, x, n);
    return column_moments(std::move(x), n);
}

TrajectoryResult run_trajectories(const dsl::Plan& plan, const std::optional<GaussianState>& input,
                                  const TrajectoryConfig& cfg) {
    check_samples(cfg);
    const GaussianState start = dsl::initial_state(plan, input);
    const std::size_t n = cfg.n_samples;
    const std::size_t n_out = 2 * plan.output_modes.size();
    const std::size_t n_slots = plan.n_measurements();

    // Conditional covariances do not depend on outcome values, so one
    // factorization normally serves every trajectory; any trajectory that
    // differs gets its own.
    Matrix reference_cov;
    {
        std::mt19937_64 rng(substream_seed(cfg.seed, 0));
        std::normal_distribution<double> normal;
        std::vector<double> outcomes(n_slots);
        reference_cov = run_one(plan, start, rng, normal, outcomes).cov();
    }
    const Matrix shared_l = factor(reference_cov);

    std::vector<Column> mean_cols(n_out, Column(n));
    std::vector<Column> z(n_out, Column(n));
    std::vector<Column> outcome_cols(n_slots, Column(n));
    const auto threads = static_cast<unsigned>(std::min<std::size_t>(thread_count(cfg), n));
    std::vector<double> spreads(threads, 0.0);
    std::vector<std::vector<std::pair<std::size_t, Vector>>> own_per_thread(threads);

    const std::size_t chunk = (n + threads - 1) / threads;
    parallel_chunks(n, threads, [&](std::size_t begin, std::size_t end) {
        const std::size_t t = begin / chunk;
        std::normal_distribution<double> normal;
        std::vector<double> outcomes(n_slots);
        for (std::size_t i = begin; i < end; i++) {
            std::mt19937_64 rng(substream_seed(cfg.seed, i));
            normal.reset();
            const GaussianState out = run_one(plan, start, rng, normal, outcomes);
            for (std::size_t s = 0; s < n_slots; s++) {
                outcome_cols[s][i] = outcomes[s];
            }
            Vector zi(static_cast<Eigen::Index>(n_out));
            for (std::size_t j = 0; j < n_out; j++) {
                zi(static_cast<Eigen::Index>(j)) = normal(rng);
                z[j][i] = zi(static_cast<Eigen::Index>(j));
                mean_cols[j][i] = out.mean()(static_cast<Eigen::Index>(j));
            }
            const double spread = (out.cov() - reference_cov).cwiseAbs().maxCoeff();
            spreads[t] = std::max(spreads[t], spread);
            if (spread > kCovMatchTolerance) {
                own_per_thread[t].emplace_back(i, out.mean() + factor(out.cov()) * zi);
            }
        }
    });

    const auto& k = kernels::active_kernels();
    Vector cond_mean_avg(static_cast<Eigen::Index>(n_out));
    std::vector<Column> x = mean_cols;
    for (std::size_t j = 0; j < n_out; j++) {
        cond_mean_avg(static_cast<Eigen::Index>(j)) = k.sum(mean_cols[j].data(), n) / static_cast<double>(n);
    }
    affine_columns(shared_l, z, x, n);
    for (const auto& per_thread : own_per_thread) {
        for (const auto& [i, sample] : per_thread) {
            for (std::size_t j = 0; j < n_out; j++) {
                x[j][i] = sample(static_cast<Eigen::Index>(j));
            }
        }
    }

    TrajectoryResult result{column_moments(std::move(x), n), {}, *std::max_element(spreads.begin(), spreads.end()),
                            std::move(cond_mean_avg)};
    if (n_slots > 0) {
        const Moments om = column_moments(std::move(outcome_cols), n);
        for (std::size_t s = 0; s < n_slots; s++) {
            const auto e = static_cast<Eigen::Index>(s);
            result.outcomes.push_back(OutcomeStats{plan.outcome_names[s], om.mean(e), om.cov(e, e)});
        }
    }
    return result;
}

Comparison compare(const Moments& empirical, const GaussianState& analytic, double tolerance_sigmas) {
    const Vector& mu = analytic.mean();
    const Matrix& s = analytic.cov();
    if (empirical.mean.size() != mu.size()) {
        throw Error(ErrorKind::InvalidArgument, "empirical and analytic dimensions differ");
    }
    const double n = static_cast<double>(empirical.n_samples);
    Comparison c{0, 0, 0.0, "", true};
    const auto score = [&](double diff, double se, const std::string& label) {
        double z = 0.0;
        if (se > 0.0) {
            z = diff / se;
        } else if (std::abs(diff) > 1e-12) {
            z = std::numeric_limits<double>::infinity();
        }
        c.entries++;
        if (std::abs(z) > tolerance_sigmas) {
            c.failures++;
        }
        if (std::abs(z) >= c.max_abs_z) {
            c.max_abs_z = std::abs(z);
            c.worst = label;
        }
    };
    for (Eigen::Index i = 0; i < mu.size(); i++) {
        score(empirical.mean(i) - mu(i), std::sqrt(s(i, i) / n), "mean[" + std::to_string(i) + "]");
    }
    for (Eigen::Index i = 0; i < mu.size(); i++) {
        for (Eigen::Index j = 0; j <= i; j++) {
            const double se = std::sqrt((s(i, i) * s(j, j) + s(i, j) * s(i, j)) / (n - 1.0));
            score(empirical.cov(i, j) - s(i, j), se, "cov[" + std::to_string(i) + "," + std::to_string(j) + "]");
        }
    }
    c.agree = c.failures == 0;
    return c;
}

double fidelity_overlap_oracle(const GaussianState& pure, const GaussianState& other, const GridSpec& grid) {
    if (pure.n_modes() != 1 || other.n_modes() != 1) {
        throw Error(ErrorKind::InvalidArgument, "overlap oracle takes single-mode states");
    }
    return 4.0 * std::numbers::pi * grid_integral({wigner_term(pure), wigner_term(other)}, grid);
}

double wigner_grid_integral(const GaussianState& state, const GridSpec& grid) {
    if (state.n_modes() != 1) {
        throw Error(ErrorKind::InvalidArgument, "grid integral takes a single-mode state");
    }
    return grid_integral({wigner_term(state)}, grid);
}

}  // namespace cvsim::mc
