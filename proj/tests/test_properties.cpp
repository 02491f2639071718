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

#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <random>

#include "cvsim/elements.hpp"
#include "cvsim/mc_oracle.hpp"
#include "cvsim/protocols.hpp"
#include "test_util.hpp"

using namespace cvsim;
using cvsim::testing::max_abs_diff;

namespace {

GaussianState random_state(std::size_t n, std::mt19937_64& rng, double max_noise = 2.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Matrix cov = Matrix::Zero(2 * n, 2 * n);
    Vector mean(2 * n);
    for (std::size_t k = 0; k < n; k++) {
        const double nu = 1.0 + max_noise * u(rng);
        cov(2 * k, 2 * k) = nu;
        cov(2 * k + 1, 2 * k + 1) = nu;
        mean(2 * k) = 4.0 * u(rng) - 2.0;
        mean(2 * k + 1) = 4.0 * u(rng) - 2.0;
    }
    GaussianState s = GaussianState::from_moments(mean, cov);
    for (int round = 0; round < 3; round++) {
        for (std::size_t k = 0; k < n; k++) {
            const std::vector<std::size_t> m{k};
            s = apply(phase(2 * std::numbers::pi * u(rng)), s, m);
            s = apply(squeezer(u(rng) - 0.5), s, m);
        }
        for (std::size_t k = 0; k + 1 < n; k++) {
            const std::vector<std::size_t> m{k, k + 1};
            s = apply(beamsplitter(0.05 + 0.9 * u(rng)), s, m);
        }
    }
    return s;
}

// Smallest symplectic eigenvalue of the partially transposed covariance.
double ppt_min_eigenvalue(const GaussianState& s) {
    Matrix v = s.cov();
    v.row(3) *= -1.0;
    v.col(3) *= -1.0;
    const Matrix a = symplectic_form(2) * v;
    const Eigen::EigenSolver<Matrix> es(a);
    double lo = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); i++) {
        lo = std::min(lo, std::abs(es.eigenvalues()(i)));
    }
    return lo;
}

}  // namespace

TEST_CASE("random networks keep states physical") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 40; trial++) {
        const GaussianState s = random_state(3, rng);
        CHECK(is_physical(s.cov()));
        const GaussianState t = apply(beamsplitter(0.3), s, std::vector<std::size_t>{2, 0});
        CHECK(t.purity() == doctest::Approx(s.purity()).epsilon(1e-9));
    }
}

TEST_CASE("Duan criterion implies PPT entanglement") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int entangled = 0;
    for (int trial = 0; trial < 200; trial++) {
        const GaussianState pair =
            epr_source(EprParams{0.05 + 1.5 * u(rng), 0.05 + 1.5 * u(rng), std::nullopt, std::nullopt});
        Matrix cov = pair.cov();
        cov(0, 0) += u(rng);
        cov(1, 1) += u(rng);
        cov(2, 2) += 0.5 * u(rng);
        GaussianState epr = GaussianState::from_moments(pair.mean(), cov);
        epr = apply(phase(0.3 * (u(rng) - 0.5)), epr, std::vector<std::size_t>{1});
        const DuanResult d = duan_scan(epr, DuanWitness::epr());
        const double ppt = ppt_min_eigenvalue(epr);
        if (d.satisfied) {
            entangled++;
            CHECK(ppt < 1.0);
        }
    }
    MESSAGE("Duan-entangled cases: " << entangled);

    for (int trial = 0; trial < 50; trial++) {
        const GaussianState prod = tensor(random_state(1, rng), random_state(1, rng));
        CHECK(ppt_min_eigenvalue(prod) >= 1.0 - 1e-9);
        CHECK_FALSE(duan_scan(prod, DuanWitness::epr()).satisfied);
    }
}

TEST_CASE("EPR pairs are PPT-entangled exactly when squeezed") {
    for (double v : {0.1, 0.5, 0.99, 1.0, 1.5}) {
        const GaussianState epr = epr_source(EprParams::symmetric(v));
        CHECK(ppt_min_eigenvalue(epr) == doctest::Approx(std::min(v, 1.0 / v)).epsilon(1e-9));
    }
}

TEST_CASE("closed-form fidelity agrees with the overlap integral") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; trial++) {
        const double vs = 0.2 + 0.8 * u(rng);
        GaussianState pure = squeezed_vacuum(vs, 1.0 / vs, std::numbers::pi * u(rng));
        pure = apply(displace(4 * u(rng) - 2, 4 * u(rng) - 2), pure);
        const GaussianState other = random_state(1, rng, 1.0);
        const double closed = fidelity(pure, other);
        const double grid = mc::fidelity_overlap_oracle(pure, other);
        CHECK(std::abs(closed - grid) < 1e-4);
    }
}

TEST_CASE("conditional variance is the minimum over linear estimators") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 30; trial++) {
        const GaussianState s = random_state(2, rng);
        const QuadratureForm sig = QuadratureForm::x(2, 0);
        const QuadratureForm met = QuadratureForm::rotated(2, 1, 0.3 * trial);
        const ConditionalVariance cv = conditional_variance(s, sig, met);
        double best = std::numeric_limits<double>::infinity();
        for (int i = -4000; i <= 4000; i++) {
            const double k = cv.k_opt + i * 1e-3;
            best = std::min(best, form_stats(s, sig - k * met).variance);
        }
        CHECK(cv.v_cond <= best + 1e-12);
        CHECK(cv.v_cond == doctest::Approx(best).epsilon(1e-6));
        CHECK(form_stats(s, sig - cv.k_opt * met).variance == doctest::Approx(cv.v_cond).epsilon(1e-12));
    }
}

TEST_CASE("averaging conditional states reproduces the ensemble") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; trial++) {
        const GaussianState s = random_state(2, rng);
        const double angle = 0.4 * trial;
        const FormStats m = homodyne_marginal(s, 0, angle);
        const GaussianState c0 = homodyne_project(s, 0, angle, m.mean);
        const GaussianState c1 = homodyne_project(s, 0, angle, m.mean + 1.0);
        CHECK(max_abs_diff(c0.cov(), c1.cov()) < 1e-12);
        const Vector slope = c1.mean() - c0.mean();
        const Matrix ensemble = c0.cov() + m.variance * slope * slope.transpose();
        CHECK(max_abs_diff(ensemble, s.marginal(std::vector<std::size_t>{1}).cov()) < 1e-9);
        CHECK(max_abs_diff(c0.mean(), s.marginal(std::vector<std::size_t>{1}).mean()) < 1e-12);
    }
}
