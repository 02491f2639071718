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

#include <cmath>
#include <numbers>
#include <vector>

#include "cvsim/elements.hpp"
#include "cvsim/gaussian_state.hpp"
#include "test_util.hpp"

using namespace cvsim;
using cvsim::testing::error_kind;
using cvsim::testing::max_abs_diff;

TEST_CASE("symplectic form is block diagonal") {
    const Matrix o = symplectic_form(2);
    CHECK(o(0, 1) == 1.0);
    CHECK(o(1, 0) == -1.0);
    CHECK(o(2, 3) == 1.0);
    CHECK(o(0, 3) == 0.0);
    CHECK(max_abs_diff(o * o, -Matrix::Identity(4, 4)) == 0.0);
}

TEST_CASE("vacuum is pure and sits on the uncertainty boundary") {
    const GaussianState v = vacuum(3);
    CHECK(v.n_modes() == 3);
    CHECK(v.purity() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(uncertainty_margin(v.cov())) < 1e-12);
    CHECK(is_physical(v.cov()));
    CHECK(error_kind([] { vacuum(0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("from_moments validates its input") {
    CHECK(error_kind([] { GaussianState::from_moments(Vector::Zero(2), Matrix::Identity(2, 2) * 0.5); }) ==
          ErrorKind::Unphysical);
    Matrix asym = Matrix::Identity(2, 2);
    asym(0, 1) = 0.1;
    CHECK(error_kind([&] { GaussianState::from_moments(Vector::Zero(2), asym); }) == ErrorKind::Unphysical);
    CHECK(error_kind([] { GaussianState::from_moments(Vector::Zero(3), Matrix::Identity(3, 3)); }) ==
          ErrorKind::InvalidArgument);
    CHECK(error_kind([] { GaussianState::from_moments(Vector::Zero(2), Matrix::Identity(4, 4)); }) ==
          ErrorKind::InvalidArgument);
    Vector bad = Vector::Zero(2);
    bad(0) = std::nan("");
    CHECK(error_kind([&] { GaussianState::from_moments(bad, Matrix::Identity(2, 2)); }) ==
          ErrorKind::InvalidArgument);
    Matrix thermal = Matrix::Identity(2, 2) * 3.0;
    const GaussianState s = GaussianState::from_moments(Vector::Zero(2), thermal);
    CHECK(s.purity() == doctest::Approx(1.0 / 3.0));
    CHECK_FALSE(s.is_pure());
}

TEST_CASE("squeezed vacuum orientation") {
    const GaussianState x = squeezed_vacuum(0.25, 4.0);
    CHECK(x.cov()(0, 0) == doctest::Approx(0.25));
    CHECK(x.cov()(1, 1) == doctest::Approx(4.0));
    const GaussianState p = squeezed_vacuum(0.25, 4.0, std::numbers::pi / 2);
    CHECK(p.cov()(0, 0) == doctest::Approx(4.0));
    CHECK(p.cov()(1, 1) == doctest::Approx(0.25));
    CHECK(std::abs(p.cov()(0, 1)) < 1e-12);
    CHECK(error_kind([] { squeezed_vacuum(0.5, 1.5); }) == ErrorKind::Unphysical);
    CHECK(error_kind([] { squeezed_vacuum(-0.5, 2.0); }) == ErrorKind::Unphysical);
    CHECK(squeezed_vacuum(0.5, 3.0).purity() == doctest::Approx(1.0 / std::sqrt(1.5)));
}

TEST_CASE("decibels") {
    CHECK(to_db(0.5) == doctest::Approx(-3.0103).epsilon(1e-5));
    CHECK(to_db(2.0, 2.0) == 0.0);
    CHECK(from_db(-5.4) == doctest::Approx(0.28840315031266).epsilon(1e-12));
    CHECK(from_db(to_db(0.123, 3.0), 3.0) == doctest::Approx(0.123).epsilon(1e-14));
}

TEST_CASE("units convention rescales reported values") {
    const UnitsConvention half = UnitsConvention::with_vacuum_variance(0.5);
    CHECK(half.variance(2.0) == 1.0);
    CHECK(half.amplitude(2.0) == doctest::Approx(std::sqrt(2.0)));
    CHECK(UnitsConvention{}.variance(2.0) == 2.0);
    CHECK(error_kind([] { UnitsConvention::with_vacuum_variance(0.3); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("tensor and marginal invert each other") {
    const GaussianState a = coherent(1.0, -2.0);
    const GaussianState b = squeezed_vacuum(0.5, 2.0, 0.3);
    const GaussianState ab = tensor(a, b);
    CHECK(ab.n_modes() == 2);
    const std::vector<std::size_t> first{0};
    const std::vector<std::size_t> second{1};
    CHECK(max_abs_diff(ab.marginal(first), a) == 0.0);
    CHECK(max_abs_diff(ab.marginal(second), b) == 0.0);
    const std::vector<std::size_t> swapped{1, 0};
    CHECK(max_abs_diff(ab.marginal(swapped), tensor(b, a)) == 0.0);
    const std::vector<std::size_t> dup{0, 0};
    CHECK(error_kind([&] { ab.marginal(dup); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("symplectic ops reject non-symplectic matrices") {
    CHECK(error_kind([] { SymplecticOp::from_matrix(Matrix::Identity(2, 2) * 2.0); }) == ErrorKind::NonSymplectic);
    CHECK(error_kind([] { SymplecticOp::from_matrix(Matrix::Identity(3, 3)); }) == ErrorKind::InvalidArgument);
    const SymplecticOp s = squeezer(0.4);
    const SymplecticOp inv = squeezer(-0.4);
    CHECK(max_abs_diff(s.after(inv).matrix(), Matrix::Identity(2, 2)) < 1e-15);
}

TEST_CASE("apply on a subset matches the embedded op") {
    const GaussianState s = tensor(tensor(coherent(1, 2), squeezed_vacuum(0.3, 4.0)), coherent(-1, 0.5));
    const std::vector<std::size_t> modes{2, 0};
    const SymplecticOp bs = beamsplitter(0.3);
    const GaussianState sub = apply(bs, s, modes);

    Matrix full = Matrix::Identity(6, 6);
    const std::vector<int> idx{4, 5, 0, 1};
    for (int r = 0; r < 4; r++) {
        for (int c = 0; c < 4; c++) {
            full(idx[r], idx[c]) = bs.matrix()(r, c);
        }
    }
    const GaussianState whole = apply(SymplecticOp::from_matrix(full), s);
    CHECK(max_abs_diff(sub, whole) < 1e-14);
    CHECK(error_kind([&] { apply(bs, s, std::vector<std::size_t>{1}); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("linear processes must keep the output canonical") {
    CHECK(error_kind([] { LinearProcess::from_matrix(Matrix::Identity(2, 2) * 0.5); }) == ErrorKind::NonCanonical);
    Matrix pick = Matrix::Zero(2, 4);
    pick(0, 2) = 1.0;
    pick(1, 3) = 1.0;
    const LinearProcess trace_out = LinearProcess::from_matrix(pick);
    const GaussianState s = tensor(coherent(5, 5), coherent(1, 2));
    CHECK(max_abs_diff(linear_process(trace_out, s), coherent(1, 2)) == 0.0);
}

TEST_CASE("homodyne conditioning follows the Schur complement") {
    const GaussianState epr = epr_source(EprParams::symmetric(0.25));
    const FormStats m = homodyne_marginal(epr, 0, 0.0);
    CHECK(m.mean == 0.0);
    CHECK(m.variance == doctest::Approx(epr.cov()(0, 0)));

    const GaussianState post = homodyne_project(epr, 0, 0.0, 1.5);
    REQUIRE(post.n_modes() == 1);
    const double vxx = epr.cov()(0, 0);
    const double cxb = epr.cov()(0, 2);
    CHECK(post.cov()(0, 0) == doctest::Approx(epr.cov()(2, 2) - cxb * cxb / vxx));
    CHECK(post.mean()(0) == doctest::Approx(cxb / vxx * 1.5));
    CHECK(post.cov()(1, 1) == doctest::Approx(epr.cov()(3, 3)));

    CHECK(error_kind([] { homodyne_project(vacuum(1), 0, 0.0, 0.0); }) == ErrorKind::InvalidArgument);
    CHECK(error_kind([&] { homodyne_project(epr, 2, 0.0, 0.0); }) == ErrorKind::InvalidArgument);
    const GaussianState flat = tensor(squeezed_vacuum(1e-13, 1e13), vacuum(1));
    CHECK(error_kind([&] { homodyne_project(flat, 0, 0.0, 0.0); }) == ErrorKind::DegenerateMeasurement);
}

TEST_CASE("rotated homodyne of a product state leaves the rest untouched") {
    const GaussianState s = tensor(squeezed_vacuum(0.2, 5.0, 0.7), coherent(2.0, -1.0));
    const GaussianState post = homodyne_project(s, 0, 0.7, 10.0);
    CHECK(max_abs_diff(post, coherent(2.0, -1.0)) < 1e-14);
    CHECK(homodyne_marginal(s, 0, 0.7).variance == doctest::Approx(0.2));
}

TEST_CASE("quadrature forms") {
    const GaussianState s = tensor(coherent(3.0, 4.0), squeezed_vacuum(0.5, 2.0));
    const QuadratureForm f = QuadratureForm::x(2, 0) - 2.0 * QuadratureForm::p(2, 1);
    const FormStats st = form_stats(s, f);
    CHECK(st.mean == doctest::Approx(3.0));
    CHECK(st.variance == doctest::Approx(1.0 + 4.0 * 2.0));
    CHECK(form_covariance(s, QuadratureForm::x(2, 0), QuadratureForm::x(2, 1)) == 0.0);
    const QuadratureForm r = QuadratureForm::rotated(2, 0, std::numbers::pi / 2);
    CHECK(form_stats(s, r).mean == doctest::Approx(4.0));
    CHECK(error_kind([] { QuadratureForm::from_coefficients(Vector::Zero(2)); }) == ErrorKind::InvalidArgument);
    CHECK(error_kind([&] { form_stats(vacuum(1), f); }) == ErrorKind::InvalidArgument);
    CHECK(error_kind([] { QuadratureForm::x(2, 2); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("wigner function of the vacuum") {
    const GaussianState v = vacuum(1);
    CHECK(wigner(v, Vector::Zero(2)) == doctest::Approx(1.0 / (2.0 * std::numbers::pi)));
    Vector pt(2);
    pt << 1.0, 1.0;
    CHECK(wigner(v, pt) == doctest::Approx(std::exp(-1.0) / (2.0 * std::numbers::pi)));
    CHECK(error_kind([&] { wigner(v, Vector::Zero(4)); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("fidelity closed form") {
    CHECK(fidelity(coherent(0, 0), coherent(0, 0)) == doctest::Approx(1.0));
    CHECK(fidelity(coherent(0, 0), coherent(2.0, 0.0)) == doctest::Approx(std::exp(-1.0)));
    const GaussianState noisy = GaussianState::from_moments(Vector::Zero(2), Matrix::Identity(2, 2) * 3.0);
    CHECK(fidelity(coherent(0, 0), noisy) == doctest::Approx(0.5));
    CHECK(error_kind([&] { fidelity(noisy, coherent(0, 0)); }) == ErrorKind::NotPure);
    CHECK(error_kind([] { fidelity(vacuum(2), vacuum(2)); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("phase angle of a displaced state") {
    CHECK(phase_angle(coherent(1.0, 1.0), 0) == doctest::Approx(std::numbers::pi / 4));
    CHECK(error_kind([] { phase_angle(coherent(1.0, 1.0), 1); }) == ErrorKind::InvalidArgument);
}
