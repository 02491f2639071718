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
#include <vector>

#include "cvsim/protocols.hpp"
#include "test_util.hpp"

using namespace cvsim;
using cvsim::testing::error_kind;
using cvsim::testing::max_abs_diff;

namespace {

const double kRu = (3.0 - std::sqrt(5.0)) / 2.0;

}  // namespace

TEST_CASE("unity-gain teleportation adds twice the EPR noise") {
    const GaussianState in = squeezed_vacuum(0.5, 3.0, 0.2);
    const TeleportConfig cfg{EprParams{0.1, 0.3, std::nullopt, std::nullopt}};
    const GaussianState out = teleport(in, cfg);
    Matrix expected = in.cov();
    expected(0, 0) += 0.2;
    expected(1, 1) += 0.6;
    CHECK(max_abs_diff(out.cov(), expected) < 1e-12);
    CHECK(max_abs_diff(out.mean(), in.mean()) < 1e-12);
    CHECK(teleport_map().n_inputs() == 3);
    CHECK(teleport_map().n_outputs() == 1);
}

TEST_CASE("non-unity gain") {
    const double g = 0.8;
    const double v = 0.25;
    const GaussianState out = teleport(coherent(1.0, 0.0), TeleportConfig{EprParams::symmetric(v), g, g});
    const double va = (v + 1.0 / v) / 2.0;
    const double c = (1.0 / v - v) / 2.0;
    CHECK(out.cov()(0, 0) == doctest::Approx(g * g + va + g * g * va - 2.0 * g * c));
    CHECK(out.mean()(0) == doctest::Approx(g));
}

TEST_CASE("coherent fidelity anchors") {
    const TeleportConfig classical{EprParams::symmetric(1.0)};
    CHECK(fidelity(coherent(3, 3), teleport(coherent(3, 3), classical)) == doctest::Approx(0.5).epsilon(1e-12));
    const std::vector<TeleportConfig> one{TeleportConfig{EprParams::symmetric(0.2048)}};
    CHECK(teleport_coherent_fidelity(one) == doctest::Approx(0.830013).epsilon(1e-6));
    const std::vector<TeleportConfig> two{TeleportConfig{EprParams::symmetric(0.4286)},
                                          TeleportConfig{EprParams::symmetric(0.3333)}};
    CHECK(teleport_coherent_fidelity(two) == doctest::Approx(0.567569).epsilon(1e-6));
    CHECK(fidelity(coherent(0, 0), teleport_sequential(coherent(0, 0), two)) ==
          doctest::Approx(teleport_coherent_fidelity(two)).epsilon(1e-12));
}

TEST_CASE("squeezed input through the teleporter") {
    const GaussianState in = squeezed_vacuum(from_db(-6.2), from_db(12.0));
    const GaussianState out = teleport(in, TeleportConfig{EprParams::symmetric(0.296)});
    CHECK(to_db(out.cov()(0, 0)) == doctest::Approx(-0.7996).epsilon(1e-3));
    CHECK(out.cov()(0, 0) < 1.0);
}

TEST_CASE("teleported identity gate") {
    const GaussianState in = coherent(1.5, -0.5);
    const GaussianState out = gate_teleport_identity(in, 0.3);
    Matrix expected = in.cov();
    expected(0, 0) += 0.3;
    CHECK(max_abs_diff(out.cov(), expected) < 1e-12);
    CHECK(max_abs_diff(out.mean(), in.mean()) < 1e-12);
    CHECK(gate_teleport_identity_process(0.3).process.n_inputs() == 2);
}

TEST_CASE("ideal QND gate") {
    const GaussianState out = apply(qnd_ideal(2.0), tensor(coherent(1.0, 3.0), coherent(0.5, 1.0)));
    CHECK(out.mean()(0) == doctest::Approx(1.0));
    CHECK(out.mean()(1) == doctest::Approx(3.0 - 2.0));
    CHECK(out.mean()(2) == doctest::Approx(0.5 + 2.0));
    CHECK(out.mean()(3) == doctest::Approx(1.0));
}

TEST_CASE("unity gain reflectance") {
    CHECK(unity_gain_reflectance() == doctest::Approx(kRu).epsilon(1e-15));
    CHECK(std::abs(interaction_gain(unity_gain_reflectance()) - 1.0) < 1e-12);
    CHECK(reflectance_for_gain(interaction_gain(0.2)) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(error_kind([] { interaction_gain(1.0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("offline QND block map") {
    const double r = 0.3;
    const double a = std::sqrt((1 - r) / (1 + r));
    const double b = std::sqrt(r * (1 - r) / (1 + r));
    const double g = interaction_gain(r);
    const Matrix m = qnd_offline(r, 0.5).process.matrix();
    REQUIRE(m.rows() == 4);
    REQUIRE(m.cols() == 8);
    Matrix expected = Matrix::Zero(4, 8);
    expected(0, 0) = 1.0;
    expected(0, 4) = -a;
    expected(2, 2) = 1.0;
    expected(2, 0) = g;
    expected(2, 4) = b;
    expected(1, 1) = 1.0;
    expected(1, 3) = -g;
    expected(1, 7) = b;
    expected(3, 3) = 1.0;
    expected(3, 7) = a;
    CHECK(max_abs_diff(m, expected) < 1e-12);
}

TEST_CASE("ideal-ancilla limit of the offline gate") {
    const double r = unity_gain_reflectance();
    const GaussianState in = tensor(coherent(1, 2), coherent(-1, 0.5));
    const GaussianState offline = qnd_offline(r, 1e-8).apply(in);
    const GaussianState ideal = apply(qnd_ideal(1.0), in);
    CHECK(max_abs_diff(offline, ideal) < 1e-6);
}

TEST_CASE("QND criteria with vacuum ancillas") {
    const QndReport q = qnd_criteria(qnd_offline_vacuum_output(kRu, 1.0), {}, 1.0);
    CHECK(q.t_s_x == doctest::Approx(0.690983).epsilon(1e-6));
    CHECK(q.t_m_x == doctest::Approx(0.460655).epsilon(1e-6));
    CHECK(q.t_s_x + q.t_m_x == doctest::Approx(1.151638).epsilon(1e-6));
    CHECK(q.t_s_p == doctest::Approx(q.t_s_x).epsilon(1e-12));
    CHECK(q.v_cond_x == doctest::Approx(1.206011).epsilon(1e-6));
    CHECK_FALSE(q.duan.satisfied);
}

TEST_CASE("QND criteria in the ideal limit") {
    const QndReport q = qnd_criteria(apply(qnd_ideal(1.0), vacuum(2)), {}, 1.0);
    CHECK(q.t_s_x == doctest::Approx(1.0));
    CHECK(q.t_m_x == doctest::Approx(0.5));
    CHECK(q.v_cond_x == doctest::Approx(0.5));
    CHECK(q.k_opt_x == doctest::Approx(0.5));
    CHECK(q.duan.satisfied);
    CHECK(q.duan.k == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));
    CHECK(q.duan_min_x == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-9));
}

TEST_CASE("ancilla calibration for a target conditional variance") {
    const double v = calibrate_ancilla_for_vcond(0.75, kRu);
    CHECK(v == doctest::Approx(0.33558878).epsilon(1e-7));
    const QndReport q = qnd_criteria(qnd_offline_vacuum_output(kRu, v), {}, 1.0);
    CHECK(q.v_cond_x == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(q.duan.satisfied);
    CHECK(calibrate_ancilla_for_vcond(1.0, kRu) == doctest::Approx(0.690983).epsilon(1e-6));
}

TEST_CASE("conditional variance of correlated quadratures") {
    const GaussianState epr = epr_source(EprParams::symmetric(0.25));
    const auto cv = conditional_variance(epr, QuadratureForm::x(2, 1), QuadratureForm::x(2, 0));
    const double va = (0.25 + 4.0) / 2.0;
    const double c = (4.0 - 0.25) / 2.0;
    CHECK(cv.v_cond == doctest::Approx(va - c * c / va));
    CHECK(cv.k_opt == doctest::Approx(c / va));
}

TEST_CASE("Duan witness on an EPR pair") {
    const double v = 0.3;
    const GaussianState epr = epr_source(EprParams::symmetric(v));
    const DuanWitness w = DuanWitness::epr();
    const DuanResult at1 = duan_check(epr, w, 1.0);
    CHECK(at1.lhs_x == doctest::Approx(2 * v));
    CHECK(at1.lhs_p == doctest::Approx(2 * v));
    CHECK(at1.bound == 2.0);
    CHECK(at1.satisfied);
    CHECK(duan_scan(epr, w).k == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(duan_min_ratio(epr, w.x_first, w.x_second, -1.0) == doctest::Approx(v));
    CHECK(duan_min_ratio(epr, w.p_first, w.p_second, 1.0) == doctest::Approx(v));
    CHECK_FALSE(duan_check(vacuum(2), w, 1.0).satisfied);
    CHECK(error_kind([&] { duan_check(epr, w, 0.0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("QND criteria reject the wrong mode count") {
    CHECK(error_kind([] { qnd_criteria(vacuum(3), {}, 1.0); }) == ErrorKind::InvalidArgument);
}
