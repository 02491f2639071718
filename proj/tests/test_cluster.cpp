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

#include <array>
#include <cmath>
#include <vector>

#include "cvsim/cluster.hpp"
#include "test_util.hpp"

using namespace cvsim;
using cvsim::testing::error_kind;

namespace {

std::vector<double> nullifier_variances(const GaussianState& s, const ClusterGraph& g) {
    std::vector<double> out;
    for (const auto& row : nullifier_table(s, g)) out.push_back(row.variance);
    return out;
}

void check_scaled(const std::vector<double>& got, const std::vector<double>& weights, double v) {
    REQUIRE(got.size() == weights.size());
    for (std::size_t i = 0; i < got.size(); i++) {
        CHECK(std::abs(got[i] - weights[i] * v) < 1e-9);
    }
}

}  // namespace

TEST_CASE("preset names") {
    CHECK(to_string(ClusterPreset::Linear4) == "linear");
    CHECK(to_string(ClusterPreset::TShape4) == "tshape");
    CHECK(to_string(ClusterPreset::Diamond4) == "diamond");
    CHECK(parse_cluster_preset("diamond") == ClusterPreset::Diamond4);
    CHECK_FALSE(parse_cluster_preset("ring").has_value());
}

TEST_CASE("graph construction") {
    const ClusterGraph lin = ClusterGraph::linear4();
    CHECK(lin.n_modes() == 4);
    CHECK(lin.edges().size() == 3);
    CHECK(lin.neighbors(1) == std::vector<std::size_t>{0, 2});
    CHECK(ClusterGraph::tshape4().neighbors(1).size() == 3);
    CHECK(ClusterGraph::diamond4().neighbors(0) == std::vector<std::size_t>{2, 3});
    const Matrix a = ClusterGraph::diamond4().adjacency();
    CHECK(a.sum() == 8.0);
    CHECK(a(0, 1) == 0.0);
    CHECK(error_kind([] { ClusterGraph::custom(3, {{0, 0}}); }) == ErrorKind::InvalidArgument);
    CHECK(error_kind([] { ClusterGraph::custom(3, {{0, 3}}); }) == ErrorKind::InvalidArgument);
    CHECK(error_kind([] { ClusterGraph::custom(3, {{0, 1}, {1, 0}}); }) == ErrorKind::InvalidArgument);
    CHECK(ClusterGraph::custom(3, {{0, 1}, {1, 2}}).kind() == ClusterPreset::Custom);
}

TEST_CASE("nullifier forms") {
    const auto forms = nullifier_forms(ClusterGraph::linear4());
    REQUIRE(forms.size() == 4);
    Vector expected = Vector::Zero(8);
    expected(3) = 1.0;
    expected(0) = -1.0;
    expected(4) = -1.0;
    CHECK(forms[1].coeffs() == expected);
}

TEST_CASE("network clusters reach the scaled nullifier variances") {
    const double v = 0.2884;
    const GaussianState lin = build_linear_cluster4(v);
    check_scaled(nullifier_variances(lin, ClusterGraph::linear4()), {2, 3, 3, 2}, v);
    check_scaled(nullifier_variances(build_diamond4(v), ClusterGraph::diamond4()), {3, 3, 3, 3}, v);
    check_scaled(nullifier_variances(build_tshape4(v), ClusterGraph::tshape4()), {2, 4, 2, 2}, v);
    CHECK(lin.purity() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("nullifier table references and dB") {
    const double v = from_db(-5.4);
    const auto rows = nullifier_table(build_linear_cluster4(v), ClusterGraph::linear4());
    for (const auto& row : rows) {
        CHECK(row.db == doctest::Approx(-5.4).epsilon(1e-9));
    }
    CHECK(rows[0].vacuum_reference == 2.0);
    CHECK(rows[1].vacuum_reference == 3.0);
}

TEST_CASE("generic graph states") {
    const double v = 0.1;
    const ClusterGraph g = ClusterGraph::custom(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {0, 2}});
    const GaussianState s = build_graph_state(g, v);
    const auto rows = nullifier_table(s, g);
    for (const auto& row : rows) {
        CHECK(row.variance == doctest::Approx(v * row.vacuum_reference).epsilon(1e-9));
    }
    CHECK(s.purity() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("mixed squeezers keep the nullifiers and add anti-squeezed noise elsewhere") {
    const double v = 0.3;
    const GaussianState s = build_linear_cluster4(v, 10.0);
    check_scaled(nullifier_variances(s, ClusterGraph::linear4()), {2, 3, 3, 2}, v);
    CHECK(s.purity() < 1.0);
    const std::array<SqueezerSpec, 4> specs{SqueezerSpec{0.1, std::nullopt}, SqueezerSpec{0.2, std::nullopt},
                                            SqueezerSpec{0.3, std::nullopt}, SqueezerSpec{0.4, std::nullopt}};
    CHECK(build_cluster(ClusterPreset::Linear4, specs).n_modes() == 4);
    CHECK(error_kind([&] { build_cluster(ClusterPreset::Linear4, std::span(specs).first(2)); }) ==
          ErrorKind::InvalidArgument);
}

TEST_CASE("inseparability sums") {
    const InseparabilityReport r = inseparability_check(build_linear_cluster4(from_db(-5.4)));
    CHECK(r.sums[0] == doctest::Approx(1.442016).epsilon(1e-6));
    CHECK(r.sums[1] == doctest::Approx(1.442016).epsilon(1e-6));
    CHECK(r.sums[2] == doctest::Approx(1.730419).epsilon(1e-6));
    CHECK(r.fully_inseparable);

    const InseparabilityReport vac = inseparability_check(build_linear_cluster4(1.0));
    CHECK(vac.sums[0] == doctest::Approx(5.0));
    CHECK(vac.sums[2] == doctest::Approx(6.0));
    CHECK_FALSE(vac.fully_inseparable);
    CHECK(error_kind([] { inseparability_check(vacuum(3)); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("inseparability threshold") {
    CHECK(inseparability_threshold() == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("network ops are symplectic") {
    for (auto p : {ClusterPreset::Linear4, ClusterPreset::TShape4, ClusterPreset::Diamond4}) {
        const SymplecticOp op = network_op(cluster_network(p), 4);
        const Matrix o = symplectic_form(4);
        CHECK(cvsim::testing::max_abs_diff(op.matrix() * o * op.matrix().transpose(), o) < 1e-12);
    }
}
