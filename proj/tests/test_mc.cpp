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

#include "cvsim/dsl.hpp"
#include "cvsim/mc_oracle.hpp"
#include "cvsim/protocols.hpp"
#include "test_util.hpp"

using namespace cvsim;
using cvsim::testing::error_kind;

namespace {

mc::TrajectoryConfig config(std::size_t n, std::uint64_t seed, unsigned threads = 0) {
    mc::TrajectoryConfig c;
    c.n_samples = n;
    c.seed = seed;
    c.threads = threads;
    return c;
}

}  // namespace

TEST_CASE("substream seeds") {
    CHECK(mc::substream_seed(7, 3) == mc::substream_seed(7, 3));
    CHECK(mc::substream_seed(7, 3) != mc::substream_seed(7, 4));
    CHECK(mc::substream_seed(7, 3) != mc::substream_seed(8, 3));
    CHECK(mc::substream_seed(0, 0) == 16294208416658607535ULL);
}

TEST_CASE("sampled moments agree with the state") {
    const GaussianState s = tensor(squeezed_vacuum(0.3, 5.0, 0.4), coherent(1.0, -2.0));
    const mc::Moments m = mc::sample_state(s, config(40000, 11));
    CHECK(m.n_samples == 40000);
    const mc::Comparison c = mc::compare(m, s, 5.0);
    CHECK(c.entries == 4 + 10);
    CHECK(c.agree);
    CHECK(c.failures == 0);
}

TEST_CASE("sampling is reproducible and independent of the thread count") {
    const GaussianState s = epr_source(EprParams::symmetric(0.4));
    const mc::Moments a = mc::sample_state(s, config(5003, 5, 1));
    const mc::Moments b = mc::sample_state(s, config(5003, 5, 3));
    const mc::Moments c = mc::sample_state(s, config(5003, 6, 3));
    CHECK(a.mean == b.mean);
    CHECK(a.cov == b.cov);
    CHECK(a.mean != c.mean);
}

TEST_CASE("compare flags a wrong analytic state") {
    const mc::Moments m = mc::sample_state(vacuum(1), config(20000, 3));
    const mc::Comparison c = mc::compare(m, coherent(0.2, 0.0), 5.0);
    CHECK_FALSE(c.agree);
    CHECK(c.worst == "mean[0]");
    CHECK(c.max_abs_z > 5.0);
    CHECK(error_kind([&] { mc::compare(m, vacuum(2), 5.0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("too few samples") {
    CHECK(error_kind([] { mc::sample_state(vacuum(1), config(1, 0)); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("trajectories of a teleporter") {
    const dsl::Plan plan = dsl::compile(dsl::parse(dsl::teleport_program({{0.3, 0.3}})).program);
    const GaussianState in = coherent(2.0, -1.0);
    const mc::TrajectoryResult r = mc::run_trajectories(plan, in, config(30000, 9));
    const GaussianState expected = dsl::execute(plan, in);
    CHECK(mc::compare(r.output, expected, 5.0).agree);
    REQUIRE(r.outcomes.size() == 2);
    CHECK(r.outcomes[0].name == "u1");
    CHECK(r.conditional_cov_spread < 1e-12);
    CHECK(r.outcomes[0].mean == doctest::Approx(-std::sqrt(2.0)).epsilon(0.05));
}

TEST_CASE("trajectories are reproducible") {
    const dsl::Plan plan = dsl::compile(dsl::parse(dsl::gate_teleport_program(0.2)).program);
    const mc::TrajectoryResult a = mc::run_trajectories(plan, std::nullopt, config(4001, 21, 2));
    const mc::TrajectoryResult b = mc::run_trajectories(plan, std::nullopt, config(4001, 21, 5));
    CHECK(a.output.mean == b.output.mean);
    CHECK(a.output.cov == b.output.cov);
    CHECK(a.outcomes[0].variance == b.outcomes[0].variance);
}

TEST_CASE("unmeasured plans sample the unitary output") {
    const dsl::Plan plan = dsl::compile(dsl::parse(dsl::cluster_program(ClusterPreset::Diamond4, 0.3)).program);
    const mc::TrajectoryResult r = mc::run_trajectories(plan, std::nullopt, config(20000, 4));
    CHECK(r.outcomes.empty());
    CHECK(mc::compare(r.output, dsl::execute(plan), 5.0).agree);
}

TEST_CASE("Wigner grid integrates to one") {
    for (const GaussianState& s : {vacuum(1), coherent(3.0, -4.0), squeezed_vacuum(0.05, 40.0, 1.1),
                                   GaussianState::from_moments(Vector::Zero(2), Matrix::Identity(2, 2) * 7.0)}) {
        CHECK(mc::wigner_grid_integral(s) == doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK(error_kind([] { mc::wigner_grid_integral(vacuum(2)); }) == ErrorKind::InvalidArgument);
    CHECK(error_kind([] { mc::wigner_grid_integral(vacuum(1), mc::GridSpec{3.0, 400}); }) ==
          ErrorKind::InvalidArgument);
    CHECK(error_kind([] { mc::wigner_grid_integral(vacuum(1), mc::GridSpec{8.0, 4}); }) ==
          ErrorKind::InvalidArgument);
}

TEST_CASE("overlap oracle reproduces the closed-form fidelity") {
    const GaussianState pure = squeezed_vacuum(0.4, 2.5, 0.3);
    const GaussianState noisy = teleport(pure, TeleportConfig{EprParams::symmetric(0.3)});
    CHECK(mc::fidelity_overlap_oracle(pure, noisy) == doctest::Approx(fidelity(pure, noisy)).epsilon(1e-8));
    CHECK(mc::fidelity_overlap_oracle(coherent(0, 0), coherent(1, 1)) == doctest::Approx(std::exp(-0.5)));
}
