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

#include "cvsim/cluster.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "cvsim/elements.hpp"

namespace cvsim {
namespace {

using Kind = NetworkStep::Kind;

constexpr std::size_t kNone = 0;

// Wires carry p-squeezed inputs A, B, C, D.
constexpr NetworkStep kLinearNetwork[] = {
    {Kind::Phase, 2, kNone, 90.0},
    {Kind::Phase, 3, kNone, 90.0},
    {Kind::BeamSplitter, 1, 2, 0.2},
    {Kind::BeamSplitter, 0, 1, 0.5},
    {Kind::BeamSplitter, 2, 3, 0.5},
    {Kind::Fourier, 1, kNone, 0.0},
    {Kind::Fourier, 3, kNone, 0.0},
};

// Linear network with the last Fourier pair replaced by local rotations.
constexpr NetworkStep kDiamondNetwork[] = {
    {Kind::Phase, 2, kNone, 90.0},
    {Kind::Phase, 3, kNone, 90.0},
    {Kind::BeamSplitter, 1, 2, 0.2},
    {Kind::BeamSplitter, 0, 1, 0.5},
    {Kind::BeamSplitter, 2, 3, 0.5},
    {Kind::Fourier, 2, kNone, 0.0},
    {Kind::Phase, 3, kNone, 90.0},
};

// The 80% splitter becomes a half beam splitter.
constexpr NetworkStep kTShapeNetwork[] = {
    {Kind::Phase, 2, kNone, 90.0},
    {Kind::BeamSplitter, 1, 2, 0.5},
    {Kind::Phase, 2, kNone, 90.0},
    {Kind::Phase, 3, kNone, 90.0},
    {Kind::BeamSplitter, 0, 1, 0.5},
    {Kind::BeamSplitter, 2, 3, 0.5},
    {Kind::Fourier, 1, kNone, 0.0},
    {Kind::Fourier, 2, kNone, 0.0},
    {Kind::Phase, 3, kNone, 90.0},
};

GaussianState p_squeezed_inputs(std::span<const SqueezerSpec> squeezers, std::size_t n) {
    if (squeezers.size() != 1 && squeezers.size() != n) {
        throw Error(ErrorKind::InvalidArgument,
                    "expected one shared squeezer spec or one per mode, got " + std::to_string(squeezers.size()));
    }
    std::optional<GaussianState> state;
    for (std::size_t k = 0; k < n; k++) {
        const SqueezerSpec& s = squeezers.size() == 1 ? squeezers[0] : squeezers[k];
        if (!(s.v_sq > 0.0)) {
            throw Error(ErrorKind::Unphysical, "squeezed variance must be positive");
        }
        GaussianState mode = squeezed_vacuum(s.v_sq, s.v_anti.value_or(1.0 / s.v_sq), std::numbers::pi / 2.0);
        state = state ? tensor(*state, mode) : mode;
    }
    return *state;
}

double form_variance_sum(const GaussianState& state, const std::vector<QuadratureForm>& forms, std::size_t a,
                         std::size_t b) {
    return form_stats(state, forms[a]).variance + form_stats(state, forms[b]).variance;
}

}  // namespace

std::string to_string(ClusterPreset preset) {
    switch (preset) {
        case ClusterPreset::Linear4:
            return "linear";
        case ClusterPreset::TShape4:
            return "tshape";
        case ClusterPreset::Diamond4:
            return "diamond";
        case ClusterPreset::Custom:
            return "custom";
    }
    return "custom";
}

std::optional<ClusterPreset> parse_cluster_preset(const std::string& name) {
    if (name == "linear") return ClusterPreset::Linear4;
    if (name == "tshape") return ClusterPreset::TShape4;
    if (name == "diamond") return ClusterPreset::Diamond4;
    return std::nullopt;
}

ClusterGraph::ClusterGraph(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> edges, ClusterPreset kind)
    : n_(n), edges_(std::move(edges)), kind_(kind) {}

ClusterGraph ClusterGraph::custom(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> edges) {
    if (n == 0) {
        throw Error(ErrorKind::InvalidArgument, "graph needs at least one mode");
    }
    std::vector<std::pair<std::size_t, std::size_t>> seen;
    for (auto& [a, b] : edges) {
        if (a >= n || b >= n) {
            throw Error(ErrorKind::InvalidArgument, "edge endpoint out of range");
        }
        if (a == b) {
            throw Error(ErrorKind::InvalidArgument, "self-loops are not allowed");
        }
        const std::pair<std::size_t, std::size_t> key{std::min(a, b), std::max(a, b)};
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
            throw Error(ErrorKind::InvalidArgument, "duplicate edge");
        }
        seen.push_back(key);
    }
    return ClusterGraph(n, std::move(edges), ClusterPreset::Custom);
}

ClusterGraph ClusterGraph::linear4() { return ClusterGraph(4, {{0, 1}, {1, 2}, {2, 3}}, ClusterPreset::Linear4); }

ClusterGraph ClusterGraph::tshape4() { return ClusterGraph(4, {{0, 1}, {1, 2}, {1, 3}}, ClusterPreset::TShape4); }

ClusterGraph ClusterGraph::diamond4() {
    return ClusterGraph(4, {{0, 2}, {0, 3}, {1, 2}, {1, 3}}, ClusterPreset::Diamond4);
}

ClusterGraph ClusterGraph::preset(ClusterPreset p) {
    switch (p) {
        case ClusterPreset::Linear4:
            return linear4();
        case ClusterPreset::TShape4:
            return tshape4();
        case ClusterPreset::Diamond4:
            return diamond4();
        case ClusterPreset::Custom:
            break;
    }
    throw Error(ErrorKind::InvalidArgument, "custom graphs have no preset");
}

Matrix ClusterGraph::adjacency() const {
    Matrix a = Matrix::Zero(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
    for (const auto& [i, j] : edges_) {
        a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
        a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = 1.0;
    }
    return a;
}

std::vector<std::size_t> ClusterGraph::neighbors(std::size_t mode) const {
    std::vector<std::size_t> out;
    for (const auto& [i, j] : edges_) {
        if (i == mode) out.push_back(j);
        if (j == mode) out.push_back(i);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<QuadratureForm> nullifier_forms(const ClusterGraph& graph) {
    const std::size_t n = graph.n_modes();
    std::vector<QuadratureForm> forms;
    forms.reserve(n);
    for (std::size_t a = 0; a < n; a++) {
        Vector c = Vector::Zero(static_cast<Eigen::Index>(2 * n));
        c(static_cast<Eigen::Index>(2 * a + 1)) = 1.0;
        for (std::size_t b : graph.neighbors(a)) {
            c(static_cast<Eigen::Index>(2 * b)) = -1.0;
        }
        forms.push_back(QuadratureForm::from_coefficients(std::move(c)));
    }
    return forms;
}

std::span<const NetworkStep> cluster_network(ClusterPreset preset) {
    switch (preset) {
        case ClusterPreset::Linear4:
            return kLinearNetwork;
        case ClusterPreset::TShape4:
            return kTShapeNetwork;
        case ClusterPreset::Diamond4:
            return kDiamondNetwork;
        case ClusterPreset::Custom:
            break;
    }
    throw Error(ErrorKind::InvalidArgument, "custom graphs have no committed network");
}

SymplecticOp network_op(std::span<const NetworkStep> steps, std::size_t n_modes) {
    SymplecticOp total = SymplecticOp::identity(n_modes);
    for (const NetworkStep& step : steps) {
        Matrix s = Matrix::Identity(static_cast<Eigen::Index>(2 * n_modes), static_cast<Eigen::Index>(2 * n_modes));
        const auto a = static_cast<Eigen::Index>(step.a);
        const auto b = static_cast<Eigen::Index>(step.b);
        switch (step.kind) {
            case Kind::BeamSplitter: {
                const Matrix bs = beamsplitter(step.value).matrix();
                const Eigen::Index idx[4] = {2 * a, 2 * a + 1, 2 * b, 2 * b + 1};
                for (int i = 0; i < 4; i++) {
                    for (int j = 0; j < 4; j++) {
                        s(idx[i], idx[j]) = bs(i, j);
                    }
                }
                break;
            }
            case Kind::Fourier:
                s.block<2, 2>(2 * a, 2 * a) = fourier().matrix();
                break;
            case Kind::Phase:
                s.block<2, 2>(2 * a, 2 * a) = phase(step.value * std::numbers::pi / 180.0).matrix();
                break;
        }
        total = SymplecticOp::from_matrix(s).after(total);
    }
    return total;
}

GaussianState build_cluster(ClusterPreset preset, std::span<const SqueezerSpec> squeezers) {
    const GaussianState inputs = p_squeezed_inputs(squeezers, 4);
    return apply(network_op(cluster_network(preset), 4), inputs);
}

GaussianState build_linear_cluster4(double v_sq, std::optional<double> v_anti) {
    const SqueezerSpec spec{v_sq, v_anti};
    return build_cluster(ClusterPreset::Linear4, std::span(&spec, 1));
}

GaussianState build_tshape4(double v_sq, std::optional<double> v_anti) {
    const SqueezerSpec spec{v_sq, v_anti};
    return build_cluster(ClusterPreset::TShape4, std::span(&spec, 1));
}

GaussianState build_diamond4(double v_sq, std::optional<double> v_anti) {
    const SqueezerSpec spec{v_sq, v_anti};
    return build_cluster(ClusterPreset::Diamond4, std::span(&spec, 1));
}

GaussianState build_graph_state(const ClusterGraph& graph, double v_sq, std::optional<double> v_anti) {
    const std::size_t n = graph.n_modes();
    const Matrix a = graph.adjacency();
    const auto dim = static_cast<Eigen::Index>(n);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(Matrix::Identity(dim, dim) + a * a);
    const Matrix inv_sqrt = eig.operatorInverseSqrt();
    const Matrix x = inv_sqrt;
    const Matrix y = a * inv_sqrt;

    Matrix s = Matrix::Zero(2 * dim, 2 * dim);
    for (Eigen::Index i = 0; i < dim; i++) {
        for (Eigen::Index j = 0; j < dim; j++) {
            s(2 * i, 2 * j) = x(i, j);
            s(2 * i, 2 * j + 1) = -y(i, j);
            s(2 * i + 1, 2 * j) = y(i, j);
            s(2 * i + 1, 2 * j + 1) = x(i, j);
        }
    }
    const SqueezerSpec spec{v_sq, v_anti};
    return apply(SymplecticOp::from_matrix(std::move(s)), p_squeezed_inputs(std::span(&spec, 1), n));
}

std::vector<NullifierRow> nullifier_table(const GaussianState& state, const ClusterGraph& graph) {
    if (state.n_modes() != graph.n_modes()) {
        throw Error(ErrorKind::InvalidArgument, "state and graph mode counts differ");
    }
    const GaussianState vac = vacuum(graph.n_modes());
    std::vector<NullifierRow> rows;
    std::size_t mode = 0;
    for (QuadratureForm& f : nullifier_forms(graph)) {
        const double v = form_stats(state, f).variance;
        const double ref = form_stats(vac, f).variance;
        rows.push_back(NullifierRow{mode++, std::move(f), v, ref, to_db(v, ref)});
    }
    return rows;
}

InseparabilityReport inseparability_check(const GaussianState& state) {
    if (state.n_modes() != 4) {
        throw Error(ErrorKind::InvalidArgument,
                    "inseparability check needs a four-mode state, got " + std::to_string(state.n_modes()));
    }
    const auto forms = nullifier_forms(ClusterGraph::linear4());
    InseparabilityReport r{};
    r.sums = {form_variance_sum(state, forms, 0, 1), form_variance_sum(state, forms, 3, 2),
              form_variance_sum(state, forms, 1, 2)};
    r.bound = 4.0;
    r.fully_inseparable = true;
    for (std::size_t i = 0; i < 3; i++) {
        r.satisfied[i] = r.sums[i] < r.bound;
        r.fully_inseparable = r.fully_inseparable && r.satisfied[i];
    }
    return r;
}

double inseparability_threshold(double tolerance) {
    const auto margin = [](double v) {
        const auto r = inseparability_check(build_linear_cluster4(v));
        return *std::max_element(r.sums.begin(), r.sums.end()) - r.bound;
    };
    std::uintmax_t max_iter = 200;
    const auto [lo, hi] = boost::math::tools::bisect(
        margin, 1e-6, 1.0, [tolerance](double a, double b) { return std::abs(b - a) <= tolerance; }, max_iter);
    return 0.5 * (lo + hi);
}

}  // namespace cvsim
