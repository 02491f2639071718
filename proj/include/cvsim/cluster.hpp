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

#include <array>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cvsim/gaussian_state.hpp"

namespace cvsim {

enum class ClusterPreset { Linear4, TShape4, Diamond4, Custom };

std::string to_string(ClusterPreset preset);
std::optional<ClusterPreset> parse_cluster_preset(const std::string& name);

/// Undirected graph on modes 0..n-1.
class ClusterGraph {
   public:
    /// Throws InvalidArgument on self-loops, out-of-range indices or
    /// duplicate edges.
    static ClusterGraph custom(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> edges);
    /// Path 0-1-2-3.
    static ClusterGraph linear4();
    /// Star centred on mode 1: edges 0-1, 1-2, 1-3.
    static ClusterGraph tshape4();
    /// Four-cycle 0-2-1-3-0.
    static ClusterGraph diamond4();
    static ClusterGraph preset(ClusterPreset p);

    std::size_t n_modes() const { return n_; }
    const std::vector<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }
    ClusterPreset kind() const { return kind_; }

    Matrix adjacency() const;
    std::vector<std::size_t> neighbors(std::size_t mode) const;

   private:
    ClusterGraph(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> edges, ClusterPreset kind);
    std::size_t n_;
    std::vector<std::pair<std::size_t, std::size_t>> edges_;
    ClusterPreset kind_;
};

/// One form per mode: p_a - sum of x_b over neighbours b.
std::vector<QuadratureForm> nullifier_forms(const ClusterGraph& graph);

/// A passive network step on wires 0..3.
struct NetworkStep {
    enum class Kind { BeamSplitter, Fourier, Phase };
    Kind kind;
    std::size_t a;
    std::size_t b;
    /// Transmittance for beam splitters, degrees for phase shifts.
    double value;
};

/// Committed networks fed with four p-squeezed vacua. The linear network
/// reproduces the finite-squeezing output coefficients
///   (sqrt2 pA; sqrt(5/2) pC + sqrt(1/2) pD; sqrt(1/2) pA - sqrt(5/2) pB; sqrt2 pD).
std::span<const NetworkStep> cluster_network(ClusterPreset preset);

SymplecticOp network_op(std::span<const NetworkStep> steps, std::size_t n_modes);

struct SqueezerSpec {
    double v_sq;
    std::optional<double> v_anti;
};

/// Runs the preset network on p-squeezed inputs. A single spec is shared by
/// all four squeezers; four specs set them per mode.
GaussianState build_cluster(ClusterPreset preset, std::span<const SqueezerSpec> squeezers);
GaussianState build_linear_cluster4(double v_sq, std::optional<double> v_anti = std::nullopt);
GaussianState build_tshape4(double v_sq, std::optional<double> v_anti = std::nullopt);
GaussianState build_diamond4(double v_sq, std::optional<double> v_anti = std::nullopt);

/// Any graph: U = (I + iA)(I + A^2)^{-1/2} on p-squeezed inputs. Nullifier
/// variances are v_sq (1 + deg a).
GaussianState build_graph_state(const ClusterGraph& graph, double v_sq, std::optional<double> v_anti = std::nullopt);

struct NullifierRow {
    std::size_t mode;
    QuadratureForm form;
    double variance;
    double vacuum_reference;
    double db;
};

/// dB is relative to the same form evaluated on vacuum.
std::vector<NullifierRow> nullifier_table(const GaussianState& state, const ClusterGraph& graph);

struct InseparabilityReport {
    std::array<double, 3> sums;
    std::array<bool, 3> satisfied;
    double bound = 4.0;
    bool fully_inseparable;
};

/// For the linear four-mode cluster:
///   V(p1-x2) + V(p2-x1-x3), V(p4-x3) + V(p3-x2-x4), V(p2-x1-x3) + V(p3-x2-x4),
/// each compared against 4.
InseparabilityReport inseparability_check(const GaussianState& state);

/// Largest shared v_sq for which the preset passes, found by bisection.
double inseparability_threshold(double tolerance = 1e-12);

}  // namespace cvsim
