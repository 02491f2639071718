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

#include <optional>
#include <span>

#include "cvsim/elements.hpp"
#include "cvsim/gaussian_state.hpp"

namespace cvsim {

// ---------------------------------------------------------------------------
// Teleportation

struct TeleportConfig {
    EprParams epr;
    double gain_x = 1.0;
    double gain_p = 1.0;
};

/// Map over (in, A, B) -> out:
///   x_out = x_B + g_x (x_in - x_A),  p_out = p_B + g_p (p_in + p_A).
LinearProcess teleport_map(double gain_x = 1.0, double gain_p = 1.0);

GaussianState teleport(const GaussianState& input, const TeleportConfig& cfg);

GaussianState teleport_sequential(const GaussianState& input, std::span<const TeleportConfig> hops);

/// Coherent-input fidelity at unity gain, 1 / sqrt((1 + v_sq_x)(1 + v_sq_p)).
double teleport_coherent_fidelity(std::span<const TeleportConfig> hops);

/// QND(G=1) between the input and an x-squeezed ancilla, p measured on the
/// input and fed forward onto the ancilla's p with gain +1.
AncillaProcess gate_teleport_identity_process(double ancilla_v_sq, std::optional<double> ancilla_v_anti = std::nullopt);

/// Output cov = input cov + diag(ancilla_v_sq, 0).
GaussianState gate_teleport_identity(const GaussianState& input, double ancilla_v_sq,
                                     std::optional<double> ancilla_v_anti = std::nullopt);

// ---------------------------------------------------------------------------
// QND gate

/// x2 -> x2 + G x1, p1 -> p1 - G p2.
SymplecticOp qnd_ideal(double gain);

/// (3 - sqrt 5) / 2, the reflectance giving interaction gain 1.
double unity_gain_reflectance();

/// 1/sqrt(R) - sqrt(R).
double interaction_gain(double reflectance);

/// Inverse of interaction_gain for G >= 0.
double reflectance_for_gain(double gain);

/// Offline QND gate over (1, 2) with ancilla A (x-squeezed) and ancilla B
/// (p-squeezed) appended in that order. With a = sqrt((1-R)/(1+R)),
/// b = sqrt(R(1-R)/(1+R)) and G = interaction_gain(R):
///   x1' = x1 - a xA          p1' = p1 - G p2 + b pB
///   x2' = x2 + G x1 + b xA   p2' = p2 + a pB
AncillaProcess qnd_offline(double reflectance, const GaussianState& ancilla_a, const GaussianState& ancilla_b);

/// x-squeezed ancilla A and p-squeezed ancilla B with equal variances.
AncillaProcess qnd_offline(double reflectance, double ancilla_v_sq, std::optional<double> ancilla_v_anti = std::nullopt);

// ---------------------------------------------------------------------------
// Criteria

struct ConditionalVariance {
    double v_cond;
    double k_opt;
};

/// min_k Var(signal - k meter) = V_s - C^2 / V_m at k = C / V_m.
ConditionalVariance conditional_variance(const GaussianState& state, const QuadratureForm& signal,
                                         const QuadratureForm& meter);

/// Var(x_first - k x_second) < 2k and Var(p_first + k p_second) < 2k.
struct DuanWitness {
    QuadratureForm x_first;
    QuadratureForm x_second;
    QuadratureForm p_first;
    QuadratureForm p_second;

    /// (x1, x2, p2, p1) on a two-mode QND output.
    static DuanWitness qnd_output();
    /// (xA, xB, pA, pB) on a two-mode EPR pair.
    static DuanWitness epr();
};

struct DuanResult {
    double k;
    double lhs_x;
    double lhs_p;
    double bound;
    bool satisfied;
};

DuanResult duan_check(const GaussianState& state, const DuanWitness& witness, double k);

/// The k > 0 minimizing max(lhs_x, lhs_p) / 2k, found by Brent search on
/// log k over [1e-6, 1e6].
DuanResult duan_scan(const GaussianState& state, const DuanWitness& witness);

/// min over k > 0 of Var(first + sign k second) / 2k = sqrt(V1 V2) + sign C.
double duan_min_ratio(const GaussianState& state, const QuadratureForm& first, const QuadratureForm& second,
                      double sign);

struct QndSignalVariances {
    double x1 = 1.0;
    double p2 = 1.0;
};

struct QndReport {
    double t_s_x;
    double t_m_x;
    double t_s_p;
    double t_m_p;
    double v_cond_x;
    double v_cond_p;
    double k_opt_x;
    double k_opt_p;
    double duan_min_x;
    double duan_min_p;
    DuanResult duan;
    double interaction_gain;
};

/// Signal x1 with meter x2, and signal p2 with meter p1.
QndReport qnd_criteria(const GaussianState& joint_output, const QndSignalVariances& inputs, double gain);

/// Offline QND output on vacuum inputs at reflectance R with equal ancillas.
GaussianState qnd_offline_vacuum_output(double reflectance, double ancilla_v_sq);

/// Ancilla v_sq at which V(x1'|x2') equals target on vacuum inputs.
double calibrate_ancilla_for_vcond(double target, double reflectance);

}  // namespace cvsim
