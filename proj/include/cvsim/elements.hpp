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

#include "cvsim/gaussian_state.hpp"

/// Optical building blocks.
///
/// Beam splitter convention (fixed; cluster networks depend on it):
///   x1' =  sqrt(T) x1 + sqrt(1-T) x2
///   x2' = -sqrt(1-T) x1 + sqrt(T) x2
/// and the same on p.
namespace cvsim {

struct BeamSplitterSpec {
    double transmittance;

    /// Throws InvalidArgument unless 0 < T < 1.
    static BeamSplitterSpec from_transmittance(double t);
    double reflectance() const { return 1.0 - transmittance; }
};

SymplecticOp beamsplitter(const BeamSplitterSpec& spec);
SymplecticOp beamsplitter(double transmittance);

/// (x, p) -> (p, -x); equal to phase(-pi/2).
SymplecticOp fourier();

/// Rotation by theta radians: x' = x cos - p sin, p' = x sin + p cos.
SymplecticOp phase(double theta);

/// diag(e^-r, e^r).
SymplecticOp squeezer(double r);

SymplecticOp displace(double dx, double dp);

struct EprParams {
    double v_sq_x = 1.0;
    double v_sq_p = 1.0;
    /// Anti-squeezed variances; default to the pure values 1/v_sq.
    std::optional<double> v_anti_x;
    std::optional<double> v_anti_p;

    static EprParams symmetric(double v_sq) { return EprParams{v_sq, v_sq, std::nullopt, std::nullopt}; }
};

/// Mode A = output 1, mode B = output 2 of a half beam splitter fed by an
/// x-squeezed and a p-squeezed vacuum. Var(xA - xB) = 2 v_sq_x and
/// Var(pA + pB) = 2 v_sq_p.
GaussianState epr_source(const EprParams& params);

/// A measured circuit at ensemble level. The process acts on the caller's
/// modes followed by the ancilla modes, which it consumes.
struct AncillaProcess {
    LinearProcess process;
    GaussianState ancilla;

    GaussianState apply(const GaussianState& input) const;
};

/// -sqrt(1-T)/sqrt(T).
double offline_squeezer_gain(double transmittance);

/// Beam splitter T with an x-squeezed ancilla on port 2, homodyne of p on
/// the tapped port, feedforward of gain offline_squeezer_gain(T) onto p.
/// x_out = sqrt(T) x_in + sqrt(1-T) x_anc, p_out = p_in / sqrt(T).
AncillaProcess offline_squeezer(double transmittance, const GaussianState& ancilla);

}  // namespace cvsim
