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

#include "cvsim/elements.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace cvsim {

BeamSplitterSpec BeamSplitterSpec::from_transmittance(double t) {
    if (!(t > 0.0 && t < 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "beam splitter transmittance must lie in (0, 1), got " + std::to_string(t));
    }
    return BeamSplitterSpec{t};
}

SymplecticOp beamsplitter(const BeamSplitterSpec& spec) {
    const double t = std::sqrt(spec.transmittance);
    const double r = std::sqrt(spec.reflectance());
    Matrix s = Matrix::Zero(4, 4);
    for (int q = 0; q < 2; q++) {
        s(q, q) = t;
        s(q, 2 + q) = r;
        s(2 + q, q) = -r;
        s(2 + q, 2 + q) = t;
    }
    return SymplecticOp::from_matrix(std::move(s));
}

SymplecticOp beamsplitter(double transmittance) {
    return beamsplitter(BeamSplitterSpec::from_transmittance(transmittance));
}

SymplecticOp fourier() {
    Matrix s(2, 2);
    s << 0.0, 1.0, -1.0, 0.0;
    return SymplecticOp::from_matrix(std::move(s));
}

SymplecticOp phase(double theta) {
    const double c = std::cos(theta);
    const double sn = std::sin(theta);
    Matrix s(2, 2);
    s << c, -sn, sn, c;
    return SymplecticOp::from_matrix(std::move(s));
}

SymplecticOp squeezer(double r) {
    Matrix s = Matrix::Zero(2, 2);
    s(0, 0) = std::exp(-r);
    s(1, 1) = std::exp(r);
    return SymplecticOp::from_matrix(std::move(s));
}

SymplecticOp displace(double dx, double dp) {
    Vector d(2);
    d << dx, dp;
    return SymplecticOp::from_matrix(Matrix::Identity(2, 2), std::move(d));
}

GaussianState epr_source(const EprParams& params) {
    if (!(params.v_sq_x > 0.0) || !(params.v_sq_p > 0.0)) {
        throw Error(ErrorKind::Unphysical, "EPR squeezed variances must be positive");
    }
    const double anti_x = params.v_anti_x.value_or(1.0 / params.v_sq_x);
    const double anti_p = params.v_anti_p.value_or(1.0 / params.v_sq_p);
    const GaussianState pair = tensor(squeezed_vacuum(params.v_sq_x, anti_x, 0.0),
                                      squeezed_vacuum(params.v_sq_p, anti_p, std::numbers::pi / 2.0));
    return apply(beamsplitter(0.5), pair);
}

GaussianState AncillaProcess::apply(const GaussianState& input) const {
    return linear_process(process, tensor(input, ancilla));
}

double offline_squeezer_gain(double transmittance) {
    const auto spec = BeamSplitterSpec::from_transmittance(transmittance);
    return -std::sqrt(spec.reflectance()) / std::sqrt(spec.transmittance);
}

AncillaProcess offline_squeezer(double transmittance, const GaussianState& ancilla) {
    const auto spec = BeamSplitterSpec::from_transmittance(transmittance);
    if (ancilla.n_modes() != 1) {
        throw Error(ErrorKind::InvalidArgument, "offline squeezer ancilla must be single-mode");
    }
    const double t = std::sqrt(spec.transmittance);
    const double r = std::sqrt(spec.reflectance());
    const double g = offline_squeezer_gain(transmittance);

    // Rows after the beam splitter, then p_out = p1' + g p2'.
    Matrix m = Matrix::Zero(2, 4);
    m(0, 0) = t;
    m(0, 2) = r;
    m(1, 1) = t - g * r;
    m(1, 3) = r + g * t;
    return AncillaProcess{LinearProcess::from_matrix(std::move(m)), ancilla};
}

}  // namespace cvsim
