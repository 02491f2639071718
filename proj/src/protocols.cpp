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

#include "cvsim/protocols.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>

namespace cvsim {
namespace {

void require_single_mode(const GaussianState& s, const char* what) {
    if (s.n_modes() != 1) {
        throw Error(ErrorKind::InvalidArgument, std::string(what) + " must be single-mode");
    }
}

void require_reflectance(double r) {
    if (!(r > 0.0 && r < 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "reflectance must lie in (0, 1), got " + std::to_string(r));
    }
}

double ratio_at(double lhs_x, double lhs_p, double k) { return std::max(lhs_x, lhs_p) / (2.0 * k); }

}  // namespace

LinearProcess teleport_map(double gain_x, double gain_p) {
    if (!std::isfinite(gain_x) || !std::isfinite(gain_p)) {
        throw Error(ErrorKind::InvalidArgument, "teleportation gains must be finite");
    }
    Matrix m = Matrix::Zero(2, 6);
    m(0, 0) = gain_x;
    m(0, 2) = -gain_x;
    m(0, 4) = 1.0;
    m(1, 1) = gain_p;
    m(1, 3) = gain_p;
    m(1, 5) = 1.0;
    return LinearProcess::from_matrix(std::move(m));
}

GaussianState teleport(const GaussianState& input, const TeleportConfig& cfg) {
    require_single_mode(input, "teleportation input");
    const GaussianState joint = tensor(input, epr_source(cfg.epr));
    return linear_process(teleport_map(cfg.gain_x, cfg.gain_p), joint);
}

GaussianState teleport_sequential(const GaussianState& input, std::span<const TeleportConfig> hops) {
    GaussianState state = input;
    for (const TeleportConfig& hop : hops) {
        state = teleport(state, hop);
    }
    return state;
}

double teleport_coherent_fidelity(std::span<const TeleportConfig> hops) {
    double added_x = 0.0;
    double added_p = 0.0;
    for (const TeleportConfig& hop : hops) {
        added_x += hop.epr.v_sq_x;
        added_p += hop.epr.v_sq_p;
    }
    return 1.0 / std::sqrt((1.0 + added_x) * (1.0 + added_p));
}

AncillaProcess gate_teleport_identity_process(double ancilla_v_sq, std::optional<double> ancilla_v_anti) {
    GaussianState ancilla = squeezed_vacuum(ancilla_v_sq, ancilla_v_anti.value_or(1.0 / ancilla_v_sq), 0.0);
    // After QND(1): x_anc' = x_anc + x_in, p_in' = p_in - p_anc. Feeding
    // p_in' forward onto p_anc leaves p_anc' = p_in.
    Matrix m = Matrix::Zero(2, 4);
    m(0, 0) = 1.0;
    m(0, 2) = 1.0;
    m(1, 1) = 1.0;
    return AncillaProcess{LinearProcess::from_matrix(std::move(m)), std::move(ancilla)};
}

GaussianState gate_teleport_identity(const GaussianState& input, double ancilla_v_sq,
                                     std::optional<double> ancilla_v_anti) {
    require_single_mode(input, "gate teleportation input");
    return gate_teleport_identity_process(ancilla_v_sq, ancilla_v_anti).apply(input);
}

SymplecticOp qnd_ideal(double gain) {
    if (!std::isfinite(gain)) {
        throw Error(ErrorKind::InvalidArgument, "QND gain must be finite");
    }
    Matrix s = Matrix::Identity(4, 4);
    s(2, 0) = gain;
    s(1, 3) = -gain;
    return SymplecticOp::from_matrix(std::move(s));
}

double unity_gain_reflectance() { return (3.0 - std::sqrt(5.0)) / 2.0; }

double interaction_gain(double reflectance) {
    require_reflectance(reflectance);
    return 1.0 / std::sqrt(reflectance) - std::sqrt(reflectance);
}

double reflectance_for_gain(double gain) {
    if (!(gain > 0.0) || !std::isfinite(gain)) {
        throw Error(ErrorKind::InvalidArgument, "interaction gain must be positive and finite");
    }
    const double root = (-gain + std::sqrt(gain * gain + 4.0)) / 2.0;
    return root * root;
}

AncillaProcess qnd_offline(double reflectance, const GaussianState& ancilla_a, const GaussianState& ancilla_b) {
    require_reflectance(reflectance);
    require_single_mode(ancilla_a, "ancilla A");
    require_single_mode(ancilla_b, "ancilla B");
    const double r = reflectance;
    const double a = std::sqrt((1.0 - r) / (1.0 + r));
    const double b = std::sqrt(r * (1.0 - r) / (1.0 + r));
    const double g = interaction_gain(r);

    // Columns: x1 p1 x2 p2 xA pA xB pB.
    Matrix m = Matrix::Zero(4, 8);
    m(0, 0) = 1.0;
    m(0, 4) = -a;
    m(1, 1) = 1.0;
    m(1, 3) = -g;
    m(1, 7) = b;
    m(2, 2) = 1.0;
    m(2, 0) = g;
    m(2, 4) = b;
    m(3, 3) = 1.0;
    m(3, 7) = a;
    return AncillaProcess{LinearProcess::from_matrix(std::move(m)), tensor(ancilla_a, ancilla_b)};
}

AncillaProcess qnd_offline(double reflectance, double ancilla_v_sq, std::optional<double> ancilla_v_anti) {
    const double anti = ancilla_v_anti.value_or(1.0 / ancilla_v_sq);
    return qnd_offline(reflectance, squeezed_vacuum(ancilla_v_sq, anti, 0.0),
                       squeezed_vacuum(ancilla_v_sq, anti, std::numbers::pi / 2.0));
}

ConditionalVariance conditional_variance(const GaussianState& state, const QuadratureForm& signal,
                                         const QuadratureForm& meter) {
    const double v_s = form_stats(state, signal).variance;
    const double v_m = form_stats(state, meter).variance;
    if (v_m <= kDegenerateMeasurementVariance) {
        throw Error(ErrorKind::DegenerateMeasurement, "meter form has vanishing variance");
    }
    const double c = form_covariance(state, signal, meter);
    return ConditionalVariance{v_s - c * c / v_m, c / v_m};
}

DuanWitness DuanWitness::qnd_output() {
    return DuanWitness{QuadratureForm::x(2, 0), QuadratureForm::x(2, 1), QuadratureForm::p(2, 1),
                       QuadratureForm::p(2, 0)};
}

DuanWitness DuanWitness::epr() {
    return DuanWitness{QuadratureForm::x(2, 0), QuadratureForm::x(2, 1), QuadratureForm::p(2, 0),
                       QuadratureForm::p(2, 1)};
}

DuanResult duan_check(const GaussianState& state, const DuanWitness& w, double k) {
    if (!(k > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "Duan weight k must be positive");
    }
    const double lhs_x = form_stats(state, w.x_first - k * w.x_second).variance;
    const double lhs_p = form_stats(state, w.p_first + k * w.p_second).variance;
    const double bound = 2.0 * k;
    return DuanResult{k, lhs_x, lhs_p, bound, lhs_x < bound && lhs_p < bound};
}

DuanResult duan_scan(const GaussianState& state, const DuanWitness& w) {
    const auto objective = [&](double log_k) {
        const DuanResult r = duan_check(state, w, std::exp(log_k));
        return ratio_at(r.lhs_x, r.lhs_p, r.k);
    };
    std::uintmax_t max_iter = 500;
    const auto best = boost::math::tools::brent_find_minima(objective, std::log(1e-6), std::log(1e6),
                                                            std::numeric_limits<double>::digits / 2, max_iter);
    return duan_check(state, w, std::exp(best.first));
}

double duan_min_ratio(const GaussianState& state, const QuadratureForm& first, const QuadratureForm& second,
                      double sign) {
    const double v1 = form_stats(state, first).variance;
    const double v2 = form_stats(state, second).variance;
    const double c = form_covariance(state, first, second);
    return std::sqrt(v1 * v2) + sign * c;
}

QndReport qnd_criteria(const GaussianState& out, const QndSignalVariances& inputs, double gain) {
    if (out.n_modes() != 2) {
        throw Error(ErrorKind::InvalidArgument, "QND criteria need a two-mode output state");
    }
    const auto x1 = QuadratureForm::x(2, 0);
    const auto x2 = QuadratureForm::x(2, 1);
    const auto p1 = QuadratureForm::p(2, 0);
    const auto p2 = QuadratureForm::p(2, 1);
    const double vx1 = form_stats(out, x1).variance;
    const double vx2 = form_stats(out, x2).variance;
    const double vp1 = form_stats(out, p1).variance;
    const double vp2 = form_stats(out, p2).variance;
    if (vx1 <= 0.0 || vx2 <= 0.0 || vp1 <= 0.0 || vp2 <= 0.0) {
        throw Error(ErrorKind::DegenerateMeasurement, "QND output quadrature has zero variance");
    }
    const auto cond_x = conditional_variance(out, x1, x2);
    const auto cond_p = conditional_variance(out, p2, p1);
    const DuanWitness w = DuanWitness::qnd_output();

    QndReport r{};
    r.t_s_x = inputs.x1 / vx1;
    r.t_m_x = gain * gain * inputs.x1 / vx2;
    r.t_s_p = inputs.p2 / vp2;
    r.t_m_p = gain * gain * inputs.p2 / vp1;
    r.v_cond_x = cond_x.v_cond;
    r.v_cond_p = cond_p.v_cond;
    r.k_opt_x = cond_x.k_opt;
    r.k_opt_p = cond_p.k_opt;
    r.duan_min_x = duan_min_ratio(out, w.x_first, w.x_second, -1.0);
    r.duan_min_p = duan_min_ratio(out, w.p_first, w.p_second, 1.0);
    r.duan = duan_scan(out, w);
    r.interaction_gain = gain;
    return r;
}

GaussianState qnd_offline_vacuum_output(double reflectance, double ancilla_v_sq) {
    return qnd_offline(reflectance, ancilla_v_sq).apply(vacuum(2));
}

double calibrate_ancilla_for_vcond(double target, double reflectance) {
    const auto x1 = QuadratureForm::x(2, 0);
    const auto x2 = QuadratureForm::x(2, 1);
    const auto f = [&](double log_v) {
        const GaussianState out = qnd_offline_vacuum_output(reflectance, std::exp(log_v));
        return conditional_variance(out, x1, x2).v_cond - target;
    };
    const double lo = std::log(1e-12);
    const double hi = std::log(1e6);
    const double f_lo = f(lo);
    const double f_hi = f(hi);
    if (f_lo * f_hi > 0.0) {
        throw Error(ErrorKind::InvalidArgument, "conditional variance target not reachable with a squeezed ancilla");
    }
    std::uintmax_t max_iter = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi,
                                                         boost::math::tools::eps_tolerance<double>(52), max_iter);
    return std::exp(0.5 * (a + b));
}

}  // namespace cvsim
