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

#include "cvsim/gaussian_state.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <vector>

namespace cvsim {
namespace {

Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

std::string describe(const char* what, double value) {
    std::ostringstream out;
    out << what << " (" << value << ")";
    return out.str();
}

void check_modes(std::span<const std::size_t> modes, std::size_t n_modes) {
    std::vector<bool> seen(n_modes, false);
    for (std::size_t m : modes) {
        if (m >= n_modes) {
            throw Error(ErrorKind::InvalidArgument,
                        "mode index " + std::to_string(m) + " out of range for " + std::to_string(n_modes) + " modes");
        }
        if (seen[m]) {
            throw Error(ErrorKind::InvalidArgument, "mode index " + std::to_string(m) + " listed twice");
        }
        seen[m] = true;
    }
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

namespace detail {
GaussianState make_state_unchecked(Vector mean, Matrix cov) {
    Matrix sym = symmetrized(cov);
    return GaussianState(std::move(mean), std::move(sym));
}
}  // namespace detail

using detail::make_state_unchecked;

UnitsConvention UnitsConvention::with_vacuum_variance(double v) {
    if (v != 1.0 && v != 0.5 && v != 0.25) {
        throw Error(ErrorKind::InvalidArgument, describe("reporting vacuum variance must be 1, 0.5 or 0.25", v));
    }
    return UnitsConvention(v);
}

double UnitsConvention::amplitude(double internal) const { return internal * std::sqrt(vacuum_variance_); }

Matrix symplectic_form(std::size_t n_modes) {
    Matrix omega = Matrix::Zero(2 * n_modes, 2 * n_modes);
    for (std::size_t k = 0; k < n_modes; k++) {
        omega(2 * k, 2 * k + 1) = 1.0;
        omega(2 * k + 1, 2 * k) = -1.0;
    }
    return omega;
}

double uncertainty_margin(const Matrix& cov) {
    const auto n = static_cast<std::size_t>(cov.rows()) / 2;
    Eigen::MatrixXcd h = cov.cast<std::complex<double>>();
    h += std::complex<double>(0.0, 1.0) * symplectic_form(n).cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

bool is_physical(const Matrix& cov, double tolerance) { return uncertainty_margin(cov) >= -tolerance; }

double to_db(double variance, double reference) { return 10.0 * std::log10(variance / reference); }

double from_db(double db, double reference) { return reference * std::pow(10.0, db / 10.0); }

GaussianState GaussianState::from_moments(Vector mean, Matrix cov) {
    if (mean.size() == 0 || mean.size() % 2 != 0) {
        throw Error(ErrorKind::InvalidArgument, "mean vector must have positive even length");
    }
    if (cov.rows() != mean.size() || cov.cols() != mean.size()) {
        throw Error(ErrorKind::InvalidArgument, "covariance shape does not match the mean vector");
    }
    if (!mean.allFinite() || !cov.allFinite()) {
        throw Error(ErrorKind::InvalidArgument, "moments must be finite");
    }
    const double asym = max_abs(cov - cov.transpose());
    if (asym > kSymmetryTolerance) {
        throw Error(ErrorKind::Unphysical, describe("covariance is not symmetric", asym));
    }
    Matrix sym = symmetrized(cov);
    const double margin = uncertainty_margin(sym);
    if (margin < -kPhysicalityTolerance) {
        throw Error(ErrorKind::Unphysical, describe("covariance violates the uncertainty relation, margin", margin));
    }
    return GaussianState(std::move(mean), std::move(sym));
}

double GaussianState::purity() const { return 1.0 / std::sqrt(cov_.determinant()); }

GaussianState GaussianState::marginal(std::span<const std::size_t> modes) const {
    check_modes(modes, n_modes());
    const auto k = static_cast<Eigen::Index>(modes.size());
    Vector mean(2 * k);
    Matrix cov(2 * k, 2 * k);
    for (Eigen::Index i = 0; i < k; i++) {
        const auto mi = static_cast<Eigen::Index>(modes[i]);
        mean.segment<2>(2 * i) = mean_.segment<2>(2 * mi);
        for (Eigen::Index j = 0; j < k; j++) {
            const auto mj = static_cast<Eigen::Index>(modes[j]);
            cov.block<2, 2>(2 * i, 2 * j) = cov_.block<2, 2>(2 * mi, 2 * mj);
        }
    }
    return make_state_unchecked(std::move(mean), std::move(cov));
}

SymplecticOp SymplecticOp::from_matrix(Matrix s, Vector d) {
    if (s.rows() != s.cols() || s.rows() == 0 || s.rows() % 2 != 0 || d.size() != s.rows()) {
        throw Error(ErrorKind::InvalidArgument, "symplectic matrix must be 2n x 2n with a 2n displacement");
    }
    const Matrix omega = symplectic_form(static_cast<std::size_t>(s.rows()) / 2);
    const double defect = max_abs(s * omega * s.transpose() - omega);
    if (defect > kSymplecticTolerance) {
        throw Error(ErrorKind::NonSymplectic, describe("matrix is not symplectic, defect", defect));
    }
    return SymplecticOp(std::move(s), std::move(d));
}

SymplecticOp SymplecticOp::from_matrix(Matrix s) {
    Vector d = Vector::Zero(s.rows());
    return from_matrix(std::move(s), std::move(d));
}

SymplecticOp SymplecticOp::identity(std::size_t n_modes) {
    return SymplecticOp(Matrix::Identity(2 * n_modes, 2 * n_modes), Vector::Zero(2 * n_modes));
}

SymplecticOp SymplecticOp::after(const SymplecticOp& other) const {
    if (other.n_modes() != n_modes()) {
        throw Error(ErrorKind::InvalidArgument, "composing symplectic ops of different sizes");
    }
    return SymplecticOp(s_ * other.s_, s_ * other.d_ + d_);
}

QuadratureForm QuadratureForm::from_coefficients(Vector coeffs, double offset) {
    if (coeffs.size() == 0 || coeffs.size() % 2 != 0) {
        throw Error(ErrorKind::InvalidArgument, "form coefficients must have positive even length");
    }
    if (coeffs.cwiseAbs().maxCoeff() == 0.0) {
        throw Error(ErrorKind::InvalidArgument, "quadrature form needs a nonzero coefficient");
    }
    return QuadratureForm(std::move(coeffs), offset);
}

QuadratureForm QuadratureForm::x(std::size_t n_modes, std::size_t mode) { return rotated(n_modes, mode, 0.0); }

QuadratureForm QuadratureForm::p(std::size_t n_modes, std::size_t mode) {
    if (mode >= n_modes) {
        throw Error(ErrorKind::InvalidArgument, "form mode out of range");
    }
    Vector c = Vector::Zero(2 * n_modes);
    c(2 * mode + 1) = 1.0;
    return QuadratureForm(std::move(c), 0.0);
}

QuadratureForm QuadratureForm::rotated(std::size_t n_modes, std::size_t mode, double angle) {
    if (mode >= n_modes) {
        throw Error(ErrorKind::InvalidArgument, "form mode out of range");
    }
    Vector c = Vector::Zero(2 * n_modes);
    c(2 * mode) = std::cos(angle);
    c(2 * mode + 1) = std::sin(angle);
    return QuadratureForm(std::move(c), 0.0);
}

QuadratureForm QuadratureForm::operator+(const QuadratureForm& other) const {
    if (other.coeffs_.size() != coeffs_.size()) {
        throw Error(ErrorKind::InvalidArgument, "adding forms over different mode counts");
    }
    return QuadratureForm(coeffs_ + other.coeffs_, offset_ + other.offset_);
}

QuadratureForm QuadratureForm::operator-(const QuadratureForm& other) const { return *this + other * -1.0; }

QuadratureForm QuadratureForm::operator*(double scale) const { return QuadratureForm(coeffs_ * scale, offset_ * scale); }

LinearProcess LinearProcess::from_matrix(Matrix m, Vector d) {
    if (m.rows() == 0 || m.cols() == 0 || m.rows() % 2 != 0 || m.cols() % 2 != 0 || d.size() != m.rows()) {
        throw Error(ErrorKind::InvalidArgument, "linear process must be 2m x 2n with a 2m displacement");
    }
    const Matrix omega_in = symplectic_form(static_cast<std::size_t>(m.cols()) / 2);
    const Matrix omega_out = symplectic_form(static_cast<std::size_t>(m.rows()) / 2);
    const double defect = max_abs(m * omega_in * m.transpose() - omega_out);
    if (defect > kSymplecticTolerance) {
        throw Error(ErrorKind::NonCanonical, describe("process output is not canonical, defect", defect));
    }
    return LinearProcess(std::move(m), std::move(d));
}

LinearProcess LinearProcess::from_matrix(Matrix m) {
    Vector d = Vector::Zero(m.rows());
    return from_matrix(std::move(m), std::move(d));
}

LinearProcess LinearProcess::from_symplectic(const SymplecticOp& op) {
    return LinearProcess(op.matrix(), op.displacement());
}

LinearProcess LinearProcess::after(const LinearProcess& other) const {
    if (other.n_outputs() != n_inputs()) {
        throw Error(ErrorKind::InvalidArgument, "composing processes with mismatched mode counts");
    }
    return LinearProcess(m_ * other.m_, m_ * other.d_ + d_);
}

GaussianState vacuum(std::size_t n_modes) {
    if (n_modes == 0) {
        throw Error(ErrorKind::InvalidArgument, "vacuum needs at least one mode");
    }
    return make_state_unchecked(Vector::Zero(2 * n_modes), Matrix::Identity(2 * n_modes, 2 * n_modes));
}

GaussianState squeezed_vacuum(double v_sq, double v_anti, double angle) {
    if (!(v_sq > 0.0) || !(v_anti > 0.0) || !std::isfinite(v_sq) || !std::isfinite(v_anti)) {
        throw Error(ErrorKind::Unphysical, "squeezed variances must be positive and finite");
    }
    if (v_sq * v_anti < 1.0 - kPhysicalityTolerance) {
        throw Error(ErrorKind::Unphysical, describe("v_sq * v_anti below the vacuum bound", v_sq * v_anti));
    }
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    Eigen::Matrix2d rot;
    rot << c, -s, s, c;
    const Eigen::Matrix2d cov = rot * Eigen::Vector2d(v_sq, v_anti).asDiagonal() * rot.transpose();
    return make_state_unchecked(Vector::Zero(2), Matrix(cov));
}

GaussianState coherent(double x_mean, double p_mean) {
    Vector mean(2);
    mean << x_mean, p_mean;
    return make_state_unchecked(std::move(mean), Matrix::Identity(2, 2));
}

GaussianState tensor(const GaussianState& a, const GaussianState& b) {
    const auto na = a.mean().size();
    const auto nb = b.mean().size();
    Vector mean(na + nb);
    mean << a.mean(), b.mean();
    Matrix cov = Matrix::Zero(na + nb, na + nb);
    cov.topLeftCorner(na, na) = a.cov();
    cov.bottomRightCorner(nb, nb) = b.cov();
    return make_state_unchecked(std::move(mean), std::move(cov));
}

GaussianState apply(const SymplecticOp& op, const GaussianState& state, std::span<const std::size_t> modes) {
    if (modes.size() != op.n_modes()) {
        throw Error(ErrorKind::InvalidArgument, "op acts on " + std::to_string(op.n_modes()) + " modes but " +
                                                    std::to_string(modes.size()) + " were given");
    }
    check_modes(modes, state.n_modes());

    // Index list of the quadratures the op touches.
    const auto k = static_cast<Eigen::Index>(2 * modes.size());
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < modes.size(); i++) {
        idx[2 * i] = static_cast<Eigen::Index>(2 * modes[i]);
        idx[2 * i + 1] = static_cast<Eigen::Index>(2 * modes[i] + 1);
    }

    const Matrix& s = op.matrix();
    const Vector& mu = state.mean();
    const Matrix& v = state.cov();

    Vector mean = mu;
    Vector local_mean = mu(idx);
    mean(idx) = s * local_mean + op.displacement();

    // Rows of the touched quadratures: S * V[idx, :]. Then columns.
    Matrix cov = v;
    Matrix rows = s * v(idx, Eigen::all);
    cov(idx, Eigen::all) = rows;
    Matrix cols = cov(Eigen::all, idx) * s.transpose();
    cov(Eigen::all, idx) = cols;
    return make_state_unchecked(std::move(mean), std::move(cov));
}

GaussianState apply(const SymplecticOp& op, const GaussianState& state) {
    std::vector<std::size_t> all(state.n_modes());
    for (std::size_t i = 0; i < all.size(); i++) {
        all[i] = i;
    }
    return apply(op, state, all);
}

GaussianState linear_process(const LinearProcess& process, const GaussianState& state) {
    if (process.n_inputs() != state.n_modes()) {
        throw Error(ErrorKind::InvalidArgument, "process expects " + std::to_string(process.n_inputs()) +
                                                    " input modes, state has " + std::to_string(state.n_modes()));
    }
    const Matrix& m = process.matrix();
    return make_state_unchecked(m * state.mean() + process.displacement(), m * state.cov() * m.transpose());
}

FormStats homodyne_marginal(const GaussianState& state, std::size_t mode, double angle) {
    return form_stats(state, QuadratureForm::rotated(state.n_modes(), mode, angle));
}

GaussianState homodyne_project(const GaussianState& state, std::size_t mode, double angle, double outcome) {
    const std::size_t n = state.n_modes();
    if (mode >= n) {
        throw Error(ErrorKind::InvalidArgument, "homodyne mode out of range");
    }
    if (n == 1) {
        throw Error(ErrorKind::InvalidArgument, "homodyne on the last remaining mode leaves no state");
    }
    const Vector c = QuadratureForm::rotated(n, mode, angle).coeffs();
    const Matrix& v = state.cov();
    const Vector vc = v * c;
    const double var = c.dot(vc);
    if (var <= kDegenerateMeasurementVariance) {
        throw Error(ErrorKind::DegenerateMeasurement, describe("measured quadrature has vanishing variance", var));
    }
    const double innovation = outcome - c.dot(state.mean());
    const Vector mean_full = state.mean() + vc * (innovation / var);
    const Matrix cov_full = v - vc * vc.transpose() / var;

    std::vector<Eigen::Index> keep;
    keep.reserve(2 * (n - 1));
    for (std::size_t m = 0; m < n; m++) {
        if (m != mode) {
            keep.push_back(static_cast<Eigen::Index>(2 * m));
            keep.push_back(static_cast<Eigen::Index>(2 * m + 1));
        }
    }
    return make_state_unchecked(mean_full(keep), cov_full(keep, keep));
}

FormStats form_stats(const GaussianState& state, const QuadratureForm& form) {
    if (form.n_modes() != state.n_modes()) {
        throw Error(ErrorKind::InvalidArgument, "form and state mode counts differ");
    }
    const Vector& c = form.coeffs();
    return FormStats{c.dot(state.mean()) + form.offset(), c.dot(state.cov() * c)};
}

double form_covariance(const GaussianState& state, const QuadratureForm& a, const QuadratureForm& b) {
    if (a.n_modes() != state.n_modes() || b.n_modes() != state.n_modes()) {
        throw Error(ErrorKind::InvalidArgument, "form and state mode counts differ");
    }
    return a.coeffs().dot(state.cov() * b.coeffs());
}

double wigner(const GaussianState& state, const Vector& point) {
    if (point.size() != state.mean().size()) {
        throw Error(ErrorKind::InvalidArgument, "phase-space point has the wrong length");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(state.cov(), Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi / lo >= 1e12) {
        throw Error(ErrorKind::SingularCovariance, describe("covariance is singular or ill-conditioned, min eigenvalue", lo));
    }
    const Eigen::LLT<Matrix> llt(state.cov());
    const Vector delta = point - state.mean();
    const double quad = delta.dot(llt.solve(delta));
    const double det = state.cov().determinant();
    const double n = static_cast<double>(state.n_modes());
    return std::exp(-0.5 * quad) / (std::pow(2.0 * std::numbers::pi, n) * std::sqrt(det));
}

double fidelity(const GaussianState& pure, const GaussianState& other) {
    if (pure.n_modes() != 1 || other.n_modes() != 1) {
        throw Error(ErrorKind::InvalidArgument, "fidelity is implemented for single-mode states only");
    }
    if (!pure.is_pure()) {
        throw Error(ErrorKind::NotPure, describe("first fidelity argument must be pure, purity", pure.purity()));
    }
    const Eigen::Matrix2d sum = pure.cov() + other.cov();
    const Eigen::Vector2d delta = other.mean() - pure.mean();
    const double quad = delta.dot(sum.inverse() * delta);
    return 2.0 * std::exp(-0.5 * quad) / std::sqrt(sum.determinant());
}

double phase_angle(const GaussianState& state, std::size_t mode) {
    if (mode >= state.n_modes()) {
        throw Error(ErrorKind::InvalidArgument, "mode out of range");
    }
    return std::atan2(state.mean()(2 * mode + 1), state.mean()(2 * mode));
}

}  // namespace cvsim
