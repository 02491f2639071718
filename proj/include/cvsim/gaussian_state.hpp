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

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

/// Gaussian states of n optical modes and the exact operations on them.
///
/// Conventions used throughout the library:
///  - Quadratures are interleaved: (x_1, p_1, x_2, p_2, ..., x_n, p_n).
///  - The vacuum quadrature variance is 1, so the vacuum covariance is the
///    identity and [x, p] = 2i. Other unit conventions only rescale reports
///    (see UnitsConvention).
///  - Omega is block-diagonal with 2x2 blocks [[0, 1], [-1, 0]]; physical
///    covariances satisfy cov + i Omega >= 0.
namespace cvsim {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kSymmetryTolerance = 1e-9;
inline constexpr double kPhysicalityTolerance = 1e-9;
inline constexpr double kSymplecticTolerance = 1e-9;
inline constexpr double kDegenerateMeasurementVariance = 1e-12;

enum class ErrorKind {
    InvalidArgument,
    Unphysical,
    NonSymplectic,
    NonCanonical,
    DegenerateMeasurement,
    SingularCovariance,
    NotPure,
};

class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

   private:
    ErrorKind kind_;
};

/// Reporting rescaling. Computation always happens with vacuum variance 1;
/// a convention of 1/2 corresponds to hbar = 1 and 1/4 to hbar = 1/2.
class UnitsConvention {
   public:
    UnitsConvention() = default;
    /// Accepts 1, 0.5 or 0.25.
    static UnitsConvention with_vacuum_variance(double reporting_vacuum_variance);

    double reporting_vacuum_variance() const { return vacuum_variance_; }
    double variance(double internal) const { return internal * vacuum_variance_; }
    double amplitude(double internal) const;

    bool operator==(const UnitsConvention&) const = default;

   private:
    explicit UnitsConvention(double v) : vacuum_variance_(v) {}
    double vacuum_variance_ = 1.0;
};

/// The symplectic form for n modes.
Matrix symplectic_form(std::size_t n_modes);

/// Smallest eigenvalue of the Hermitian matrix cov + i Omega.
double uncertainty_margin(const Matrix& cov);

bool is_physical(const Matrix& cov, double tolerance = kPhysicalityTolerance);

/// 10 log10(v / reference).
double to_db(double variance, double reference = 1.0);
double from_db(double db, double reference = 1.0);

class GaussianState;

namespace detail {
// Symmetrizes without the eigenvalue check. Used by maps that preserve
// physicality exactly (symplectic maps, conditioning).
GaussianState make_state_unchecked(Vector mean, Matrix cov);
}  // namespace detail

class GaussianState {
   public:
    /// Validates length, symmetry and the uncertainty relation. The stored
    /// covariance is the symmetrized input.
    static GaussianState from_moments(Vector mean, Matrix cov);

    std::size_t n_modes() const { return static_cast<std::size_t>(mean_.size()) / 2; }
    const Vector& mean() const { return mean_; }
    const Matrix& cov() const { return cov_; }

    /// 1 / sqrt(det cov).
    double purity() const;
    bool is_pure(double tolerance = 1e-9) const { return purity() >= 1.0 - tolerance; }

    /// Marginal on the listed modes, in the listed order.
    GaussianState marginal(std::span<const std::size_t> modes) const;

   private:
    GaussianState(Vector mean, Matrix cov) : mean_(std::move(mean)), cov_(std::move(cov)) {}
    friend GaussianState detail::make_state_unchecked(Vector mean, Matrix cov);

    Vector mean_;
    Matrix cov_;
};

/// A Gaussian unitary: xi -> S xi + d with S Omega S^T = Omega.
class SymplecticOp {
   public:
    static SymplecticOp from_matrix(Matrix s, Vector d);
    static SymplecticOp from_matrix(Matrix s);
    static SymplecticOp identity(std::size_t n_modes);

    std::size_t n_modes() const { return static_cast<std::size_t>(s_.rows()) / 2; }
    const Matrix& matrix() const { return s_; }
    const Vector& displacement() const { return d_; }

    /// this after other, i.e. xi -> this(other(xi)).
    SymplecticOp after(const SymplecticOp& other) const;

   private:
    SymplecticOp(Matrix s, Vector d) : s_(std::move(s)), d_(std::move(d)) {}
    Matrix s_;
    Vector d_;
};

/// A real linear combination of quadratures plus an offset.
class QuadratureForm {
   public:
    static QuadratureForm from_coefficients(Vector coeffs, double offset = 0.0);
    static QuadratureForm x(std::size_t n_modes, std::size_t mode);
    static QuadratureForm p(std::size_t n_modes, std::size_t mode);
    /// cos(angle) x + sin(angle) p on one mode.
    static QuadratureForm rotated(std::size_t n_modes, std::size_t mode, double angle);

    std::size_t n_modes() const { return static_cast<std::size_t>(coeffs_.size()) / 2; }
    const Vector& coeffs() const { return coeffs_; }
    double offset() const { return offset_; }

    QuadratureForm operator+(const QuadratureForm& other) const;
    QuadratureForm operator-(const QuadratureForm& other) const;
    QuadratureForm operator*(double scale) const;
    friend QuadratureForm operator*(double scale, const QuadratureForm& f) { return f * scale; }

   private:
    QuadratureForm(Vector coeffs, double offset) : coeffs_(std::move(coeffs)), offset_(offset) {}
    Vector coeffs_;
    double offset_;
};

/// Ensemble-level affine map from n input modes to m output modes,
/// xi_out = M xi_in + d, with canonical output commutators M Omega_n M^T = Omega_m.
class LinearProcess {
   public:
    static LinearProcess from_matrix(Matrix m, Vector d);
    static LinearProcess from_matrix(Matrix m);
    static LinearProcess from_symplectic(const SymplecticOp& op);

    std::size_t n_inputs() const { return static_cast<std::size_t>(m_.cols()) / 2; }
    std::size_t n_outputs() const { return static_cast<std::size_t>(m_.rows()) / 2; }
    const Matrix& matrix() const { return m_; }
    const Vector& displacement() const { return d_; }

    /// this after other.
    LinearProcess after(const LinearProcess& other) const;

   private:
    LinearProcess(Matrix m, Vector d) : m_(std::move(m)), d_(std::move(d)) {}
    Matrix m_;
    Vector d_;
};

struct FormStats {
    double mean;
    double variance;
};

GaussianState vacuum(std::size_t n_modes);

/// Variance v_sq along `angle` (radians from the x axis), v_anti orthogonal.
/// Requires v_sq * v_anti >= 1.
GaussianState squeezed_vacuum(double v_sq, double v_anti, double angle = 0.0);

GaussianState coherent(double x_mean, double p_mean);

/// Mode order: a's modes, then b's.
GaussianState tensor(const GaussianState& a, const GaussianState& b);

/// Applies op to the listed modes (op mode k acts on modes[k]).
GaussianState apply(const SymplecticOp& op, const GaussianState& state, std::span<const std::size_t> modes);
GaussianState apply(const SymplecticOp& op, const GaussianState& state);

GaussianState linear_process(const LinearProcess& process, const GaussianState& state);

/// Mean and variance of the homodyne outcome cos(angle) x + sin(angle) p.
FormStats homodyne_marginal(const GaussianState& state, std::size_t mode, double angle);

/// Conditions on the homodyne outcome and removes the measured mode.
GaussianState homodyne_project(const GaussianState& state, std::size_t mode, double angle, double outcome);

FormStats form_stats(const GaussianState& state, const QuadratureForm& form);

/// Covariance between two forms.
double form_covariance(const GaussianState& state, const QuadratureForm& a, const QuadratureForm& b);

/// Wigner function at a phase-space point of length 2n.
double wigner(const GaussianState& state, const Vector& point);

/// Overlap <psi|rho|psi> of a pure single-mode state with another single-mode state.
double fidelity(const GaussianState& pure, const GaussianState& other);

/// Phase of the coherent amplitude of one mode, atan2(<p>, <x>), in radians.
double phase_angle(const GaussianState& state, std::size_t mode);

}  // namespace cvsim
