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

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cvsim/cluster.hpp"
#include "cvsim/gaussian_state.hpp"

/// The .cvc circuit language.
///
///   cvc 1
///   units vacuum=<f>
///   mode <id> vacuum | squeezed vsq=<f> [vanti=<f>] [angle=<deg>] | coherent [x=<f>] [p=<f>]
///   bs <id> <id> T=<f>
///   fourier <id>
///   phase <id> deg=<f>
///   squeeze <id> r=<f>
///   qnd <id> <id> G=<f>
///   homodyne <id> angle=<deg> -> <var>
///   ff <var> -> displace <id> <x|p> gain=<f>
///   displace <id> [x=<f>] [p=<f>]
///
/// One statement per line, '#' starts a comment. Angles are degrees.
/// Printing drops comments and writes every parameter explicitly.
namespace cvsim::dsl {

namespace codes {
inline constexpr std::string_view kEmpty = "E_EMPTY";
inline constexpr std::string_view kMissingHeader = "E_MISSING_HEADER";
inline constexpr std::string_view kBadVersion = "E_BAD_VERSION";
inline constexpr std::string_view kUnknownKeyword = "E_UNKNOWN_KEYWORD";
inline constexpr std::string_view kArity = "E_ARITY";
inline constexpr std::string_view kBadNumber = "E_BAD_NUMBER";
inline constexpr std::string_view kBadParam = "E_BAD_PARAM";
inline constexpr std::string_view kUndeclaredMode = "E_UNDECLARED_MODE";
inline constexpr std::string_view kDuplicateMode = "E_DUPLICATE_MODE";
inline constexpr std::string_view kUseAfterMeasure = "E_USE_AFTER_MEASURE";
inline constexpr std::string_view kUnboundVar = "E_UNBOUND_VAR";
inline constexpr std::string_view kDuplicateVar = "E_DUPLICATE_VAR";
inline constexpr std::string_view kBsTRange = "BS_T_RANGE";
inline constexpr std::string_view kUnphysicalSource = "E_UNPHYSICAL_SOURCE";
inline constexpr std::string_view kSameMode = "E_SAME_MODE";
inline constexpr std::string_view kBadQuadrature = "E_BAD_QUADRATURE";
inline constexpr std::string_view kBadUnits = "E_BAD_UNITS";
inline constexpr std::string_view kAllMeasured = "E_ALL_MEASURED";
// Reserved: the grammar has no way to use an outcome non-linearly.
inline constexpr std::string_view kNonlinearOutcome = "E_NONLINEAR_OUTCOME";
}  // namespace codes

/// 1-based; col_end is inclusive.
struct SourceSpan {
    std::size_t line = 0;
    std::size_t col_begin = 0;
    std::size_t col_end = 0;
    bool operator==(const SourceSpan&) const = default;
};

struct Diagnostic {
    std::string code;
    std::string message;
    SourceSpan span;
};

std::string format_diagnostic(const Diagnostic& d, std::string_view file_name = "");

enum class SourceKind { Vacuum, Squeezed, Coherent };

struct ModeDecl {
    std::string name;
    SourceKind source = SourceKind::Vacuum;
    double vsq = 1.0;
    double vanti = 1.0;
    double angle_deg = 0.0;
    double x = 0.0;
    double p = 0.0;
    bool operator==(const ModeDecl&) const = default;
};

struct BeamSplit {
    std::string a;
    std::string b;
    double transmittance;
    bool operator==(const BeamSplit&) const = default;
};

struct FourierOp {
    std::string mode;
    bool operator==(const FourierOp&) const = default;
};

struct PhaseOp {
    std::string mode;
    double deg;
    bool operator==(const PhaseOp&) const = default;
};

struct SqueezeOp {
    std::string mode;
    double r;
    bool operator==(const SqueezeOp&) const = default;
};

struct QndOp {
    std::string a;
    std::string b;
    double gain;
    bool operator==(const QndOp&) const = default;
};

struct Homodyne {
    std::string mode;
    double angle_deg;
    std::string var;
    bool operator==(const Homodyne&) const = default;
};

enum class Quadrature { X, P };

struct FeedForward {
    std::string var;
    std::string target;
    Quadrature quadrature;
    double gain;
    bool operator==(const FeedForward&) const = default;
};

struct DisplaceOp {
    std::string mode;
    double x;
    double p;
    bool operator==(const DisplaceOp&) const = default;
};

using Statement = std::variant<ModeDecl, BeamSplit, FourierOp, PhaseOp, SqueezeOp, QndOp, Homodyne, FeedForward, DisplaceOp>;

struct Program {
    std::optional<double> units_vacuum;
    std::vector<Statement> statements;
    /// Parallel to statements; not part of equality.
    std::vector<SourceSpan> spans;

    bool operator==(const Program& o) const { return units_vacuum == o.units_vacuum && statements == o.statements; }
    bool empty() const { return statements.empty(); }
};

struct ParseResult {
    Program program;
    std::vector<Diagnostic> errors;
    bool ok() const { return errors.empty(); }
};

/// Never throws on malformed input; all problems become diagnostics. A file
/// without statements is E_EMPTY.
ParseResult parse(std::string_view text);

std::string print(const Program& program);

/// Shortest text that reads back as exactly the same double.
std::string format_number(double v);

// ---------------------------------------------------------------------------
// Compilation

struct TrajectoryStep {
    enum class Kind { Gate, Homodyne, FeedForward };
    Kind kind;
    /// Gate: the op, acting on `modes` (indices into the live state).
    std::optional<SymplecticOp> op;
    std::vector<std::size_t> modes;
    /// Homodyne: measured live index and angle in radians.
    double angle = 0.0;
    /// Homodyne writes, feedforward reads this outcome slot.
    std::size_t slot = 0;
    /// FeedForward: live target index, quadrature (0 = x, 1 = p) and gain.
    std::size_t quadrature = 0;
    double gain = 0.0;
};

struct Plan {
    /// Declaration order; the initial state's mode order.
    std::vector<std::string> mode_names;
    GaussianState initial;
    std::vector<TrajectoryStep> steps;
    std::vector<std::string> outcome_names;
    /// Unmeasured modes in declaration order.
    std::vector<std::string> output_modes;
    /// Initial modes -> output modes, averaged over outcomes.
    LinearProcess ensemble;
    /// Present when nothing is measured.
    std::optional<SymplecticOp> unitary;
    UnitsConvention units;

    std::size_t n_measurements() const { return outcome_names.size(); }
};

/// Throws cvsim::Error on programs that fail validation or declare no modes.
Plan compile(const Program& program);

/// The leading modes of the initial state may be replaced by `input`.
GaussianState initial_state(const Plan& plan, const std::optional<GaussianState>& input = std::nullopt);

/// Ensemble output.
GaussianState execute(const Plan& plan, const std::optional<GaussianState>& input = std::nullopt);

/// Parses a form such as "p_w1 - x_w2 + 0.5 x_w3" over the plan's output modes.
QuadratureForm parse_form(const Plan& plan, std::string_view text);

// ---------------------------------------------------------------------------
// Program generators for the built-in experiments

struct TeleportHop {
    double v_sq_x;
    double v_sq_p;
};

/// First mode "in" is the input (vacuum placeholder); the output is the last
/// hop's Bob mode.
/// Squeezed sources default to pure states, v_anti = 1 / v_sq.
std::string teleport_program(const std::vector<TeleportHop>& hops, std::optional<double> v_anti = std::nullopt);
std::string gate_teleport_program(double ancilla_v_sq, std::optional<double> v_anti = std::nullopt);
/// Measured offline QND network on vacuum inputs m1, m2 with ancillas ancA
/// (x-squeezed) and ancB (p-squeezed).
std::string qnd_offline_program(double reflectance, double ancilla_v_sq, std::optional<double> v_anti = std::nullopt);
std::string cluster_program(ClusterPreset preset, double v_sq, std::optional<double> v_anti = std::nullopt);

}  // namespace cvsim::dsl
