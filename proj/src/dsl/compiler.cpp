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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numbers>

#include "cvsim/dsl.hpp"
#include "cvsim/elements.hpp"
#include "cvsim/protocols.hpp"
#include "dsl/lexer.hpp"

namespace cvsim::dsl {
namespace {

double radians(double deg) { return deg * std::numbers::pi / 180.0; }

GaussianState source_state(const ModeDecl& m) {
    switch (m.source) {
        case SourceKind::Vacuum:
            return vacuum(1);
        case SourceKind::Squeezed:
            return squeezed_vacuum(m.vsq, m.vanti, radians(m.angle_deg));
        case SourceKind::Coherent:
            return coherent(m.x, m.p);
    }
    return vacuum(1);
}

struct Outcome {
    Vector form;
    double offset;
};

// Tracks every live quadrature as an affine form in the initial quadratures
// while also recording the per-trajectory step list.
class Builder {
   public:
    explicit Builder(const Program& program) {
        for (const Statement& st : program.statements) {
            if (const auto* m = std::get_if<ModeDecl>(&st)) {
                if (index_.contains(m->name)) {
                    throw Error(ErrorKind::InvalidArgument, "mode '" + m->name + "' declared twice");
                }
                index_.emplace(m->name, names_.size());
                names_.push_back(m->name);
                sources_.push_back(source_state(*m));
            }
        }
        if (names_.empty()) {
            throw Error(ErrorKind::InvalidArgument, "program declares no modes");
        }
        const auto dim = static_cast<Eigen::Index>(2 * names_.size());
        rows_ = Matrix::Identity(dim, dim);
        offset_ = Vector::Zero(dim);
        live_.resize(names_.size());
        for (std::size_t i = 0; i < live_.size(); i++) {
            live_[i] = i;
        }
    }

    void gate(const SymplecticOp& op, const std::vector<std::string>& modes) {
        std::vector<std::size_t> declared;
        std::vector<std::size_t> live_idx;
        std::vector<Eigen::Index> idx;
        for (const std::string& name : modes) {
            const std::size_t d = declared_index(name);
            declared.push_back(d);
            live_idx.push_back(live_position(d, name));
            idx.push_back(static_cast<Eigen::Index>(2 * d));
            idx.push_back(static_cast<Eigen::Index>(2 * d + 1));
        }
        const Matrix sub = rows_(idx, Eigen::all);
        rows_(idx, Eigen::all) = op.matrix() * sub;
        const Vector sub_offset = offset_(idx);
        offset_(idx) = op.matrix() * sub_offset + op.displacement();
        TrajectoryStep step{TrajectoryStep::Kind::Gate, op, live_idx};
        steps_.push_back(std::move(step));
    }

    void homodyne(const Homodyne& h) {
        const std::size_t d = declared_index(h.mode);
        const std::size_t pos = live_position(d, h.mode);
        if (outcomes_.contains(h.var)) {
            throw Error(ErrorKind::InvalidArgument, "outcome '" + h.var + "' bound twice");
        }
        const double theta = radians(h.angle_deg);
        const auto rx = static_cast<Eigen::Index>(2 * d);
        const Vector form = std::cos(theta) * rows_.row(rx).transpose() + std::sin(theta) * rows_.row(rx + 1).transpose();
        const double off = std::cos(theta) * offset_(rx) + std::sin(theta) * offset_(rx + 1);
        const std::size_t slot = outcome_names_.size();
        outcomes_.emplace(h.var, std::make_pair(slot, Outcome{form, off}));
        outcome_names_.push_back(h.var);
        live_.erase(live_.begin() + static_cast<std::ptrdiff_t>(pos));

        TrajectoryStep step{TrajectoryStep::Kind::Homodyne, std::nullopt, {pos}};
        step.angle = theta;
        step.slot = slot;
        steps_.push_back(std::move(step));
    }

    void feedforward(const FeedForward& f) {
        const auto it = outcomes_.find(f.var);
        if (it == outcomes_.end()) {
            throw Error(ErrorKind::InvalidArgument, "outcome '" + f.var + "' is unbound");
        }
        const std::size_t d = declared_index(f.target);
        const std::size_t pos = live_position(d, f.target);
        const std::size_t q = f.quadrature == Quadrature::X ? 0 : 1;
        const auto row = static_cast<Eigen::Index>(2 * d + q);
        const Outcome& o = it->second.second;
        rows_.row(row) += f.gain * o.form.transpose();
        offset_(row) += f.gain * o.offset;

        TrajectoryStep step{TrajectoryStep::Kind::FeedForward, std::nullopt, {pos}};
        step.slot = it->second.first;
        step.quadrature = q;
        step.gain = f.gain;
        steps_.push_back(std::move(step));
    }

    Plan finish(const Program& program) {
        if (live_.empty()) {
            throw Error(ErrorKind::InvalidArgument, "every mode is measured; the circuit has no output");
        }
        GaussianState initial = sources_.front();
        for (std::size_t i = 1; i < sources_.size(); i++) {
            initial = tensor(initial, sources_[i]);
        }
        std::vector<Eigen::Index> idx;
        std::vector<std::string> outputs;
        for (std::size_t d : live_) {
            idx.push_back(static_cast<Eigen::Index>(2 * d));
            idx.push_back(static_cast<Eigen::Index>(2 * d + 1));
            outputs.push_back(names_[d]);
        }
        Matrix m = rows_(idx, Eigen::all);
        Vector off = offset_(idx);
        std::optional<SymplecticOp> unitary;
        if (outcome_names_.empty()) {
            unitary = SymplecticOp::from_matrix(m, off);
        }
        LinearProcess ensemble = LinearProcess::from_matrix(std::move(m), std::move(off));
        const UnitsConvention units = program.units_vacuum
                                          ? UnitsConvention::with_vacuum_variance(*program.units_vacuum)
                                          : UnitsConvention{};
        return Plan{names_,   std::move(initial), std::move(steps_), outcome_names_, std::move(outputs),
                    std::move(ensemble), std::move(unitary), units};
    }

   private:
    std::size_t declared_index(const std::string& name) const {
        const auto it = index_.find(name);
        if (it == index_.end()) {
            throw Error(ErrorKind::InvalidArgument, "mode '" + name + "' is not declared");
        }
        return it->second;
    }

    std::size_t live_position(std::size_t declared, const std::string& name) const {
        const auto it = std::find(live_.begin(), live_.end(), declared);
        if (it == live_.end()) {
            throw Error(ErrorKind::InvalidArgument, "mode '" + name + "' is used after measurement");
        }
        return static_cast<std::size_t>(it - live_.begin());
    }

    std::vector<std::string> names_;
    std::map<std::string, std::size_t, std::less<>> index_;
    std::vector<GaussianState> sources_;
    std::vector<std::size_t> live_;
    Matrix rows_;
    Vector offset_;
    std::vector<TrajectoryStep> steps_;
    std::map<std::string, std::pair<std::size_t, Outcome>, std::less<>> outcomes_;
    std::vector<std::string> outcome_names_;
};

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};

}  // namespace

Plan compile(const Program& program) {
    Builder b(program);
    for (const Statement& st : program.statements) {
        std::visit(Overloaded{
                       [](const ModeDecl&) {},
                       [&](const BeamSplit& s) {
                           if (s.a == s.b) {
                               throw Error(ErrorKind::InvalidArgument, "beam splitter needs two distinct modes");
                           }
                           b.gate(beamsplitter(s.transmittance), {s.a, s.b});
                       },
                       [&](const FourierOp& s) { b.gate(fourier(), {s.mode}); },
                       [&](const PhaseOp& s) { b.gate(phase(radians(s.deg)), {s.mode}); },
                       [&](const SqueezeOp& s) { b.gate(squeezer(s.r), {s.mode}); },
                       [&](const QndOp& s) {
                           if (s.a == s.b) {
                               throw Error(ErrorKind::InvalidArgument, "QND gate needs two distinct modes");
                           }
                           b.gate(qnd_ideal(s.gain), {s.a, s.b});
                       },
                       [&](const Homodyne& s) { b.homodyne(s); },
                       [&](const FeedForward& s) { b.feedforward(s); },
                       [&](const DisplaceOp& s) { b.gate(displace(s.x, s.p), {s.mode}); },
                   },
                   st);
    }
    return b.finish(program);
}

GaussianState initial_state(const Plan& plan, const std::optional<GaussianState>& input) {
    if (!input) {
        return plan.initial;
    }
    const std::size_t k = input->n_modes();
    const std::size_t n = plan.initial.n_modes();
    if (k > n) {
        throw Error(ErrorKind::InvalidArgument, "input has more modes than the circuit declares");
    }
    if (k == n) {
        return *input;
    }
    std::vector<std::size_t> rest;
    for (std::size_t i = k; i < n; i++) {
        rest.push_back(i);
    }
    return tensor(*input, plan.initial.marginal(rest));
}

GaussianState execute(const Plan& plan, const std::optional<GaussianState>& input) {
    return linear_process(plan.ensemble, initial_state(plan, input));
}

QuadratureForm parse_form(const Plan& plan, std::string_view text) {
    const std::size_t n = plan.output_modes.size();
    Vector coeffs = Vector::Zero(static_cast<Eigen::Index>(2 * n));
    double offset = 0.0;
    std::size_t i = 0;
    bool any = false;
    const auto fail = [&](const std::string& why) -> QuadratureForm {
        throw Error(ErrorKind::InvalidArgument, "bad form '" + std::string(text) + "': " + why);
    };
    const auto skip_space = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) i++;
    };
    while (true) {
        skip_space();
        if (i >= text.size()) {
            break;
        }
        double sign = 1.0;
        if (text[i] == '+' || text[i] == '-') {
            sign = text[i] == '-' ? -1.0 : 1.0;
            i++;
            skip_space();
        } else if (any) {
            return fail("expected + or - between terms");
        }
        double coef = 1.0;
        bool has_number = false;
        if (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.')) {
            const std::size_t start = i;
            while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '.' ||
                                       ((text[i] == '+' || text[i] == '-') && (text[i - 1] == 'e' || text[i - 1] == 'E')))) {
                i++;
            }
            if (!detail::parse_double(text.substr(start, i - start), coef)) {
                return fail("bad number");
            }
            has_number = true;
            skip_space();
            if (i < text.size() && text[i] == '*') {
                i++;
                skip_space();
            }
        }
        const std::size_t start = i;
        while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) i++;
        const std::string_view sym = text.substr(start, i - start);
        if (sym.empty()) {
            if (!has_number) {
                return fail("expected a term");
            }
            offset += sign * coef;
        } else {
            if (sym.size() < 3 || (sym[0] != 'x' && sym[0] != 'p') || sym[1] != '_') {
                return fail("quadrature must be written x_<mode> or p_<mode>");
            }
            const std::string name(sym.substr(2));
            const auto it = std::find(plan.output_modes.begin(), plan.output_modes.end(), name);
            if (it == plan.output_modes.end()) {
                return fail("'" + name + "' is not an output mode");
            }
            const auto m = static_cast<Eigen::Index>(it - plan.output_modes.begin());
            coeffs(2 * m + (sym[0] == 'p' ? 1 : 0)) += sign * coef;
        }
        any = true;
    }
    if (!any) {
        return fail("empty");
    }
    return QuadratureForm::from_coefficients(std::move(coeffs), offset);
}

}  // namespace cvsim::dsl
