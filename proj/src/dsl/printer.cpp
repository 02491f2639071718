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

#include <array>
#include <charconv>
#include <sstream>

#include "cvsim/dsl.hpp"

namespace cvsim::dsl {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};

}  // namespace

std::string format_number(double v) {
    if (v == 0.0) {
        return "0";
    }
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc()) {
        return "nan";
    }
    return std::string(buf.data(), ptr);
}

std::string print(const Program& program) {
    std::ostringstream out;
    const auto num = [](double v) { return format_number(v); };
    out << "cvc 1\n";
    if (program.units_vacuum) {
        out << "units vacuum=" << num(*program.units_vacuum) << "\n";
    }
    for (const Statement& st : program.statements) {
        std::visit(Overloaded{
                       [&](const ModeDecl& m) {
                           out << "mode " << m.name;
                           switch (m.source) {
                               case SourceKind::Vacuum:
                                   out << " vacuum";
                                   break;
                               case SourceKind::Squeezed:
                                   out << " squeezed vsq=" << num(m.vsq) << " vanti=" << num(m.vanti)
                                       << " angle=" << num(m.angle_deg);
                                   break;
                               case SourceKind::Coherent:
                                   out << " coherent x=" << num(m.x) << " p=" << num(m.p);
                                   break;
                           }
                       },
                       [&](const BeamSplit& s) { out << "bs " << s.a << " " << s.b << " T=" << num(s.transmittance); },
                       [&](const FourierOp& s) { out << "fourier " << s.mode; },
                       [&](const PhaseOp& s) { out << "phase " << s.mode << " deg=" << num(s.deg); },
                       [&](const SqueezeOp& s) { out << "squeeze " << s.mode << " r=" << num(s.r); },
                       [&](const QndOp& s) { out << "qnd " << s.a << " " << s.b << " G=" << num(s.gain); },
                       [&](const Homodyne& s) {
                           out << "homodyne " << s.mode << " angle=" << num(s.angle_deg) << " -> " << s.var;
                       },
                       [&](const FeedForward& s) {
                           out << "ff " << s.var << " -> displace " << s.target << " "
                               << (s.quadrature == Quadrature::X ? "x" : "p") << " gain=" << num(s.gain);
                       },
                       [&](const DisplaceOp& s) { out << "displace " << s.mode << " x=" << num(s.x) << " p=" << num(s.p); },
                   },
                   st);
        out << "\n";
    }
    return out.str();
}

}  // namespace cvsim::dsl
