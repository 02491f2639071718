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

#include <cmath>
#include <sstream>

#include "cvsim/dsl.hpp"

namespace cvsim::dsl {
namespace {

std::string squeezed(const std::string& name, double v_sq, std::optional<double> v_anti, double angle_deg) {
    return "mode " + name + " squeezed vsq=" + format_number(v_sq) + " vanti=" + format_number(v_anti.value_or(1.0 / v_sq)) +
           " angle=" + format_number(angle_deg) + "\n";
}

}  // namespace

std::string teleport_program(const std::vector<TeleportHop>& hops, std::optional<double> v_anti) {
    std::ostringstream out;
    const std::string root2 = format_number(std::sqrt(2.0));
    out << "cvc 1\n";
    out << "mode in vacuum\n";
    std::string current = "in";
    for (std::size_t h = 0; h < hops.size(); h++) {
        const std::string k = std::to_string(h + 1);
        const std::string a = "a" + k;
        const std::string b = "b" + k;
        out << "# hop " << k << "\n";
        out << squeezed(a, hops[h].v_sq_x, v_anti, 0.0);
        out << squeezed(b, hops[h].v_sq_p, v_anti, 90.0);
        out << "bs " << a << " " << b << " T=0.5\n";
        out << "bs " << current << " " << a << " T=0.5\n";
        out << "homodyne " << a << " angle=0 -> u" << k << "\n";
        out << "homodyne " << current << " angle=90 -> v" << k << "\n";
        out << "ff u" << k << " -> displace " << b << " x gain=-" << root2 << "\n";
        out << "ff v" << k << " -> displace " << b << " p gain=" << root2 << "\n";
        current = b;
    }
    return out.str();
}

std::string gate_teleport_program(double ancilla_v_sq, std::optional<double> v_anti) {
    std::ostringstream out;
    out << "cvc 1\n";
    out << "mode in vacuum\n";
    out << squeezed("anc", ancilla_v_sq, v_anti, 0.0);
    out << "qnd in anc G=1\n";
    out << "homodyne in angle=90 -> m\n";
    out << "ff m -> displace anc p gain=1\n";
    return out.str();
}

std::string qnd_offline_program(double reflectance, double ancilla_v_sq, std::optional<double> v_anti) {
    const double r = reflectance;
    const std::string gain = format_number(-std::sqrt((1.0 - r) / r));
    std::ostringstream out;
    out << "cvc 1\n";
    out << "mode m1 vacuum\n";
    out << "mode m2 vacuum\n";
    out << squeezed("ancA", ancilla_v_sq, v_anti, 0.0);
    out << squeezed("ancB", ancilla_v_sq, v_anti, 90.0);
    out << "phase m1 deg=180\n";
    out << "bs m1 m2 T=" << format_number(r / (1.0 + r)) << "\n";
    out << "# offline x squeezer on m1\n";
    out << "bs m1 ancA T=" << format_number(r) << "\n";
    out << "homodyne ancA angle=90 -> a\n";
    out << "ff a -> displace m1 p gain=" << gain << "\n";
    out << "# offline p squeezer on m2\n";
    out << "bs m2 ancB T=" << format_number(r) << "\n";
    out << "homodyne ancB angle=0 -> b\n";
    out << "ff b -> displace m2 x gain=" << gain << "\n";
    out << "phase m1 deg=180\n";
    out << "bs m1 m2 T=" << format_number(1.0 / (1.0 + r)) << "\n";
    return out.str();
}

std::string cluster_program(ClusterPreset preset, double v_sq, std::optional<double> v_anti) {
    std::ostringstream out;
    out << "cvc 1\n";
    for (int w = 1; w <= 4; w++) {
        out << squeezed("w" + std::to_string(w), v_sq, v_anti, 90.0);
    }
    const auto wire = [](std::size_t i) { return "w" + std::to_string(i + 1); };
    for (const NetworkStep& s : cluster_network(preset)) {
        switch (s.kind) {
            case NetworkStep::Kind::BeamSplitter:
                out << "bs " << wire(s.a) << " " << wire(s.b) << " T=" << format_number(s.value) << "\n";
                break;
            case NetworkStep::Kind::Fourier:
                out << "fourier " << wire(s.a) << "\n";
                break;
            case NetworkStep::Kind::Phase:
                out << "phase " << wire(s.a) << " deg=" << format_number(s.value) << "\n";
                break;
        }
    }
    return out.str();
}

}  // namespace cvsim::dsl
