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

#include "report.hpp"

#include <algorithm>
#include <cstdio>
#include <iomanip>

#include "cvsim/dsl.hpp"

namespace cvsim::cli {
namespace {

using json = nlohmann::ordered_json;

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double scaled(const Report& r, double v, bool variance_like) { return variance_like ? r.units.variance(v) : v; }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

json to_json(const Report& r, const std::string& tool_version) {
    json j;
    j["report_version"] = kReportVersion;
    j["tool"] = "cvsim";
    j["tool_version"] = tool_version;
    j["experiment"] = r.experiment;
    j["seed"] = r.seed ? json(*r.seed) : json(nullptr);
    j["units"] = {{"vacuum_variance", r.units.reporting_vacuum_variance()}};
    j["parameters"] = r.parameters;

    json scalars = json::array();
    for (const auto& s : r.scalars) {
        scalars.push_back({{"key", s.key}, {"value", s.value}, {"unit", s.unit}});
    }
    j["scalars"] = scalars;

    json variances = json::array();
    for (const auto& v : r.variances) {
        variances.push_back({{"key", v.key},
                             {"linear", r.units.variance(v.value)},
                             {"db", to_db(v.value, v.reference)},
                             {"reference", r.units.variance(v.reference)}});
    }
    j["variances"] = variances;

    json verdicts = json::array();
    for (const auto& v : r.verdicts) {
        verdicts.push_back({{"key", v.key},
                            {"value", v.value},
                            {"lhs", scaled(r, v.lhs, v.variance_like)},
                            {"relation", v.relation},
                            {"bound", scaled(r, v.bound, v.variance_like)}});
    }
    j["verdicts"] = verdicts;

    if (r.state) {
        const auto& s = *r.state;
        json mean = json::array();
        for (Eigen::Index i = 0; i < s.mean().size(); i++) {
            mean.push_back(r.units.amplitude(s.mean()(i)));
        }
        json cov = json::array();
        for (Eigen::Index i = 0; i < s.cov().rows(); i++) {
            json row = json::array();
            for (Eigen::Index k = 0; k < s.cov().cols(); k++) {
                row.push_back(r.units.variance(s.cov()(i, k)));
            }
            cov.push_back(row);
        }
        j["state"] = {{"modes", r.state_modes}, {"mean", mean}, {"cov", cov}};
    } else {
        j["state"] = nullptr;
    }
    j["oracle"] = r.oracle ? *r.oracle : json(nullptr);
    return j;
}

void write_csv(const Report& r, std::ostream& out) {
    const auto row = [&](const std::string& key, const std::string& value, const std::string& unit) {
        out << csv_field(r.experiment) << "," << csv_field(key) << "," << value << "," << csv_field(unit) << "\n";
    };
    out << "experiment,key,value,unit\n";
    for (const auto& s : r.scalars) {
        row(s.key, dsl::format_number(s.value), s.unit);
    }
    for (const auto& v : r.variances) {
        row(v.key, dsl::format_number(r.units.variance(v.value)), "vacuum_variance");
        row(v.key + ".db", dsl::format_number(to_db(v.value, v.reference)), "dB");
        row(v.key + ".reference", dsl::format_number(r.units.variance(v.reference)), "vacuum_variance");
    }
    for (const auto& v : r.verdicts) {
        row(v.key, v.value ? "1" : "0", "bool");
    }
}

void write_text(const Report& r, std::ostream& out) {
    out << "experiment: " << r.experiment << "\n";
    if (r.units.reporting_vacuum_variance() != 1.0) {
        out << "units: vacuum variance " << num(r.units.reporting_vacuum_variance()) << "\n";
    }
    if (r.seed) {
        out << "seed: " << *r.seed << "\n";
    }
    std::size_t width = 8;
    for (const auto& s : r.scalars) width = std::max(width, s.key.size());
    for (const auto& v : r.variances) width = std::max(width, v.key.size());
    for (const auto& v : r.verdicts) width = std::max(width, v.key.size());
    const auto w = static_cast<int>(width + 2);

    if (!r.scalars.empty()) {
        out << "\n";
        for (const auto& s : r.scalars) {
            out << "  " << std::left << std::setw(w) << s.key << num(s.value);
            if (!s.unit.empty()) out << " " << s.unit;
            out << "\n";
        }
    }
    if (!r.variances.empty()) {
        out << "\n  " << std::left << std::setw(w) << "variance" << std::setw(14) << "linear" << std::setw(14)
            << "reference"
            << "dB\n";
        for (const auto& v : r.variances) {
            out << "  " << std::left << std::setw(w) << v.key << std::setw(14) << num(r.units.variance(v.value))
                << std::setw(14) << num(r.units.variance(v.reference)) << num(to_db(v.value, v.reference)) << "\n";
        }
    }
    if (!r.verdicts.empty()) {
        out << "\n";
        for (const auto& v : r.verdicts) {
            out << "  " << std::left << std::setw(w) << v.key << (v.value ? "PASS  " : "FAIL  ")
                << num(scaled(r, v.lhs, v.variance_like)) << " " << v.relation << " "
                << num(scaled(r, v.bound, v.variance_like)) << "\n";
        }
    }
    if (r.oracle) {
        out << "\noracle: " << r.oracle->dump() << "\n";
    }
}

}  // namespace cvsim::cli
