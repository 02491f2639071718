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

#include <cstdint>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cvsim/gaussian_state.hpp"

namespace cvsim::cli {

inline constexpr int kReportVersion = 1;

struct Scalar {
    std::string key;
    double value;
    std::string unit;
};

/// Internal (vacuum = 1) values; rescaled on output.
struct VarianceEntry {
    std::string key;
    double value;
    double reference;
};

struct Verdict {
    std::string key;
    bool value;
    double lhs;
    std::string relation;
    double bound;
    /// lhs and bound are variances and follow the units convention.
    bool variance_like;
};

struct Report {
    std::string experiment;
    nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
    UnitsConvention units;
    std::optional<std::uint64_t> seed;
    std::vector<Scalar> scalars;
    std::vector<VarianceEntry> variances;
    std::vector<Verdict> verdicts;
    std::vector<std::string> state_modes;
    std::optional<GaussianState> state;
    std::optional<nlohmann::ordered_json> oracle;

    void scalar(std::string key, double value, std::string unit = "") {
        scalars.push_back(Scalar{std::move(key), value, std::move(unit)});
    }
    void variance(std::string key, double value, double reference) {
        variances.push_back(VarianceEntry{std::move(key), value, reference});
    }
    void verdict(std::string key, double lhs, std::string relation, double bound, bool variance_like = false) {
        const bool v = relation == "<" ? lhs < bound : relation == ">" ? lhs > bound : false;
        verdicts.push_back(Verdict{std::move(key), v, lhs, std::move(relation), bound, variance_like});
    }
};

nlohmann::ordered_json to_json(const Report& r, const std::string& tool_version);
void write_csv(const Report& r, std::ostream& out);
void write_text(const Report& r, std::ostream& out);

}  // namespace cvsim::cli
