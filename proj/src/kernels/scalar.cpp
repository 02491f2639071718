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

#include "cvsim/kernels.hpp"

namespace cvsim::kernels {
namespace {

double sum_scalar(const double* x, std::size_t n) {
    double s = 0;
    for (std::size_t i = 0; i < n; i++) {
        s += x[i];
    }
    return s;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double s = 0;
    for (std::size_t i = 0; i < n; i++) {
        s += x[i] * y[i];
    }
    return s;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; i++) {
        y[i] += a * x[i];
    }
}

void add_scalar_scalar(double c, double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; i++) {
        x[i] += c;
    }
}

void exp_quadratic_scalar(const double* x, double* out, std::size_t n, double a, double b, double c) {
    for (std::size_t i = 0; i < n; i++) {
        out[i] = std::exp((a * x[i] + b) * x[i] + c);
    }
}

double sum_exp_quadratic_scalar(const double* x, std::size_t n, double a, double b, double c) {
    double s = 0;
    for (std::size_t i = 0; i < n; i++) {
        s += std::exp((a * x[i] + b) * x[i] + c);
    }
    return s;
}

}  // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{
        "scalar",
        &sum_scalar,
        &dot_scalar,
        &axpy_scalar,
        &add_scalar_scalar,
        &exp_quadratic_scalar,
        &sum_exp_quadratic_scalar,
    };
    return table;
}

}  // namespace cvsim::kernels
