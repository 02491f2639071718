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
#include <string_view>

/// Data-parallel inner loops used by the sampler and the phase-space
/// integrators. Every kernel has a scalar reference implementation; vector
/// variants are selected at runtime and must agree with the reference to
/// within reduction-order rounding.
namespace cvsim::kernels {

struct KernelTable {
    std::string_view name;

    /// sum_i x[i]
    double (*sum)(const double* x, std::size_t n);
    /// sum_i x[i] * y[i]
    double (*dot)(const double* x, const double* y, std::size_t n);
    /// y[i] += a * x[i]
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    /// x[i] += c
    void (*add_scalar)(double c, double* x, std::size_t n);
    /// out[i] = exp(a x[i]^2 + b x[i] + c)
    void (*exp_quadratic)(const double* x, double* out, std::size_t n, double a, double b, double c);
    /// sum_i exp(a x[i]^2 + b x[i] + c)
    double (*sum_exp_quadratic)(const double* x, std::size_t n, double a, double b, double c);
};

const KernelTable& scalar_kernels();

/// The AVX2+FMA table, or nullptr when it was not compiled in or the running
/// CPU lacks the instructions.
const KernelTable* avx2_kernels();

/// The table used by the library. Picks the widest supported variant once;
/// setting CVSIM_SIMD=scalar in the environment forces the reference path.
const KernelTable& active_kernels();

}  // namespace cvsim::kernels
