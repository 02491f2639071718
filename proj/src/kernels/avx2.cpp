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

// Compiled with -mavx2 -mfma. Nothing in this file may run before the
// dispatcher has confirmed CPU support.

#include <immintrin.h>

#include <cmath>

#include "kernels/avx2_table.hpp"

namespace cvsim::kernels {
namespace {

inline double reduce_add(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

// exp(x) for four lanes. Cody-Waite reduction x = k ln2 + r with |r| <= ln2/2,
// degree-13 Taylor polynomial for e^r, then 2^k by exponent-field assembly.
// Arguments below -708.39 flush to zero; above 709.78 saturate to +inf.
inline __m256d exp4(__m256d x) {
    const __m256d max_arg = _mm256_set1_pd(709.782712893384);
    const __m256d min_arg = _mm256_set1_pd(-708.3964185322641);
    const __m256d log2e = _mm256_set1_pd(1.4426950408889634);
    const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
    const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);

    __m256d underflow = _mm256_cmp_pd(x, min_arg, _CMP_LT_OQ);
    __m256d overflow = _mm256_cmp_pd(x, max_arg, _CMP_GT_OQ);
    __m256d xc = _mm256_min_pd(_mm256_max_pd(x, min_arg), max_arg);

    __m256d k = _mm256_round_pd(_mm256_mul_pd(xc, log2e), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(k, ln2_hi, xc);
    r = _mm256_fnmadd_pd(k, ln2_lo, r);

    // 1/n! for n = 13 down to 0.
    __m256d p = _mm256_set1_pd(1.6059043836821613e-10);
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.08767569878681e-09));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.505210838544172e-08));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.755731922398589e-07));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.7557319223985893e-06));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.48015873015873e-05));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.984126984126984e-04));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.388888888888889e-03));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(8.333333333333333e-03));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(4.1666666666666664e-02));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.6666666666666666e-01));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(0.5));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));

    // k is in [-1022, 1024]; split 2^k = 2^(k/2) * 2^(k - k/2) so both halves
    // stay representable as normal numbers.
    __m128i ki = _mm256_cvtpd_epi32(k);
    __m128i k_half = _mm_srai_epi32(ki, 1);
    __m128i k_rest = _mm_sub_epi32(ki, k_half);
    const __m256i bias = _mm256_set1_epi64x(1023);
    __m256i e1 = _mm256_slli_epi64(_mm256_add_epi64(_mm256_cvtepi32_epi64(k_half), bias), 52);
    __m256i e2 = _mm256_slli_epi64(_mm256_add_epi64(_mm256_cvtepi32_epi64(k_rest), bias), 52);
    __m256d result = _mm256_mul_pd(_mm256_mul_pd(p, _mm256_castsi256_pd(e1)), _mm256_castsi256_pd(e2));

    result = _mm256_blendv_pd(result, _mm256_setzero_pd(), underflow);
    result = _mm256_blendv_pd(result, _mm256_set1_pd(HUGE_VAL), overflow);
    return result;
}

inline __m256d quadratic4(__m256d x, __m256d a, __m256d b, __m256d c) {
    return _mm256_fmadd_pd(_mm256_fmadd_pd(a, x, b), x, c);
}

double sum_avx2(const double* x, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
        acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x + i + 4));
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
    }
    double s = reduce_add(_mm256_add_pd(acc0, acc1));
    for (; i < n; i++) {
        s += x[i];
    }
    return s;
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    }
    double s = reduce_add(_mm256_add_pd(acc0, acc1));
    for (; i < n; i++) {
        s += x[i] * y[i];
    }
    return s;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    }
    for (; i < n; i++) {
        y[i] += a * x[i];
    }
}

void add_scalar_avx2(double c, double* x, std::size_t n) {
    const __m256d vc = _mm256_set1_pd(c);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(x + i, _mm256_add_pd(_mm256_loadu_pd(x + i), vc));
    }
    for (; i < n; i++) {
        x[i] += c;
    }
}

void exp_quadratic_avx2(const double* x, double* out, std::size_t n, double a, double b, double c) {
    const __m256d va = _mm256_set1_pd(a);
    const __m256d vb = _mm256_set1_pd(b);
    const __m256d vc = _mm256_set1_pd(c);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i, exp4(quadratic4(_mm256_loadu_pd(x + i), va, vb, vc)));
    }
    for (; i < n; i++) {
        out[i] = std::exp((a * x[i] + b) * x[i] + c);
    }
}

double sum_exp_quadratic_avx2(const double* x, std::size_t n, double a, double b, double c) {
    const __m256d va = _mm256_set1_pd(a);
    const __m256d vb = _mm256_set1_pd(b);
    const __m256d vc = _mm256_set1_pd(c);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_add_pd(acc, exp4(quadratic4(_mm256_loadu_pd(x + i), va, vb, vc)));
    }
    double s = reduce_add(acc);
    for (; i < n; i++) {
        s += std::exp((a * x[i] + b) * x[i] + c);
    }
    return s;
}

}  // namespace

const KernelTable& avx2_table() {
    static const KernelTable table{
        "avx2",
        &sum_avx2,
        &dot_avx2,
        &axpy_avx2,
        &add_scalar_avx2,
        &exp_quadratic_avx2,
        &sum_exp_quadratic_avx2,
    };
    return table;
}

}  // namespace cvsim::kernels
