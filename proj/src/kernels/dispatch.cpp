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

#include <cstdlib>
#include <string_view>

#include "cvsim/kernels.hpp"

#ifdef CVSIM_HAVE_AVX2
#include "kernels/avx2_table.hpp"
#endif

namespace cvsim::kernels {

const KernelTable* avx2_kernels() {
#ifdef CVSIM_HAVE_AVX2
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    if (supported) {
        return &avx2_table();
    }
#endif
    return nullptr;
}

const KernelTable& active_kernels() {
    static const KernelTable& chosen = []() -> const KernelTable& {
        const char* forced = std::getenv("CVSIM_SIMD");
        if (forced != nullptr && std::string_view(forced) == "scalar") {
            return scalar_kernels();
        }
        if (const KernelTable* avx2 = avx2_kernels()) {
            return *avx2;
        }
        return scalar_kernels();
    }();
    return chosen;
}

}  // namespace cvsim::kernels
