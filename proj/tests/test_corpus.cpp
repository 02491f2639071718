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

#include <doctest.h>

#include "corpus_check.hpp"

TEST_CASE("golden corpus") {
    const auto results = cvsim::testing::check_corpus(CVSIM_CORPUS_DIR);
    CHECK(results.size() >= 8);
    std::size_t errors = 0;
    for (const auto& r : results) {
        CAPTURE(r.file);
        CAPTURE(r.detail);
        CHECK(r.ok);
        if (r.file.starts_with("errors/")) errors++;
    }
    CHECK(errors >= 5);
}
