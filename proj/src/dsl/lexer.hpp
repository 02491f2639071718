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

#include <string>
#include <string_view>
#include <vector>

#include "cvsim/dsl.hpp"

namespace cvsim::dsl::detail {

enum class TokenKind { Word, Equals, Arrow };

struct Token {
    TokenKind kind;
    std::string text;
    std::size_t col_begin;
    std::size_t col_end;
};

struct Line {
    std::size_t number;
    std::vector<Token> tokens;
};

/// Splits text into lines of tokens. Comments and blank lines are dropped.
std::vector<Line> lex(std::string_view text);

bool is_identifier(std::string_view s);

/// Full-string strict decimal parse; rejects inf and nan.
bool parse_double(std::string_view s, double& out);

}  // namespace cvsim::dsl::detail
