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

#include "dsl/lexer.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace cvsim::dsl::detail {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

bool starts_arrow(std::string_view s, std::size_t i) { return i + 1 < s.size() && s[i] == '-' && s[i + 1] == '>'; }

Line lex_line(std::string_view s, std::size_t number) {
    Line line{number, {}};
    std::size_t i = 0;
    while (i < s.size()) {
        const char c = s[i];
        if (is_space(c)) {
            i++;
        } else if (c == '#') {
            break;
        } else if (c == '=') {
            line.tokens.push_back({TokenKind::Equals, "=", i + 1, i + 1});
            i++;
        } else if (starts_arrow(s, i)) {
            line.tokens.push_back({TokenKind::Arrow, "->", i + 1, i + 2});
            i += 2;
        } else {
            const std::size_t start = i;
            while (i < s.size() && !is_space(s[i]) && s[i] != '=' && s[i] != '#' && !starts_arrow(s, i)) {
                i++;
            }
            line.tokens.push_back({TokenKind::Word, std::string(s.substr(start, i - start)), start + 1, i});
        }
    }
    return line;
}

}  // namespace

std::vector<Line> lex(std::string_view text) {
    std::vector<Line> lines;
    std::size_t number = 1;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        Line line = lex_line(text.substr(pos, end - pos), number);
        if (!line.tokens.empty()) {
            lines.push_back(std::move(line));
        }
        pos = end + 1;
        number++;
    }
    return lines;
}

bool is_identifier(std::string_view s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) {
        return false;
    }
    for (char c : s) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) {
            return false;
        }
    }
    return true;
}

bool parse_double(std::string_view s, double& out) {
    if (s.empty()) {
        return false;
    }
    // from_chars does not take a leading '+'.
    std::string_view body = s[0] == '+' ? s.substr(1) : s;
    if (body.empty() || body[0] == '+') {
        return false;
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v, std::chars_format::general);
    if (ec != std::errc() || ptr != body.data() + body.size() || !std::isfinite(v)) {
        return false;
    }
    out = v;
    return true;
}

}  // namespace cvsim::dsl::detail
