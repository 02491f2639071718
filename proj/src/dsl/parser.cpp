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

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "cvsim/dsl.hpp"
#include "dsl/lexer.hpp"

namespace cvsim::dsl {
namespace {

using detail::Line;
using detail::Token;
using detail::TokenKind;

struct Param {
    double value;
    SourceSpan span;
};

using Params = std::map<std::string, Param, std::less<>>;

enum class ModeStatus { Live, Measured };

class Parser {
   public:
    explicit Parser(std::vector<Diagnostic>& errors) : errors_(errors) {}

    void header(const Line& line) {
        const Token& kw = line.tokens[0];
        if (kw.kind != TokenKind::Word || kw.text != "cvc") {
            error(codes::kMissingHeader, "first line must be the header 'cvc 1'", span(line.number, kw));
            statement(line);
            return;
        }
        if (line.tokens.size() != 2 || line.tokens[1].text != "1") {
            error(codes::kBadVersion, "unsupported language version; expected 'cvc 1'", whole(line));
        }
    }

    void statement(const Line& line) {
        line_ = &line;
        const Token& kw = line.tokens[0];
        const std::string& k = kw.text;
        if (kw.kind != TokenKind::Word) {
            error(codes::kUnknownKeyword, "expected a statement keyword", span(line.number, kw));
        } else if (k == "units") {
            units();
        } else if (k == "mode") {
            mode_decl();
        } else if (k == "bs") {
            two_mode_op("T");
        } else if (k == "qnd") {
            two_mode_op("G");
        } else if (k == "fourier") {
            fourier();
        } else if (k == "phase") {
            one_mode_param("deg");
        } else if (k == "squeeze") {
            one_mode_param("r");
        } else if (k == "homodyne") {
            homodyne();
        } else if (k == "ff") {
            feedforward();
        } else if (k == "displace") {
            displace();
        } else if (k == "cvc") {
            error(codes::kBadVersion, "header may only appear once, on the first line", whole(line));
        } else {
            error(codes::kUnknownKeyword, "unknown keyword '" + k + "'", span(line.number, kw));
        }
    }

    void finish() {
        if (modes_.empty()) {
            return;
        }
        for (const auto& [name, status] : modes_) {
            if (status == ModeStatus::Live) {
                return;
            }
        }
        error(codes::kAllMeasured, "every mode is measured; the circuit has no output", last_measurement_);
    }

    Program take() { return std::move(program_); }

   private:
    void error(std::string_view code, std::string message, SourceSpan s) {
        errors_.push_back(Diagnostic{std::string(code), std::move(message), s});
    }

    static SourceSpan span(std::size_t line, const Token& t) { return SourceSpan{line, t.col_begin, t.col_end}; }
    static SourceSpan span(std::size_t line, const Token& a, const Token& b) {
        return SourceSpan{line, a.col_begin, b.col_end};
    }
    static SourceSpan whole(const Line& line) { return span(line.number, line.tokens.front(), line.tokens.back()); }

    const std::vector<Token>& toks() const { return line_->tokens; }
    SourceSpan tok_span(std::size_t i) const { return span(line_->number, toks()[i]); }

    void arity(const std::string& usage) { error(codes::kArity, "expected: " + usage, whole(*line_)); }

    bool word_at(std::size_t i) const { return i < toks().size() && toks()[i].kind == TokenKind::Word; }

    bool identifier_at(std::size_t i, const std::string& usage) {
        if (!word_at(i)) {
            arity(usage);
            return false;
        }
        if (!detail::is_identifier(toks()[i].text)) {
            error(codes::kArity, "'" + toks()[i].text + "' is not an identifier", tok_span(i));
            return false;
        }
        return true;
    }

    // key=value groups over tokens [begin, end).
    bool params(std::size_t begin, std::size_t end, std::initializer_list<std::string_view> allowed,
                std::initializer_list<std::string_view> required, Params& out) {
        bool ok = true;
        std::size_t i = begin;
        while (i < end) {
            if (i + 3 > end || toks()[i].kind != TokenKind::Word || toks()[i + 1].kind != TokenKind::Equals ||
                toks()[i + 2].kind != TokenKind::Word) {
                error(codes::kBadParam, "expected key=value", span(line_->number, toks()[i], toks()[end - 1]));
                return false;
            }
            const std::string& key = toks()[i].text;
            const SourceSpan s = span(line_->number, toks()[i], toks()[i + 2]);
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
                error(codes::kBadParam, "unknown parameter '" + key + "'", tok_span(i));
                ok = false;
            } else if (out.contains(key)) {
                error(codes::kBadParam, "parameter '" + key + "' given twice", tok_span(i));
                ok = false;
            } else {
                double v = 0.0;
                if (!detail::parse_double(toks()[i + 2].text, v)) {
                    error(codes::kBadNumber, "'" + toks()[i + 2].text + "' is not a finite number", tok_span(i + 2));
                    ok = false;
                } else {
                    out.emplace(key, Param{v, s});
                }
            }
            i += 3;
        }
        for (std::string_view key : required) {
            if (!out.contains(key) && ok) {
                error(codes::kBadParam, "missing parameter '" + std::string(key) + "'", whole(*line_));
                ok = false;
            }
        }
        return ok;
    }

    // Reports undeclared or measured modes.
    bool live_mode(std::size_t i) {
        const std::string& name = toks()[i].text;
        const auto it = modes_.find(name);
        if (it == modes_.end()) {
            error(codes::kUndeclaredMode, "mode '" + name + "' is not declared", tok_span(i));
            return false;
        }
        if (it->second == ModeStatus::Measured) {
            error(codes::kUseAfterMeasure, "mode '" + name + "' was already measured", tok_span(i));
            return false;
        }
        return true;
    }

    void push(Statement s) {
        program_.statements.push_back(std::move(s));
        program_.spans.push_back(whole(*line_));
    }

    void units() {
        Params p;
        if (!params(1, toks().size(), {"vacuum"}, {"vacuum"}, p)) {
            return;
        }
        const Param& v = p.at("vacuum");
        if (v.value != 1.0 && v.value != 0.5 && v.value != 0.25) {
            error(codes::kBadUnits, "units vacuum must be 1, 0.5 or 0.25", v.span);
            return;
        }
        if (program_.units_vacuum) {
            error(codes::kBadUnits, "units given twice", whole(*line_));
            return;
        }
        program_.units_vacuum = v.value;
    }

    void mode_decl() {
        const std::string usage = "mode <id> vacuum | squeezed vsq=<f> [vanti=<f>] [angle=<deg>] | coherent [x=<f>] [p=<f>]";
        if (!identifier_at(1, usage)) {
            return;
        }
        if (!word_at(2)) {
            arity(usage);
            return;
        }
        const std::string& name = toks()[1].text;
        if (modes_.contains(name)) {
            error(codes::kDuplicateMode, "mode '" + name + "' is already declared", tok_span(1));
            return;
        }
        ModeDecl decl;
        decl.name = name;
        const std::string& kind = toks()[2].text;
        Params p;
        if (kind == "vacuum") {
            if (toks().size() != 3) {
                arity(usage);
                return;
            }
        } else if (kind == "squeezed") {
            if (!params(3, toks().size(), {"vsq", "vanti", "angle"}, {"vsq"}, p)) {
                return;
            }
            decl.source = SourceKind::Squeezed;
            decl.vsq = p.at("vsq").value;
            const SourceSpan all = span(line_->number, toks()[3], toks().back());
            if (!(decl.vsq > 0.0)) {
                error(codes::kUnphysicalSource, "vsq must be positive", p.at("vsq").span);
                return;
            }
            decl.vanti = p.contains("vanti") ? p.at("vanti").value : 1.0 / decl.vsq;
            decl.angle_deg = p.contains("angle") ? p.at("angle").value : 0.0;
            if (!(decl.vanti > 0.0) || decl.vsq * decl.vanti < 1.0 - kPhysicalityTolerance) {
                error(codes::kUnphysicalSource, "vsq * vanti must be at least 1", all);
                return;
            }
        } else if (kind == "coherent") {
            if (!params(3, toks().size(), {"x", "p"}, {}, p)) {
                return;
            }
            decl.source = SourceKind::Coherent;
            decl.x = p.contains("x") ? p.at("x").value : 0.0;
            decl.p = p.contains("p") ? p.at("p").value : 0.0;
        } else {
            error(codes::kBadParam, "unknown source '" + kind + "'; expected vacuum, squeezed or coherent",
                  tok_span(2));
            return;
        }
        modes_.emplace(name, ModeStatus::Live);
        push(std::move(decl));
    }

    void two_mode_op(const std::string& key) {
        const std::string& kw = toks()[0].text;
        const std::string usage = kw + " <id> <id> " + key + "=<f>";
        if (!identifier_at(1, usage) || !identifier_at(2, usage)) {
            return;
        }
        Params p;
        const bool params_ok = params(3, toks().size(), {key}, {key}, p);
        const bool a_ok = live_mode(1);
        const bool b_ok = live_mode(2);
        if (!params_ok || !a_ok || !b_ok) {
            return;
        }
        const std::string& a = toks()[1].text;
        const std::string& b = toks()[2].text;
        if (a == b) {
            error(codes::kSameMode, kw + " needs two distinct modes", span(line_->number, toks()[1], toks()[2]));
            return;
        }
        const Param& v = p.at(key);
        if (kw == "bs") {
            if (!(v.value > 0.0 && v.value < 1.0)) {
                error(codes::kBsTRange, "beam splitter T must lie strictly between 0 and 1", v.span);
                return;
            }
            push(BeamSplit{a, b, v.value});
        } else {
            push(QndOp{a, b, v.value});
        }
    }

    void fourier() {
        if (toks().size() != 2) {
            arity("fourier <id>");
            return;
        }
        if (!identifier_at(1, "fourier <id>") || !live_mode(1)) {
            return;
        }
        push(FourierOp{toks()[1].text});
    }

    void one_mode_param(const std::string& key) {
        const std::string& kw = toks()[0].text;
        const std::string usage = kw + " <id> " + key + "=<f>";
        if (!identifier_at(1, usage)) {
            return;
        }
        Params p;
        const bool params_ok = params(2, toks().size(), {key}, {key}, p);
        if (!live_mode(1) || !params_ok) {
            return;
        }
        const std::string& m = toks()[1].text;
        if (kw == "phase") {
            push(PhaseOp{m, p.at(key).value});
        } else {
            push(SqueezeOp{m, p.at(key).value});
        }
    }

    void homodyne() {
        const std::string usage = "homodyne <id> angle=<deg> -> <var>";
        const auto arrow = std::find_if(toks().begin(), toks().end(),
                                        [](const Token& t) { return t.kind == TokenKind::Arrow; });
        if (arrow == toks().end() || arrow + 2 != toks().end()) {
            arity(usage);
            return;
        }
        const auto arrow_idx = static_cast<std::size_t>(arrow - toks().begin());
        if (!identifier_at(1, usage) || !identifier_at(arrow_idx + 1, usage)) {
            return;
        }
        Params p;
        const bool params_ok = params(2, arrow_idx, {"angle"}, {"angle"}, p);
        const bool mode_ok = live_mode(1);
        const std::string& var = toks()[arrow_idx + 1].text;
        bool var_ok = true;
        if (vars_.contains(var)) {
            error(codes::kDuplicateVar, "outcome '" + var + "' is already bound", tok_span(arrow_idx + 1));
            var_ok = false;
        }
        // Bind and consume even when the line has other errors, so later
        // lines do not cascade.
        vars_.insert(var);
        if (mode_ok) {
            modes_[toks()[1].text] = ModeStatus::Measured;
            last_measurement_ = whole(*line_);
        }
        if (!params_ok || !mode_ok || !var_ok) {
            return;
        }
        push(Homodyne{toks()[1].text, p.at("angle").value, var});
    }

    void feedforward() {
        const std::string usage = "ff <var> -> displace <id> <x|p> gain=<f>";
        if (toks().size() < 6 || toks()[2].kind != TokenKind::Arrow || !word_at(3) || toks()[3].text != "displace" ||
            !word_at(5)) {
            arity(usage);
            return;
        }
        if (!identifier_at(1, usage) || !identifier_at(4, usage)) {
            return;
        }
        bool ok = true;
        const std::string& var = toks()[1].text;
        if (!vars_.contains(var)) {
            error(codes::kUnboundVar, "outcome '" + var + "' is not bound by an earlier homodyne", tok_span(1));
            ok = false;
        }
        ok = live_mode(4) && ok;
        const std::string& q = toks()[5].text;
        if (q != "x" && q != "p") {
            error(codes::kBadQuadrature, "quadrature must be x or p, got '" + q + "'", tok_span(5));
            ok = false;
        }
        Params p;
        ok = params(6, toks().size(), {"gain"}, {"gain"}, p) && ok;
        if (!ok) {
            return;
        }
        push(FeedForward{var, toks()[4].text, q == "x" ? Quadrature::X : Quadrature::P, p.at("gain").value});
    }

    void displace() {
        const std::string usage = "displace <id> [x=<f>] [p=<f>]";
        if (!identifier_at(1, usage)) {
            return;
        }
        Params p;
        const bool params_ok = params(2, toks().size(), {"x", "p"}, {}, p);
        if (!live_mode(1) || !params_ok) {
            return;
        }
        push(DisplaceOp{toks()[1].text, p.contains("x") ? p.at("x").value : 0.0,
                        p.contains("p") ? p.at("p").value : 0.0});
    }

    std::vector<Diagnostic>& errors_;
    const Line* line_ = nullptr;
    Program program_;
    std::map<std::string, ModeStatus, std::less<>> modes_;
    std::set<std::string, std::less<>> vars_;
    SourceSpan last_measurement_;
};

}  // namespace

std::string format_diagnostic(const Diagnostic& d, std::string_view file_name) {
    std::ostringstream out;
    if (!file_name.empty()) {
        out << file_name << ":";
    }
    out << d.span.line << ":" << d.span.col_begin << "-" << d.span.col_end << ": " << d.code << ": " << d.message;
    return out.str();
}

ParseResult parse(std::string_view text) {
    ParseResult result;
    const std::vector<Line> lines = detail::lex(text);
    if (lines.empty()) {
        result.errors.push_back(Diagnostic{std::string(codes::kEmpty), "program has no statements", SourceSpan{1, 1, 1}});
        return result;
    }
    Parser parser(result.errors);
    parser.header(lines.front());
    for (std::size_t i = 1; i < lines.size(); i++) {
        parser.statement(lines[i]);
    }
    parser.finish();
    result.program = parser.take();
    if (result.ok() && result.program.empty()) {
        result.errors.push_back(Diagnostic{std::string(codes::kEmpty), "program has no statements", SourceSpan{lines.front().number, lines.front().tokens.front().col_begin, lines.front().tokens.back().col_end}});
    }
    return result;
}

}  // namespace cvsim::dsl
