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

#include "cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cvsim/cluster.hpp"
#include "cvsim/dsl.hpp"
#include "cvsim/elements.hpp"
#include "cvsim/kernels.hpp"
#include "cvsim/mc_oracle.hpp"
#include "cvsim/protocols.hpp"
#include "report.hpp"

#ifndef CVSIM_VERSION
#define CVSIM_VERSION "0.0.0"
#endif

namespace cvsim::cli {
namespace {

using json = nlohmann::ordered_json;

constexpr double kGridFidelityTolerance = 1e-6;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CommonOptions {
    bool json = false;
    bool csv = false;
    bool mc = false;
    double units = 1.0;
    std::uint64_t seed = 0;
    std::size_t samples = 100000;
    unsigned threads = 0;
    double sigmas = 5.0;
    /// The --seed option of the subcommand that ran.
    const CLI::Option* seed_opt = nullptr;
};

void add_common(CLI::App* sub, CommonOptions& c) {
    auto* j = sub->add_flag("--json", c.json, "Emit the JSON report");
    sub->add_flag("--csv", c.csv, "Emit one CSV row per result")->excludes(j);
    sub->add_option("--units", c.units, "Reported vacuum variance (default 1)")->check(CLI::PositiveNumber);
    sub->add_flag("--mc", c.mc, "Cross-check with the Monte Carlo oracle");
    sub->add_option("--seed", c.seed, "Oracle seed (falls back to CVSIM_SEED)");
    sub->add_option("--samples", c.samples, "Oracle sample count")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 40));
    sub->add_option("--threads", c.threads, "Oracle worker threads (0 = all cores)");
    sub->add_option("--sigmas", c.sigmas, "Oracle tolerance in standard errors")->check(CLI::PositiveNumber);
}

std::uint64_t resolve_seed(const CommonOptions& c) {
    if (c.seed_opt != nullptr && c.seed_opt->count() > 0) {
        return c.seed;
    }
    if (const char* env = std::getenv("CVSIM_SEED"); env != nullptr && *env != '\0') {
        std::uint64_t v = 0;
        const char* end = env + std::char_traits<char>::length(env);
        const auto [ptr, ec] = std::from_chars(env, end, v);
        if (ec != std::errc() || ptr != end) {
            throw UsageError("CVSIM_SEED must be an unsigned integer");
        }
        return v;
    }
    return 0;
}

mc::TrajectoryConfig oracle_config(const CommonOptions& c) {
    mc::TrajectoryConfig cfg;
    cfg.n_samples = c.samples;
    cfg.seed = resolve_seed(c);
    cfg.tolerance_sigmas = c.sigmas;
    cfg.threads = c.threads;
    return cfg;
}

double parse_number(const std::string& s, const std::string& what) {
    double v = 0.0;
    const char* b = s.data();
    const char* e = b + s.size();
    if (!s.empty() && *b == '+') b++;
    const auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || ptr != e || !std::isfinite(v)) {
        throw UsageError("bad number '" + s + "' for " + what);
    }
    return v;
}

void emit(const Report& r, const CommonOptions& c, std::ostream& out) {
    if (c.json) {
        out << to_json(r, CVSIM_VERSION).dump(2) << "\n";
    } else if (c.csv) {
        write_csv(r, out);
    } else {
        write_text(r, out);
    }
}

json oracle_json(const mc::TrajectoryConfig& cfg, const mc::Comparison& cmp) {
    json j;
    j["kernels"] = kernels::active_kernels().name;
    j["samples"] = cfg.n_samples;
    j["seed"] = cfg.seed;
    j["tolerance_sigmas"] = cfg.tolerance_sigmas;
    j["entries"] = cmp.entries;
    j["failures"] = cmp.failures;
    j["max_abs_z"] = cmp.max_abs_z;
    j["worst"] = cmp.worst;
    j["agree"] = cmp.agree;
    return j;
}

/// Runs the plan through the trajectory oracle; returns whether it agrees.
bool attach_oracle(Report& r, const dsl::Plan& plan, const std::optional<GaussianState>& input,
                   const GaussianState& analytic, const CommonOptions& c) {
    const mc::TrajectoryConfig cfg = oracle_config(c);
    const mc::TrajectoryResult res = mc::run_trajectories(plan, input, cfg);
    const mc::Comparison cmp = mc::compare(res.output, analytic, cfg.tolerance_sigmas);
    json j = oracle_json(cfg, cmp);
    j["conditional_cov_spread"] = res.conditional_cov_spread;
    json outcomes = json::array();
    for (const auto& o : res.outcomes) {
        outcomes.push_back({{"name", o.name}, {"mean", o.mean}, {"variance", o.variance}});
    }
    j["outcomes"] = outcomes;
    r.oracle = j;
    r.seed = cfg.seed;
    return cmp.agree;
}

// Lists of one value stand for every hop.
std::vector<double> per_hop(const std::vector<double>& v, std::size_t hops, const std::string& flag) {
    if (v.size() == hops) return v;
    if (v.size() == 1) return std::vector<double>(hops, v.front());
    throw UsageError(flag + " needs 1 or " + std::to_string(hops) + " values");
}

// ---------------------------------------------------------------------------

struct TeleportOptions {
    std::vector<double> vsq;
    std::vector<double> vsq_p;
    std::vector<double> db;
    std::optional<double> vanti;
    std::vector<std::string> input;
    std::size_t hops = 0;
};

int cmd_teleport(const TeleportOptions& o, const CommonOptions& c, std::ostream& out) {
    std::vector<double> vx = o.vsq;
    if (!o.db.empty()) {
        vx.clear();
        for (double d : o.db) vx.push_back(from_db(d));
    }
    if (vx.empty()) vx = {1.0};
    const std::size_t hops = o.hops > 0 ? o.hops : vx.size();
    vx = per_hop(vx, hops, "--vsq");
    const std::vector<double> vp = o.vsq_p.empty() ? vx : per_hop(o.vsq_p, hops, "--vsq-p");

    std::string kind = "coherent";
    double a1 = 0.0;
    double a2 = 0.0;
    if (!o.input.empty()) {
        kind = o.input[0];
        a1 = parse_number(o.input[1], "--input");
        a2 = parse_number(o.input[2], "--input");
    }
    GaussianState input = vacuum(1);
    if (kind == "coherent") {
        input = coherent(a1, a2);
    } else if (kind == "squeezed") {
        input = squeezed_vacuum(a1, a2);
    } else {
        throw UsageError("--input must be 'coherent x p' or 'squeezed vsq vanti'");
    }

    std::vector<TeleportConfig> cfgs;
    for (std::size_t h = 0; h < hops; h++) {
        cfgs.push_back(TeleportConfig{EprParams{vx[h], vp[h], o.vanti, o.vanti}});
    }

    Report r;
    r.experiment = "teleport";
    r.units = UnitsConvention::with_vacuum_variance(c.units);
    r.parameters["hops"] = hops;
    r.parameters["v_sq_x"] = vx;
    r.parameters["v_sq_p"] = vp;
    r.parameters["v_anti"] = o.vanti ? json(*o.vanti) : json(nullptr);
    r.parameters["input"] = {{"kind", kind}, {"a", a1}, {"b", a2}};

    const bool pure = input.is_pure();
    r.variance("input.x", input.cov()(0, 0), 1.0);
    r.variance("input.p", input.cov()(1, 1), 1.0);
    GaussianState state = input;
    for (std::size_t h = 0; h < hops; h++) {
        const std::string k = "hop" + std::to_string(h + 1);
        state = teleport(state, cfgs[h]);
        r.scalar(k + ".v_sq_x.db", to_db(vx[h]), "dB");
        r.scalar(k + ".v_sq_p.db", to_db(vp[h]), "dB");
        r.scalar(k + ".coherent_fidelity", teleport_coherent_fidelity(std::span(cfgs).subspan(h, 1)));
        if (pure && hops > 1) {
            r.scalar(k + ".fidelity", fidelity(input, state));
        }
        if (hops > 1) {
            r.variance(k + ".output.x", state.cov()(0, 0), 1.0);
            r.variance(k + ".output.p", state.cov()(1, 1), 1.0);
        }
    }
    r.scalar("composed.coherent_fidelity", teleport_coherent_fidelity(cfgs));
    std::optional<double> f;
    if (pure) {
        f = fidelity(input, state);
        r.scalar("fidelity", *f);
    }
    r.variance("output.x", state.cov()(0, 0), 1.0);
    r.variance("output.p", state.cov()(1, 1), 1.0);
    if (kind == "coherent") {
        if (f) r.verdict("fidelity_above_classical", *f, ">", 0.5);
    } else {
        const double sq = std::min(input.cov()(0, 0), input.cov()(1, 1));
        const double out_sq = sq == input.cov()(0, 0) ? state.cov()(0, 0) : state.cov()(1, 1);
        r.verdict("squeezing_preserved", out_sq, "<", 1.0, true);
    }
    r.state_modes = {"out"};
    r.state = state;

    bool agree = true;
    if (c.mc) {
        std::vector<dsl::TeleportHop> hs;
        for (std::size_t h = 0; h < hops; h++) hs.push_back(dsl::TeleportHop{vx[h], vp[h]});
        const dsl::Plan plan = dsl::compile(dsl::parse(dsl::teleport_program(hs, o.vanti)).program);
        agree = attach_oracle(r, plan, input, state, c);
        if (f) {
            const double grid = mc::fidelity_overlap_oracle(input, state);
            (*r.oracle)["fidelity_grid"] = grid;
            if (std::abs(grid - *f) > kGridFidelityTolerance) {
                (*r.oracle)["agree"] = false;
                agree = false;
            }
        }
    }
    emit(r, c, out);
    return agree ? kExitOk : kExitOracle;
}

// ---------------------------------------------------------------------------

struct QndOptions {
    std::optional<double> reflectance;
    bool ideal = false;
    double ancilla_vsq = 1.0;
    std::optional<double> ancilla_db;
    std::optional<double> vanti;
    std::optional<double> calibrate;
    std::string signal = "x";
    double amplitude = 0.0;
};

int cmd_qnd(const QndOptions& o, const CommonOptions& c, std::ostream& out) {
    const double R = o.reflectance.value_or(unity_gain_reflectance());
    const double gain = interaction_gain(R);
    double v = o.ancilla_db ? from_db(*o.ancilla_db) : o.ancilla_vsq;
    if (o.calibrate) {
        v = calibrate_ancilla_for_vcond(*o.calibrate, R);
    }
    const bool sx = o.signal == "x";
    const GaussianState input =
        sx ? tensor(coherent(o.amplitude, 0.0), vacuum(1)) : tensor(vacuum(1), coherent(0.0, o.amplitude));
    const GaussianState state = o.ideal ? apply(qnd_ideal(gain), input) : qnd_offline(R, v, o.vanti).apply(input);
    const QndReport q = qnd_criteria(state, QndSignalVariances{}, gain);

    Report r;
    r.experiment = "qnd";
    r.units = UnitsConvention::with_vacuum_variance(c.units);
    r.parameters["reflectance"] = R;
    r.parameters["ideal"] = o.ideal;
    r.parameters["ancilla_v_sq"] = o.ideal ? json(nullptr) : json(v);
    r.parameters["ancilla_v_anti"] = o.vanti ? json(*o.vanti) : json(nullptr);
    r.parameters["calibrate_vcond"] = o.calibrate ? json(*o.calibrate) : json(nullptr);
    r.parameters["signal"] = o.signal;
    r.parameters["amplitude"] = o.amplitude;

    r.scalar("reflectance", R);
    r.scalar("interaction_gain", gain);
    if (!o.ideal) {
        r.scalar("ancilla.v_sq", v);
        r.scalar("ancilla.db", to_db(v), "dB");
    }
    r.scalar("x.t_s", q.t_s_x);
    r.scalar("x.t_m", q.t_m_x);
    r.scalar("x.t_sum", q.t_s_x + q.t_m_x);
    r.scalar("x.k_opt", q.k_opt_x);
    r.scalar("p.t_s", q.t_s_p);
    r.scalar("p.t_m", q.t_m_p);
    r.scalar("p.t_sum", q.t_s_p + q.t_m_p);
    r.scalar("p.k_opt", q.k_opt_p);
    r.scalar("duan.k", q.duan.k);
    r.scalar("duan.min_ratio_x", q.duan_min_x);
    r.scalar("duan.min_ratio_p", q.duan_min_p);
    if (o.amplitude != 0.0) {
        r.scalar("signal.mean", sx ? state.mean()(0) : state.mean()(3));
        r.scalar("meter.mean", sx ? state.mean()(2) : state.mean()(1));
    }
    r.variance("x1", state.cov()(0, 0), 1.0);
    r.variance("p1", state.cov()(1, 1), 1.0);
    r.variance("x2", state.cov()(2, 2), 1.0);
    r.variance("p2", state.cov()(3, 3), 1.0);
    r.variance("x.v_cond", q.v_cond_x, 1.0);
    r.variance("p.v_cond", q.v_cond_p, 1.0);

    const std::string s = o.signal;
    r.verdict(s + ".transfer_sum", sx ? q.t_s_x + q.t_m_x : q.t_s_p + q.t_m_p, ">", 1.0);
    r.verdict(s + ".v_cond", sx ? q.v_cond_x : q.v_cond_p, "<", 1.0, true);
    r.verdict("duan.x", q.duan.lhs_x, "<", q.duan.bound, true);
    r.verdict("duan.p", q.duan.lhs_p, "<", q.duan.bound, true);
    r.state_modes = {"m1", "m2"};
    r.state = state;

    bool agree = true;
    if (c.mc) {
        const std::string text =
            o.ideal ? "cvc 1\nmode m1 vacuum\nmode m2 vacuum\nqnd m1 m2 G=" + dsl::format_number(gain) + "\n"
                    : dsl::qnd_offline_program(R, v, o.vanti);
        const dsl::Plan plan = dsl::compile(dsl::parse(text).program);
        agree = attach_oracle(r, plan, input, state, c);
    }
    emit(r, c, out);
    return agree ? kExitOk : kExitOracle;
}

// ---------------------------------------------------------------------------

struct ClusterOptions {
    std::string shape = "linear";
    std::optional<double> vsq;
    std::optional<double> db;
    std::optional<double> vanti;
};

std::string form_label(const ClusterGraph& g, std::size_t mode) {
    std::string s = "p" + std::to_string(mode + 1);
    for (std::size_t k : g.neighbors(mode)) s += "-x" + std::to_string(k + 1);
    return s;
}

int cmd_cluster(const ClusterOptions& o, const CommonOptions& c, std::ostream& out) {
    const auto preset = parse_cluster_preset(o.shape);
    if (!preset || *preset == ClusterPreset::Custom) {
        throw UsageError("--shape must be linear, tshape or diamond");
    }
    const double v = o.db ? from_db(*o.db) : o.vsq.value_or(1.0);
    const SqueezerSpec spec{v, o.vanti};
    const GaussianState state = build_cluster(*preset, std::span(&spec, 1));
    const ClusterGraph graph = ClusterGraph::preset(*preset);

    Report r;
    r.experiment = "cluster";
    r.units = UnitsConvention::with_vacuum_variance(c.units);
    r.parameters["shape"] = o.shape;
    r.parameters["v_sq"] = v;
    r.parameters["v_anti"] = o.vanti ? json(*o.vanti) : json(nullptr);
    r.scalar("v_sq", v);
    r.scalar("v_sq.db", to_db(v), "dB");

    const auto table = nullifier_table(state, graph);
    for (const auto& row : table) {
        r.variance(form_label(graph, row.mode), row.variance, row.vacuum_reference);
    }
    for (const auto& row : table) {
        r.verdict(form_label(graph, row.mode) + ".below_vacuum", row.variance, "<", row.vacuum_reference, true);
    }
    if (*preset == ClusterPreset::Linear4) {
        const InseparabilityReport ins = inseparability_check(state);
        static constexpr const char* kNames[3] = {"inseparability.n1+n2", "inseparability.n4+n3",
                                                  "inseparability.n2+n3"};
        for (std::size_t i = 0; i < 3; i++) {
            r.verdict(kNames[i], ins.sums[i], "<", ins.bound, true);
        }
    }
    r.state_modes = {"w1", "w2", "w3", "w4"};
    r.state = state;

    bool agree = true;
    if (c.mc) {
        const dsl::Plan plan = dsl::compile(dsl::parse(dsl::cluster_program(*preset, v, o.vanti)).program);
        agree = attach_oracle(r, plan, std::nullopt, state, c);
    }
    emit(r, c, out);
    return agree ? kExitOk : kExitOracle;
}

// ---------------------------------------------------------------------------

struct RunOptions {
    std::string file;
    std::vector<std::string> forms;
    CLI::Option* units_opt = nullptr;
};

int cmd_run(const RunOptions& o, const CommonOptions& c, std::ostream& out, std::ostream& err) {
    std::ifstream in(o.file);
    if (!in) {
        err << "error: cannot read '" << o.file << "'\n";
        return kExitUsage;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    const dsl::ParseResult parsed = dsl::parse(buf.str());
    if (!parsed.ok()) {
        for (const auto& d : parsed.errors) err << dsl::format_diagnostic(d, o.file) << "\n";
        return kExitParse;
    }
    const dsl::Plan plan = dsl::compile(parsed.program);
    const GaussianState state = dsl::execute(plan);

    Report r;
    r.experiment = "run";
    r.units = o.units_opt->count() > 0 ? UnitsConvention::with_vacuum_variance(c.units) : plan.units;
    r.parameters["file"] = o.file;
    r.parameters["modes"] = plan.mode_names;
    r.parameters["outcomes"] = plan.outcome_names;
    for (std::size_t m = 0; m < plan.output_modes.size(); m++) {
        r.variance("x_" + plan.output_modes[m], state.cov()(2 * m, 2 * m), 1.0);
        r.variance("p_" + plan.output_modes[m], state.cov()(2 * m + 1, 2 * m + 1), 1.0);
    }
    const GaussianState vac = vacuum(plan.output_modes.size());
    for (const std::string& spec : o.forms) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw UsageError("--form expects name=expression");
        }
        const std::string name = spec.substr(0, eq);
        const QuadratureForm form = dsl::parse_form(plan, spec.substr(eq + 1));
        const FormStats st = form_stats(state, form);
        r.scalar(name + ".mean", st.mean);
        r.variance(name, st.variance, form_stats(vac, form).variance);
    }
    r.state_modes = plan.output_modes;
    r.state = state;

    bool agree = true;
    if (c.mc) {
        agree = attach_oracle(r, plan, std::nullopt, state, c);
    }
    emit(r, c, out);
    return agree ? kExitOk : kExitOracle;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Gaussian continuous-variable optics simulator", "cvsim"};
    app.set_version_flag("--version", CVSIM_VERSION);
    app.require_subcommand(1);

    CommonOptions common;
    std::function<int()> action;

    TeleportOptions tp;
    auto* tele = app.add_subcommand("teleport", "Single or sequential teleportation");
    auto* vsq = tele->add_option("--vsq", tp.vsq, "EPR squeezed variance per hop (comma list)")->delimiter(',');
    tele->add_option("--db", tp.db, "EPR squeezing per hop in dB")->delimiter(',')->excludes(vsq);
    tele->add_option("--vsq-p", tp.vsq_p, "p-quadrature squeezed variance per hop (default: --vsq)")->delimiter(',');
    tele->add_option("--vanti", tp.vanti, "Anti-squeezed variance of every source (default pure)");
    tele->add_option("--input", tp.input, "coherent X P | squeezed VSQ VANTI")->expected(3);
    tele->add_option("--hops", tp.hops, "Number of hops")->check(CLI::PositiveNumber);
    add_common(tele, common);
    tele->callback([&] {
        common.seed_opt = tele->get_option("--seed");
        action = [&] { return cmd_teleport(tp, common, out); };
    });

    QndOptions qo;
    auto* qnd = app.add_subcommand("qnd", "Offline-squeezed QND gate");
    qnd->add_option("--R", qo.reflectance, "Ancilla beam splitter reflectance (default: unity gain)");
    qnd->add_flag("--ideal", qo.ideal, "Use the ideal unitary at the same gain");
    auto* avsq = qnd->add_option("--ancilla-vsq", qo.ancilla_vsq, "Ancilla squeezed variance");
    auto* adb = qnd->add_option("--ancilla-db", qo.ancilla_db, "Ancilla squeezing in dB")->excludes(avsq);
    qnd->add_option("--vanti", qo.vanti, "Ancilla anti-squeezed variance (default pure)");
    qnd->add_option("--calibrate-vcond", qo.calibrate, "Pick the ancilla giving this V_cond(x)")
        ->excludes(avsq)
        ->excludes(adb);
    qnd->add_option("--signal", qo.signal, "Signal quadrature")->check(CLI::IsMember({"x", "p"}));
    qnd->add_option("--amplitude", qo.amplitude, "Signal amplitude");
    add_common(qnd, common);
    qnd->callback([&] {
        common.seed_opt = qnd->get_option("--seed");
        action = [&] { return cmd_qnd(qo, common, out); };
    });

    ClusterOptions co;
    auto* cluster = app.add_subcommand("cluster", "Four-mode cluster states");
    cluster->add_option("--shape", co.shape, "linear | tshape | diamond")
        ->check(CLI::IsMember({"linear", "tshape", "diamond"}));
    auto* cvsq = cluster->add_option("--vsq", co.vsq, "Squeezed variance of every input");
    cluster->add_option("--db", co.db, "Input squeezing in dB")->excludes(cvsq);
    cluster->add_option("--vanti", co.vanti, "Anti-squeezed variance (default pure)");
    add_common(cluster, common);
    cluster->callback([&] {
        common.seed_opt = cluster->get_option("--seed");
        action = [&] { return cmd_cluster(co, common, out); };
    });

    RunOptions ro;
    auto* run = app.add_subcommand("run", "Execute a .cvc circuit file");
    run->add_option("file", ro.file, "Circuit file")->required();
    run->add_option("--form", ro.forms, "name=expression over output quadratures (repeatable)");
    add_common(run, common);
    ro.units_opt = run->get_option("--units");
    run->callback([&] {
        common.seed_opt = run->get_option("--seed");
        action = [&] { return cmd_run(ro, common, out, err); };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        return action();
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.kind() == ErrorKind::InvalidArgument ? kExitUsage : kExitUnphysical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace cvsim::cli
