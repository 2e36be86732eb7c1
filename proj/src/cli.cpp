#include "broadwell/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "broadwell/characteristics.hpp"
#include "broadwell/errors.hpp"
#include "broadwell/io.hpp"
#include "broadwell/march.hpp"
#include "broadwell/parallel.hpp"
#include "broadwell/picard.hpp"
#include "broadwell/verify.hpp"

namespace broadwell {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonFlags {
    std::string config;
    std::string out;
    std::size_t workers = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool unsafe = false;
    bool json_out = false;
};

void add_common(CLI::App* sub, CommonFlags& f) {
    sub->add_option("--config", f.config, "run configuration (JSON)")->required();
    sub->add_option("--out", f.out, "output directory (overrides the config)");
    sub->add_option("--workers", f.workers, "worker threads (default: BROADWELL_WORKERS or all cores)");
    sub->add_option("--seed", f.seed, "random seed (overrides the config)")
        ->each([&f](const std::string&) { f.seed_set = true; });
    sub->add_flag("--unsafe", f.unsafe, "run even when the hypotheses fail; results are uncertified");
    sub->add_flag("--json", f.json_out, "machine-readable output");
}

void apply_workers(const CommonFlags& f) {
    std::size_t n = f.workers;
    if (n == 0) {
        if (const char* env = std::getenv("BROADWELL_WORKERS")) {
            try {
                n = static_cast<std::size_t>(std::stoul(env));
            } catch (const std::exception&) {
                throw ConfigError("BROADWELL_WORKERS must be a positive integer");
            }
        }
    }
    set_workers(n);
}

RunConfig load(const CommonFlags& f) {
    RunConfig rc = load_config(f.config);
    if (!f.out.empty()) rc.out = f.out;
    if (f.seed_set) rc.seed = f.seed;
    return rc;
}

PicardOptions picard_options(const RunConfig& rc) {
    PicardOptions po;
    po.op = rc.op;
    po.tol_fix = rc.tol_fix;
    po.max_iter = rc.max_iter;
    po.quad = rc.quad;
    return po;
}

json check_json(const CheckResult& c) {
    json compat = json::array();
    for (const auto& v : c.compatibility) {
        compat.push_back({{"component", v.component + 1}, {"edge", v.edge}, {"gap", v.gap}, {"at", v.coordinate}});
    }
    return json{{"passed", c.passed},
                {"constants", to_json(c.constants)},
                {"verdict", to_json(c.verdict)},
                {"compatibility_violations", compat},
                {"regularity_issues", c.regularity},
                {"T_end", c.T_end},
                {"R0_cap", c.constants.R0_cap}};
}

void print_check(std::ostream& out, const CheckResult& c) {
    const auto& k = c.constants;
    out << std::setprecision(10);
    out << "constants: mu=" << k.mu << " lambda=" << k.lambda << " delta=" << k.delta << " gamma=" << k.gamma
        << "\n";
    out << "  c=" << k.c << " S=" << k.S << " sigma=" << k.sigma << " slab_length=" << k.slab_length << "\n";
    out << "  q=" << k.q << " q_sigma=" << k.q_sigma << " p=" << k.p << " p_sigma=" << k.p_sigma << "\n";
    out << "  R0=" << k.R0 << " f(R0)=" << k.f_R0 << " g(q)=" << k.g_q << (k.unbounded_step ? " (unbounded step)" : "")
        << "\n";
    out << "  R0 cap (global)=" << k.R0_cap << "\n";
    out << "mode: " << to_string(c.verdict.mode) << "\n";
    for (const auto& h : c.verdict.checks) {
        out << "  [" << (h.passed ? "ok" : "FAIL") << "] " << h.name << ": " << h.lhs << (h.strict ? " < " : " <= ")
            << h.rhs << "  margin " << h.margin << "\n";
    }
    out << "p_sigma q_sigma=" << c.verdict.p_sigma_q_sigma << "\n";
    out << "admissible R: [" << c.verdict.r_lo << ", " << c.verdict.r_hi << "]\n";
    for (const auto& v : c.compatibility) {
        out << "  [FAIL] compatibility N" << v.component + 1 << " on " << v.edge << ": gap " << v.gap << "\n";
    }
    for (const auto& s : c.regularity) out << "  [FAIL] regularity " << s << "\n";
    out << (c.passed ? "PASS" : "FAIL") << "\n";
}

void clear_outputs(const fs::path& dir) {
    if (!fs::exists(dir)) return;
    for (const auto& e : fs::directory_iterator(dir)) {
        const std::string name = e.path().filename().string();
        if ((e.is_directory() && name.rfind("slab_", 0) == 0) || name == "march.jsonl" || name == "summary.json" ||
            name == "verify.json") {
            fs::remove_all(e.path());
        }
    }
}

void write_json(const fs::path& p, const json& j) {
    std::ofstream os(p);
    if (!os) throw ConfigError("cannot write " + p.string());
    os << j.dump(2) << "\n";
}

void write_slab(const fs::path& dir, std::size_t n, const SlabSolution& sol, const RunConfig& rc, bool certified) {
    const fs::path sd = dir / ("slab_" + std::to_string(n));
    fs::create_directories(sd);
    const auto& g = sol.field.grid();
    for (std::size_t k = 0; k < g.nt(); ++k) {
        write_slice_csv(sd / ("slice_" + std::to_string(k) + ".csv"), sol.field, k);
    }
    json meta{{"n", n},
              {"tau", g.slab().tau},
              {"tau_prime", g.slab().tau_prime},
              {"nt", g.nt()},
              {"nx", g.nx()},
              {"ny", g.ny()},
              {"operator", to_string(rc.op)},
              {"iterations", sol.iterations},
              {"final_delta", sol.final_delta},
              {"tol_fix", sol.tol_fix},
              {"contraction_estimates", sol.contraction_estimates},
              {"certified", certified}};
    if (sol.norm) meta["norm"] = to_json(*sol.norm);
    write_json(sd / "slab.json", meta);
}

int cmd_check(const CommonFlags& f, std::ostream& out) {
    const RunConfig rc = load(f);
    const CheckResult c = run_check(rc);
    if (f.json_out) out << check_json(c).dump(2) << "\n";
    else print_check(out, c);
    return c.passed ? kExitOk : kExitFailed;
}

int cmd_solve(const CommonFlags& f, std::ostream& out, std::ostream& err) {
    const RunConfig rc = load(f);
    const CheckResult check = run_check(rc);
    if (!check.passed && !f.unsafe) {
        err << "hypotheses fail; refusing to solve (use --unsafe to override)\n";
        if (!f.json_out) print_check(err, check);
        return kExitFailed;
    }
    const bool certified = check.passed;
    const fs::path dir = rc.out;
    fs::create_directories(dir);
    clear_outputs(dir);
    std::ofstream jsonl(dir / "march.jsonl");

    json summary{{"mode", rc.mode == RunMode::March ? "march" : "slab"},
                 {"operator", to_string(rc.op)},
                 {"certified", certified},
                 {"R0", rc.resolved_R0()}};
    double max_norm = 0.0;
    std::size_t total_iter = 0;
    std::vector<std::size_t> capped;
    std::size_t slabs = 0;
    double reached = rc.slab.tau;

    auto sink = [&](const SlabRecord& rec, const SlabSolution& sol) {
        write_slab(dir, rec.n, sol, rc, certified);
        jsonl << to_json(rec).dump() << "\n";
        jsonl.flush();
        max_norm = std::max(max_norm, rec.n_script);
        total_iter += rec.iterations;
        if (rec.capped) capped.push_back(rec.n);
        ++slabs;
        reached = rec.S_end;
        if (!f.json_out) {
            out << "slab " << rec.n << " [" << rec.S_begin << ", " << rec.S_end << "] q=" << rec.q
                << " iterations=" << rec.iterations << " N=" << rec.n_script << (rec.capped ? " capped" : "") << "\n";
        }
    };

    try {
        if (rc.mode == RunMode::Slab) {
            const SlabGrid grid(rc.slab, rc.domain, rc.nt, rc.nx, rc.ny);
            const SlabSolution sol = solve_slab(rc.params, rc.data, grid, picard_options(rc));
            SlabRecord rec;
            rec.S_begin = rc.slab.tau;
            rec.S_end = rc.slab.tau_prime;
            rec.q = check.constants.q;
            rec.g_q = check.constants.g_q;
            rec.iterations = sol.iterations;
            rec.final_delta = sol.final_delta;
            rec.n_script = sol.norm ? sol.norm->n_script : sol.field.sup_norm();
            sink(rec, sol);
        } else {
            MarchOptions mo;
            mo.R0 = rc.resolved_R0();
            mo.T_end = check.T_end;
            mo.nt = rc.nt;
            mo.nx = rc.nx;
            mo.ny = rc.ny;
            mo.picard = picard_options(rc);
            mo.unsafe = f.unsafe;
            const MarchState st = global_march(rc.params, rc.data, mo, sink);
            summary["min_step_certificate"] = st.min_step_certificate;
            summary["T_end"] = mo.T_end;
        }
    } catch (const MarchError& e) {
        err << "march error at slab " << e.index() << ": " << e.what() << ": " << e.diagnostics() << "\n";
        summary["error"] = {{"slab", e.index()}, {"what", e.what()}, {"diagnostics", e.diagnostics()}};
        write_json(dir / "summary.json", summary);
        return kExitSolveError;
    } catch (const NonConvergenceError& e) {
        err << "solve error: " << e.what() << "\n";
        summary["error"] = {{"slab", 0}, {"what", e.what()}, {"ratios", e.ratios()}};
        write_json(dir / "summary.json", summary);
        return kExitSolveError;
    } catch (const NumericError& e) {
        err << "solve error: " << e.what() << "\n";
        summary["error"] = {{"slab", 0}, {"what", e.what()}};
        write_json(dir / "summary.json", summary);
        return kExitSolveError;
    } catch (const PositivityError& e) {
        err << "solve error: " << e.what() << "\n";
        summary["error"] = {{"slab", 0}, {"what", e.what()}};
        write_json(dir / "summary.json", summary);
        return kExitSolveError;
    }
    summary["slabs"] = slabs;
    summary["S_reached"] = reached;
    summary["max_n_script"] = max_norm;
    summary["total_iterations"] = total_iter;
    summary["capped_slabs"] = capped;
    write_json(dir / "summary.json", summary);
    if (f.json_out) out << summary.dump(2) << "\n";
    return kExitOk;
}

struct LoadedSlab {
    Field4 field;
    ProblemData data;
};

int cmd_verify(const CommonFlags& f, std::ostream& out, std::ostream& err) {
    const RunConfig rc = load(f);
    const fs::path dir = rc.out;
    std::vector<LoadedSlab> slabs;
    try {
        ProblemData data = rc.data;
        for (std::size_t n = 0;; ++n) {
            const fs::path sd = dir / ("slab_" + std::to_string(n));
            if (!fs::exists(sd / "slab.json")) break;
            std::ifstream is(sd / "slab.json");
            json meta;
            is >> meta;
            const std::size_t nt = meta.at("nt").get<std::size_t>();
            const std::size_t nx = meta.at("nx").get<std::size_t>();
            const std::size_t ny = meta.at("ny").get<std::size_t>();
            if (nt != rc.nt || nx != rc.nx || ny != rc.ny) {
                err << sd.string() << ": lattice " << nt << "x" << nx << "x" << ny << " does not match the config\n";
                return kExitInvalid;
            }
            const TimeSlab slab{meta.at("tau").get<double>(), meta.at("tau_prime").get<double>()};
            Field4 field(SlabGrid(slab, rc.domain, nt, nx, ny));
            for (std::size_t k = 0; k < nt; ++k) read_slice_csv(sd / ("slice_" + std::to_string(k) + ".csv"), field, k);
            if (n > 0) data = restart_from_terminal_slice(data, slabs.back().field);
            if (std::abs(data.tau - slab.tau) > 1e-12 * std::max(1.0, std::abs(slab.tau))) {
                err << sd.string() << ": slab start " << slab.tau << " does not continue the previous slab\n";
                return kExitInvalid;
            }
            slabs.push_back({std::move(field), data});
        }
    } catch (const SizeError& e) {
        err << "shape mismatch: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const json::exception& e) {
        err << "bad slab metadata: " << e.what() << "\n";
        return kExitInvalid;
    }
    if (slabs.empty()) {
        err << "no solution found under " << dir.string() << "\n";
        return kExitInvalid;
    }

    const auto& th = rc.thresholds;
    bool passed = true;
    json per_slab = json::array();
    for (std::size_t n = 0; n < slabs.size(); ++n) {
        const auto& s = slabs[n];
        const auto res = pde_residual(rc.params, s.field);
        const auto bal = conservation_balance(rc.params, s.field);
        const double fp = fixed_point_residual(rc.params, s.data, s.field, rc.quad);
        const double gap = oracle_gap(rc.params, s.data, s.field);
        const double min_v = s.field.min_value();
        const bool ok = res.max <= th.residual && bal.mass.max_gap <= th.balance &&
                        bal.momentum_x.max_gap <= th.balance && bal.momentum_y.max_gap <= th.balance &&
                        fp <= th.fixed_point && min_v >= -1e-12;
        passed = passed && ok;
        per_slab.push_back({{"n", n},
                            {"residual_sup", {res.sup[0], res.sup[1], res.sup[2], res.sup[3]}},
                            {"residual_max", res.max},
                            {"mass_balance", bal.mass.max_gap},
                            {"momentum_x_balance", bal.momentum_x.max_gap},
                            {"momentum_y_balance", bal.momentum_y.max_gap},
                            {"oracle_gap", gap},
                            {"fixed_point_residual", fp},
                            {"min_value", min_v},
                            {"passed", ok}});
    }

    json report{{"slabs", per_slab},
                {"thresholds",
                 {{"residual", th.residual}, {"balance", th.balance}, {"fixed_point", th.fixed_point}}}};

    const auto& first = slabs.front();
    if (first.field.grid().slab().length() <= 1.0) {
        const auto mc = measure_constants(rc.params, first.data, first.field.grid(), 10, rc.resolved_R0(), rc.seed,
                                          rc.quad);
        report["measured_constants"] = to_json(mc);
        passed = passed && mc.contraction_ok && mc.growth_ok;
    }

    if (!rc.refinement.empty()) {
        json study = json::array();
        double prev = 0.0;
        for (std::size_t n : rc.refinement) {
            const SlabGrid g(rc.slab, rc.domain, 2 * (n - 1) + 1, n, n);
            const auto sol = solve_slab(rc.params, rc.data, g, picard_options(rc));
            const double gap = oracle_gap(rc.params, rc.data, sol.field);
            json row{{"nx", n}, {"nt", g.nt()}, {"oracle_gap", gap}};
            if (prev > 0.0) row["ratio"] = prev / gap;
            prev = gap;
            study.push_back(row);
        }
        report["refinement"] = study;
    }
    report["passed"] = passed;
    write_json(dir / "verify.json", report);
    out << report.dump(2) << "\n";
    return passed ? kExitOk : kExitFailed;
}

int cmd_bench(const CommonFlags& f, std::ostream& out) {
    const RunConfig rc = load(f);
    json rows = json::array();
    for (std::size_t n : rc.bench_sizes) {
        const SlabGrid g(rc.slab, rc.domain, n, n, n);
        const Field4 M = transport_solution(rc.params, rc.data, g);
        auto time = [&](auto&& fn) {
            const auto t0 = std::chrono::steady_clock::now();
            fn();
            return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        };
        const double plain = time([&] { (void)apply_T(rc.params, rc.data, M, rc.quad); });
        const double relaxed = time([&] { (void)apply_T_sigma(rc.params, rc.data, M, rc.quad); });
        rows.push_back({{"n", n}, {"points", g.size()}, {"apply_T_s", plain}, {"apply_T_sigma_s", relaxed}});
        if (!f.json_out) {
            out << "n=" << n << " points=" << g.size() << " apply_T " << plain << " s, apply_T_sigma " << relaxed
                << " s\n";
        }
    }
    if (f.json_out) out << json{{"workers", workers()}, {"runs", rows}}.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

double resolve_T_end(const RunConfig& rc) {
    if (!rc.T_end.relative) return rc.T_end.value;
    const double R0 = rc.resolved_R0();
    const auto k = make_constants(rc.params.c, rc.params.S, rc.params.sigma, 1.0, R0, 0.0);
    return rc.slab.tau + rc.T_end.value * k.g(k.gamma * R0);
}

CheckResult run_check(const RunConfig& rc) {
    CheckResult c;
    const double R0 = rc.resolved_R0();
    c.T_end = resolve_T_end(rc);
    TimeSlab slab = rc.slab;
    HypothesisMode mode = HypothesisMode::BoundedSlab;
    if (rc.mode == RunMode::March) {
        if (!(c.T_end > rc.slab.tau)) throw ConfigError("T_end must exceed tau");
        slab = {rc.slab.tau, rc.slab.tau + std::min(1.0, c.T_end - rc.slab.tau)};
        mode = HypothesisMode::Global;
    }
    c.constants = compute_constants(rc.params, slab, rc.data, R0);
    if (rc.q_override) {
        const double q = rc.q_override->relative ? rc.q_override->value * c.constants.f_R0 : rc.q_override->value;
        c.constants = make_constants(rc.params.c, rc.params.S, rc.params.sigma, slab.length(), R0, q);
    }
    const double horizon = rc.mode == RunMode::March ? c.T_end : slab.tau_prime;
    if (mode == HypothesisMode::Global) c.constants.raw_data_norm = raw_data_norm(rc.data, rc.slab.tau, horizon);
    c.verdict = check_hypotheses(c.constants, mode);
    c.compatibility = check_compatibility(rc.data, rc.tol_compat.value_or(default_compat_tolerance(rc.data)));
    c.regularity = check_regularity(rc.data, horizon);
    c.passed = c.verdict.passed && c.compatibility.empty() && c.regularity.empty();
    return c;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Broadwell model IBVP solver"};
    app.require_subcommand(1);
    CommonFlags check_f, solve_f, verify_f, bench_f;
    auto* check = app.add_subcommand("check", "evaluate the constants and the small-data hypotheses");
    auto* solve = app.add_subcommand("solve", "solve one slab or march to the horizon");
    auto* verify = app.add_subcommand("verify", "residual, balance and oracle checks of a stored solution");
    auto* bench = app.add_subcommand("bench", "time one operator application across resolutions");
    add_common(check, check_f);
    add_common(solve, solve_f);
    add_common(verify, verify_f);
    add_common(bench, bench_f);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitInvalid;
    }
    try {
        if (check->parsed()) {
            apply_workers(check_f);
            return cmd_check(check_f, out);
        }
        if (solve->parsed()) {
            apply_workers(solve_f);
            return cmd_solve(solve_f, out, err);
        }
        if (verify->parsed()) {
            apply_workers(verify_f);
            return cmd_verify(verify_f, out, err);
        }
        apply_workers(bench_f);
        return cmd_bench(bench_f, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
}

}  // namespace broadwell
