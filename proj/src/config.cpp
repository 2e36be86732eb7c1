#include "broadwell/config.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>

#include "broadwell/constants.hpp"
#include "broadwell/errors.hpp"
#include "broadwell/io.hpp"

namespace broadwell {

using nlohmann::json;

namespace {

double get_number(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
    return j.at(key).get<double>();
}

std::size_t get_count(const json& j, const char* key, std::size_t fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
        throw ConfigError(std::string("'") + key + "' must be a count");
    }
    return v.get<std::size_t>();
}

json section(const json& j, const char* key) {
    if (!j.contains(key)) return json::object();
    if (!j.at(key).is_object()) throw ConfigError(std::string("'") + key + "' must be an object");
    return j.at(key);
}

Scaled parse_scaled(const json& j, const char* relative_key, const char* what) {
    if (j.is_number()) return {j.get<double>(), false};
    if (j.is_object() && j.contains(relative_key) && j.at(relative_key).is_number()) {
        return {j.at(relative_key).get<double>(), true};
    }
    throw ConfigError(std::string(what) + " must be a number or {\"" + relative_key + "\": x}");
}

std::array<double, 2> pair_of(const json& j, const char* key, std::array<double, 2> fallback) {
    if (!j.contains(key)) return fallback;
    const auto& a = j.at(key);
    if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number()) {
        throw ConfigError(std::string("'") + key + "' must be a pair of numbers");
    }
    return {a[0].get<double>(), a[1].get<double>()};
}

/// The initial profile carried through the inflow face, so the inflow datum
/// continues the initial datum smoothly.
AffineMap2 continuation_map(DataSelector which, const RectDomain& d, double tau, double c) {
    switch (which) {
        case DataSelector::Inflow1: return {-c, 0.0, d.a1 + c * tau, 0.0, 1.0, 0.0};
        case DataSelector::Inflow2: return {0.0, 1.0, 0.0, -c, 0.0, d.a2 + c * tau};
        case DataSelector::Inflow3: return {0.0, 1.0, 0.0, c, 0.0, d.b2 - c * tau};
        case DataSelector::Inflow4: return {c, 0.0, d.b1 - c * tau, 0.0, 1.0, 0.0};
        default: throw ConfigError("continue_initial applies to inflow data only");
    }
}

}  // namespace

double RunConfig::resolved_R0() const {
    if (!R0.relative) return R0.value;
    return R0.value * theorem_R0_cap(params.c, params.S, params.sigma);
}

DataFunction parse_datum(const json& j, DataSelector which, const RectDomain& domain, double tau, double c,
                         const std::vector<DataFunction>& initial, const std::filesystem::path& base_dir) {
    if (j.is_number()) return DataFunction::constant(j.get<double>());
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
        throw ConfigError(std::string(to_string(which)) + ": datum needs a \"type\"");
    }
    const std::string type = j.at("type").get<std::string>();
    if (type == "constant") return DataFunction::constant(get_number(j, "value", 0.0));
    if (type == "affine") {
        return DataFunction(AffinePreset{get_number(j, "offset", 0.0), get_number(j, "slope_u", 0.0),
                                         get_number(j, "slope_v", 0.0)});
    }
    if (type == "gaussian") {
        const auto ctr = pair_of(j, "center", {0.0, 0.0});
        const double w = get_number(j, "width", 1.0);
        if (!(w > 0.0)) throw ConfigError("gaussian width must be > 0");
        return DataFunction(
            GaussianPreset{get_number(j, "base", 0.0), get_number(j, "amplitude", 0.0), ctr[0], ctr[1], w});
    }
    if (type == "trig") {
        const auto f = pair_of(j, "freq", {1.0, 1.0});
        const auto ph = pair_of(j, "phase", {0.0, 0.0});
        return DataFunction(
            TrigPreset{get_number(j, "base", 0.0), get_number(j, "amplitude", 0.0), f[0], f[1], ph[0], ph[1]});
    }
    if (type == "bump") {
        const auto u = pair_of(j, "u_range", {0.0, 1.0});
        const auto v = pair_of(j, "v_range", {0.0, 1.0});
        return DataFunction(BumpPreset{get_number(j, "base", 0.0), get_number(j, "amplitude", 0.0), u[0], u[1],
                                       v[0], v[1], static_cast<int>(get_number(j, "power", 4))});
    }
    if (type == "table") {
        if (!j.contains("path") || !j.at("path").is_string()) throw ConfigError("table datum needs \"path\"");
        std::filesystem::path p = j.at("path").get<std::string>();
        if (p.is_relative()) p = base_dir / p;
        const std::string column = j.value("column", std::string("value"));
        return DataFunction::table(read_table_csv(p, column));
    }
    if (type == "composed") {
        if (!j.contains("inner") || !j.contains("map") || !j.at("map").is_array() || j.at("map").size() != 6) {
            throw ConfigError("composed datum needs \"inner\" and a 6-entry \"map\"");
        }
        AffineMap2 m{};
        for (std::size_t n = 0; n < 6; ++n) m[n] = j.at("map")[n].get<double>();
        return DataFunction::composed(parse_datum(j.at("inner"), which, domain, tau, c, initial, base_dir), m);
    }
    if (type == "continue_initial") {
        const auto idx = static_cast<std::size_t>(which);
        if (idx < 4 || initial.size() != 4) throw ConfigError("continue_initial applies to inflow data only");
        return DataFunction::composed(initial[idx - 4], continuation_map(which, domain, tau, c));
    }
    throw ConfigError("unknown datum type '" + type + "'");
}

RunConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    RunConfig rc;
    try {
        const json params = section(j, "params");
        rc.params.c = get_number(params, "c", 1.0);
        rc.params.S = get_number(params, "S", 0.5);
        rc.params.validate();
        rc.params.sigma = get_number(params, "sigma", ModelParams::default_sigma(rc.params.c, rc.params.S));
        rc.params.validate();

        const json dom = section(j, "domain");
        rc.domain = {get_number(dom, "a1", 0.0), get_number(dom, "b1", 1.0), get_number(dom, "a2", 0.0),
                     get_number(dom, "b2", 1.0)};
        rc.domain.validate();

        const json grid = section(j, "grid");
        rc.nt = get_count(grid, "nt", 17);
        rc.nx = get_count(grid, "nx", 17);
        rc.ny = get_count(grid, "ny", rc.nx);
        if (rc.nt < 3 || rc.nx < 3 || rc.ny < 3) throw ConfigError("grid needs >= 3 points per axis");

        const std::string mode = j.value("mode", std::string("slab"));
        if (mode == "slab") rc.mode = RunMode::Slab;
        else if (mode == "march") rc.mode = RunMode::March;
        else throw ConfigError("mode must be \"slab\" or \"march\"");

        rc.slab = {get_number(j, "tau", 0.0), get_number(j, "tau_prime", get_number(j, "tau", 0.0) + 1.0)};
        rc.slab.validate();
        if (j.contains("T_end")) rc.T_end = parse_scaled(j.at("T_end"), "multiple_of_min_step", "T_end");
        else rc.T_end = {rc.slab.tau_prime, false};
        if (j.contains("R0")) rc.R0 = parse_scaled(j.at("R0"), "fraction_of_cap", "R0");
        if (!(rc.R0.value > 0.0)) throw ConfigError("R0 must be > 0");
        if (j.contains("q_override")) rc.q_override = parse_scaled(j.at("q_override"), "fraction_of_f", "q_override");

        const std::string op = j.value("operator", std::string("plain"));
        if (op == "plain") rc.op = OperatorKind::Plain;
        else if (op == "relaxed") rc.op = OperatorKind::Relaxed;
        else throw ConfigError("operator must be \"plain\" or \"relaxed\"");

        const json tol = section(j, "tolerances");
        if (tol.contains("tol_fix")) rc.tol_fix = get_number(tol, "tol_fix", 0.0);
        if (rc.tol_fix && !(*rc.tol_fix > 0.0)) throw ConfigError("tol_fix must be > 0");
        rc.max_iter = get_count(tol, "max_iter", 200);
        if (tol.contains("tol_compat")) rc.tol_compat = get_number(tol, "tol_compat", 0.0);
        rc.thresholds.residual = get_number(tol, "residual", rc.thresholds.residual);
        rc.thresholds.balance = get_number(tol, "balance", rc.thresholds.balance);
        rc.thresholds.fixed_point = get_number(tol, "fixed_point", rc.thresholds.fixed_point);

        const json quad = section(j, "quadrature");
        const std::string rule = quad.value("rule", std::string("trapezoid"));
        if (rule == "trapezoid") rc.quad.rule = QuadratureSpec::Rule::Trapezoid;
        else if (rule == "simpson") rc.quad.rule = QuadratureSpec::Rule::Simpson;
        else throw ConfigError("quadrature rule must be \"trapezoid\" or \"simpson\"");
        if (quad.contains("substep") && !quad.at("substep").is_null()) rc.quad.substep = get_number(quad, "substep", 0.0);
        rc.quad.validate();

        if (j.contains("refinement")) rc.refinement = j.at("refinement").get<std::vector<std::size_t>>();
        if (j.contains("bench_sizes")) rc.bench_sizes = j.at("bench_sizes").get<std::vector<std::size_t>>();
        rc.seed = j.value("seed", std::uint64_t{1});
        rc.out = j.value("out", std::string("out"));

        if (!j.contains("data") || !j.at("data").is_object()) throw ConfigError("config needs a \"data\" object");
        const json& data = j.at("data");
        const json& ini = data.at("initial");
        const json& inf = data.at("inflow");
        if (!ini.is_array() || ini.size() != 4 || !inf.is_array() || inf.size() != 4) {
            throw ConfigError("data.initial and data.inflow must list four data each");
        }
        rc.data.domain = rc.domain;
        rc.data.tau = rc.slab.tau;
        rc.data.inflow_origin = rc.slab.tau;
        std::vector<DataFunction> initial;
        for (std::size_t i = 0; i < 4; ++i) {
            initial.push_back(parse_datum(ini[i], static_cast<DataSelector>(i), rc.domain, rc.slab.tau,
                                          rc.params.c, {}, base_dir));
            rc.data.initial[i] = initial.back();
        }
        for (std::size_t i = 0; i < 4; ++i) {
            rc.data.inflow[i] = parse_datum(inf[i], static_cast<DataSelector>(i + 4), rc.domain, rc.slab.tau,
                                            rc.params.c, initial, base_dir);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    } catch (const PreconditionError& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return rc;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config " + path.string());
    json j;
    try {
        is >> j;
    } catch (const json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return parse_config(j, path.parent_path());
}

}  // namespace broadwell
