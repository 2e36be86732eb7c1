#include "broadwell/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "broadwell/characteristics.hpp"
#include "broadwell/errors.hpp"

namespace broadwell {

using nlohmann::json;

namespace {

json num(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        cell.erase(0, cell.find_first_not_of(" \t\r"));
        cell.erase(cell.find_last_not_of(" \t\r") + 1);
        out.push_back(cell);
    }
    return out;
}

double parse_number(const std::string& s, const std::filesystem::path& path) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(path.string() + ": not a number: '" + s + "'");
    }
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_slice_csv(const std::filesystem::path& path, const Field4& field, std::size_t k) {
    const auto& g = field.grid();
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot write " + path.string());
    os << "x,y,N1,N2,N3,N4\n";
    for (std::size_t l = 0; l < g.ny(); ++l) {
        for (std::size_t j = 0; j < g.nx(); ++j) {
            os << format_double(g.x(j)) << ',' << format_double(g.y(l));
            for (std::size_t i = 0; i < 4; ++i) os << ',' << format_double(field.at(i, k, j, l));
            os << '\n';
        }
    }
}

void read_slice_csv(const std::filesystem::path& path, Field4& field, std::size_t k) {
    const auto& g = field.grid();
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read " + path.string());
    std::string line;
    std::getline(is, line);
    const auto header = split(line);
    if (header != std::vector<std::string>{"x", "y", "N1", "N2", "N3", "N4"}) {
        throw ConfigError(path.string() + ": unexpected header");
    }
    std::size_t row = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != 6) throw SizeError(path.string() + ": row with wrong column count");
        if (row >= g.slice_size()) throw SizeError(path.string() + ": more rows than lattice points");
        const std::size_t l = row / g.nx();
        const std::size_t j = row % g.nx();
        const double x = parse_number(cells[0], path);
        const double y = parse_number(cells[1], path);
        const double tol = 1e-9 * std::max({1.0, g.hx(), g.hy()});
        if (std::abs(x - g.x(j)) > tol || std::abs(y - g.y(l)) > tol) {
            throw SizeError(path.string() + ": coordinates do not match the lattice");
        }
        for (std::size_t i = 0; i < 4; ++i) field.at(i, k, j, l) = parse_number(cells[2 + i], path);
        ++row;
    }
    if (row != g.slice_size()) throw SizeError(path.string() + ": fewer rows than lattice points");
}

Table2D read_table_csv(const std::filesystem::path& path, const std::string& column) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read table " + path.string());
    std::string line;
    std::getline(is, line);
    const auto header = split(line);
    const auto it = std::find(header.begin(), header.end(), column);
    if (header.size() < 3 || it == header.end()) {
        throw ConfigError(path.string() + ": no column '" + column + "'");
    }
    const auto col = static_cast<std::size_t>(it - header.begin());
    std::map<std::pair<double, double>, double> cells;
    std::vector<double> us;
    std::vector<double> vs;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto row = split(line);
        if (row.size() != header.size()) throw ConfigError(path.string() + ": ragged row");
        const double u = parse_number(row[0], path);
        const double v = parse_number(row[1], path);
        cells[{v, u}] = parse_number(row[col], path);
        us.push_back(u);
        vs.push_back(v);
    }
    auto uniq = [](std::vector<double>& a) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    };
    uniq(us);
    uniq(vs);
    if (us.size() < 2 || vs.size() < 2 || cells.size() != us.size() * vs.size()) {
        throw ConfigError(path.string() + ": rows do not form a full lattice");
    }
    Table2D t;
    t.u0 = us.front();
    t.u1 = us.back();
    t.v0 = vs.front();
    t.v1 = vs.back();
    t.nu = us.size();
    t.nv = vs.size();
    const double tol = 1e-9 * std::max(t.du(), t.dv());
    for (std::size_t a = 0; a < us.size(); ++a) {
        if (std::abs(us[a] - (t.u0 + a * t.du())) > tol) throw ConfigError(path.string() + ": non-uniform u");
    }
    for (std::size_t b = 0; b < vs.size(); ++b) {
        if (std::abs(vs[b] - (t.v0 + b * t.dv())) > tol) throw ConfigError(path.string() + ": non-uniform v");
    }
    t.values.reserve(cells.size());
    for (const auto& [key, value] : cells) t.values.push_back(value);  // ordered by v, then u
    t.validate();
    return t;
}

json to_json(const TheoremConstants& k) {
    return json{{"c", k.c},
                {"S", k.S},
                {"sigma", k.sigma},
                {"slab_length", k.slab_length},
                {"R0", k.R0},
                {"mu", k.mu},
                {"lambda", k.lambda},
                {"delta", k.delta},
                {"gamma", k.gamma},
                {"q", k.q},
                {"q_sigma", k.q_sigma},
                {"p", k.p},
                {"p_sigma", k.p_sigma},
                {"f_R0", k.f_R0},
                {"g_q", num(k.g_q)},
                {"unbounded_step", k.unbounded_step},
                {"R0_cap", k.R0_cap},
                {"raw_data_norm", k.raw_data_norm < 0 ? json(nullptr) : json(k.raw_data_norm)}};
}

json to_json(const HypothesisVerdict& v) {
    json checks = json::array();
    for (const auto& c : v.checks) {
        checks.push_back({{"name", c.name},
                          {"lhs", num(c.lhs)},
                          {"rhs", num(c.rhs)},
                          {"strict", c.strict},
                          {"passed", c.passed},
                          {"margin", num(c.margin)}});
    }
    return json{{"mode", to_string(v.mode)},
                {"passed", v.passed},
                {"checks", checks},
                {"p_sigma_q_sigma", num(v.p_sigma_q_sigma)},
                {"admissible_R", {num(v.r_lo), num(v.r_hi)}},
                {"r_plus", num(v.r_plus)}};
}

json to_json(const NormReport& r) {
    auto arr = [](const std::array<double, 4>& a) { return json{a[0], a[1], a[2], a[3]}; };
    return json{{"sup", arr(r.sup)}, {"dt", arr(r.dt)},        {"dx", arr(r.dx)},
                {"dy", arr(r.dy)},   {"n1", arr(r.n1)},        {"n_script", r.n_script},
                {"skipped_stencils", r.skipped_stencils}};
}

json to_json(const SlabRecord& r) {
    json j{{"n", r.n},
           {"S_begin", r.S_begin},
           {"S_end", r.S_end},
           {"q", r.q},
           {"g_q", num(r.g_q)},
           {"capped", r.capped},
           {"iterations", r.iterations},
           {"final_delta", r.final_delta},
           {"n_script", r.n_script}};
    j["step_law_residual"] = r.step_law_residual ? json(*r.step_law_residual) : json(nullptr);
    return j;
}

json to_json(const MeasuredConstants& m) {
    return json{{"trials", m.trials},
                {"contraction_ratio", m.contraction_ratio},
                {"contraction_bound", m.contraction_bound},
                {"growth_ratio", m.growth_ratio},
                {"growth_bound_ratio", m.growth_bound_ratio},
                {"q_lattice", m.q_lattice},
                {"p", m.p},
                {"q", m.q},
                {"eps_quad", m.eps_quad},
                {"contraction_ok", m.contraction_ok},
                {"growth_ok", m.growth_ok}};
}

json to_json(const ShiftedNormReport& r) {
    json entries = json::array();
    for (const auto& e : r.entries) {
        entries.push_back({{"datum", to_string(e.which)},
                           {"norm", e.source_norm},
                           {"shifted_norm", e.shifted_norm},
                           {"factor", e.factor},
                           {"bound_holds", e.bound_holds}});
    }
    return json{{"q", r.q},
                {"raw_max", r.raw_max},
                {"gamma", r.gamma},
                {"bounds_hold", r.bounds_hold},
                {"gamma_bound_holds", r.gamma_bound_holds},
                {"entries", entries}};
}

}  // namespace broadwell
