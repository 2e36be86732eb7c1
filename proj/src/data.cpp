#include "broadwell/data.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "broadwell/errors.hpp"

namespace broadwell {

namespace {

constexpr double kDomainSlack = 1e-12;

double bump_factor(double u, double lo, double hi, int power) {
    if (u <= lo || u >= hi) return 0.0;
    const double s = std::sin(std::numbers::pi * (u - lo) / (hi - lo));
    return std::pow(s, power);
}

double table_eval(const Table2D& t, double u, double v) {
    const double su = kDomainSlack * std::max(1.0, std::abs(t.u1 - t.u0));
    const double sv = kDomainSlack * std::max(1.0, std::abs(t.v1 - t.v0));
    if (u < t.u0 - su || u > t.u1 + su || v < t.v0 - sv || v > t.v1 + sv) {
        std::ostringstream os;
        os << "table lookup at (" << u << ", " << v << ") outside [" << t.u0 << ", " << t.u1
           << "] x [" << t.v0 << ", " << t.v1 << "]";
        throw DomainError(os.str());
    }
    const Bracket bu = locate(u, t.u0, t.du(), t.nu);
    const Bracket bv = locate(v, t.v0, t.dv(), t.nv);
    const double lower = (1.0 - bu.weight) * t.node(bu.lo, bv.lo) + bu.weight * t.node(bu.lo + 1, bv.lo);
    const double upper =
        (1.0 - bu.weight) * t.node(bu.lo, bv.lo + 1) + bu.weight * t.node(bu.lo + 1, bv.lo + 1);
    return (1.0 - bv.weight) * lower + bv.weight * upper;
}

struct Evaluator {
    double u;
    double v;

    double operator()(const ConstantPreset& p) const { return p.value; }
    double operator()(const AffinePreset& p) const { return p.offset + p.slope_u * u + p.slope_v * v; }
    double operator()(const GaussianPreset& p) const {
        const double du = u - p.center_u;
        const double dv = v - p.center_v;
        return p.base + p.amplitude * std::exp(-(du * du + dv * dv) / (p.width * p.width));
    }
    double operator()(const TrigPreset& p) const {
        return p.base + p.amplitude * std::sin(p.freq_u * u + p.phase_u) * std::sin(p.freq_v * v + p.phase_v);
    }
    double operator()(const BumpPreset& p) const {
        return p.base + p.amplitude * bump_factor(u, p.u_lo, p.u_hi, p.power) *
                            bump_factor(v, p.v_lo, p.v_hi, p.power);
    }
    double operator()(const std::shared_ptr<const Table2D>& t) const { return table_eval(*t, u, v); }
    double operator()(const ComposedPreset& p) const {
        const auto& m = p.map;
        return (*p.inner)(m[0] * u + m[1] * v + m[2], m[3] * u + m[4] * v + m[5]);
    }
};

}  // namespace

void Table2D::validate() const {
    if (nu < 2 || nv < 2) throw ConfigError("table needs at least 2 nodes per axis");
    if (!(u0 < u1) || !(v0 < v1)) throw ConfigError("table box must be non-degenerate");
    if (values.size() != nu * nv) throw ConfigError("table value count does not match nu*nv");
}

DataFunction DataFunction::table(Table2D table) {
    table.validate();
    return DataFunction(std::make_shared<const Table2D>(std::move(table)));
}

DataFunction DataFunction::composed(DataFunction inner, AffineMap2 map) {
    return DataFunction(ComposedPreset{std::make_shared<const DataFunction>(std::move(inner)), map});
}

double DataFunction::operator()(double u, double v) const { return std::visit(Evaluator{u, v}, impl_); }

bool DataFunction::tabulated() const {
    if (std::holds_alternative<std::shared_ptr<const Table2D>>(impl_)) return true;
    if (const auto* c = std::get_if<ComposedPreset>(&impl_)) return c->inner->tabulated();
    return false;
}

const Table2D* DataFunction::as_table() const {
    if (const auto* t = std::get_if<std::shared_ptr<const Table2D>>(&impl_)) return t->get();
    return nullptr;
}

const char* to_string(DataSelector which) {
    switch (which) {
        case DataSelector::Initial1: return "N1_initial";
        case DataSelector::Initial2: return "N2_initial";
        case DataSelector::Initial3: return "N3_initial";
        case DataSelector::Initial4: return "N4_initial";
        case DataSelector::Inflow1: return "N1_minus";
        case DataSelector::Inflow2: return "N2_minus";
        case DataSelector::Inflow3: return "N3_plus";
        case DataSelector::Inflow4: return "N4_plus";
    }
    return "?";
}

const DataFunction& ProblemData::function(DataSelector which) const {
    const auto idx = static_cast<std::size_t>(which);
    return idx < 4 ? initial[idx] : inflow[idx - 4];
}

bool ProblemData::tabulated() const {
    for (const auto& f : initial) {
        if (f.tabulated()) return true;
    }
    for (const auto& f : inflow) {
        if (f.tabulated()) return true;
    }
    return false;
}

ProblemData ProblemData::constant(const RectDomain& domain, double value, double tau) {
    ProblemData d;
    d.domain = domain;
    d.tau = tau;
    d.inflow_origin = tau;
    for (auto& f : d.initial) f = DataFunction::constant(value);
    for (auto& f : d.inflow) f = DataFunction::constant(value);
    return d;
}

double evaluate_data(const ProblemData& data, DataSelector which, double p0, double p1) {
    const auto& dom = data.domain;
    const double sx = kDomainSlack * std::max(1.0, dom.width());
    const double sy = kDomainSlack * std::max(1.0, dom.height());
    auto fail = [&](const char* what) {
        std::ostringstream os;
        os << to_string(which) << ": point (" << p0 << ", " << p1 << ") " << what;
        throw DomainError(os.str());
    };
    switch (which) {
        case DataSelector::Initial1:
        case DataSelector::Initial2:
        case DataSelector::Initial3:
        case DataSelector::Initial4:
            if (!dom.contains(p0, p1, std::max(sx, sy))) fail("outside the rectangle");
            break;
        case DataSelector::Inflow1:
        case DataSelector::Inflow4:
            if (p0 < data.inflow_origin - kDomainSlack * std::max(1.0, std::abs(data.inflow_origin)))
                fail("before the inflow origin");
            if (p1 < dom.a2 - sy || p1 > dom.b2 + sy) fail("outside [a2, b2]");
            break;
        case DataSelector::Inflow2:
        case DataSelector::Inflow3:
            if (p0 < data.inflow_origin - kDomainSlack * std::max(1.0, std::abs(data.inflow_origin)))
                fail("before the inflow origin");
            if (p1 < dom.a1 - sx || p1 > dom.b1 + sx) fail("outside [a1, b1]");
            break;
    }
    return data.function(which)(p0, p1);
}

std::vector<EdgeViolation> check_compatibility(const ProblemData& data, double tol_compat,
                                               std::size_t samples) {
    samples = std::max<std::size_t>(samples, 2);
    const auto& d = data.domain;
    const double tau = data.tau;
    std::vector<EdgeViolation> out;

    struct Edge {
        std::size_t comp;
        const char* name;
        bool along_y;  // edge parametrised by y (x-faces) or by x (y-faces)
        double fixed;
    };
    const std::array<Edge, 4> edges{{{0, "x=a1", true, d.a1},
                                     {1, "y=a2", false, d.a2},
                                     {2, "y=b2", false, d.b2},
                                     {3, "x=b1", true, d.b1}}};
    for (const auto& e : edges) {
        const double lo = e.along_y ? d.a2 : d.a1;
        const double hi = e.along_y ? d.b2 : d.b1;
        double worst = 0.0;
        double where = lo;
        for (std::size_t n = 0; n < samples; ++n) {
            const double s = n + 1 == samples ? hi : lo + (hi - lo) * n / static_cast<double>(samples - 1);
            const double x = e.along_y ? e.fixed : s;
            const double y = e.along_y ? s : e.fixed;
            const double init = data.initial[e.comp](x, y);
            const double bnd = data.inflow[e.comp](tau, s);
            const double gap = std::abs(init - bnd);
            if (gap > worst || std::isnan(gap)) {
                worst = gap;
                where = s;
            }
        }
        if (!(worst <= tol_compat)) out.push_back({e.comp, e.name, worst, where});
    }
    return out;
}

double default_compat_tolerance(const ProblemData& data) { return data.tabulated() ? 1e-6 : 1e-9; }

std::vector<std::string> check_regularity(const ProblemData& data, double t_end, std::size_t samples) {
    samples = std::max<std::size_t>(samples, 3);
    std::vector<std::string> issues;
    const auto& d = data.domain;
    const double t0 = data.inflow_origin;
    const double t1 = std::max(t_end, t0 + 1e-9);

    auto scan = [&](DataSelector which, double u0, double u1, double v0, double v1) {
        const auto& f = data.function(which);
        const double du = (u1 - u0) / static_cast<double>(samples - 1);
        const double dv = (v1 - v0) / static_cast<double>(samples - 1);
        double min_v = 0.0;
        double max_slope = 0.0;
        bool finite = true;
        std::vector<double> row(samples * samples);
        for (std::size_t b = 0; b < samples; ++b) {
            for (std::size_t a = 0; a < samples; ++a) {
                const double val = f(u0 + a * du, v0 + b * dv);
                row[b * samples + a] = val;
                finite = finite && std::isfinite(val);
                min_v = std::min(min_v, val);
            }
        }
        for (std::size_t b = 0; b < samples; ++b) {
            for (std::size_t a = 0; a + 1 < samples; ++a) {
                max_slope = std::max(max_slope, std::abs(row[b * samples + a + 1] - row[b * samples + a]) / du);
            }
        }
        for (std::size_t b = 0; b + 1 < samples; ++b) {
            for (std::size_t a = 0; a < samples; ++a) {
                max_slope =
                    std::max(max_slope, std::abs(row[(b + 1) * samples + a] - row[b * samples + a]) / dv);
            }
        }
        if (!finite) issues.push_back(std::string(to_string(which)) + ": non-finite values");
        if (min_v < 0.0) {
            std::ostringstream os;
            os << to_string(which) << ": negative value " << min_v;
            issues.push_back(os.str());
        }
        if (!std::isfinite(max_slope)) issues.push_back(std::string(to_string(which)) + ": unbounded slope");
    };
    for (std::size_t i = 0; i < 4; ++i) {
        scan(static_cast<DataSelector>(i), d.a1, d.b1, d.a2, d.b2);
    }
    scan(DataSelector::Inflow1, t0, t1, d.a2, d.b2);
    scan(DataSelector::Inflow2, t0, t1, d.a1, d.b1);
    scan(DataSelector::Inflow3, t0, t1, d.a1, d.b1);
    scan(DataSelector::Inflow4, t0, t1, d.a2, d.b2);
    return issues;
}

Table2D slice_table(const Field4& field, std::size_t i, std::size_t k) {
    const auto& g = field.grid();
    Table2D t;
    t.u0 = g.domain().a1;
    t.u1 = g.domain().b1;
    t.v0 = g.domain().a2;
    t.v1 = g.domain().b2;
    t.nu = g.nx();
    t.nv = g.ny();
    t.values.resize(g.slice_size());
    for (std::size_t l = 0; l < g.ny(); ++l) {
        for (std::size_t j = 0; j < g.nx(); ++j) t.values[l * g.nx() + j] = field.at(i, k, j, l);
    }
    return t;
}

ProblemData restart_from_terminal_slice(const ProblemData& data, const Field4& field) {
    const auto& g = field.grid();
    if (!(g.domain() == data.domain)) throw PreconditionError("restart: field and data domains differ");
    ProblemData next = data;
    next.tau = g.slab().tau_prime;
    for (std::size_t i = 0; i < 4; ++i) {
        next.initial[i] = DataFunction::table(slice_table(field, i, g.nt() - 1));
    }
    return next;
}

}  // namespace broadwell
