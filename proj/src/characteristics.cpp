#include "broadwell/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "broadwell/errors.hpp"

namespace broadwell {

namespace {

struct SampledNorm {
    double sup = 0.0;
    double d_u = 0.0;
    double d_v = 0.0;
};

/// Central differences inside, second-order one-sided on the window edges.
SampledNorm lattice_norm(const std::vector<double>& vals, std::size_t nu, std::size_t nv, double hu,
                         double hv) {
    SampledNorm r;
    auto at = [&](std::size_t a, std::size_t b) { return vals[b * nu + a]; };
    auto diff = [](auto&& f, std::size_t p, std::size_t n, double h) {
        if (p == 0) return (3.0 * (f(1) - f(0)) - (f(2) - f(1))) / (2.0 * h);
        if (p + 1 == n) return (3.0 * (f(n - 1) - f(n - 2)) - (f(n - 2) - f(n - 3))) / (2.0 * h);
        return (f(p + 1) - f(p - 1)) / (2.0 * h);
    };
    for (std::size_t b = 0; b < nv; ++b) {
        for (std::size_t a = 0; a < nu; ++a) {
            r.sup = std::max(r.sup, std::abs(at(a, b)));
            const double du = diff([&](std::size_t p) { return at(p, b); }, a, nu, hu);
            const double dv = diff([&](std::size_t p) { return at(a, p); }, b, nv, hv);
            r.d_u = std::max(r.d_u, std::abs(du));
            r.d_v = std::max(r.d_v, std::abs(dv));
        }
    }
    return r;
}

SampledNorm sample_norm(const DataFunction& f, double u0, double u1, double v0, double v1, std::size_t nu,
                        std::size_t nv) {
    nu = std::max<std::size_t>(nu, 3);
    nv = std::max<std::size_t>(nv, 3);
    const double hu = (u1 - u0) / static_cast<double>(nu - 1);
    const double hv = (v1 - v0) / static_cast<double>(nv - 1);
    std::vector<double> vals(nu * nv);
    for (std::size_t b = 0; b < nv; ++b) {
        const double v = b + 1 == nv ? v1 : v0 + b * hv;
        for (std::size_t a = 0; a < nu; ++a) {
            const double u = a + 1 == nu ? u1 : u0 + a * hu;
            vals[b * nu + a] = f(u, v);
        }
    }
    return lattice_norm(vals, nu, nv, hu, hv);
}

SampledNorm initial_norm(const DataFunction& f, const RectDomain& d, std::size_t samples) {
    if (const Table2D* t = f.as_table()) {
        if (t->u0 == d.a1 && t->u1 == d.b1 && t->v0 == d.a2 && t->v1 == d.b2 && t->nu >= 3 && t->nv >= 3) {
            return lattice_norm(t->values, t->nu, t->nv, t->du(), t->dv());
        }
    }
    return sample_norm(f, d.a1, d.b1, d.a2, d.b2, samples, samples);
}

std::size_t time_samples(double length, std::size_t samples) {
    // At least `samples` points, and no coarser than (samples-1) intervals per unit time.
    const double per_unit = static_cast<double>(samples - 1) * std::max(length, 1.0);
    return std::max<std::size_t>(samples, static_cast<std::size_t>(std::ceil(per_unit)) + 1);
}

}  // namespace

CharFoot trace(const ModelParams& params, const TimeSlab& slab, const RectDomain& d, std::size_t component,
               double t, double x, double y) {
    const double c = params.c;
    const double tau = slab.tau;
    const double travel = c * (t - tau);
    const double eps = 1e-12 * std::max({1.0, d.width(), d.height()});
    CharFoot f;
    f.component = component;
    switch (component) {
        case 0:
            if (x - travel >= d.a1 - eps) {
                f.region = Region::A;
                f.foot_time = tau;
                f.foot_point = {tau, std::max(d.a1, x - travel), y};
            } else {
                f.region = Region::B;
                f.foot_time = std::max(tau, t - (x - d.a1) / c);
                f.foot_point = {f.foot_time, d.a1, y};
            }
            break;
        case 1:
            if (y - travel >= d.a2 - eps) {
                f.region = Region::A;
                f.foot_time = tau;
                f.foot_point = {tau, x, std::max(d.a2, y - travel)};
            } else {
                f.region = Region::B;
                f.foot_time = std::max(tau, t - (y - d.a2) / c);
                f.foot_point = {f.foot_time, x, d.a2};
            }
            break;
        case 2:
            if (y + travel <= d.b2 + eps) {
                f.region = Region::A;
                f.foot_time = tau;
                f.foot_point = {tau, x, std::min(d.b2, y + travel)};
            } else {
                f.region = Region::B;
                f.foot_time = std::max(tau, t - (d.b2 - y) / c);
                f.foot_point = {f.foot_time, x, d.b2};
            }
            break;
        case 3:
            if (x + travel <= d.b1 + eps) {
                f.region = Region::A;
                f.foot_time = tau;
                f.foot_point = {tau, std::min(d.b1, x + travel), y};
            } else {
                f.region = Region::B;
                f.foot_time = std::max(tau, t - (d.b1 - x) / c);
                f.foot_point = {f.foot_time, d.b1, y};
            }
            break;
        default:
            throw PreconditionError("component index must be 0..3");
    }
    return f;
}

double shifted_eval(const ProblemData& data, const ModelParams& params, DataSelector which, double t, double x,
                    double y) {
    const double c = params.c;
    const auto& d = data.domain;
    const double travel = c * (t - data.tau);
    switch (which) {
        case DataSelector::Initial1: return evaluate_data(data, which, x - travel, y);
        case DataSelector::Initial2: return evaluate_data(data, which, x, y - travel);
        case DataSelector::Initial3: return evaluate_data(data, which, x, y + travel);
        case DataSelector::Initial4: return evaluate_data(data, which, x + travel, y);
        case DataSelector::Inflow1: return evaluate_data(data, which, t - (x - d.a1) / c, y);
        case DataSelector::Inflow2: return evaluate_data(data, which, t - (y - d.a2) / c, x);
        case DataSelector::Inflow3: return evaluate_data(data, which, t - (d.b2 - y) / c, x);
        case DataSelector::Inflow4: return evaluate_data(data, which, t - (d.b1 - x) / c, y);
    }
    return 0.0;
}

double datum_at_foot(const ProblemData& data, const CharFoot& foot) {
    const auto& p = foot.foot_point;
    const std::size_t i = foot.component;
    if (foot.region == Region::A) return data.initial[i](p[1], p[2]);
    // Inflow edges are parametrised by (t, y) for the x-faces and (t, x) for the y-faces.
    const double along = (i == 0 || i == 3) ? p[2] : p[1];
    return data.inflow[i](foot.foot_time, along);
}

ShiftedNormReport shifted_norm_bound(const ProblemData& data, const ModelParams& params, const TimeSlab& slab,
                                     std::size_t samples) {
    samples = std::max<std::size_t>(samples, 3);
    const double c = params.c;
    const auto& d = data.domain;
    ShiftedNormReport r;
    r.gamma = 1.0 + c + 1.0 / c;

    const std::size_t nt = time_samples(slab.length(), samples);
    for (std::size_t n = 0; n < 8; ++n) {
        auto& e = r.entries[n];
        e.which = static_cast<DataSelector>(n);
        SampledNorm s;
        if (n < 4) {
            s = initial_norm(data.initial[n], d, samples);
            // Transport direction is x for N1, N4 and y for N2, N3.
            const double d_dir = (n == 0 || n == 3) ? s.d_u : s.d_v;
            e.shifted_norm = std::max({s.sup, c * d_dir, s.d_u, s.d_v});
            e.factor = 1.0 + c;
        } else {
            const bool along_y = (n == 4 || n == 7);
            const double lo = along_y ? d.a2 : d.a1;
            const double hi = along_y ? d.b2 : d.b1;
            s = sample_norm(data.inflow[n - 4], slab.tau, slab.tau_prime, lo, hi, nt, samples);
            e.shifted_norm = std::max({s.sup, s.d_u, s.d_u / c, s.d_v});
            e.factor = 1.0 + 1.0 / c;
        }
        e.sup = s.sup;
        e.d_u = s.d_u;
        e.d_v = s.d_v;
        e.source_norm = std::max({s.sup, s.d_u, s.d_v});
        e.bound_holds = e.shifted_norm <= e.factor * e.source_norm;
        r.bounds_hold = r.bounds_hold && e.bound_holds;
        r.gamma_bound_holds = r.gamma_bound_holds && e.shifted_norm <= r.gamma * e.source_norm;
        r.q = std::max(r.q, e.shifted_norm);
        r.raw_max = std::max(r.raw_max, e.source_norm);
    }
    return r;
}

double raw_data_norm(const ProblemData& data, double t_begin, double t_end, std::size_t samples) {
    samples = std::max<std::size_t>(samples, 3);
    const auto& d = data.domain;
    double m = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        const auto s = initial_norm(data.initial[i], d, samples);
        m = std::max({m, s.sup, s.d_u, s.d_v});
    }
    if (!(t_end > t_begin)) t_end = t_begin + 1.0;
    const std::size_t nt = time_samples(t_end - t_begin, samples);
    for (std::size_t i = 0; i < 4; ++i) {
        const bool along_y = (i == 0 || i == 3);
        const auto s = sample_norm(data.inflow[i], t_begin, t_end, along_y ? d.a2 : d.a1,
                                   along_y ? d.b2 : d.b1, nt, samples);
        m = std::max({m, s.sup, s.d_u, s.d_v});
    }
    return m;
}

}  // namespace broadwell
