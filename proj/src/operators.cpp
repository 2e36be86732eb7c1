#include "broadwell/operators.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "broadwell/characteristics.hpp"
#include "broadwell/errors.hpp"
#include "broadwell/parallel.hpp"

namespace broadwell {

namespace {

void check_data_matches(const ProblemData& data, const SlabGrid& g) {
    const double tol = 1e-12 * std::max(1.0, std::abs(g.slab().tau));
    if (std::abs(data.tau - g.slab().tau) > tol) {
        throw PreconditionError("data initial time does not match the slab start");
    }
    if (!(data.domain == g.domain())) throw PreconditionError("data and grid domains differ");
}

/// Quadrature nodes on [foot, t]: the endpoints, every grid time plane in
/// between, a further split to honour the substep, and midpoints for Simpson.
void build_nodes(const SlabGrid& g, const QuadratureSpec& q, double foot, double t, std::vector<double>& out) {
    out.clear();
    out.push_back(foot);
    const double ht = g.ht();
    const double eps = 1e-9 * ht;
    const double step = q.substep ? *q.substep : ht;
    auto push_split = [&](double to) {
        const double from = out.back();
        const double len = to - from;
        const auto parts = static_cast<std::size_t>(std::max(1.0, std::ceil(len / step - 1e-9)));
        for (std::size_t n = 1; n < parts; ++n) out.push_back(from + len * n / static_cast<double>(parts));
        out.push_back(to);
    };
    const double tau = g.slab().tau;
    auto m = static_cast<std::size_t>(std::max(0.0, std::floor((foot - tau) / ht)));
    for (; m < g.nt(); ++m) {
        const double tm = g.t(m);
        if (tm <= foot + eps) continue;
        if (tm >= t - eps) break;
        push_split(tm);
    }
    if (t > foot) push_split(t);
    if (q.rule == QuadratureSpec::Rule::Simpson && out.size() > 1) {
        std::vector<double> refined;
        refined.reserve(2 * out.size());
        for (std::size_t n = 0; n + 1 < out.size(); ++n) {
            refined.push_back(out[n]);
            refined.push_back(0.5 * (out[n] + out[n + 1]));
        }
        refined.push_back(out.back());
        out.swap(refined);
    }
}

/// A0 = int_0^1 e^{-a v} dv and A1 = int_0^1 v e^{-a v} dv, with B = A0 - A1.
struct ExpWeights {
    double a1;
    double b;
};

ExpWeights exp_weights(double a) {
    if (a < 0.25) {
        // sum (-a)^n (n+1)/(n+2)! and sum (-a)^n/(n+2)!
        double term = 0.5;  // (-a)^n/(n+2)!
        double a1 = 0.0;
        double b = 0.0;
        for (int n = 0; n < 16; ++n) {
            a1 += (n + 1) * term;
            b += term;
            term *= -a / (n + 3);
        }
        return {a1, b};
    }
    const double em = std::expm1(-a);
    const double a0 = -em / a;
    const double b = (a + em) / (a * a);
    return {a0 - b, b};
}

using PointKernel = double (*)(const ModelParams&, const Field4&, const ProblemData&, const QuadratureSpec&,
                               std::size_t, double, double, double, std::vector<double>&);

Field4 map_lattice(const ModelParams& params, const ProblemData& data, const Field4& M, const QuadratureSpec& quad,
                   PointKernel kernel) {
    const auto& g = M.grid();
    Field4 out(g);
    const std::size_t rows = g.nt() * g.ny();
    parallel_for(rows, [&](std::size_t begin, std::size_t end) {
        std::vector<double> nodes;
        for (std::size_t r = begin; r < end; ++r) {
            const std::size_t k = r / g.ny();
            const std::size_t l = r % g.ny();
            for (std::size_t j = 0; j < g.nx(); ++j) {
                for (std::size_t i = 0; i < 4; ++i) {
                    out.at(i, k, j, l) = kernel(params, M, data, quad, i, g.t(k), g.x(j), g.y(l), nodes);
                }
            }
        }
    });
    return out;
}

double plain_point(const ModelParams& params, const Field4& M, const ProblemData& data, const QuadratureSpec& quad,
                   std::size_t i, double t, double x, double y, std::vector<double>& nodes) {
    const auto& g = M.grid();
    const CharFoot foot = trace(params, g.slab(), g.domain(), i, t, x, y);
    const double datum = datum_at_foot(data, foot);
    build_nodes(g, quad, foot.foot_time, t, nodes);
    if (nodes.size() < 2) return datum;
    auto integrand = [&](double s) {
        const auto p = characteristic_position(params.c, i, s, t, x, y);
        return collision_Q(params, M.sample(s, p[0], p[1]));
    };
    double sum = 0.0;
    if (quad.rule == QuadratureSpec::Rule::Simpson) {
        double f0 = integrand(nodes[0]);
        for (std::size_t n = 0; n + 2 < nodes.size(); n += 2) {
            const double fm = integrand(nodes[n + 1]);
            const double f1 = integrand(nodes[n + 2]);
            sum += (nodes[n + 2] - nodes[n]) / 6.0 * (f0 + 4.0 * fm + f1);
            f0 = f1;
        }
    } else {
        double f0 = integrand(nodes[0]);
        for (std::size_t n = 0; n + 1 < nodes.size(); ++n) {
            const double f1 = integrand(nodes[n + 1]);
            sum += 0.5 * (nodes[n + 1] - nodes[n]) * (f0 + f1);
            f0 = f1;
        }
    }
    return datum + omega(i) * sum;
}

/// Product integration: on each sub-interval the exponent and Q_i^sigma are
/// linear in s and the exponential factor is integrated exactly. All weights
/// are positive, so non-negative integrands give non-negative results.
double relaxed_point(const ModelParams& params, const Field4& M, const ProblemData& data,
                     const QuadratureSpec& quad, std::size_t i, double t, double x, double y,
                     std::vector<double>& nodes) {
    const auto& g = M.grid();
    const CharFoot foot = trace(params, g.slab(), g.domain(), i, t, x, y);
    const double datum = datum_at_foot(data, foot);
    build_nodes(g, quad, foot.foot_time, t, nodes);
    if (nodes.size() < 2) return datum;

    const std::size_t K = nodes.size() - 1;
    thread_local std::vector<double> E;
    thread_local std::vector<double> Qs;
    E.assign(K + 1, 0.0);
    Qs.assign(K + 1, 0.0);
    double rho_prev = 0.0;
    for (std::size_t n = 0; n <= K; ++n) {
        const auto p = characteristic_position(params.c, i, nodes[n], t, x, y);
        auto m = M.sample(nodes[n], p[0], p[1]);
        for (auto& v : m) v = std::abs(v);
        const double r = rho(m);
        Qs[n] = relaxed_Q(params, m, i);
        if (n > 0) E[n] = E[n - 1] + 0.5 * params.sigma * (nodes[n] - nodes[n - 1]) * (rho_prev + r);
        rho_prev = r;
    }
    const double EK = E[K];
    double sum = 0.0;
    for (std::size_t n = 0; n < K; ++n) {
        const double h = nodes[n + 1] - nodes[n];
        const ExpWeights w = exp_weights(E[n + 1] - E[n]);
        sum += h * std::exp(E[n + 1] - EK) * (w.a1 * Qs[n] + w.b * Qs[n + 1]);
    }
    return sum + datum * std::exp(-EK);
}

double transport_point(const ModelParams& params, const Field4& M, const ProblemData& data, const QuadratureSpec&,
                       std::size_t i, double t, double x, double y, std::vector<double>&) {
    const auto& g = M.grid();
    return datum_at_foot(data, trace(params, g.slab(), g.domain(), i, t, x, y));
}

}  // namespace

void QuadratureSpec::validate() const {
    if (substep && !(*substep > 0.0)) throw ConfigError("quadrature substep must be > 0");
}

double collision_Q(const ModelParams& p, const Field4& field, std::size_t idx) {
    return collision_Q(p, field.point(idx));
}

double relaxed_Q(const ModelParams& p, const std::array<double, 4>& n, std::size_t i) {
    const std::array<double, 4> a{std::abs(n[0]), std::abs(n[1]), std::abs(n[2]), std::abs(n[3])};
    return p.sigma * rho(a) * a[i] + omega(i) * collision_Q(p, a);
}

double relaxed_Q(const ModelParams& p, const Field4& field, std::size_t i, std::size_t idx) {
    return relaxed_Q(p, field.point(idx), i);
}

Field4 apply_T(const ModelParams& params, const ProblemData& data, const Field4& M, const QuadratureSpec& quad) {
    params.validate_kinematics();
    quad.validate();
    check_data_matches(data, M.grid());
    Field4 out = map_lattice(params, data, M, quad, &plain_point);
    if (!out.all_finite()) throw NumericError("apply_T produced a non-finite value");
    return out;
}

Field4 apply_T_sigma(const ModelParams& params, const ProblemData& data, const Field4& M,
                     const QuadratureSpec& quad) {
    params.validate_relaxed();
    quad.validate();
    check_data_matches(data, M.grid());
    Field4 out = map_lattice(params, data, M, quad, &relaxed_point);
    if (!out.all_finite()) throw NumericError("apply_T_sigma produced a non-finite value");
    const double tol = positivity_tolerance(params, data, M.grid());
    for (std::size_t i = 0; i < 4; ++i) {
        for (double& v : out.component(i)) {
            if (v < -tol) throw PositivityError("apply_T_sigma output below -tol_pos");
            if (v < 0.0) v = 0.0;
        }
    }
    out.set_physical(true);
    return out;
}

Field4 transport_solution(const ModelParams& params, const ProblemData& data, const SlabGrid& grid) {
    params.validate_kinematics();
    check_data_matches(data, grid);
    const Field4 dummy(grid);
    Field4 out = map_lattice(params, data, dummy, {}, &transport_point);
    out.set_physical(out.min_value() >= 0.0);
    return out;
}

double positivity_tolerance(const ModelParams& params, const ProblemData& data, const SlabGrid& grid) {
    const Field4 carried = transport_solution(params, data, grid);
    return 1e-12 * (1.0 + carried.sup_norm());
}

}  // namespace broadwell
