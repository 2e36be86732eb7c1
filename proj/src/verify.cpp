#include "broadwell/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "broadwell/characteristics.hpp"
#include "broadwell/errors.hpp"
#include "broadwell/norms.hpp"
#include "broadwell/parallel.hpp"

namespace broadwell {

namespace {

double trapezoid_weight(std::size_t n, std::size_t count, double h) {
    return (n == 0 || n + 1 == count) ? 0.5 * h : h;
}

void check_data_matches(const ProblemData& data, const SlabGrid& g) {
    if (std::abs(data.tau - g.slab().tau) > 1e-12 * std::max(1.0, std::abs(g.slab().tau))) {
        throw PreconditionError("data initial time does not match the slab start");
    }
    if (!(data.domain == g.domain())) throw PreconditionError("data and grid domains differ");
}

}  // namespace

PdeResidual pde_residual(const ModelParams& params, const Field4& f) {
    const auto& g = f.grid();
    if (g.nt() < 3 || g.nx() < 3 || g.ny() < 3) throw SizeError("pde_residual needs >= 3 points per axis");
    PdeResidual r{Field4(g), {}, 0.0, 0};
    const double c = params.c;
    for (std::size_t k = 1; k + 1 < g.nt(); ++k) {
        for (std::size_t l = 1; l + 1 < g.ny(); ++l) {
            for (std::size_t j = 1; j + 1 < g.nx(); ++j) {
                const double q = collision_Q(params, f.point(g.index(k, j, l)));
                for (std::size_t i = 0; i < 4; ++i) {
                    const Axis ax = (i == 0 || i == 3) ? Axis::X : Axis::Y;
                    const double v = (i == 0 || i == 1) ? c : -c;
                    const auto dt = partial(f, c, i, Axis::T, k, j, l);
                    const auto ds = partial(f, c, i, ax, k, j, l);
                    if (!dt || !ds) {
                        ++r.skipped;
                        continue;
                    }
                    const double res = std::abs(*dt + v * *ds - omega(i) * q);
                    r.residual.at(i, k, j, l) = res;
                    r.sup[i] = std::max(r.sup[i], res);
                }
            }
        }
    }
    r.max = *std::max_element(r.sup.begin(), r.sup.end());
    return r;
}

ConservationReport conservation_balance(const ModelParams& params, const Field4& f) {
    const auto& g = f.grid();
    const double c = params.c;
    const std::size_t nx = g.nx();
    const std::size_t ny = g.ny();
    ConservationReport rep;
    for (std::size_t k = 0; k < g.nt(); ++k) {
        rep.times.push_back(g.t(k));
        double mass = 0.0;
        double px = 0.0;
        double py = 0.0;
        for (std::size_t l = 0; l < ny; ++l) {
            const double wy = trapezoid_weight(l, ny, g.hy());
            for (std::size_t j = 0; j < nx; ++j) {
                const double w = wy * trapezoid_weight(j, nx, g.hx());
                const auto n = f.point(g.index(k, j, l));
                mass += w * rho(n);
                px += w * c * (n[0] - n[3]);
                py += w * c * (n[1] - n[2]);
            }
        }
        double fm = 0.0;
        double fx = 0.0;
        double fy = 0.0;
        for (std::size_t l = 0; l < ny; ++l) {
            const double w = trapezoid_weight(l, ny, g.hy());
            const auto lo = f.point(g.index(k, 0, l));
            const auto hi = f.point(g.index(k, nx - 1, l));
            fm += w * c * ((hi[0] - hi[3]) - (lo[0] - lo[3]));
            fx += w * c * c * ((hi[0] + hi[3]) - (lo[0] + lo[3]));
        }
        for (std::size_t j = 0; j < nx; ++j) {
            const double w = trapezoid_weight(j, nx, g.hx());
            const auto lo = f.point(g.index(k, j, 0));
            const auto hi = f.point(g.index(k, j, ny - 1));
            fm += w * c * ((hi[1] - hi[2]) - (lo[1] - lo[2]));
            fy += w * c * c * ((hi[1] + hi[2]) - (lo[1] + lo[2]));
        }
        rep.mass.amount.push_back(mass);
        rep.mass.flux.push_back(fm);
        rep.momentum_x.amount.push_back(px);
        rep.momentum_x.flux.push_back(fx);
        rep.momentum_y.amount.push_back(py);
        rep.momentum_y.flux.push_back(fy);
    }
    for (BalanceSeries* s : {&rep.mass, &rep.momentum_x, &rep.momentum_y}) {
        double outflow = 0.0;
        for (std::size_t k = 0; k < g.nt(); ++k) {
            if (k > 0) outflow += 0.5 * (rep.times[k] - rep.times[k - 1]) * (s->flux[k] + s->flux[k - 1]);
            const double gap = std::abs(s->amount[k] - s->amount[0] + outflow);
            s->gap.push_back(gap);
            s->max_gap = std::max(s->max_gap, gap);
        }
    }
    return rep;
}

Field4 upwind_oracle(const ModelParams& params, const ProblemData& data, const SlabGrid& g) {
    params.validate_kinematics();
    check_data_matches(data, g);
    if (!g.cfl_compatible(params.c)) throw ConfigError("upwind oracle needs c ht <= min(hx, hy)");
    const std::size_t nx = g.nx();
    const std::size_t ny = g.ny();
    Field4 out(g);
    for (std::size_t l = 0; l < ny; ++l) {
        for (std::size_t j = 0; j < nx; ++j) {
            for (std::size_t i = 0; i < 4; ++i) out.at(i, 0, j, l) = data.initial[i](g.x(j), g.y(l));
        }
    }
    const double nux = params.c * g.ht() / g.hx();
    const double nuy = params.c * g.ht() / g.hy();
    for (std::size_t k = 0; k + 1 < g.nt(); ++k) {
        const double t1 = g.t(k + 1);
        parallel_for(ny, [&](std::size_t begin, std::size_t end) {
            for (std::size_t l = begin; l < end; ++l) {
                for (std::size_t j = 0; j < nx; ++j) {
                    const auto n = out.point(g.index(k, j, l));
                    const double src = g.ht() * collision_Q(params, n);
                    auto old = [&](std::size_t i, std::size_t jj, std::size_t ll) { return out.at(i, k, jj, ll); };
                    // N1: +c in x, inflow at x = a1.
                    out.at(0, k + 1, j, l) =
                        j == 0 ? data.inflow[0](t1, g.y(l)) : n[0] - nux * (n[0] - old(0, j - 1, l)) + src;
                    // N2: +c in y, inflow at y = a2.
                    out.at(1, k + 1, j, l) =
                        l == 0 ? data.inflow[1](t1, g.x(j)) : n[1] - nuy * (n[1] - old(1, j, l - 1)) - src;
                    // N3: -c in y, inflow at y = b2.
                    out.at(2, k + 1, j, l) =
                        l + 1 == ny ? data.inflow[2](t1, g.x(j)) : n[2] + nuy * (old(2, j, l + 1) - n[2]) - src;
                    // N4: -c in x, inflow at x = b1.
                    out.at(3, k + 1, j, l) =
                        j + 1 == nx ? data.inflow[3](t1, g.y(l)) : n[3] + nux * (old(3, j + 1, l) - n[3]) + src;
                }
            }
        });
    }
    if (!out.all_finite()) throw NumericError("upwind oracle produced a non-finite value");
    return out;
}

double oracle_gap(const ModelParams& params, const ProblemData& data, const Field4& solution) {
    const auto& g = solution.grid();
    const double ratio = params.c * g.ht() / std::min(g.hx(), g.hy());
    const auto m = static_cast<std::size_t>(std::max(1.0, std::ceil(ratio - 1e-9)));
    const SlabGrid og(g.slab(), g.domain(), (g.nt() - 1) * m + 1, g.nx(), g.ny());
    const Field4 oracle = upwind_oracle(params, data, og);
    double gap = 0.0;
    for (std::size_t k = 0; k < g.nt(); ++k) {
        for (std::size_t l = 0; l < g.ny(); ++l) {
            for (std::size_t j = 0; j < g.nx(); ++j) {
                for (std::size_t i = 0; i < 4; ++i) {
                    gap = std::max(gap, std::abs(oracle.at(i, k * m, j, l) - solution.at(i, k, j, l)));
                }
            }
        }
    }
    return gap;
}

double fixed_point_residual(const ModelParams& params, const ProblemData& data, const Field4& solution,
                            const QuadratureSpec& quad) {
    return sup_distance(apply_T(params, data, solution, quad), solution);
}

Field4 random_trig_field(const SlabGrid& g, std::mt19937_64& rng, bool sign_indefinite) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Field4 f(g);
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t i = 0; i < 4; ++i) {
        const double base = sign_indefinite ? 2.0 * unit(rng) - 1.0 : 1.0 + unit(rng);
        const double amp = sign_indefinite ? 1.0 + unit(rng) : unit(rng);
        std::array<double, 3> freq{};
        std::array<double, 3> phase{};
        for (std::size_t a = 0; a < 3; ++a) {
            freq[a] = 0.5 + 3.5 * unit(rng);
            phase[a] = two_pi * unit(rng);
        }
        for (std::size_t k = 0; k < g.nt(); ++k) {
            const double st = std::sin(freq[0] * (g.t(k) - g.slab().tau) + phase[0]);
            for (std::size_t l = 0; l < g.ny(); ++l) {
                const double sy = std::sin(freq[2] * g.y(l) + phase[2]);
                for (std::size_t j = 0; j < g.nx(); ++j) {
                    f.at(i, k, j, l) = base + amp * st * std::sin(freq[1] * g.x(j) + phase[1]) * sy;
                }
            }
        }
    }
    f.set_physical(f.min_value() >= 0.0);
    return f;
}

Field4 scale_to_norm(const Field4& field, double c, double target) {
    const double n = norm_report(field, c).n_script;
    Field4 out = field;
    if (n == 0.0) return out;
    const double s = target / n;
    for (std::size_t i = 0; i < 4; ++i) {
        for (double& v : out.component(i)) v *= s;
    }
    return out;
}

MeasuredConstants measure_constants(const ModelParams& params, const ProblemData& data, const SlabGrid& g,
                                    std::size_t trials, double R, std::uint64_t seed, const QuadratureSpec& quad) {
    if (trials == 0) throw PreconditionError("measure_constants needs trials >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    MeasuredConstants m;
    m.trials = trials;
    const double c = params.c;
    const double len = g.slab().length();
    m.contraction_bound = len * 4.0 * c * params.S;
    m.p = c * params.S * (8.0 + 4.0 / c + (8.0 + 8.0 * c) * len);
    m.q = shifted_norm_bound(data, params, g.slab()).q;
    m.q_lattice = norm_report(transport_solution(params, data, g), c).n_script;
    for (std::size_t n = 0; n < trials; ++n) {
        const Field4 M = scale_to_norm(random_trig_field(g, rng, true), c, R * (0.2 + 0.8 * unit(rng)));
        const Field4 N = scale_to_norm(random_trig_field(g, rng, true), c, R * (0.2 + 0.8 * unit(rng)));
        const Field4 TM = apply_T(params, data, M, quad);
        const Field4 TN = apply_T(params, data, N, quad);
        const double dist = sup_distance(M, N);
        if (dist > 0.0) {
            const double r = sup_distance(TM, TN) / ((M.sup_norm() + N.sup_norm()) * dist);
            m.contraction_ratio = std::max(m.contraction_ratio, r);
        }
        const double nm = norm_report(M, c).n_script;
        const double ntm = norm_report(TM, c).n_script;
        if (nm > 0.0) m.growth_ratio = std::max(m.growth_ratio, (ntm - m.q_lattice) / (nm * nm));
        m.growth_bound_ratio =
            std::max(m.growth_bound_ratio, ntm / (m.p * nm * nm + std::max(m.q, m.q_lattice)));
    }
    m.contraction_ok = m.contraction_ratio <= m.contraction_bound * (1.0 + m.eps_quad);
    m.growth_ok = m.growth_bound_ratio <= 1.0 + m.eps_quad;
    return m;
}

}  // namespace broadwell
