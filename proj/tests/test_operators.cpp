#include "doctest.h"

#include <cmath>
#include <random>

#include "broadwell/characteristics.hpp"
#include "broadwell/constants.hpp"
#include "broadwell/errors.hpp"
#include "broadwell/norms.hpp"
#include "broadwell/operators.hpp"
#include "broadwell/parallel.hpp"
#include "broadwell/picard.hpp"
#include "broadwell/verify.hpp"
#include "helpers.hpp"

using namespace broadwell;
using namespace testing_support;

namespace {

SlabGrid grid(double len = 1.0, std::size_t n = 9) { return SlabGrid({0.0, len}, unit_square(), n, n, n); }

double max_abs_diff_from(const Field4& f, double value) {
    double m = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
        for (double v : f.component(i)) m = std::max(m, std::abs(v - value));
    return m;
}

}  // namespace

TEST_CASE("pointwise rates") {
    const ModelParams p{1.0, 0.5, 2.0};
    const std::array<double, 4> n{1, 2, 3, 4};
    CHECK(rho(n) == 10.0);
    CHECK(collision_Q(p, n) == doctest::Approx(2.0));
    CHECK(collision_Q(p, std::array<double, 4>{0.3, 0.3, 0.3, 0.3}) == 0.0);
    CHECK(collision_Q(ModelParams{1.0, 0.0, 0.0}, n) == 0.0);
    CHECK(relaxed_Q(p, n, 0) == doctest::Approx(22.0));
    CHECK(relaxed_Q(p, std::array<double, 4>{}, 2) == 0.0);

    const ModelParams p3{1.0, 0.5, 3.0};
    const double k = 0.7;
    for (std::size_t i = 0; i < 4; ++i) CHECK(relaxed_Q(p3, {k, k, k, k}, i) == doctest::Approx(12.0 * k * k));

    CHECK(omega(0) == 1.0);
    CHECK(omega(1) == -1.0);
    CHECK(omega(2) == -1.0);
    CHECK(omega(3) == 1.0);
}

TEST_CASE("relaxed rate matches its expanded non-negative form") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 500; ++trial) {
        const double c = 0.2 + std::abs(u(rng));
        const double S = 0.1 + std::abs(u(rng));
        const ModelParams p{c, S, 2.0 * c * S * (1.0 + std::abs(u(rng)))};
        const std::array<double, 4> n{u(rng), u(rng), u(rng), u(rng)};
        const std::array<double, 4> a{std::abs(n[0]), std::abs(n[1]), std::abs(n[2]), std::abs(n[3])};
        const double k = 2.0 * c * S;
        // N1 and N4 gain from N2 N3 and lose through N1 N4; N2 and N3 the opposite.
        const double e0 = p.sigma * (a[0] + a[1] + a[2]) * a[0] + k * a[1] * a[2] + (p.sigma - k) * a[0] * a[3];
        const double e1 = p.sigma * (a[0] + a[1] + a[3]) * a[1] + k * a[0] * a[3] + (p.sigma - k) * a[1] * a[2];
        CHECK(relaxed_Q(p, n, 0) == doctest::Approx(e0).epsilon(1e-12));
        CHECK(relaxed_Q(p, n, 1) == doctest::Approx(e1).epsilon(1e-12));
        for (std::size_t i = 0; i < 4; ++i) CHECK(relaxed_Q(p, n, i) >= 0.0);
    }
}

TEST_CASE("rho of a field is the sum of its component lattices") {
    std::mt19937_64 rng(5);
    const auto g = grid(1.0, 5);
    const Field4 f = random_trig_field(g, rng, true);
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        double s = 0.0;
        for (std::size_t i = 0; i < 4; ++i) s += f.component(i)[idx];
        CHECK(rho(f, idx) == doctest::Approx(s).epsilon(1e-15));
    }
}

TEST_CASE("plain operator: trivial and closed-form cases") {
    const ModelParams p{1.0, 0.5, 1.05};
    const auto g = grid();
    const double k = 0.25;
    const auto eq = ProblemData::constant(unit_square(), k);
    CHECK(max_abs_diff_from(apply_T(p, eq, Field4::constant(g, k)), k) <= 1e-15);

    const auto zero = ProblemData::constant(unit_square(), 0.0);
    CHECK(apply_T(p, zero, Field4::constant(g, 0.0)).sup_norm() == 0.0);

    // Constant non-equilibrium M: the integrand is a constant rate.
    Field4 M(g);
    const std::array<double, 4> m{0.1, 0.4, 0.3, 0.2};
    for (std::size_t i = 0; i < 4; ++i)
        for (auto& v : M.component(i)) v = m[i];
    const double q0 = collision_Q(p, m);
    const double d = 0.05;
    const Field4 T = apply_T(p, ProblemData::constant(unit_square(), d), M);
    for (std::size_t k2 = 0; k2 < g.nt(); ++k2)
        for (std::size_t j = 0; j < g.nx(); ++j)
            for (std::size_t l = 0; l < g.ny(); ++l)
                for (std::size_t i = 0; i < 4; ++i) {
                    const auto f = trace(p, g.slab(), g.domain(), i, g.t(k2), g.x(j), g.y(l));
                    const double want = d + omega(i) * q0 * (g.t(k2) - f.foot_time);
                    CHECK(T.at(i, k2, j, l) == doctest::Approx(want).epsilon(1e-13));
                }
}

TEST_CASE("relaxed operator: equilibrium is exact on both sides of the series threshold") {
    const auto g = grid();
    for (double k : {1e-6, 0.01, 0.25, 2.0, 30.0}) {
        for (double sigma : {1.01, 3.0, 40.0}) {
            const ModelParams p{1.0, 0.5, sigma};
            const Field4 T = apply_T_sigma(p, ProblemData::constant(unit_square(), k), Field4::constant(g, k));
            CAPTURE(k);
            CAPTURE(sigma);
            CHECK(max_abs_diff_from(T, k) <= 1e-13 * k);
            CHECK(T.physical());
        }
    }
    const ModelParams p{1.0, 0.5, 1.05};
    CHECK(max_abs_diff_from(apply_T_sigma(p, ProblemData::constant(unit_square(), 0.3), Field4::constant(g, 0.0)),
                            0.3) <= 1e-15);
    CHECK(apply_T_sigma(p, ProblemData::constant(unit_square(), 0.0), Field4::constant(g, 0.0)).sup_norm() == 0.0);
}

TEST_CASE("relaxed operator: preconditions and quadrature options") {
    const auto g = grid();
    const auto data = ProblemData::constant(unit_square(), 0.1);
    const Field4 M = Field4::constant(g, 0.1);
    CHECK_THROWS_AS(apply_T_sigma(ModelParams{1.0, 0.5, 1.0}, data, M), PreconditionError);
    CHECK_THROWS_AS(apply_T_sigma(ModelParams{1.0, 0.5, 0.5}, data, M), PreconditionError);
    QuadratureSpec bad;
    bad.substep = 0.0;
    CHECK_THROWS_AS(apply_T(ModelParams{1.0, 0.5, 1.05}, data, M, bad), ConfigError);
    bad.substep = -1.0;
    CHECK_THROWS_AS(apply_T_sigma(ModelParams{1.0, 0.5, 1.05}, data, M, bad), ConfigError);

    ProblemData shifted = data;
    shifted.tau = 0.5;
    CHECK_THROWS(apply_T(ModelParams{1.0, 0.5, 1.05}, shifted, M));
}

TEST_CASE("relaxed operator: large sigma stays finite") {
    const auto g = grid();
    std::mt19937_64 rng(12);
    const ModelParams p{1.0, 0.5, 5e3};
    const Field4 M = scale_to_norm(random_trig_field(g, rng, false), 1.0, 1.0);
    const Field4 T = apply_T_sigma(p, bump_data(), M);
    CHECK(T.all_finite());
    CHECK(T.min_value() >= 0.0);
}

TEST_CASE("Simpson and trapezoid agree on smooth integrands") {
    const ModelParams p{1.0, 0.5, 1.05};
    const auto g = grid(1.0, 17);
    std::mt19937_64 rng(2);
    const Field4 M = scale_to_norm(random_trig_field(g, rng, false), 1.0, 0.01);
    const auto data = bump_data();
    QuadratureSpec simpson;
    simpson.rule = QuadratureSpec::Rule::Simpson;
    QuadratureSpec fine;
    fine.substep = g.ht() / 8;
    const double a = sup_distance(apply_T(p, data, M), apply_T(p, data, M, fine));
    const double b = sup_distance(apply_T(p, data, M, simpson), apply_T(p, data, M, fine));
    CHECK(b <= a + 1e-16);
    CHECK(sup_distance(apply_T_sigma(p, data, M, simpson), apply_T_sigma(p, data, M)) <= 1e-6);
}

TEST_CASE("fixed points of the plain operator are fixed points of the relaxed one") {
    const ModelParams p{1.0, 0.5, 1.05};
    const auto data = bump_data();
    double prev = -1.0;
    for (std::size_t n : {9, 17, 33}) {
        const auto g = grid(1.0, n);
        PicardOptions o;
        o.tol_fix = 1e-13;
        const auto sol = solve_slab(p, data, g, o);
        const double gap = sup_distance(apply_T_sigma(p, data, sol.field), sol.field);
        CAPTURE(n);
        CHECK(gap <= 1e-6);
        if (prev >= 0.0) CHECK(gap <= prev);
        prev = gap;
    }
}

TEST_CASE("relaxed operator preserves positivity for sign-indefinite input") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto g = grid(0.5, 9);
    for (int trial = 0; trial < 25; ++trial) {
        const ModelParams p{0.5 + u(rng), 0.2 + u(rng), 0.0};
        const ModelParams pr{p.c, p.S, 2.0 * p.c * p.S * (1.0 + 0.5 * u(rng)) + 1e-3};
        const auto data = bump_data(0.01 * u(rng), 0.005 * u(rng), pr.c);
        const Field4 M = scale_to_norm(random_trig_field(g, rng, true), pr.c, 5.0 * u(rng));
        const Field4 T = apply_T_sigma(pr, data, M);
        CHECK(T.min_value() >= 0.0);
        CHECK(T.physical());
    }
}

TEST_CASE("contraction and growth bounds on random pairs") {
    const ModelParams p{1.0, 0.5, 1.05};
    const auto data = bump_data();
    const auto g = grid(0.1, 9);
    const auto m = measure_constants(p, data, g, 40, 0.05, 11);
    CHECK(m.contraction_bound == doctest::Approx(0.2));
    CHECK(m.contraction_ok);
    CHECK(m.contraction_ratio > 0.0);
    CHECK(m.growth_ok);

    // Relaxed growth: N(T^sigma M) <= p_sigma N(M)^2 + q_sigma inside the ball of radius R0.
    const double R0 = 0.9 * theorem_R0_cap(p.c, p.S, p.sigma);
    const auto k = compute_constants(p, g.slab(), data, R0);
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> u(0.2, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const Field4 M = scale_to_norm(random_trig_field(g, rng, true), p.c, R0 * u(rng));
        const double nm = norm_report(M, p.c).n_script;
        const double nt = norm_report(apply_T_sigma(p, data, M), p.c).n_script;
        CHECK(nt <= (k.p_sigma * nm * nm + k.q_sigma) * 1.05);
    }
}

TEST_CASE("operator output is independent of the worker count") {
    const ModelParams p{1.0, 0.5, 1.05};
    const auto g = grid(1.0, 17);
    std::mt19937_64 rng(9);
    const Field4 M = scale_to_norm(random_trig_field(g, rng, true), 1.0, 0.1);
    const auto data = bump_data();
    set_workers(1);
    const Field4 a = apply_T(p, data, M);
    const Field4 as = apply_T_sigma(p, data, M);
    set_workers(3);
    const Field4 b = apply_T(p, data, M);
    const Field4 bs = apply_T_sigma(p, data, M);
    set_workers(0);
    CHECK(sup_distance(a, b) == 0.0);
    CHECK(sup_distance(as, bs) == 0.0);
}

TEST_CASE("transport solution carries the data unchanged") {
    const ModelParams p{1.0, 0.5, 1.05};
    const auto g = grid(1.0, 9);
    const auto data = bump_data();
    const Field4 T = transport_solution(p, data, g);
    for (std::size_t k = 0; k < g.nt(); ++k)
        for (std::size_t j = 0; j < g.nx(); ++j)
            for (std::size_t l = 0; l < g.ny(); ++l)
                for (std::size_t i = 0; i < 4; ++i) {
                    const auto f = trace(p, g.slab(), g.domain(), i, g.t(k), g.x(j), g.y(l));
                    CHECK(T.at(i, k, j, l) == doctest::Approx(datum_at_foot(data, f)).epsilon(1e-14));
                }
    CHECK(positivity_tolerance(p, data, g) == doctest::Approx(1e-12 * (1 + T.sup_norm())));
}
