#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "broadwell/characteristics.hpp"
#include "broadwell/constants.hpp"
#include "broadwell/errors.hpp"
#include "broadwell/march.hpp"
#include "broadwell/picard.hpp"
#include "broadwell/verify.hpp"
#include "helpers.hpp"

using namespace broadwell;
using namespace testing_support;

namespace {

const ModelParams kUnit{1.0, 0.5, 1.05};
constexpr double kInf = std::numeric_limits<double>::infinity();

double cap() { return theorem_R0_cap(kUnit.c, kUnit.S, kUnit.sigma); }

double f_of(const TheoremConstants& k) {
    return 1.0 / (4.0 * k.mu * (1.0 + k.delta * k.sigma * k.R0) * (k.sigma + k.c * k.S));
}

}  // namespace

TEST_CASE("constants at unit speed") {
    const auto k = compute_constants(kUnit, {0, 1}, ProblemData::constant(unit_square(), 0.0), 1e-3);
    CHECK(k.mu == 20.0);
    CHECK(k.lambda == 32.0);
    CHECK(k.delta == 16.0);
    CHECK(k.gamma == 3.0);
    CHECK(k.p == doctest::Approx(14.0));
    CHECK(k.q == 0.0);
    CHECK(k.q_sigma == 0.0);
    CHECK(k.g_q == kInf);
    CHECK(k.unbounded_step);
    CHECK(k.p_sigma == doctest::Approx((20.0 + 32.0 * 1.05 * 1e-3) * 1.55));
    CHECK(k.f_R0 == doctest::Approx(f_of(k)));

    CHECK_THROWS_AS(compute_constants(kUnit, {0, 1.5}, ProblemData::constant(unit_square(), 0.0), 1e-3),
                    PreconditionError);
    CHECK_THROWS_AS(compute_constants(kUnit, {0, 1}, ProblemData::constant(unit_square(), 0.0), 0.0),
                    PreconditionError);
    CHECK_THROWS_AS(compute_constants(ModelParams{1.0, 0.5, 1.0}, {0, 1}, ProblemData::constant(unit_square(), 0.0),
                                      1e-3),
                    PreconditionError);
}

TEST_CASE("constants are positive and the relaxed p exceeds p for large sigma") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    for (int n = 0; n < 200; ++n) {
        const double c = u(rng);
        const double S = u(rng);
        const double sigma = 2 * c * S * (1 + u(rng));
        const auto k = make_constants(c, S, sigma, 0.5 * u(rng) / 3.0, 1e-3 * u(rng), 1e-4 * u(rng));
        CHECK(k.mu > 0);
        CHECK(k.lambda > 0);
        CHECK(k.delta > 0);
        CHECK(k.gamma > 0);
        CHECK(k.p > 0);
        CHECK(k.p_sigma > 0);
        CHECK(k.q_sigma >= k.q);
        CHECK(k.f_R0 > 0);
        CHECK(k.p_sigma > k.p);
    }
}

TEST_CASE("global cap: f at the cap equals gamma times the cap") {
    for (double sigma : {1.05, 1.1, 2.0, 10.0}) {
        for (double c : {0.5, 1.0, 2.0}) {
            const double r = theorem_R0_cap(c, 0.5, sigma);
            const auto k = make_constants(c, 0.5, sigma, 1.0, r, 0.0);
            CHECK(r > 0.0);
            CHECK(f_of(k) == doctest::Approx(k.gamma * r).epsilon(1e-12));
            // Just below the cap, gamma R0 < f(R0).
            const auto below = make_constants(c, 0.5, sigma, 1.0, 0.9 * r, 0.0);
            CHECK(below.gamma * below.R0 < below.f_R0);
        }
    }
    const double r11 = theorem_R0_cap(1.0, 0.5, 1.1);
    const double x = 16.0 * 1.1 / (20.0 * 1.6 * 3.0);
    CHECK(r11 == doctest::Approx((-1.0 + std::sqrt(1.0 + x)) / (2.0 * 16.0 * 1.1)).epsilon(1e-12));
}

TEST_CASE("hypothesis verdicts") {
    SUBCASE("zero data pass with infinite margins") {
        auto k = make_constants(1.0, 0.5, 1.05, 1.0, 0.5 * cap(), 0.0);
        k.raw_data_norm = 0.0;
        for (auto mode : {HypothesisMode::BoundedSlab, HypothesisMode::Global}) {
            const auto v = check_hypotheses(k, mode);
            CHECK(v.passed);
            CHECK(v.find("q <= f(R0)")->margin == kInf);
            CHECK(v.find("slab length <= g(q)")->margin > 0.0);
        }
    }
    SUBCASE("q at f is the boundary") {
        const double R0 = 0.5 * cap();
        const auto probe = make_constants(1.0, 0.5, 1.05, 1e-3, R0, 0.0);
        auto k = make_constants(1.0, 0.5, 1.05, 1e-3, R0, probe.f_R0);
        k.raw_data_norm = 0.0;
        const auto b = check_hypotheses(k, HypothesisMode::BoundedSlab);
        CHECK(b.find("q <= f(R0)")->passed);
        CHECK(b.find("q <= f(R0)")->margin == doctest::Approx(0.0));
        const auto gl = check_hypotheses(k, HypothesisMode::Global);
        CHECK_FALSE(gl.find("q <= f(R0)")->passed);
        CHECK_FALSE(gl.passed);

        const auto over = make_constants(1.0, 0.5, 1.05, 1e-3, R0, 1.01 * probe.f_R0);
        const auto v = check_hypotheses(over, HypothesisMode::BoundedSlab);
        CHECK_FALSE(v.passed);
        CHECK(v.find("q <= f(R0)")->margin == doctest::Approx(1.0 / 1.01 - 1.0));
    }
    SUBCASE("sigma 1.1 at 0.9 of the cap") {
        const ModelParams p{1.0, 0.5, 1.1};
        const double R0 = 0.9 * theorem_R0_cap(1.0, 0.5, 1.1);
        auto k = compute_constants(p, {0, 1}, bump_data(), R0);
        k.raw_data_norm = raw_data_norm(bump_data(), 0.0, 1.0);
        const auto v = check_hypotheses(k, HypothesisMode::Global);
        CHECK(v.passed);
        CHECK(v.find("R0 < global cap")->passed);
        CHECK(v.r_lo <= v.r_hi);
        CHECK(v.p_sigma_q_sigma <= 0.25);
    }
    SUBCASE("raw data above R0 fail globally") {
        auto k = make_constants(1.0, 0.5, 1.05, 1.0, 0.5 * cap(), 1e-5);
        k.raw_data_norm = cap();
        CHECK_FALSE(check_hypotheses(k, HypothesisMode::Global).passed);
        CHECK(check_hypotheses(k, HypothesisMode::BoundedSlab).passed);
    }
}

TEST_CASE("Picard: equilibrium, guesses and operator agreement") {
    const auto g = SlabGrid({0, 1}, unit_square(), 9, 9, 9);
    const double k = 0.25;
    const auto eq = ProblemData::constant(unit_square(), k);
    PicardOptions o;
    auto sol = picard_solve(kUnit, eq, Field4::constant(g, k), 1e-12, o);
    CHECK(sol.iterations == 1);
    CHECK(sol.final_delta == 0.0);

    const auto from_zero = picard_solve(kUnit, eq, Field4::constant(g, 0.0), 1e-12, o);
    CHECK(sup_distance(from_zero.field, Field4::constant(g, k)) <= 1e-12);
    o.op = OperatorKind::Relaxed;
    const auto relaxed = picard_solve(kUnit, eq, Field4::constant(g, 0.0), 1e-12, o);
    CHECK(sup_distance(relaxed.field, from_zero.field) <= 2e-12);
    CHECK(relaxed.field.physical());
}

TEST_CASE("Picard: uniqueness and contraction on small data") {
    const auto data = bump_data();
    const auto g = SlabGrid({0, 1}, unit_square(), 9, 9, 9);
    const double tol = 1e-12;
    PicardOptions o;
    const auto a = picard_solve(kUnit, data, transport_solution(kUnit, data, g), tol, o);
    const auto b = picard_solve(kUnit, data, Field4::constant(g, 0.0), tol, o);
    std::mt19937_64 rng(4);
    const auto c = picard_solve(kUnit, data, scale_to_norm(random_trig_field(g, rng, false), 1.0, 1e-3), tol, o);
    CHECK(sup_distance(a.field, b.field) <= 2 * tol);
    CHECK(sup_distance(a.field, c.field) <= 2 * tol);
    CHECK(a.final_delta <= tol);
    CHECK(a.field.min_value() >= 0.0);
    o.op = OperatorKind::Relaxed;
    const auto r = picard_solve(kUnit, data, Field4::constant(g, 0.0), tol, o);
    CHECK(sup_distance(a.field, r.field) <= 1e-6);

    // Every iterate of b stays within the sup ball of the larger endpoint.
    const double R = std::max(a.field.sup_norm(), b.field.sup_norm()) * 1.001;
    const double bound = 8.0 * kUnit.c * kUnit.S * R * 1.0 * 1.05;
    for (std::size_t n = 0; n < b.contraction_estimates.size(); ++n) {
        if (b.deltas[n + 1] < 1e-14) break;
        CHECK(b.contraction_estimates[n] <= bound);
    }
}

TEST_CASE("Picard: failures") {
    const auto data = bump_data();
    const auto g = SlabGrid({0, 1}, unit_square(), 5, 5, 5);
    PicardOptions o;
    o.max_iter = 1;
    CHECK_THROWS_AS(picard_solve(kUnit, data, Field4::constant(g, 0.0), 1e-14, o), NonConvergenceError);
    try {
        picard_solve(kUnit, data, Field4::constant(g, 0.0), 1e-14, o);
    } catch (const NonConvergenceError& e) {
        CHECK(e.deltas().size() == 1);
    }
    Field4 bad = Field4::constant(g, 0.0);
    bad.at(0, 1, 1, 1) = std::nan("");
    CHECK_THROWS_AS(picard_solve(kUnit, data, bad, 1e-12, PicardOptions{}), NumericError);
    CHECK_THROWS_AS(picard_solve(kUnit, data, Field4::constant(g, 0.0), 0.0, PicardOptions{}), ConfigError);
}

TEST_CASE("slab solution stays inside the admissible radius") {
    const auto data = bump_data();
    const double R0 = 0.9 * cap();
    const auto k = compute_constants(kUnit, {0, 1}, data, R0);
    const auto v = check_hypotheses(k, HypothesisMode::BoundedSlab);
    REQUIRE(v.passed);
    const auto sol = solve_slab(kUnit, data, SlabGrid({0, 1}, unit_square(), 17, 17, 17), PicardOptions{});
    REQUIRE(sol.norm);
    CHECK(sol.norm->n_script <= std::min(R0, v.r_hi) * 1.05);
    CHECK(sol.norm->n_script >= v.r_lo * 0.95);
}

TEST_CASE("march: equilibrium data") {
    const double k = 5e-4;
    MarchOptions o;
    o.R0 = 0.9 * cap();
    o.T_end = 3.0;
    o.nt = o.nx = o.ny = 5;
    const auto st = global_march(kUnit, ProblemData::constant(unit_square(), k), o,
                                 [&](const SlabRecord&, const SlabSolution& s) {
                                     for (std::size_t i = 0; i < 4; ++i)
                                         for (double v : s.field.component(i)) CHECK(std::abs(v - k) <= 1e-12);
                                 });
    CHECK(st.completed);
    REQUIRE(st.slabs.size() == 3);
    for (std::size_t n = 0; n < 3; ++n) {
        CHECK(st.S[n + 1] - st.S[n] == doctest::Approx(1.0));
        CHECK(st.slabs[n].capped);
        CHECK(st.slabs[n].q == doctest::Approx(k));
    }
}

TEST_CASE("march: zero data take the largest steps") {
    MarchOptions o;
    o.R0 = 0.5 * cap();
    o.nt = o.nx = o.ny = 5;
    o.T_end = 0.5;
    const auto zero = ProblemData::constant(unit_square(), 0.0);
    auto st = global_march(kUnit, zero, o);
    CHECK(st.slabs.size() == 1);
    CHECK(st.S.back() == 0.5);
    o.T_end = 3.0;
    st = global_march(kUnit, zero, o);
    CHECK(st.slabs.size() == 3);
    CHECK(st.initial_constants.unbounded_step);
    for (const auto& r : st.slabs) CHECK(r.g_q == kInf);
}

TEST_CASE("march: small bump joints and boundary values") {
    const auto data = bump_data();
    MarchOptions o;
    o.R0 = 0.9 * cap();
    o.T_end = 2.5;
    o.nt = o.nx = o.ny = 9;
    std::vector<Field4> fields;
    const auto st = global_march(kUnit, data, o, [&](const SlabRecord&, const SlabSolution& s) {
        fields.push_back(s.field);
    });
    REQUIRE(fields.size() == 3);
    CHECK(st.min_step_certificate > 1.0);
    for (std::size_t n = 0; n < st.slabs.size(); ++n) {
        const auto& r = st.slabs[n];
        CHECK(r.q < 3.0 * o.R0);
        CHECK(r.n_script <= o.R0);
        CHECK(r.S_end - r.S_begin <= 1.0);
        const auto& f = fields[n];
        const auto& g = f.grid();
        for (std::size_t k = 0; k < g.nt(); ++k) {
            for (std::size_t m = 0; m < g.nx(); ++m) {
                const double t = g.t(k);
                const double s = g.x(m);
                // N1 enters at x = a1, N4 at x = b1, N2 at y = a2, N3 at y = b2.
                CHECK(f.at(0, k, 0, m) == doctest::Approx(data.inflow[0](t, g.y(m))).epsilon(1e-12));
                CHECK(f.at(3, k, g.nx() - 1, m) == doctest::Approx(data.inflow[3](t, g.y(m))).epsilon(1e-12));
                CHECK(f.at(1, k, m, 0) == doctest::Approx(data.inflow[1](t, s)).epsilon(1e-12));
                CHECK(f.at(2, k, m, g.ny() - 1) == doctest::Approx(data.inflow[2](t, s)).epsilon(1e-12));
            }
        }
        if (n > 0) {
            const auto& prev = fields[n - 1];
            const std::size_t last = prev.grid().nt() - 1;
            for (std::size_t i = 0; i < 4; ++i)
                for (std::size_t j = 0; j < g.nx(); ++j)
                    for (std::size_t l = 0; l < g.ny(); ++l) CHECK(f.at(i, 0, j, l) == prev.at(i, last, j, l));
        }
    }
}

TEST_CASE("march: failing data stop before the first slab") {
    MarchOptions o;
    o.R0 = 0.9 * cap();
    o.T_end = 2.0;
    o.nt = o.nx = o.ny = 5;
    try {
        global_march(kUnit, ProblemData::constant(unit_square(), 0.1), o);
        FAIL("march accepted data above the cap");
    } catch (const MarchError& e) {
        CHECK(e.index() == 0);
        CHECK_FALSE(e.diagnostics().empty());
    }
}

TEST_CASE("march: the step law holds on uncapped slabs") {
    // q just below f(R0) makes g(q) < 1; this sits outside the global
    // hypotheses, so the march runs unchecked.
    MarchOptions o;
    o.R0 = 0.9 * cap();
    o.T_end = 1.5;
    o.nt = o.nx = o.ny = 5;
    o.unsafe = true;
    const auto probe = make_constants(1.0, 0.5, 1.05, 1.0, o.R0, 0.0);
    const double k = 0.9975 * probe.f_R0;
    const auto st = global_march(kUnit, ProblemData::constant(unit_square(), k), o);
    REQUIRE_FALSE(st.slabs.empty());
    std::size_t uncapped = 0;
    for (const auto& r : st.slabs) {
        if (r.capped) {
            CHECK_FALSE(r.step_law_residual);
            continue;
        }
        ++uncapped;
        CHECK(r.g_q < 1.0);
        CHECK(r.S_end - r.S_begin == doctest::Approx(r.g_q));
        REQUIRE(r.step_law_residual);
        CHECK(*r.step_law_residual <= 1e-12 * k);
    }
    CHECK(uncapped >= 2);
}
