#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "broadwell/characteristics.hpp"
#include "broadwell/errors.hpp"
#include "helpers.hpp"

using namespace broadwell;
using namespace testing_support;

namespace {

const ModelParams kUnit{1.0, 0.5, 1.05};

bool indicator(const ModelParams& p, const TimeSlab& s, const RectDomain& d, std::size_t i, double t, double x,
               double y) {
    const double ct = p.c * (t - s.tau);
    switch (i) {
        case 0: return x - ct >= d.a1;
        case 1: return y - ct >= d.a2;
        case 2: return y + ct <= d.b2;
        default: return x + ct <= d.b1;
    }
}

}  // namespace

TEST_CASE("trace: worked examples") {
    const auto d = unit_square();
    auto f = trace(kUnit, {0, 1}, d, 0, 0.2, 0.9, 0.5);
    CHECK(f.region == Region::A);
    CHECK(f.foot_time == 0.0);
    CHECK(f.foot_point[1] == doctest::Approx(0.7));
    CHECK(f.foot_point[2] == 0.5);

    f = trace(kUnit, {0, 1}, d, 0, 0.9, 0.3, 0.5);
    CHECK(f.region == Region::B);
    CHECK(f.foot_time == doctest::Approx(0.6));
    CHECK(f.foot_point[1] == 0.0);
    CHECK(f.foot_point[2] == 0.5);

    const ModelParams c2{2.0, 0.5, 2.1};
    f = trace(c2, {0, 1}, d, 2, 0.1, 0.5, 0.85);
    CHECK(f.region == Region::B);
    CHECK(f.foot_time == doctest::Approx(0.025));
    CHECK(f.foot_point[1] == 0.5);
    CHECK(f.foot_point[2] == 1.0);

    // On the dividing plane x - c(t - tau) = a1.
    f = trace(kUnit, {0, 1}, d, 0, 0.25, 0.25, 0.5);
    CHECK(f.region == Region::A);
    CHECK(f.foot_point[1] == 0.0);
}

TEST_CASE("trace: exactly one region per point, matching the indicator") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const RectDomain d{-0.5, 1.5, 0.25, 2.0};
    const TimeSlab s{1.0, 1.8};
    for (double c : {0.5, 1.0, 3.0}) {
        const ModelParams p{c, 0.5, 2 * c};
        for (int n = 0; n < 2000; ++n) {
            const double t = s.tau + u(rng) * s.length();
            const double x = d.a1 + u(rng) * d.width();
            const double y = d.a2 + u(rng) * d.height();
            for (std::size_t i = 0; i < 4; ++i) {
                const auto f = trace(p, s, d, i, t, x, y);
                CHECK((f.region == Region::A) == indicator(p, s, d, i, t, x, y));
                CHECK(f.foot_time >= s.tau);
                CHECK(f.foot_time <= t);
                // The foot lies on the backward characteristic.
                const auto pos = characteristic_position(c, i, f.foot_time, t, x, y);
                CHECK(pos[0] == doctest::Approx(f.foot_point[1]).epsilon(1e-12));
                CHECK(pos[1] == doctest::Approx(f.foot_point[2]).epsilon(1e-12));
                CHECK(d.contains(f.foot_point[1], f.foot_point[2], 1e-12));
            }
        }
    }
}

TEST_CASE("shifted evaluation: direct substitution") {
    ProblemData d = ProblemData::constant(unit_square(), 0.3, 0.0);
    CHECK(shifted_eval(d, kUnit, DataSelector::Initial3, 0.1, 0.5, 0.5) == 0.3);

    d.initial[0] = DataFunction(AffinePreset{0.0, 1.0, 0.0});
    CHECK(shifted_eval(d, kUnit, DataSelector::Initial1, 0.3, 0.8, 0.4) == doctest::Approx(0.5));

    d.inflow[3] = DataFunction(AffinePreset{0.0, 1.0, 0.0});
    CHECK(shifted_eval(d, kUnit, DataSelector::Inflow4, 0.7, 0.9, 0.2) == doctest::Approx(0.7 - (1.0 - 0.9)));

    // Component 4 travels towards -x, so its initial datum is read at x + c(t - tau).
    d.initial[3] = DataFunction(AffinePreset{0.0, 1.0, 0.0});
    CHECK(shifted_eval(d, kUnit, DataSelector::Initial4, 0.2, 0.5, 0.5) == doctest::Approx(0.7));

    CHECK_THROWS_AS(shifted_eval(d, kUnit, DataSelector::Initial1, 0.9, 0.2, 0.5), DomainError);
}

TEST_CASE("shifted data are constant along their characteristic") {
    const ProblemData d = bump_data();
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const TimeSlab s{0, 1};
    for (int n = 0; n < 500; ++n) {
        const double t = u(rng);
        const double x = u(rng);
        const double y = u(rng);
        for (std::size_t i = 0; i < 4; ++i) {
            const auto f = trace(kUnit, s, d.domain, i, t, x, y);
            const auto which = static_cast<DataSelector>(f.region == Region::A ? i : i + 4);
            const double at_t = shifted_eval(d, kUnit, which, t, x, y);
            CHECK(at_t == doctest::Approx(datum_at_foot(d, f)).epsilon(1e-12));
            const double sm = f.foot_time + u(rng) * (t - f.foot_time);
            const auto p = characteristic_position(1.0, i, sm, t, x, y);
            CHECK(shifted_eval(d, kUnit, which, sm, p[0], p[1]) == doctest::Approx(at_t).epsilon(1e-12));
        }
    }
}

TEST_CASE("shifted norm bounds: simple data") {
    const auto k = shifted_norm_bound(ProblemData::constant(unit_square(), 0.2, 0.0), kUnit, {0, 1});
    CHECK(k.q == doctest::Approx(0.2));
    CHECK(k.bounds_hold);
    CHECK(k.gamma_bound_holds);
    for (const auto& e : k.entries) CHECK(e.shifted_norm == doctest::Approx(0.2));

    const auto z = shifted_norm_bound(ProblemData::constant(unit_square(), 0.0, 0.0), kUnit, {0, 1});
    CHECK(z.q == 0.0);
    CHECK(z.raw_max == 0.0);

    ProblemData lin = ProblemData::constant(unit_square(), 0.0, 0.0);
    lin.initial[0] = DataFunction(AffinePreset{0.0, 1.0, 0.0});
    const ModelParams c2{2.0, 0.5, 2.1};
    const auto r = shifted_norm_bound(lin, c2, {0, 1});
    const auto& e = r.entries[0];
    CHECK(e.source_norm == doctest::Approx(1.0));
    CHECK(e.shifted_norm == doctest::Approx(2.0));  // dt-partial c * 1
    CHECK(e.shifted_norm <= 3.0);
    CHECK(e.bound_holds);
}

TEST_CASE("shifted norm bounds hold for random affine and trig data") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const double c = 0.25 + 3.0 * std::abs(u(rng));
        const ModelParams p{c, 0.5, 2.0 * c};
        ProblemData d = ProblemData::constant({0.0, 1.0 + std::abs(u(rng)), -0.5, 0.5}, 0.0, 0.0);
        for (std::size_t i = 0; i < 4; ++i) {
            if (trial % 2) {
                d.initial[i] = DataFunction(AffinePreset{u(rng), 3 * u(rng), 3 * u(rng)});
                d.inflow[i] = DataFunction(AffinePreset{u(rng), 3 * u(rng), 3 * u(rng)});
            } else {
                d.initial[i] = DataFunction(TrigPreset{1.0, u(rng), 5 * u(rng), 5 * u(rng), u(rng), u(rng)});
                d.inflow[i] = DataFunction(TrigPreset{1.0, u(rng), 5 * u(rng), 5 * u(rng), u(rng), u(rng)});
            }
        }
        const auto r = shifted_norm_bound(d, p, {0.0, 0.5 + 0.5 * std::abs(u(rng))});
        CHECK(r.bounds_hold);
        CHECK(r.gamma_bound_holds);
        CHECK(r.q <= r.gamma * r.raw_max * (1 + 1e-12));
    }
}

TEST_CASE("shifted norms agree with direct differences of the shifted evaluator") {
    // Independent estimate: central differences in (t, x, y) of shifted_eval
    // over the part of the slab where each shifted datum is defined.
    const ModelParams p{1.5, 0.5, 1.6};
    const RectDomain dom = unit_square();
    const ProblemData d = bump_data(4e-4, 2e-4, p.c);
    const TimeSlab s{0.0, 0.6};
    const auto r = shifted_norm_bound(d, p, s, 129);
    const double h = 1e-5;
    for (DataSelector which : {DataSelector::Initial1, DataSelector::Initial4, DataSelector::Inflow2,
                               DataSelector::Inflow4}) {
        const auto idx = static_cast<std::size_t>(which);
        const std::size_t comp = idx % 4;
        double best = 0.0;
        const int n = 60;
        for (int a = 0; a <= n; ++a) {
            for (int b = 0; b <= n; ++b) {
                for (int e = 0; e <= n; e += 3) {
                    const double t = s.tau + h + (s.length() - 2 * h) * e / n;
                    const double x = h + (1 - 2 * h) * a / n;
                    const double y = h + (1 - 2 * h) * b / n;
                    // Only points strictly inside the selector's region.
                    const auto f = trace(p, s, dom, comp, t, x, y);
                    const bool want_a = idx < 4;
                    if ((f.region == Region::A) != want_a) continue;
                    auto val = [&](double tt, double xx, double yy) { return shifted_eval(d, p, which, tt, xx, yy); };
                    try {
                        const double dt = (val(t + h, x, y) - val(t - h, x, y)) / (2 * h);
                        const double dx = (val(t, x + h, y) - val(t, x - h, y)) / (2 * h);
                        const double dy = (val(t, x, y + h) - val(t, x, y - h)) / (2 * h);
                        best = std::max({best, std::abs(val(t, x, y)), std::abs(dt), std::abs(dx), std::abs(dy)});
                    } catch (const DomainError&) {
                    }
                }
            }
        }
        CAPTURE(to_string(which));
        // The chain-rule estimate covers the whole source window, so it may
        // exceed what the slab actually reads, but never by much here.
        CHECK(best <= r.entries[idx].shifted_norm * 1.02);
        CHECK(best >= r.entries[idx].shifted_norm * 0.7);
    }
}

TEST_CASE("raw data norm covers the horizon") {
    const auto d = bump_data();
    const double short_h = raw_data_norm(d, 0.0, 1.0);
    const double long_h = raw_data_norm(d, 0.0, 50.0);
    CHECK(short_h > 0.0);
    CHECK(long_h >= short_h * (1 - 1e-12));
    CHECK(long_h <= short_h * 1.05);
}
