#include "broadwell/norms.hpp"

#include <algorithm>
#include <cmath>

#include "broadwell/errors.hpp"

namespace broadwell {

bool crosses_characteristic_plane(const SlabGrid& grid, double c, const std::array<double, 3>& p,
                                  const std::array<double, 3>& q) {
    const auto& d = grid.domain();
    const double tau = grid.slab().tau;
    const double eps = 1e-10 * std::max({d.width(), d.height(), 1.0});
    auto planes = [&](const std::array<double, 3>& pt) {
        const double ct = c * (pt[0] - tau);
        return std::array<double, 4>{pt[1] - ct - d.a1, pt[2] - ct - d.a2, pt[2] + ct - d.b2,
                                     pt[1] + ct - d.b1};
    };
    const auto fp = planes(p);
    const auto fq = planes(q);
    for (std::size_t n = 0; n < 4; ++n) {
        if ((fp[n] < -eps && fq[n] > eps) || (fp[n] > eps && fq[n] < -eps)) return true;
    }
    return false;
}

std::optional<double> partial(const Field4& field, double c, std::size_t i, Axis axis, std::size_t k,
                              std::size_t j, std::size_t l) {
    const auto& g = field.grid();
    std::size_t n = 0;
    std::size_t pos = 0;
    double h = 0.0;
    switch (axis) {
        case Axis::T: n = g.nt(); pos = k; h = g.ht(); break;
        case Axis::X: n = g.nx(); pos = j; h = g.hx(); break;
        case Axis::Y: n = g.ny(); pos = l; h = g.hy(); break;
    }
    if (n < 3) throw SizeError("finite-difference partial needs >= 3 points per axis");

    auto shifted = [&](std::size_t p) -> std::array<std::size_t, 3> {
        switch (axis) {
            case Axis::T: return {p, j, l};
            case Axis::X: return {k, p, l};
            case Axis::Y: return {k, j, p};
        }
        return {k, j, l};
    };
    auto coords = [&](std::size_t p) {
        const auto s = shifted(p);
        return std::array<double, 3>{g.t(s[0]), g.x(s[1]), g.y(s[2])};
    };
    auto value = [&](std::size_t p) {
        const auto s = shifted(p);
        return field.at(i, s[0], s[1], s[2]);
    };

    std::size_t first = 0;
    std::size_t last = 0;
    if (pos == 0) {
        first = 0;
        last = 2;
    } else if (pos + 1 == n) {
        first = n - 3;
        last = n - 1;
    } else {
        first = pos - 1;
        last = pos + 1;
    }
    if (crosses_characteristic_plane(g, c, coords(first), coords(last))) return std::nullopt;

    if (pos == 0) return (3.0 * (value(1) - value(0)) - (value(2) - value(1))) / (2.0 * h);
    if (pos + 1 == n) return (3.0 * (value(n - 1) - value(n - 2)) - (value(n - 2) - value(n - 3))) / (2.0 * h);
    return (value(pos + 1) - value(pos - 1)) / (2.0 * h);
}

NormReport norm_report(const Field4& field, double c) {
    const auto& g = field.grid();
    if (g.nt() < 3 || g.nx() < 3 || g.ny() < 3) {
        throw SizeError("norm_report needs >= 3 points per axis");
    }
    NormReport r;
    for (std::size_t i = 0; i < 4; ++i) {
        double sup = 0.0;
        double dt = 0.0;
        double dx = 0.0;
        double dy = 0.0;
        for (std::size_t k = 0; k < g.nt(); ++k) {
            for (std::size_t l = 0; l < g.ny(); ++l) {
                for (std::size_t j = 0; j < g.nx(); ++j) {
                    sup = std::max(sup, std::abs(field.at(i, k, j, l)));
                    if (auto d = partial(field, c, i, Axis::T, k, j, l)) dt = std::max(dt, std::abs(*d));
                    else ++r.skipped_stencils;
                    if (auto d = partial(field, c, i, Axis::X, k, j, l)) dx = std::max(dx, std::abs(*d));
                    else ++r.skipped_stencils;
                    if (auto d = partial(field, c, i, Axis::Y, k, j, l)) dy = std::max(dy, std::abs(*d));
                    else ++r.skipped_stencils;
                }
            }
        }
        r.sup[i] = sup;
        r.dt[i] = dt;
        r.dx[i] = dx;
        r.dy[i] = dy;
        r.n1[i] = std::max({sup, dt, dx, dy});
        r.n_script = std::max(r.n_script, r.n1[i]);
    }
    return r;
}

}  // namespace broadwell
