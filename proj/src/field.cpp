#include "broadwell/field.hpp"

#include <algorithm>
#include <limits>

#include "broadwell/errors.hpp"

namespace broadwell {

Field4::Field4(SlabGrid grid) : grid_(std::move(grid)) {
    for (auto& v : values_) v.assign(grid_.size(), 0.0);
}

Field4 Field4::constant(const SlabGrid& grid, double value) {
    Field4 f(grid);
    for (auto& v : f.values_) std::fill(v.begin(), v.end(), value);
    f.physical_ = value >= 0.0;
    return f;
}

std::array<double, 4> Field4::sample(double t, double x, double y) const {
    const auto& g = grid_;
    const Bracket bt = locate(t, g.slab().tau, g.ht(), g.nt());
    const Bracket bx = locate(x, g.domain().a1, g.hx(), g.nx());
    const Bracket by = locate(y, g.domain().a2, g.hy(), g.ny());

    std::array<double, 4> out{};
    auto plane = [&](std::size_t k, double wk) {
        const std::size_t i00 = g.index(k, bx.lo, by.lo);
        const std::size_t i10 = i00 + 1;
        const std::size_t i01 = i00 + g.nx();
        const std::size_t i11 = i01 + 1;
        const double wx = bx.weight;
        const double wy = by.weight;
        for (std::size_t c = 0; c < 4; ++c) {
            const auto& v = values_[c];
            const double lower = (1.0 - wx) * v[i00] + wx * v[i10];
            const double upper = (1.0 - wx) * v[i01] + wx * v[i11];
            out[c] += wk * ((1.0 - wy) * lower + wy * upper);
        }
    };
    if (bt.weight == 0.0) {
        plane(bt.lo, 1.0);
    } else if (bt.weight == 1.0) {
        plane(bt.lo + 1, 1.0);
    } else {
        plane(bt.lo, 1.0 - bt.weight);
        plane(bt.lo + 1, bt.weight);
    }
    return out;
}

double Field4::sup_norm() const {
    double m = 0.0;
    for (const auto& v : values_) {
        for (double x : v) m = std::max(m, std::abs(x));
    }
    return m;
}

double Field4::min_value() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& v : values_) {
        for (double x : v) m = std::min(m, x);
    }
    return m;
}

bool Field4::all_finite() const {
    for (const auto& v : values_) {
        for (double x : v) {
            if (!std::isfinite(x)) return false;
        }
    }
    return true;
}

double sup_distance(const Field4& a, const Field4& b) {
    if (!a.grid().same_shape(b.grid())) {
        throw SizeError("sup_distance: fields live on different lattices");
    }
    double m = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        const auto va = a.component(i);
        const auto vb = b.component(i);
        for (std::size_t n = 0; n < va.size(); ++n) m = std::max(m, std::abs(va[n] - vb[n]));
    }
    return m;
}

}  // namespace broadwell
