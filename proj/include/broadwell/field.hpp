#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "broadwell/grid.hpp"

namespace broadwell {

/// Position of a coordinate inside a uniform 1-D lattice: the value is
/// (1 - weight) v[lo] + weight v[lo + 1]. Coordinates within 1e-9 cells of
/// a node snap onto it so lattice points reproduce stored values exactly.
struct Bracket {
    std::size_t lo = 0;
    double weight = 0.0;
};

inline Bracket locate(double u, double origin, double step, std::size_t n) {
    const double r = (u - origin) / step;
    const double last = static_cast<double>(n - 1);
    if (r <= 0.0) return {0, 0.0};
    if (r >= last) return {n - 2, 1.0};
    const double nearest = std::round(r);
    if (std::abs(r - nearest) < 1e-9) {
        const auto node = static_cast<std::size_t>(nearest);
        if (node + 1 == n) return {n - 2, 1.0};
        return {node, 0.0};
    }
    const auto lo = static_cast<std::size_t>(std::floor(r));
    return {lo, r - static_cast<double>(lo)};
}

/// The four densities N1..N4 sampled on a slab lattice. Component index 0
/// holds N1, index 3 holds N4.
class Field4 {
public:
    explicit Field4(SlabGrid grid);

    static Field4 constant(const SlabGrid& grid, double value);

    const SlabGrid& grid() const { return grid_; }

    std::span<double> component(std::size_t i) { return values_[i]; }
    std::span<const double> component(std::size_t i) const { return values_[i]; }

    double& at(std::size_t i, std::size_t k, std::size_t j, std::size_t l) {
        return values_[i][grid_.index(k, j, l)];
    }
    double at(std::size_t i, std::size_t k, std::size_t j, std::size_t l) const {
        return values_[i][grid_.index(k, j, l)];
    }

    std::array<double, 4> point(std::size_t idx) const {
        return {values_[0][idx], values_[1][idx], values_[2][idx], values_[3][idx]};
    }

    /// Linear in time, bilinear in space. Coordinates are clamped to the slab.
    std::array<double, 4> sample(double t, double x, double y) const;

    /// A field flagged physical has all values >= 0.
    bool physical() const { return physical_; }
    void set_physical(bool flag) { physical_ = flag; }

    /// max_i sup |N_i| over the lattice.
    double sup_norm() const;
    double min_value() const;
    bool all_finite() const;

private:
    SlabGrid grid_;
    std::array<std::vector<double>, 4> values_;
    bool physical_ = false;
};

/// max_i sup |a_i - b_i|; both fields must share a lattice shape.
double sup_distance(const Field4& a, const Field4& b);

/// rho(N) = N1 + N2 + N3 + N4.
inline double rho(const std::array<double, 4>& n) { return n[0] + n[1] + n[2] + n[3]; }

/// rho at lattice index `idx`.
inline double rho(const Field4& field, std::size_t idx) { return rho(field.point(idx)); }

}  // namespace broadwell
