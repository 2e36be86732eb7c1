#pragma once

#include <cstddef>

namespace broadwell {

/// Physical and relaxation constants of the four-velocity model.
///
/// `c` is the particle speed, `S` the collision cross-section and `sigma`
/// the relaxation constant used by the relaxed operator. A relaxed solve
/// requires sigma > 2 c S.
struct ModelParams {
    double c = 1.0;
    double S = 0.5;
    double sigma = 0.0;

    /// Throws PreconditionError unless c > 0 and S > 0.
    void validate() const;
    /// c > 0 with S, sigma >= 0: enough for transport, the operators and the
    /// oracle (S = 0 switches collisions off).
    void validate_kinematics() const;
    /// validate() plus the strict relaxation threshold sigma > 2cS.
    void validate_relaxed() const;

    /// 2cS(1 + 0.05), the default relaxation constant.
    static double default_sigma(double c, double S) { return 2.0 * c * S * 1.05; }
};

struct RectDomain {
    double a1 = 0.0;
    double b1 = 1.0;
    double a2 = 0.0;
    double b2 = 1.0;

    void validate() const;
    double width() const { return b1 - a1; }
    double height() const { return b2 - a2; }
    bool contains(double x, double y, double tol = 0.0) const {
        return x >= a1 - tol && x <= b1 + tol && y >= a2 - tol && y <= b2 + tol;
    }
    bool operator==(const RectDomain&) const = default;
};

struct TimeSlab {
    double tau = 0.0;
    double tau_prime = 1.0;

    void validate() const;
    double length() const { return tau_prime - tau; }
    bool operator==(const TimeSlab&) const = default;
};

/// Uniform space-time lattice over one slab. Endpoints are hit exactly:
/// t(0) == tau, t(nt-1) == tau_prime, and likewise in x and y.
class SlabGrid {
public:
    SlabGrid(TimeSlab slab, RectDomain domain, std::size_t nt, std::size_t nx, std::size_t ny);

    const TimeSlab& slab() const { return slab_; }
    const RectDomain& domain() const { return domain_; }
    std::size_t nt() const { return nt_; }
    std::size_t nx() const { return nx_; }
    std::size_t ny() const { return ny_; }
    double ht() const { return ht_; }
    double hx() const { return hx_; }
    double hy() const { return hy_; }

    double t(std::size_t k) const { return k + 1 == nt_ ? slab_.tau_prime : slab_.tau + k * ht_; }
    double x(std::size_t j) const { return j + 1 == nx_ ? domain_.b1 : domain_.a1 + j * hx_; }
    double y(std::size_t l) const { return l + 1 == ny_ ? domain_.b2 : domain_.a2 + l * hy_; }

    std::size_t size() const { return nt_ * nx_ * ny_; }
    std::size_t slice_size() const { return nx_ * ny_; }
    /// Linear index; x varies fastest, then y, then t.
    std::size_t index(std::size_t k, std::size_t j, std::size_t l) const {
        return (k * ny_ + l) * nx_ + j;
    }

    /// c ht <= min(hx, hy): required by the explicit upwind oracle only.
    bool cfl_compatible(double c) const;

    bool same_shape(const SlabGrid& other) const;

private:
    TimeSlab slab_;
    RectDomain domain_;
    std::size_t nt_;
    std::size_t nx_;
    std::size_t ny_;
    double ht_;
    double hx_;
    double hy_;
};

}  // namespace broadwell
