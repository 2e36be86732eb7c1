#include "broadwell/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "broadwell/errors.hpp"

namespace broadwell {

void ModelParams::validate() const {
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw PreconditionError("particle speed c must be positive, got " + std::to_string(c));
    }
    if (!(S > 0.0) || !std::isfinite(S)) {
        throw PreconditionError("cross-section S must be positive, got " + std::to_string(S));
    }
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw PreconditionError("sigma must be non-negative, got " + std::to_string(sigma));
    }
}

void ModelParams::validate_kinematics() const {
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw PreconditionError("particle speed c must be positive, got " + std::to_string(c));
    }
    if (!(S >= 0.0) || !std::isfinite(S) || !(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw PreconditionError("S and sigma must be finite and non-negative");
    }
}

void ModelParams::validate_relaxed() const {
    validate();
    if (!(sigma > 2.0 * c * S)) {
        throw PreconditionError("relaxed operator needs sigma > 2cS (sigma=" + std::to_string(sigma) +
                                ", 2cS=" + std::to_string(2.0 * c * S) + ")");
    }
}

void RectDomain::validate() const {
    if (!(a1 < b1) || !(a2 < b2)) {
        throw PreconditionError("rectangle needs a1 < b1 and a2 < b2");
    }
}

void TimeSlab::validate() const {
    if (!(tau < tau_prime)) {
        throw PreconditionError("time slab needs tau < tau'");
    }
}

SlabGrid::SlabGrid(TimeSlab slab, RectDomain domain, std::size_t nt, std::size_t nx, std::size_t ny)
    : slab_(slab), domain_(domain), nt_(nt), nx_(nx), ny_(ny) {
    slab_.validate();
    domain_.validate();
    if (nt < 2 || nx < 2 || ny < 2) {
        throw SizeError("slab grid needs at least 2 points per axis");
    }
    ht_ = slab_.length() / static_cast<double>(nt - 1);
    hx_ = domain_.width() / static_cast<double>(nx - 1);
    hy_ = domain_.height() / static_cast<double>(ny - 1);
}

bool SlabGrid::cfl_compatible(double c) const {
    // Relative slack so that exact unit-CFL setups are not rejected by rounding.
    return c * ht_ <= std::min(hx_, hy_) * (1.0 + 1e-12);
}

bool SlabGrid::same_shape(const SlabGrid& other) const {
    return nt_ == other.nt_ && nx_ == other.nx_ && ny_ == other.ny_ && slab_ == other.slab_ &&
           domain_ == other.domain_;
}

}  // namespace broadwell
