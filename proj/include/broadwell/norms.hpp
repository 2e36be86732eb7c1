#pragma once

#include <array>
#include <cstddef>
#include <optional>

#include "broadwell/field.hpp"

namespace broadwell {

/// Sup norms of each component and of its finite-difference partials.
///
/// n1[i] = max(sup[i], dt[i], dx[i], dy[i]) is the ||.||_1 norm of N_i and
/// n_script = max_i n1[i] the norm used for the invariant balls.
struct NormReport {
    std::array<double, 4> sup{};
    std::array<double, 4> dt{};
    std::array<double, 4> dx{};
    std::array<double, 4> dy{};
    std::array<double, 4> n1{};
    double n_script = 0.0;
    /// Derivative stencils dropped because they cross a characteristic plane.
    std::size_t skipped_stencils = 0;
};

enum class Axis { T, X, Y };

/// True when the segment between the two space-time points crosses one of
/// the planes x - c(t-tau) = a1, y - c(t-tau) = a2, y + c(t-tau) = b2,
/// x + c(t-tau) = b1 (endpoints lying on a plane do not count).
bool crosses_characteristic_plane(const SlabGrid& grid, double c, const std::array<double, 3>& p,
                                  const std::array<double, 3>& q);

/// Finite-difference partial of component `i` along `axis` at lattice point
/// (k, j, l): central in the interior, second-order one-sided on faces.
/// Empty when the stencil crosses a characteristic plane. Needs >= 3 points
/// along `axis`.
std::optional<double> partial(const Field4& field, double c, std::size_t i, Axis axis, std::size_t k,
                              std::size_t j, std::size_t l);

/// Throws SizeError unless the grid has >= 3 points per axis.
NormReport norm_report(const Field4& field, double c);

}  // namespace broadwell
