#pragma once

#include <array>
#include <cstddef>
#include <optional>

#include "broadwell/data.hpp"
#include "broadwell/field.hpp"
#include "broadwell/grid.hpp"

namespace broadwell {

struct QuadratureSpec {
    enum class Rule { Trapezoid, Simpson };

    Rule rule = Rule::Trapezoid;
    /// Integration step along s. Unset means the grid spacing ht; the
    /// characteristic segment is always split at the grid time planes.
    std::optional<double> substep;

    /// Throws ConfigError when substep is set and not > 0.
    void validate() const;
};

/// Sign of the collision term in equation i: +1 for N1, N4 and -1 for N2, N3.
inline double omega(std::size_t i) { return (i == 0 || i == 3) ? 1.0 : -1.0; }

/// Q(N) = 2cS(N2 N3 - N1 N4).
inline double collision_Q(const ModelParams& p, const std::array<double, 4>& n) {
    return 2.0 * p.c * p.S * (n[1] * n[2] - n[0] * n[3]);
}

double collision_Q(const ModelParams& p, const Field4& field, std::size_t idx);

/// sigma rho(|N|) |N_i| + omega_i Q(|N|). Non-negative when sigma > 2cS.
double relaxed_Q(const ModelParams& p, const std::array<double, 4>& n, std::size_t i);

double relaxed_Q(const ModelParams& p, const Field4& field, std::size_t i, std::size_t idx);

/// Integral of omega_i Q(M) along each backward characteristic plus the
/// shifted datum at its foot, at every lattice point of M's grid. The data's
/// initial time must equal the slab start.
Field4 apply_T(const ModelParams& params, const ProblemData& data, const Field4& M,
               const QuadratureSpec& quad = {});

/// Relaxed operator with the exponential integrating factor
/// exp(-sigma int rho(|M|)). Needs sigma > 2cS. The output is flagged
/// physical; values below -tol_pos raise PositivityError and values in
/// [-tol_pos, 0) are clamped to zero.
Field4 apply_T_sigma(const ModelParams& params, const ProblemData& data, const Field4& M,
                     const QuadratureSpec& quad = {});

/// Data carried along the characteristics with no collisions (apply_T with Q = 0).
Field4 transport_solution(const ModelParams& params, const ProblemData& data, const SlabGrid& grid);

/// 1e-12 (1 + sup of the data values read by the operator on this grid).
double positivity_tolerance(const ModelParams& params, const ProblemData& data, const SlabGrid& grid);

}  // namespace broadwell
