#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "broadwell/data.hpp"
#include "broadwell/field.hpp"
#include "broadwell/operators.hpp"

namespace broadwell {

struct PdeResidual {
    /// |dN_i/dt + v_i . grad N_i - omega_i Q(N)| at interior points; zero
    /// where a stencil crosses a characteristic plane or on the lattice faces.
    Field4 residual;
    std::array<double, 4> sup{};
    double max = 0.0;
    std::size_t skipped = 0;
};

/// Central differences at interior lattice points. Needs >= 3 points per axis.
PdeResidual pde_residual(const ModelParams& params, const Field4& solution);

/// Cumulative balance of one conserved quantity: |P(t_k) - P(t_0) + int_{t_0}^{t_k} F dt|.
struct BalanceSeries {
    std::vector<double> amount;  ///< P(t_k)
    std::vector<double> flux;    ///< net outflow F(t_k)
    std::vector<double> gap;     ///< cumulative gap at t_k
    double max_gap = 0.0;
};

struct ConservationReport {
    std::vector<double> times;
    BalanceSeries mass;        ///< rho; flux c(N1 - N4) across x-faces, c(N2 - N3) across y-faces
    BalanceSeries momentum_x;  ///< c(N1 - N4); flux c^2 (N1 + N4) across x-faces
    BalanceSeries momentum_y;  ///< c(N2 - N3); flux c^2 (N2 + N3) across y-faces
};

/// Trapezoid rule in space and in time.
ConservationReport conservation_balance(const ModelParams& params, const Field4& solution);

/// Explicit first-order upwind scheme along each component's direction with
/// an explicit collision source; inflow values injected from the data.
/// Throws ConfigError unless c ht <= min(hx, hy).
Field4 upwind_oracle(const ModelParams& params, const ProblemData& data, const SlabGrid& grid);

/// sup |oracle - solution| over the solution lattice, with the oracle run
/// on the same spatial lattice and the fewest time planes that satisfy CFL
/// and contain every solution time plane.
double oracle_gap(const ModelParams& params, const ProblemData& data, const Field4& solution);

/// sup |T(N) - N| (plain operator).
double fixed_point_residual(const ModelParams& params, const ProblemData& data, const Field4& solution,
                            const QuadratureSpec& quad = {});

/// Smooth separable trig field: base_i + amp_i sin(.) sin(.) sin(.) per
/// component with random frequencies and phases. `sign_indefinite` centres
/// the bases on zero; otherwise bases exceed amplitudes.
Field4 random_trig_field(const SlabGrid& grid, std::mt19937_64& rng, bool sign_indefinite);

/// Rescales so that the finite-difference norm equals `target`.
Field4 scale_to_norm(const Field4& field, double c, double target);

struct MeasuredConstants {
    std::size_t trials = 0;
    /// max ||TM - TN|| / ((||M|| + ||N||) ||M - N||), sup norms.
    double contraction_ratio = 0.0;
    /// (tau' - tau) 4cS
    double contraction_bound = 0.0;
    /// max (N(TM) - q_lattice) / N(M)^2
    double growth_ratio = 0.0;
    /// max N(TM) / (p N(M)^2 + max(q, q_lattice))
    double growth_bound_ratio = 0.0;
    double p = 0.0;
    double q = 0.0;
    /// N of the transported data on the same lattice: q as the lattice norm sees it.
    double q_lattice = 0.0;
    double eps_quad = 0.05;
    bool contraction_ok = true;
    bool growth_ok = true;
};

/// Random trig pairs scaled into the ball of radius R (norm N).
MeasuredConstants measure_constants(const ModelParams& params, const ProblemData& data, const SlabGrid& grid,
                                    std::size_t trials, double R, std::uint64_t seed,
                                    const QuadratureSpec& quad = {});

}  // namespace broadwell
