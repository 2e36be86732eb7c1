#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "broadwell/data.hpp"
#include "broadwell/field.hpp"
#include "broadwell/norms.hpp"
#include "broadwell/operators.hpp"

namespace broadwell {

enum class OperatorKind { Plain, Relaxed };

const char* to_string(OperatorKind op);

struct PicardOptions {
    OperatorKind op = OperatorKind::Plain;
    /// Unset: 1e-10 (1 + q) with q the slab's shifted-data norm.
    std::optional<double> tol_fix;
    std::size_t max_iter = 200;
    QuadratureSpec quad;
};

struct SlabSolution {
    Field4 field;
    std::size_t iterations = 0;
    double final_delta = 0.0;
    double tol_fix = 0.0;
    /// Sup-norm of each Picard update.
    std::vector<double> deltas;
    /// deltas[k] / deltas[k-1].
    std::vector<double> contraction_estimates;
    /// Empty on grids with fewer than 3 points per axis.
    std::optional<NormReport> norm;
};

/// Iterates M <- T(M) (or T^sigma) from `guess` until the sup update falls
/// to tol_fix. Throws NonConvergenceError after max_iter updates, NumericError
/// on non-finite iterates and PositivityError when a plain-mode limit dips
/// below -tol_pos.
SlabSolution picard_solve(const ModelParams& params, const ProblemData& data, Field4 guess, double tol_fix,
                          const PicardOptions& opts);

/// picard_solve from the transport guess, with the default tolerance when
/// opts.tol_fix is unset.
SlabSolution solve_slab(const ModelParams& params, const ProblemData& data, const SlabGrid& grid,
                        const PicardOptions& opts);

}  // namespace broadwell
