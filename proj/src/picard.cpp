#include "broadwell/picard.hpp"

#include <cmath>
#include <sstream>

#include "broadwell/characteristics.hpp"
#include "broadwell/errors.hpp"

namespace broadwell {

const char* to_string(OperatorKind op) { return op == OperatorKind::Relaxed ? "relaxed" : "plain"; }

SlabSolution picard_solve(const ModelParams& params, const ProblemData& data, Field4 guess, double tol_fix,
                          const PicardOptions& opts) {
    if (!(tol_fix > 0.0)) throw ConfigError("tol_fix must be > 0");
    if (!guess.all_finite()) throw NumericError("Picard guess has non-finite values");
    SlabSolution sol{std::move(guess), 0, 0.0, 0.0, {}, {}, std::nullopt};
    sol.tol_fix = tol_fix;
    auto apply = [&](const Field4& M) {
        return opts.op == OperatorKind::Relaxed ? apply_T_sigma(params, data, M, opts.quad)
                                                : apply_T(params, data, M, opts.quad);
    };
    for (std::size_t it = 0; it < opts.max_iter; ++it) {
        Field4 next = apply(sol.field);
        const double d = sup_distance(next, sol.field);
        if (!std::isfinite(d)) throw NumericError("Picard update is not finite");
        if (!sol.deltas.empty()) {
            const double prev = sol.deltas.back();
            sol.contraction_estimates.push_back(prev > 0.0 ? d / prev : 0.0);
        }
        sol.deltas.push_back(d);
        sol.field = std::move(next);
        sol.iterations = it + 1;
        sol.final_delta = d;
        if (d <= tol_fix) break;
    }
    if (!(sol.final_delta <= tol_fix)) {
        std::ostringstream os;
        os << "Picard did not converge in " << opts.max_iter << " iterations (last update " << sol.final_delta
           << ", tol " << tol_fix << ")";
        throw NonConvergenceError(os.str(), sol.deltas, sol.contraction_estimates);
    }

    if (opts.op == OperatorKind::Plain) {
        const double tol = positivity_tolerance(params, data, sol.field.grid());
        for (std::size_t i = 0; i < 4; ++i) {
            for (double& v : sol.field.component(i)) {
                if (v < -tol) throw PositivityError("Picard limit has values below -tol_pos");
                if (v < 0.0) v = 0.0;
            }
        }
        sol.field.set_physical(true);
    }
    const auto& g = sol.field.grid();
    if (g.nt() >= 3 && g.nx() >= 3 && g.ny() >= 3) sol.norm = norm_report(sol.field, params.c);
    return sol;
}

SlabSolution solve_slab(const ModelParams& params, const ProblemData& data, const SlabGrid& grid,
                        const PicardOptions& opts) {
    double tol = 0.0;
    if (opts.tol_fix) {
        tol = *opts.tol_fix;
    } else {
        tol = 1e-10 * (1.0 + shifted_norm_bound(data, params, grid.slab()).q);
    }
    return picard_solve(params, data, transport_solution(params, data, grid), tol, opts);
}

}  // namespace broadwell
