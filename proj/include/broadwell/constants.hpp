#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "broadwell/data.hpp"
#include "broadwell/grid.hpp"

namespace broadwell {

/// Closed-form constants of the small-data theory for one slab.
struct TheoremConstants {
    double c = 1.0;
    double S = 0.5;
    double sigma = 0.0;
    double slab_length = 1.0;  ///< tau' - tau
    double R0 = 0.0;

    double mu = 0.0;      ///< 8 + 4/c + 8c
    double lambda = 0.0;  ///< 16 + 16c
    double delta = 0.0;   ///< 4/c + 8 + 4c
    double gamma = 0.0;   ///< 1 + c + 1/c

    double q = 0.0;        ///< max ||shifted datum||_1
    double q_sigma = 0.0;  ///< q (1 + delta sigma R0)
    double p = 0.0;        ///< cS (8 + 4/c + (8 + 8c)(tau' - tau))
    double p_sigma = 0.0;  ///< (mu + lambda sigma R0 (tau' - tau)) (sigma + cS)

    double f_R0 = 0.0;            ///< 1 / (4 mu (1 + delta sigma R0)(sigma + cS))
    double g_q = 0.0;             ///< step-size law at q; +inf when q = 0
    bool unbounded_step = false;  ///< q = 0
    double R0_cap = 0.0;          ///< global-existence bound on R0

    /// Largest raw ||datum||_1 (inflow data over the march horizon). Only the
    /// global check reads it; negative means "not measured".
    double raw_data_norm = -1.0;

    /// f evaluated at this R0 and step law g at an arbitrary q.
    double g(double q_value) const;
};

/// Pure closed forms from (c, S, sigma, tau' - tau, R0, q).
TheoremConstants make_constants(double c, double S, double sigma, double slab_length, double R0, double q);

/// (-1 + sqrt(1 + delta sigma / (mu (sigma + cS) gamma))) / (2 delta sigma).
double theorem_R0_cap(double c, double S, double sigma);

/// make_constants with q from shifted_norm_bound on the slab. Throws
/// PreconditionError when tau' - tau > 1, R0 <= 0 or sigma <= 2cS.
TheoremConstants compute_constants(const ModelParams& params, const TimeSlab& slab, const ProblemData& data,
                                   double R0, std::size_t samples = 65);

enum class HypothesisMode { BoundedSlab, Global };

struct HypothesisCheck {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool strict = false;
    bool passed = false;
    /// rhs / lhs - 1; +inf when lhs = 0.
    double margin = 0.0;
};

struct HypothesisVerdict {
    HypothesisMode mode = HypothesisMode::BoundedSlab;
    bool passed = false;
    std::vector<HypothesisCheck> checks;
    double p_sigma_q_sigma = 0.0;
    /// Admissible R interval [r_lo, r_hi]; NaN when p_sigma q_sigma > 1/4.
    double r_lo = 0.0;
    double r_hi = 0.0;
    double r_plus = 0.0;

    const HypothesisCheck* find(const std::string& name) const;
};

/// Bounded mode: q <= f(R0), tau' - tau <= 1, tau' - tau <= g(q), p_sigma q_sigma <= 1/4 and a
/// non-empty admissible interval. Global mode adds q < f(R0) strictly, R0 below the cap and
/// the raw data norm <= R0.
HypothesisVerdict check_hypotheses(const TheoremConstants& k, HypothesisMode mode);

const char* to_string(HypothesisMode mode);

}  // namespace broadwell
