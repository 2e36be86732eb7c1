#pragma once

#include <array>
#include <cstddef>

#include "broadwell/data.hpp"
#include "broadwell/grid.hpp"

namespace broadwell {

/// A: the backward characteristic reaches the initial plane t = tau.
/// B: it leaves through the inflow face first.
enum class Region { A, B };

/// Backward foot of the characteristic of component `component` (0 = N1)
/// through a space-time point.
struct CharFoot {
    std::size_t component = 0;
    Region region = Region::A;
    double foot_time = 0.0;
    std::array<double, 3> foot_point{};  ///< (t, x, y)
};

/// Classifies the point and returns its foot. Points on the dividing plane
/// are assigned region A.
CharFoot trace(const ModelParams& params, const TimeSlab& slab, const RectDomain& domain,
               std::size_t component, double t, double x, double y);

/// Position reached at time s by the characteristic of `component` that
/// passes through (t, x, y).
inline std::array<double, 2> characteristic_position(double c, std::size_t component, double s, double t,
                                                     double x, double y) {
    const double shift = c * (s - t);
    switch (component) {
        case 0: return {x + shift, y};
        case 1: return {x, y + shift};
        case 2: return {x, y - shift};
        default: return {x - shift, y};
    }
}

/// Shifted datum: the selected datum composed with the characteristic shift,
/// e.g. N1_bar^tau(t,x,y) = N1^tau(x - c(t - tau), y) and
/// N4_bar^+(t,x,y) = N4^+(t - (b1 - x)/c, y). Throws DomainError when the
/// shift lands outside the datum's domain.
double shifted_eval(const ProblemData& data, const ModelParams& params, DataSelector which, double t,
                    double x, double y);

/// The datum carried to (t, x, y) along its characteristic: initial datum at
/// the foot for region A, inflow datum for region B.
double datum_at_foot(const ProblemData& data, const CharFoot& foot);

/// ||.||_1 estimate of one datum and of its shifted version.
struct ShiftedNormEntry {
    DataSelector which = DataSelector::Initial1;
    double sup = 0.0;           ///< sup |f| over the source window
    double d_u = 0.0;           ///< sup |df/du|
    double d_v = 0.0;           ///< sup |df/dv|
    double source_norm = 0.0;   ///< ||f||_1 = max(sup, d_u, d_v)
    double shifted_norm = 0.0;  ///< ||f_bar||_1 by the chain rule
    double factor = 0.0;        ///< 1 + c (initial) or 1 + 1/c (inflow)
    bool bound_holds = true;    ///< shifted_norm <= factor * source_norm
};

struct ShiftedNormReport {
    std::array<ShiftedNormEntry, 8> entries{};
    double q = 0.0;         ///< max of the eight shifted norms
    double raw_max = 0.0;   ///< max of the eight source norms
    double gamma = 0.0;     ///< 1 + c + 1/c
    bool bounds_hold = true;
    bool gamma_bound_holds = true;  ///< every shifted norm <= gamma * its source norm
};

/// Finite-difference ||.||_1 of the data over the windows the slab reads:
/// initial data on the rectangle, inflow data on [tau, tau'] x edge. Partials
/// of the shifted data follow from the chain rule through the affine shift.
/// Initial data given as lattice tables are differenced on their own nodes;
/// everything else on a `samples` x `samples` lattice.
ShiftedNormReport shifted_norm_bound(const ProblemData& data, const ModelParams& params, const TimeSlab& slab,
                                     std::size_t samples = 65);

/// max ||f||_1 of the raw data, inflow data taken over [t_begin, t_end].
double raw_data_norm(const ProblemData& data, double t_begin, double t_end, std::size_t samples = 65);

}  // namespace broadwell
