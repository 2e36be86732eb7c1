#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "broadwell/field.hpp"
#include "broadwell/grid.hpp"

namespace broadwell {

// Closed-form presets for a datum f(u, v). Initial data use (u, v) = (x, y);
// inflow data use (u, v) = (t, edge coordinate).

struct ConstantPreset {
    double value = 0.0;
};

/// offset + slope_u u + slope_v v
struct AffinePreset {
    double offset = 0.0;
    double slope_u = 0.0;
    double slope_v = 0.0;
};

/// base + amplitude exp(-((u - cu)^2 + (v - cv)^2) / width^2)
struct GaussianPreset {
    double base = 0.0;
    double amplitude = 0.0;
    double center_u = 0.0;
    double center_v = 0.0;
    double width = 1.0;
};

/// base + amplitude sin(freq_u u + phase_u) sin(freq_v v + phase_v)
struct TrigPreset {
    double base = 0.0;
    double amplitude = 0.0;
    double freq_u = 1.0;
    double freq_v = 1.0;
    double phase_u = 0.0;
    double phase_v = 0.0;
};

/// base + amplitude sin^p(pi (u-u_lo)/(u_hi-u_lo)) sin^p(pi (v-v_lo)/(v_hi-v_lo))
/// inside the box, base outside.
struct BumpPreset {
    double base = 0.0;
    double amplitude = 0.0;
    double u_lo = 0.0;
    double u_hi = 1.0;
    double v_lo = 0.0;
    double v_hi = 1.0;
    int power = 4;
};

/// Lattice of values over [u0,u1] x [v0,v1], bilinear in between.
/// values[iv * nu + iu].
struct Table2D {
    double u0 = 0.0;
    double u1 = 1.0;
    double v0 = 0.0;
    double v1 = 1.0;
    std::size_t nu = 2;
    std::size_t nv = 2;
    std::vector<double> values;

    void validate() const;
    double du() const { return (u1 - u0) / static_cast<double>(nu - 1); }
    double dv() const { return (v1 - v0) / static_cast<double>(nv - 1); }
    double node(std::size_t iu, std::size_t iv) const { return values[iv * nu + iu]; }
};

/// Row-major 2x3 affine map (u, v) -> (m[0]u + m[1]v + m[2], m[3]u + m[4]v + m[5]).
using AffineMap2 = std::array<double, 6>;

class DataFunction;

/// inner(map(u, v)); used to build inflow data that continue an initial profile.
struct ComposedPreset {
    std::shared_ptr<const DataFunction> inner;
    AffineMap2 map{1.0, 0.0, 0.0, 0.0, 1.0, 0.0};
};

/// One scalar datum: a closed-form preset or a tabulated lattice.
class DataFunction {
public:
    using Variant = std::variant<ConstantPreset, AffinePreset, GaussianPreset, TrigPreset, BumpPreset,
                                 std::shared_ptr<const Table2D>, ComposedPreset>;

    DataFunction() : impl_(ConstantPreset{0.0}) {}
    DataFunction(Variant v) : impl_(std::move(v)) {}  // NOLINT: implicit by intent

    static DataFunction constant(double value) { return DataFunction(ConstantPreset{value}); }
    static DataFunction table(Table2D table);
    static DataFunction composed(DataFunction inner, AffineMap2 map);

    /// Throws DomainError when (u, v) lies outside a table's box.
    double operator()(double u, double v) const;

    /// True when a tabulated lattice is involved (directly or through composition).
    bool tabulated() const;
    /// The table, if this datum is one (not through composition).
    const Table2D* as_table() const;

    const Variant& variant() const { return impl_; }

private:
    Variant impl_;
};

enum class DataSelector {
    Initial1,
    Initial2,
    Initial3,
    Initial4,
    Inflow1,  ///< N1-(t, y) on x = a1
    Inflow2,  ///< N2-(t, x) on y = a2
    Inflow3,  ///< N3+(t, x) on y = b2
    Inflow4,  ///< N4+(t, y) on x = b1
};

const char* to_string(DataSelector which);

/// Initial data at time `tau` and the four inflow data, valid for
/// t >= inflow_origin.
struct ProblemData {
    RectDomain domain;
    double tau = 0.0;
    double inflow_origin = 0.0;
    std::array<DataFunction, 4> initial;
    std::array<DataFunction, 4> inflow;

    const DataFunction& function(DataSelector which) const;
    bool tabulated() const;

    /// Every datum equal to the same constant.
    static ProblemData constant(const RectDomain& domain, double value, double tau = 0.0);
};

/// Evaluates a datum. Initial selectors take (x, y); inflow selectors take
/// (t, s) with s the coordinate along the inflow edge. Throws DomainError
/// when the point is outside the selector's domain.
double evaluate_data(const ProblemData& data, DataSelector which, double p0, double p1);

struct EdgeViolation {
    std::size_t component = 0;  ///< 0 for N1 .. 3 for N4
    std::string edge;           ///< "x=a1", "y=a2", "y=b2", "x=b1"
    double gap = 0.0;           ///< max |initial - inflow| on the edge
    double coordinate = 0.0;    ///< edge coordinate where the gap is attained
};

/// Compares initial and inflow data on the four inflow edges at t = tau.
std::vector<EdgeViolation> check_compatibility(const ProblemData& data, double tol_compat,
                                               std::size_t samples = 257);

/// 1e-9 for closed-form data, 1e-6 once a table is involved.
double default_compat_tolerance(const ProblemData& data);

/// Sampled sanity checks: finite, non-negative, finite differences bounded.
/// Inflow data are sampled on [inflow_origin, t_end]. Returns human-readable issues.
std::vector<std::string> check_regularity(const ProblemData& data, double t_end,
                                          std::size_t samples = 65);

/// Table holding component `i` of time slice `k`.
Table2D slice_table(const Field4& field, std::size_t i, std::size_t k);

/// Same inflow data, initial data replaced by the terminal slice of `field`.
ProblemData restart_from_terminal_slice(const ProblemData& data, const Field4& field);

}  // namespace broadwell
