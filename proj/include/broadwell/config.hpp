#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "broadwell/data.hpp"
#include "broadwell/grid.hpp"
#include "broadwell/operators.hpp"
#include "broadwell/picard.hpp"

namespace broadwell {

enum class RunMode { Slab, March };

/// A value given either directly or as a multiple of a derived quantity.
struct Scaled {
    double value = 0.0;
    bool relative = false;  ///< value multiplies the derived quantity
};

struct VerifyThresholds {
    double residual = 1e-2;
    double balance = 1e-4;
    double fixed_point = 1e-8;
};

struct RunConfig {
    ModelParams params;
    RectDomain domain;
    std::size_t nt = 17;
    std::size_t nx = 17;
    std::size_t ny = 17;
    RunMode mode = RunMode::Slab;
    TimeSlab slab;
    /// Absolute horizon, or a multiple of the min-step certificate g(gamma R0).
    Scaled T_end{1.0, false};
    /// Absolute R0, or a fraction of the global cap.
    Scaled R0{0.9, true};
    /// Replaces the measured q in `check` (absolute, or a multiple of f(R0)).
    std::optional<Scaled> q_override;
    OperatorKind op = OperatorKind::Plain;
    std::optional<double> tol_fix;
    std::size_t max_iter = 200;
    std::optional<double> tol_compat;
    QuadratureSpec quad;
    VerifyThresholds thresholds;
    /// Resolutions (nx = ny) for the oracle refinement study in `verify`.
    std::vector<std::size_t> refinement;
    /// Resolutions for `bench`.
    std::vector<std::size_t> bench_sizes{9, 17, 33};
    ProblemData data;
    std::uint64_t seed = 1;
    std::string out = "out";

    double resolved_R0() const;
};

/// Parses a run configuration. Relative table paths resolve against `base_dir`.
/// Throws ConfigError on malformed input.
RunConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// One datum from its JSON description; `which` and the domain give the
/// meaning of {"type": "continue_initial"} for inflow data.
DataFunction parse_datum(const nlohmann::json& j, DataSelector which, const RectDomain& domain, double tau,
                         double c, const std::vector<DataFunction>& initial,
                         const std::filesystem::path& base_dir);

}  // namespace broadwell
