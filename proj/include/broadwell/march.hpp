#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "broadwell/constants.hpp"
#include "broadwell/picard.hpp"

namespace broadwell {

struct MarchOptions {
    double R0 = 0.0;
    double T_end = 1.0;
    /// Lattice points per slab along t, x, y.
    std::size_t nt = 17;
    std::size_t nx = 17;
    std::size_t ny = 17;
    PicardOptions picard;
    /// Skip the hypothesis checks and the R0 assertions.
    bool unsafe = false;
    std::size_t samples = 65;
};

/// One progress record per slab.
struct SlabRecord {
    std::size_t n = 0;
    double S_begin = 0.0;
    double S_end = 0.0;
    double q = 0.0;
    double g_q = 0.0;
    /// The step used was min(1, remaining) < g(q).
    bool capped = false;
    std::size_t iterations = 0;
    double final_delta = 0.0;
    double n_script = 0.0;
    /// |q - mu f / (mu + lambda sigma R0 g(q))|, uncapped slabs with g(q) > 0 only.
    std::optional<double> step_law_residual;
};

struct MarchState {
    std::size_t n = 0;
    /// S[0] is the start time; S[n+1] = S[n] + step of slab n.
    std::vector<double> S;
    std::vector<double> q;
    std::vector<SlabRecord> slabs;
    /// g(gamma R0): every uncapped step is at least this long.
    double min_step_certificate = 0.0;
    TheoremConstants initial_constants;
    HypothesisVerdict initial_verdict;
    bool completed = false;
};

/// Receives each slab as it is finished; the march keeps only the terminal slice.
using SlabSink = std::function<void(const SlabRecord&, const SlabSolution&)>;

/// Solves slab after slab from data.tau until T_end. Each slab of length
/// min(g(q_{n+1}), 1, remaining) restarts from the previous terminal slice.
/// Throws MarchError carrying the slab index on any hypothesis, Picard or
/// bound failure.
MarchState global_march(const ModelParams& params, const ProblemData& data, const MarchOptions& opts,
                        const SlabSink& sink = {});

}  // namespace broadwell
