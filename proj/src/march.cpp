#include "broadwell/march.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "broadwell/characteristics.hpp"
#include "broadwell/errors.hpp"

namespace broadwell {

namespace {

std::string describe(const HypothesisVerdict& v) {
    std::ostringstream os;
    for (const auto& c : v.checks) {
        if (!c.passed) os << c.name << " failed (lhs " << c.lhs << ", rhs " << c.rhs << "); ";
    }
    return os.str();
}

}  // namespace

MarchState global_march(const ModelParams& params, const ProblemData& data, const MarchOptions& opts,
                        const SlabSink& sink) {
    params.validate_relaxed();
    data.domain.validate();
    const double t0 = data.tau;
    if (!(opts.T_end > t0)) throw ConfigError("T_end must exceed the initial time");
    if (!(opts.R0 > 0.0)) throw ConfigError("R0 must be > 0");

    MarchState st;
    st.S.push_back(t0);
    const double eps = 1e-12 * std::max(1.0, std::abs(opts.T_end));

    {
        const TimeSlab first{t0, t0 + std::min(1.0, opts.T_end - t0)};
        st.initial_constants = compute_constants(params, first, data, opts.R0, opts.samples);
        st.initial_constants.raw_data_norm = raw_data_norm(data, t0, opts.T_end, opts.samples);
        st.initial_verdict = check_hypotheses(st.initial_constants, HypothesisMode::Global);
        const auto& k = st.initial_constants;
        st.min_step_certificate = k.g(k.gamma * k.R0);
        if (!opts.unsafe && !st.initial_verdict.passed) {
            throw MarchError("global hypotheses fail", 0, describe(st.initial_verdict));
        }
    }

    ProblemData cur = data;
    double S = t0;
    std::size_t n = 0;
    while (S < opts.T_end - eps) {
        const double remaining = opts.T_end - S;
        const double window = std::min(1.0, remaining);
        const double q = shifted_norm_bound(cur, params, {S, S + window}, opts.samples).q;
        const auto probe = make_constants(params.c, params.S, params.sigma, window, opts.R0, q);
        // g(q) <= 0 only happens past the hypotheses (unsafe runs); the step law
        // then gives no length and the unit step applies.
        const bool law_applies = probe.g_q > 0.0;
        const double step = law_applies ? std::min({probe.g_q, 1.0, remaining}) : std::min(1.0, remaining);
        const bool capped = law_applies && step < probe.g_q;
        const double S_next = step == remaining ? opts.T_end : S + step;
        const TimeSlab slab{S, S_next};
        const auto k = make_constants(params.c, params.S, params.sigma, slab.length(), opts.R0, q);

        if (!opts.unsafe) {
            const auto v = check_hypotheses(k, HypothesisMode::BoundedSlab);
            std::string why = describe(v);
            if (!(q < k.gamma * k.R0)) {
                std::ostringstream os;
                os << "q " << q << " >= gamma R0 " << k.gamma * k.R0 << "; ";
                why += os.str();
            }
            if (!why.empty()) throw MarchError("slab hypotheses fail", n, why);
        }

        PicardOptions po = opts.picard;
        if (!po.tol_fix) po.tol_fix = 1e-10 * (1.0 + q);
        const SlabGrid grid(slab, cur.domain, opts.nt, opts.nx, opts.ny);
        SlabSolution sol = [&] {
            try {
                return picard_solve(params, cur, transport_solution(params, cur, grid), *po.tol_fix, po);
            } catch (const Error& e) {
                throw MarchError("slab solve failed", n, e.what());
            }
        }();

        SlabRecord rec;
        rec.n = n;
        rec.S_begin = S;
        rec.S_end = S_next;
        rec.q = q;
        rec.g_q = probe.g_q;
        rec.capped = capped;
        rec.iterations = sol.iterations;
        rec.final_delta = sol.final_delta;
        rec.n_script = sol.norm ? sol.norm->n_script : sol.field.sup_norm();
        if (law_applies && !capped) {
            rec.step_law_residual =
                std::abs(q - k.mu * k.f_R0 / (k.mu + k.lambda * k.sigma * k.R0 * probe.g_q));
        }
        if (!opts.unsafe && !(rec.n_script <= opts.R0)) {
            std::ostringstream os;
            os << "solution norm " << rec.n_script << " exceeds R0 " << opts.R0;
            throw MarchError("slab bound fails", n, os.str());
        }

        if (sink) sink(rec, sol);
        st.slabs.push_back(rec);
        st.q.push_back(q);
        st.S.push_back(S_next);

        if (S_next < opts.T_end - eps) {
            ProblemData next = restart_from_terminal_slice(cur, sol.field);
            // Every sample is a node of the restart table on both edge directions.
            const std::size_t samples = std::gcd(opts.nx - 1, opts.ny - 1) + 1;
            const auto bad = check_compatibility(next, default_compat_tolerance(next), samples);
            if (!bad.empty()) {
                std::ostringstream os;
                os << "restart incompatible on edge " << bad.front().edge << " (gap " << bad.front().gap << ")";
                throw MarchError("restart compatibility fails", n + 1, os.str());
            }
            cur = std::move(next);
        }
        S = S_next;
        ++n;
    }
    st.n = n;
    st.completed = true;
    return st;
}

}  // namespace broadwell
