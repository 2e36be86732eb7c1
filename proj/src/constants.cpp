#include "broadwell/constants.hpp"

#include <cmath>
#include <limits>

#include "broadwell/characteristics.hpp"
#include "broadwell/errors.hpp"

namespace broadwell {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

HypothesisCheck make_check(std::string name, double lhs, double rhs, bool strict) {
    HypothesisCheck h;
    h.name = std::move(name);
    h.lhs = lhs;
    h.rhs = rhs;
    h.strict = strict;
    h.passed = strict ? lhs < rhs : lhs <= rhs;
    if (std::isnan(lhs) || std::isnan(rhs)) {
        h.passed = false;
        h.margin = -kInf;
    } else if (lhs == 0.0) {
        h.margin = kInf;
    } else {
        h.margin = rhs / lhs - 1.0;
    }
    return h;
}

}  // namespace

double TheoremConstants::g(double q_value) const {
    if (q_value <= 0.0) return kInf;
    const double inner = 1.0 / (4.0 * q_value * (1.0 + delta * sigma * R0) * (sigma + c * S)) - mu;
    return inner / (lambda * sigma * R0);
}

TheoremConstants make_constants(double c, double S, double sigma, double slab_length, double R0, double q) {
    TheoremConstants k;
    k.c = c;
    k.S = S;
    k.sigma = sigma;
    k.slab_length = slab_length;
    k.R0 = R0;
    k.mu = 8.0 + 4.0 / c + 8.0 * c;
    k.lambda = 16.0 + 16.0 * c;
    k.delta = 4.0 / c + 8.0 + 4.0 * c;
    k.gamma = 1.0 + c + 1.0 / c;
    k.q = q;
    k.q_sigma = q * (1.0 + k.delta * sigma * R0);
    k.p = c * S * (8.0 + 4.0 / c + (8.0 + 8.0 * c) * slab_length);
    k.p_sigma = (k.mu + k.lambda * sigma * R0 * slab_length) * (sigma + c * S);
    k.f_R0 = 1.0 / (4.0 * k.mu * (1.0 + k.delta * sigma * R0) * (sigma + c * S));
    k.g_q = k.g(q);
    k.unbounded_step = q <= 0.0;
    k.R0_cap = theorem_R0_cap(c, S, sigma);
    return k;
}

double theorem_R0_cap(double c, double S, double sigma) {
    const double mu = 8.0 + 4.0 / c + 8.0 * c;
    const double delta = 4.0 / c + 8.0 + 4.0 * c;
    const double gamma = 1.0 + c + 1.0 / c;
    const double x = delta * sigma / (mu * (sigma + c * S) * gamma);
    // -1 + sqrt(1 + x) without cancellation
    return (x / (1.0 + std::sqrt(1.0 + x))) / (2.0 * delta * sigma);
}

TheoremConstants compute_constants(const ModelParams& params, const TimeSlab& slab, const ProblemData& data,
                                   double R0, std::size_t samples) {
    params.validate_relaxed();
    slab.validate();
    if (slab.length() > 1.0 + 1e-12) throw PreconditionError("theorem constants assume tau' - tau <= 1");
    if (!(R0 > 0.0)) throw PreconditionError("R0 must be > 0");
    const auto report = shifted_norm_bound(data, params, slab, samples);
    return make_constants(params.c, params.S, params.sigma, slab.length(), R0, report.q);
}

HypothesisVerdict check_hypotheses(const TheoremConstants& k, HypothesisMode mode) {
    HypothesisVerdict v;
    v.mode = mode;
    const bool global = mode == HypothesisMode::Global;

    v.checks.push_back(make_check("q <= f(R0)", k.q, k.f_R0, global));
    v.checks.push_back(make_check("slab length <= 1", k.slab_length, 1.0, false));
    v.checks.push_back(make_check("slab length <= g(q)", k.slab_length, k.g_q, false));

    v.p_sigma_q_sigma = k.p_sigma * k.q_sigma;
    v.checks.push_back(make_check("p_sigma q_sigma <= 1/4", v.p_sigma_q_sigma, 0.25, false));
    if (v.p_sigma_q_sigma <= 0.25) {
        const double root = std::sqrt(1.0 - 4.0 * v.p_sigma_q_sigma);
        v.r_lo = 2.0 * k.q_sigma / (1.0 + root);
        v.r_plus = (1.0 + root) / (2.0 * k.p_sigma);
        v.r_hi = std::min(k.R0, v.r_plus);
    } else {
        v.r_lo = v.r_hi = v.r_plus = std::numeric_limits<double>::quiet_NaN();
    }
    v.checks.push_back(make_check("admissible R interval non-empty", v.r_lo, v.r_hi, false));

    if (global) {
        v.checks.push_back(make_check("R0 < global cap", k.R0, k.R0_cap, true));
        if (k.raw_data_norm >= 0.0) {
            v.checks.push_back(make_check("raw data norm <= R0", k.raw_data_norm, k.R0, false));
        }
    }
    v.passed = true;
    for (const auto& c : v.checks) v.passed = v.passed && c.passed;
    return v;
}

const HypothesisCheck* HypothesisVerdict::find(const std::string& name) const {
    for (const auto& c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

const char* to_string(HypothesisMode mode) {
    return mode == HypothesisMode::Global ? "global" : "bounded-slab";
}

}  // namespace broadwell
