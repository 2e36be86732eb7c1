#pragma once

#include <filesystem>
#include <string>

#include "broadwell/data.hpp"
#include "broadwell/grid.hpp"

namespace testing_support {

using namespace broadwell;

inline RectDomain unit_square() { return {0.0, 1.0, 0.0, 1.0}; }

/// Inflow datum carrying `initial` in through its face at speed c.
inline DataFunction continued(const DataFunction& initial, std::size_t i, const RectDomain& d, double tau,
                              double c) {
    switch (i) {
        case 0: return DataFunction::composed(initial, {-c, 0.0, d.a1 + c * tau, 0.0, 1.0, 0.0});
        case 1: return DataFunction::composed(initial, {0.0, 1.0, 0.0, -c, 0.0, d.a2 + c * tau});
        case 2: return DataFunction::composed(initial, {0.0, 1.0, 0.0, c, 0.0, d.b2 - c * tau});
        default: return DataFunction::composed(initial, {c, 0.0, d.b1 - c * tau, 0.0, 1.0, 0.0});
    }
}

/// Gaussian bumps on a background, inflow continuing the initial profile.
inline ProblemData bump_data(double base = 4e-4, double amp = 2e-4, double c = 1.0, double tau = 0.0,
                             RectDomain d = unit_square()) {
    ProblemData p;
    p.domain = d;
    p.tau = tau;
    p.inflow_origin = tau;
    const double cx[4] = {0.35, 0.5, 0.5, 0.65};
    const double cy[4] = {0.5, 0.35, 0.65, 0.5};
    const double scale[4] = {1.0, 1.0, 0.5, 0.75};
    for (std::size_t i = 0; i < 4; ++i) {
        p.initial[i] = DataFunction(GaussianPreset{base, amp * scale[i], cx[i], cy[i], 0.25});
        p.inflow[i] = continued(p.initial[i], i, d, tau, c);
    }
    return p;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("broadwell_tests_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace testing_support
