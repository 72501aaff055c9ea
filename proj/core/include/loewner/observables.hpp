#pragma once

#include <optional>
#include <vector>

#include "loewner/flow.hpp"

namespace loewner {

// Time series along the forward flow from a fixed z:
//   Z_t = g_t(z) - V_t = X_t + i Y_t,  Theta_t = arg Z_t,  S_t = sin Theta_t,
//   Delta_t = |g_t'(z)|,  Upsilon_t = Y_t / Delta_t,
//   M_t = S_t^{-r} Upsilon_t^{xi+r} Delta_t^{lambda+r}.
struct ForwardObservables {
    std::vector<double> times;
    std::vector<double> X, Y, Theta, S, Upsilon, Delta, M;
    std::optional<double> stopped_at; // time of Upsilon-threshold crossing
};

// Records one entry per step boundary (including t = 0); stops early when
// Upsilon falls to upsilon_stop (pass 0 to disable stopping).
ForwardObservables forward_observables(const SlitMapChain& chain, HalfPlanePoint z,
                                       double r, double lambda, double xi,
                                       double upsilon_stop = 0.0);

} // namespace loewner
