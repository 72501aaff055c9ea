#pragma once

#include <optional>
#include <vector>

#include "loewner/driving.hpp"
#include "loewner/slit_map.hpp"

namespace loewner {

struct HalfPlanePoint {
    double re;
    double im;
    HalfPlanePoint(double re_, double im_);
    Complex value() const { return Complex(re, im); }
};

struct DrivingStep {
    double dt;
    double v;
};

// Sequence of elementary slit maps realizing the discrete Loewner chain.
// Step k holds the driving at the value attained at the right endpoint of
// the step, so driving_value(k) below is V at the k-th step boundary.
struct SlitMapChain {
    double a = 1.0;
    std::vector<DrivingStep> steps;

    std::size_t size() const { return steps.size(); }
    double total_time() const;
    double time_at(std::size_t k) const;          // boundary time of step k
    double driving_value(std::size_t k) const;    // V at boundary k (V_0 = 0)
};

// Chain from a driving path with capacity speed a = 2/kappa.
SlitMapChain chain_from_path(const DrivingPath& path);
SlitMapChain chain_from_path(const DrivingPath& path, double a);

struct FlowResult {
    Complex value{};
    Complex deriv{1.0, 0.0};
    bool survived = true;
    std::optional<double> exit_time;
};

// Swallowing floor for Im g_t(z) along the forward flow.
inline constexpr double kDefaultImFloor = 1e-14;

// g_t(z) with the accumulated derivative, composing the first t_steps
// elementary maps (all of them by default).
FlowResult forward_flow(const SlitMapChain& chain, HalfPlanePoint z,
                        double im_floor = kDefaultImFloor);
FlowResult forward_flow_prefix(const SlitMapChain& chain, std::size_t t_steps,
                               Complex z, double im_floor = kDefaultImFloor);

// f_t(w) = g_t^{-1}(w): per-step inverses in reverse order, with the
// reciprocal-chain derivative.
FlowResult inverse_map(const SlitMapChain& chain, HalfPlanePoint w);
FlowResult inverse_map_prefix(const SlitMapChain& chain, std::size_t t_steps, Complex w);

// Complex derivative of the shifted inverse f_hat_t(z) = f_t(z + V_t).
Complex shifted_inverse_map(const SlitMapChain& chain, std::size_t t_steps, Complex z);
Complex shifted_inverse_deriv_c(const SlitMapChain& chain, std::size_t t_steps, Complex z);

// |f_hat_t'(iy)| using the first t_steps steps.
double shifted_inverse_deriv(const SlitMapChain& chain, double y, std::size_t t_steps);

// Tip profile: |f_hat_t'(iy)| on a descending y grid together with the
// cumulative arc length v_t(y) = int_0^y |f_hat_t'(iu)| du.
struct TipProfile {
    std::vector<double> y_grid;     // descending, in (0,1]
    std::vector<double> deriv_mod;  // |f_hat_t'(iy)|
    std::vector<double> v_cum;      // v_t(y)
};

TipProfile tip_profile(const SlitMapChain& chain, std::size_t t_steps,
                       const std::vector<double>& y_grid);

// Dyadic-sum comparison quantity sum_{j>=n} 2^{-j} |f_hat_t'(i 2^{-j})|,
// truncated at scale 2^{-j_max}.
double dyadic_deriv_sum(const SlitMapChain& chain, std::size_t t_steps, int n, int j_max);

// gamma(t) ~= f_hat_t(i y_min).
Complex trace_point(const SlitMapChain& chain, std::size_t t_steps, double y_min);
double default_trace_ymin(const SlitMapChain& chain);

// Full trace at every step boundary.
std::vector<Complex> compute_trace(const SlitMapChain& chain, double y_min = 0.0);

// Reverse flow started from the time-reversed driving U_{t,T} = V_{T-t} - V_T.
// Returns h_{T,T}(z), which equals f_hat_T(z) - V_T exactly at the
// discretized level.  T is given as a number of steps of the path.
FlowResult reverse_flow_tip(const DrivingPath& path, std::size_t t_steps, Complex z,
                            double a);

// Same reverse flow, but once Im Z has grown enough the driving is
// consumed with a dyadically increasing stride (held constant over 2^s fine
// steps whenever (Im Z)^2 >= coarsen_ratio * 2^s * dt).  Returns |h'| only.
double reverse_flow_tip_deriv_coarse(const DrivingPath& path, std::size_t t_steps,
                                     Complex z, double a, double coarsen_ratio = 10.0);

} // namespace loewner
