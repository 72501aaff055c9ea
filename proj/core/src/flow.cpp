#include "loewner/flow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace loewner {

HalfPlanePoint::HalfPlanePoint(double re_, double im_) : re(re_), im(im_) {
    if (!(im > 0.0)) throw std::invalid_argument("HalfPlanePoint: im must be positive");
}

double SlitMapChain::total_time() const {
    double t = 0.0;
    for (const auto& s : steps) t += s.dt;
    return t;
}

double SlitMapChain::time_at(std::size_t k) const {
    double t = 0.0;
    for (std::size_t i = 0; i < k && i < steps.size(); ++i) t += steps[i].dt;
    return t;
}

double SlitMapChain::driving_value(std::size_t k) const {
    if (k == 0) return 0.0;
    return steps[std::min(k, steps.size()) - 1].v;
}

SlitMapChain chain_from_path(const DrivingPath& path) {
    if (!(path.kappa > 0.0))
        throw std::invalid_argument("chain_from_path: path has no kappa; pass a explicitly");
    return chain_from_path(path, 2.0 / path.kappa);
}

SlitMapChain chain_from_path(const DrivingPath& path, double a) {
    if (!(a > 0.0)) throw std::invalid_argument("chain_from_path: a must be positive");
    SlitMapChain chain;
    chain.a = a;
    chain.steps.reserve(path.n_steps());
    // Right-endpoint sampling: step k holds V at boundary k.  This makes the
    // time-reversed driving U_{t,T} = V_{T-t} - V_T start at exactly 0, so
    // forward and reverse chains are products of the same elementary maps.
    for (std::size_t k = 0; k < path.n_steps(); ++k)
        chain.steps.push_back({path.dt, path.values[k + 1]});
    return chain;
}

FlowResult forward_flow_prefix(const SlitMapChain& chain, std::size_t t_steps, Complex z,
                               double im_floor) {
    if (t_steps > chain.size())
        throw std::out_of_range("forward_flow: t_steps exceeds chain length");
    FlowResult res;
    res.value = z;
    res.deriv = Complex(1.0, 0.0);
    double t = 0.0;
    for (std::size_t k = 0; k < t_steps; ++k) {
        const auto& st = chain.steps[k];
        Complex zeta = res.value - st.v;
        Complex root = upper_sqrt(zeta * zeta + 2.0 * chain.a * st.dt);
        if (root.imag() < im_floor) {
            res.survived = false;
            res.exit_time = t;
            return res;
        }
        res.deriv *= zeta / root;
        res.value = st.v + root;
        t += st.dt;
    }
    return res;
}

FlowResult forward_flow(const SlitMapChain& chain, HalfPlanePoint z, double im_floor) {
    if (chain.steps.empty()) throw std::invalid_argument("forward_flow: empty chain");
    return forward_flow_prefix(chain, chain.size(), z.value(), im_floor);
}

FlowResult inverse_map_prefix(const SlitMapChain& chain, std::size_t t_steps, Complex w) {
    if (t_steps > chain.size())
        throw std::out_of_range("inverse_map: t_steps exceeds chain length");
    FlowResult res;
    res.value = w;
    res.deriv = Complex(1.0, 0.0);
    for (std::size_t k = t_steps; k-- > 0;) {
        const auto& st = chain.steps[k];
        Complex zeta = res.value - st.v;
        Complex root = upper_sqrt(zeta * zeta - 2.0 * chain.a * st.dt);
        res.deriv *= zeta / root;
        res.value = st.v + root;
    }
    return res;
}

FlowResult inverse_map(const SlitMapChain& chain, HalfPlanePoint w) {
    if (chain.steps.empty()) throw std::invalid_argument("inverse_map: empty chain");
    return inverse_map_prefix(chain, chain.size(), w.value());
}

Complex shifted_inverse_map(const SlitMapChain& chain, std::size_t t_steps, Complex z) {
    return inverse_map_prefix(chain, t_steps, z + chain.driving_value(t_steps)).value;
}

Complex shifted_inverse_deriv_c(const SlitMapChain& chain, std::size_t t_steps, Complex z) {
    return inverse_map_prefix(chain, t_steps, z + chain.driving_value(t_steps)).deriv;
}

double shifted_inverse_deriv(const SlitMapChain& chain, double y, std::size_t t_steps) {
    if (!(y > 0.0)) throw std::invalid_argument("shifted_inverse_deriv: y must be positive");
    if (t_steps == 0) return 1.0;
    return std::abs(shifted_inverse_deriv_c(chain, t_steps, Complex(0.0, y)));
}

double dyadic_deriv_sum(const SlitMapChain& chain, std::size_t t_steps, int n, int j_max) {
    double sum = 0.0;
    for (int j = n; j <= j_max; ++j) {
        double y = std::ldexp(1.0, -j);
        sum += y * shifted_inverse_deriv(chain, y, t_steps);
    }
    return sum;
}

TipProfile tip_profile(const SlitMapChain& chain, std::size_t t_steps,
                       const std::vector<double>& y_grid) {
    if (y_grid.empty()) throw std::invalid_argument("tip_profile: empty y grid");
    for (std::size_t k = 0; k < y_grid.size(); ++k) {
        if (!(y_grid[k] > 0.0 && y_grid[k] <= 1.0))
            throw std::invalid_argument("tip_profile: y grid values must lie in (0,1]");
        if (k > 0 && !(y_grid[k] < y_grid[k - 1]))
            throw std::invalid_argument("tip_profile: y grid must be strictly descending");
    }
    TipProfile prof;
    prof.y_grid = y_grid;
    prof.deriv_mod.resize(y_grid.size());
    for (std::size_t k = 0; k < y_grid.size(); ++k)
        prof.deriv_mod[k] = shifted_inverse_deriv(chain, y_grid[k], t_steps);

    // v_t(y) by composite trapezoid on a dyadic refinement.  The integral
    // below the smallest grid point is accumulated over halved scales down
    // to a floor; |f_hat'| is bounded there so the dropped tail is O(floor).
    auto integrand = [&](double y) { return shifted_inverse_deriv(chain, y, t_steps); };
    const int refine = 8;
    double y_small = y_grid.back();
    double tail = 0.0;
    {
        double hi = y_small;
        for (int lvl = 0; lvl < 10; ++lvl) {
            double lo = hi / 2.0;
            double mid = 0.5 * (lo + hi);
            tail += (hi - lo) / 6.0 * (integrand(lo) + 4.0 * integrand(mid) + integrand(hi));
            hi = lo;
        }
        tail += hi * integrand(hi); // remaining [0, hi] sliver
    }
    prof.v_cum.resize(y_grid.size());
    prof.v_cum[y_grid.size() - 1] = tail;
    for (std::size_t k = y_grid.size() - 1; k-- > 0;) {
        double lo = y_grid[k + 1], hi = y_grid[k];
        double h = (hi - lo) / refine;
        double acc = 0.5 * (integrand(lo) + integrand(hi));
        for (int j = 1; j < refine; ++j) acc += integrand(lo + h * j);
        prof.v_cum[k] = prof.v_cum[k + 1] + acc * h;
    }
    return prof;
}

double default_trace_ymin(const SlitMapChain& chain) {
    double dt = chain.steps.empty() ? 1.0 : chain.steps.front().dt;
    return std::sqrt(dt) / 8.0;
}

Complex trace_point(const SlitMapChain& chain, std::size_t t_steps, double y_min) {
    if (!(y_min > 0.0)) throw std::invalid_argument("trace_point: y_min must be positive");
    return shifted_inverse_map(chain, t_steps, Complex(0.0, y_min));
}

std::vector<Complex> compute_trace(const SlitMapChain& chain, double y_min) {
    if (y_min <= 0.0) y_min = default_trace_ymin(chain);
    std::vector<Complex> pts(chain.size() + 1);
    for (std::size_t k = 0; k <= chain.size(); ++k)
        pts[k] = trace_point(chain, k, y_min);
    return pts;
}

FlowResult reverse_flow_tip(const DrivingPath& path, std::size_t t_steps, Complex z,
                            double a) {
    if (t_steps > path.n_steps())
        throw std::out_of_range("reverse_flow_tip: t_steps exceeds path length");
    if (!(z.imag() > 0.0))
        throw std::invalid_argument("reverse_flow_tip: z must be in the open half plane");
    // Reverse-time driving U_{t,T} = V_{T-t} - V_T, held constant on each
    // step at its left endpoint; with right-endpoint forward chains this is
    // the same product of elementary maps in the opposite construction order.
    const double vT = path.values[t_steps];
    FlowResult res;
    res.value = z;
    res.deriv = Complex(1.0, 0.0);
    for (std::size_t j = 0; j < t_steps; ++j) {
        double u = path.values[t_steps - j] - vT;
        Complex zeta = res.value - u;
        Complex root = upper_sqrt(zeta * zeta - 2.0 * a * path.dt);
        res.deriv *= zeta / root;
        res.value = u + root;
    }
    return res;
}

double reverse_flow_tip_deriv_coarse(const DrivingPath& path, std::size_t t_steps,
                                     Complex z, double a, double coarsen_ratio) {
    if (t_steps > path.n_steps())
        throw std::out_of_range("reverse_flow_tip_deriv_coarse: t_steps exceeds path length");
    const double vT = path.values[t_steps];
    Complex h = z;
    double dmod = 1.0;
    std::size_t j = 0;
    std::size_t stride = 1;
    while (j < t_steps) {
        // Im Z only grows along the reverse flow, so the admissible stride
        // (Im Z)^2 >= coarsen_ratio * stride * dt is monotone in time.
        double y2 = h.imag() * h.imag();
        while (2 * stride <= t_steps - j &&
               y2 >= coarsen_ratio * static_cast<double>(2 * stride) * path.dt)
            stride *= 2;
        std::size_t m = std::min(stride, t_steps - j);
        double u = path.values[t_steps - j] - vT;
        Complex zeta = h - u;
        Complex root = upper_sqrt(zeta * zeta - 2.0 * a * path.dt * static_cast<double>(m));
        dmod *= std::abs(zeta / root);
        h = u + root;
        j += m;
    }
    return dmod;
}

} // namespace loewner
