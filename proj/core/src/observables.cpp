#include "loewner/observables.hpp"

#include <cmath>

namespace loewner {

ForwardObservables forward_observables(const SlitMapChain& chain, HalfPlanePoint z,
                                       double r, double lambda, double xi,
                                       double upsilon_stop) {
    ForwardObservables obs;
    Complex g = z.value();
    Complex deriv(1.0, 0.0);
    double t = 0.0;

    auto record = [&](std::size_t k) {
        Complex Z = g - chain.driving_value(k);
        double X = Z.real(), Y = Z.imag();
        double mod = std::abs(Z);
        double S = Y / mod;
        double Delta = std::abs(deriv);
        double Ups = Y / Delta;
        obs.times.push_back(t);
        obs.X.push_back(X);
        obs.Y.push_back(Y);
        obs.Theta.push_back(std::atan2(Y, X));
        obs.S.push_back(S);
        obs.Upsilon.push_back(Ups);
        obs.Delta.push_back(Delta);
        obs.M.push_back(std::pow(S, -r) * std::pow(Ups, xi + r) * std::pow(Delta, lambda + r));
        return Ups;
    };

    record(0);
    for (std::size_t k = 0; k < chain.size(); ++k) {
        const auto& st = chain.steps[k];
        Complex zeta = g - st.v;
        Complex root = upper_sqrt(zeta * zeta + 2.0 * chain.a * st.dt);
        deriv *= zeta / root;
        g = st.v + root;
        t += st.dt;
        double ups = record(k + 1);
        if (upsilon_stop > 0.0 && ups <= upsilon_stop) {
            obs.stopped_at = t;
            break;
        }
    }
    return obs;
}

} // namespace loewner
