#include <cmath>

#include "doctest.h"
#include "loewner/observables.hpp"
#include "loewner/rng.hpp"
#include "loewner/spectra.hpp"

using namespace loewner;

TEST_CASE("initial record") {
    SlitMapChain chain;
    chain.a = 1.0;
    chain.steps = {{1e-3, 0.0}};
    double r = -4.0, lambda = 6.0, xi = 4.0;
    auto obs = forward_observables(chain, HalfPlanePoint(0.0, 2.0), r, lambda, xi);
    CHECK(obs.Upsilon[0] == doctest::Approx(2.0));
    CHECK(obs.Delta[0] == doctest::Approx(1.0));
    CHECK(obs.M[0] == doctest::Approx(std::pow(1.0, -r) * std::pow(2.0, xi + r)));
}

TEST_CASE("constant driving keeps z = i on the imaginary axis") {
    DriverParams dp;
    dp.n_steps = 300;
    dp.dt = 1e-3;
    auto chain = chain_from_path(deterministic_driver(DriverKind::Constant, dp), 1.0);
    auto obs = forward_observables(chain, HalfPlanePoint(0.0, 1.0), -4.0, 6.0, 4.0);
    for (std::size_t k = 0; k < obs.X.size(); ++k) {
        CHECK(std::abs(obs.X[k]) <= 1e-12);
        CHECK(obs.Theta[k] == doctest::Approx(1.5707963267948966));
        CHECK(obs.S[k] == doctest::Approx(1.0));
    }
}

TEST_CASE("Upsilon is nonincreasing and stopping works") {
    auto fe = spectra::forward_exponents(2.0, 0.6);
    for (int c = 0; c < 5; ++c) {
        auto chain =
            chain_from_path(sample_brownian(2.0, 2000, 1e-3, derive_seed(555, c)));
        auto obs = forward_observables(chain, HalfPlanePoint(0.0, 1.0), fe.r, fe.lambda,
                                       fe.xi, 0.7);
        for (std::size_t k = 1; k < obs.Upsilon.size(); ++k)
            CHECK(obs.Upsilon[k] <= obs.Upsilon[k - 1] * (1.0 + 1e-12));
        if (obs.stopped_at) CHECK(obs.Upsilon.back() <= 0.7);
    }
}

TEST_CASE("Koebe sandwich against the computed trace") {
    auto chain = chain_from_path(sample_brownian(2.0, 1500, 1e-3, 808));
    auto trace = compute_trace(chain);
    HalfPlanePoint z(0.15, 0.4);
    auto obs = forward_observables(chain, z, 0.0, 0.0, 0.0);
    double ups = obs.Upsilon.back();
    double dist = z.im; // distance to the real axis
    for (const auto& p : trace)
        dist = std::min(dist, std::abs(z.value() - p));
    CHECK(dist >= ups / 2.0 * 0.95);
    CHECK(dist <= 2.0 * ups * 1.05);
}
