#include <cmath>

#include "doctest.h"
#include "loewner/estimators.hpp"
#include "loewner/spectra.hpp"

using namespace loewner;
using namespace loewner::mc;

TEST_CASE("moment estimator: lambda = 0 and determinism") {
    std::vector<double> grid = {2.0, 4.0, 8.0};
    auto est = estimate_moment(2.0, 0.0, grid, 50, 123);
    for (double m : est.mean) CHECK(m == doctest::Approx(1.0));
    CHECK(est.fitted_slope == doctest::Approx(0.0).epsilon(1e-12));

    auto a = estimate_moment(2.0, 1.0, grid, 100, 7, 1);
    auto b = estimate_moment(2.0, 1.0, grid, 100, 7, 2);
    CHECK(a.fitted_slope == b.fitted_slope); // worker-count independent
    CHECK(a.mean == b.mean);
}

TEST_CASE("count scaling: bounds, multi consistency, beta_hash slope") {
    auto p = spectra::SpectrumParams::for_kappa(2.0);
    std::vector<int> grid = {3, 4, 5};
    auto single = estimate_count_scaling(2.0, p.beta_hash, grid, 10, 42);
    auto multi = estimate_count_scaling_multi(2.0, {0.0, p.beta_hash}, grid, 10, 42);
    REQUIRE(multi.size() == 2);
    CHECK(multi[1].fitted_slope == single.fitted_slope);
    for (const auto& st : single.stats) {
        double total = std::ldexp(1.0, 2 * st.n) + 1.0;
        CHECK(st.mean_count >= 0.0);
        CHECK(st.mean_count <= total);
    }
    // rho(beta_hash) = 0, so E[N] ~ 2^{2n}
    CHECK(std::abs(single.fitted_slope - 2.0) <= 0.8);
}

TEST_CASE("reverse martingale: r = 0 statistic is identically 1") {
    auto rep = reverse_martingale_test(2.0, 0.0, {0.5, 1.0, 2.0}, 1.0, 50, 5);
    for (double m : rep.mean) CHECK(m == doctest::Approx(1.0));
    CHECK(rep.initial_value == doctest::Approx(1.0));
    CHECK(rep.max_dev_sigma == 0.0);
}

TEST_CASE("forward martingale: initial value at z = i") {
    auto rep = forward_martingale_test(2.0, 0.6, Complex(0.0, 1.0), {0.25, 0.5}, 200, 17);
    CHECK(rep.initial_value == doctest::Approx(1.0));
    CHECK(rep.n_samples == 200);
    CHECK(rep.stopped_fraction >= 0.0);
    CHECK(rep.stopped_fraction <= 1.0);
}

TEST_CASE("flat-boundary harmonic measure is 2 eps / pi") {
    DriverParams dp;
    dp.n_steps = 400;
    dp.dt = 1e-4;
    auto chain = chain_from_path(deterministic_driver(DriverKind::Constant, dp), 1.0);
    double h = std::sqrt(2.0 * chain.total_time());
    auto est = estimate_tip_harmonic_measure(chain, chain.size(), {4.0 * h, 8.0 * h}, 2048);
    for (std::size_t j = 0; j < est.mu.size(); ++j)
        CHECK(est.mu[j] ==
              doctest::Approx(2.0 * est.eps_grid[j] / 3.14159265358979).epsilon(0.05));
}

TEST_CASE("beta histogram mode sits near beta_hash") {
    auto p = spectra::SpectrumParams::for_kappa(2.0);
    auto h = beta_histogram(2.0, 8.0, 1500, 31, 41);
    std::size_t mode = 0;
    for (std::size_t j = 1; j < h.count.size(); ++j)
        if (h.count[j] > h.count[mode]) mode = j;
    double center = 0.5 * (h.bin_left[mode] + h.bin_right[mode]);
    CHECK(std::abs(center - p.beta_hash) <= 0.5);
    long total = 0;
    for (long c : h.count) total += c;
    CHECK(total <= h.n_samples);
    CHECK(total >= h.n_samples * 9 / 10); // rare excursions past the bin range
}

TEST_CASE("radial SDE stays in (0, pi) and is symmetric") {
    auto rep = radial_theta_simulate(2.0, 0.6, 1.5707963267948966, 2.0, 2000, 11);
    CHECK(rep.drift == doctest::Approx(3.0));
    CHECK(rep.exits == 0);
    CHECK(std::abs(rep.mean_theta - 1.5707963267948966) <= 0.05);
    CHECK(rep.p_value > 1e-3);
}
