#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "doctest.h"
#include "loewner/driving.hpp"

using namespace loewner;

TEST_CASE("sample_brownian basic shape and determinism") {
    auto p1 = sample_brownian(2.0, 1, 0.01, 42);
    CHECK(p1.values.size() == 2);
    CHECK(p1.values[0] == 0.0);

    auto a = sample_brownian(2.0, 1000, 1e-3, 42);
    auto b = sample_brownian(2.0, 1000, 1e-3, 42);
    CHECK(a.values == b.values);
    auto c = sample_brownian(2.0, 1000, 1e-3, 43);
    CHECK(a.values != c.values);
}

TEST_CASE("brownian increments have variance dt") {
    const std::size_t n = 100000;
    const double dt = 1e-3;
    auto p = sample_brownian(2.0, n, dt, 7);
    double s2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double inc = p.values[k + 1] - p.values[k];
        s2 += inc * inc;
    }
    double mean_sq = s2 / static_cast<double>(n);
    // chi-square concentration: relative sd of the mean square is sqrt(2/n)
    double tol = 3.0 * std::sqrt(2.0 / static_cast<double>(n)) * dt;
    CHECK(std::abs(mean_sq - dt) <= tol);
}

TEST_CASE("refine_dyadic keeps endpoints and bridge variance") {
    auto p = sample_brownian(2.0, 2000, 4e-3, 5);
    auto q = refine_dyadic(p, 0);
    CHECK(q.values == p.values);

    auto r = refine_dyadic(p, 1);
    CHECK(r.n_steps() == 2 * p.n_steps());
    CHECK(r.dt == doctest::Approx(p.dt / 2.0));
    for (std::size_t k = 0; k <= p.n_steps(); ++k)
        CHECK(r.values[2 * k] == doctest::Approx(p.values[k]));

    double s2 = 0.0;
    for (std::size_t k = 0; k < r.n_steps(); ++k) {
        double inc = r.values[k + 1] - r.values[k];
        s2 += inc * inc;
    }
    double mean_sq = s2 / static_cast<double>(r.n_steps());
    double tol = 3.0 * std::sqrt(2.0 / static_cast<double>(r.n_steps())) * r.dt;
    CHECK(std::abs(mean_sq - r.dt) <= tol);

    DriverParams dp;
    dp.value = 1.0;
    dp.n_steps = 4;
    dp.dt = 0.25;
    auto lin = deterministic_driver(DriverKind::Linear, dp);
    CHECK_THROWS_AS((void)refine_dyadic(lin, 1), std::invalid_argument);
}

TEST_CASE("modulus_delta closed forms") {
    DriverParams dp;
    dp.value = 0.0;
    dp.n_steps = 8;
    dp.dt = 0.25;
    auto flat = deterministic_driver(DriverKind::Constant, dp);
    CHECK(modulus_delta(flat, 0.0, 1.0).delta == doctest::Approx(2.0));

    dp.value = 1.0;
    auto lin = deterministic_driver(DriverKind::Linear, dp);
    CHECK(modulus_delta(lin, 0.0, 1.0).delta == doctest::Approx(std::sqrt(5.0)));

    CHECK_THROWS_AS((void)modulus_delta(lin, 0.0, 2.0), std::out_of_range);
}

TEST_CASE("deterministic drivers") {
    DriverParams dp;
    dp.value = 0.0;
    dp.n_steps = 4;
    dp.dt = 0.25;
    auto zero = deterministic_driver(DriverKind::Constant, dp);
    for (double v : zero.values) CHECK(v == 0.0);

    dp.value = 1.0;
    auto lin = deterministic_driver(DriverKind::Linear, dp);
    const double want[] = {0.0, 0.25, 0.5, 0.75, 1.0};
    for (std::size_t k = 0; k < 5; ++k) CHECK(lin.values[k] == doctest::Approx(want[k]));

    dp.value = 2.0;
    dp.frequency = 3.0;
    auto sin_path = deterministic_driver(DriverKind::Sine, dp);
    CHECK(sin_path.values[2] == doctest::Approx(2.0 * std::sin(1.5)));
}

TEST_CASE("path CSV roundtrip") {
    auto p = sample_brownian(8.0 / 3.0, 64, 2e-3, 99);
    const char* file = "test_path_roundtrip.csv";
    write_path_csv(p, file);
    auto q = read_path_csv(file);
    CHECK(q.kappa == doctest::Approx(p.kappa));
    CHECK(q.dt == doctest::Approx(p.dt));
    CHECK(q.seed == p.seed);
    CHECK(q.generator_id == p.generator_id);
    REQUIRE(q.values.size() == p.values.size());
    for (std::size_t k = 0; k < p.values.size(); ++k)
        CHECK(q.values[k] == doctest::Approx(p.values[k]).epsilon(1e-15));
    std::remove(file);
}
