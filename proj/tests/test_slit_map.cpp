#include <cmath>

#include "doctest.h"
#include "loewner/rng.hpp"
#include "loewner/slit_map.hpp"

using namespace loewner;

namespace {

// Independent oracle: RK4 integration of dz/dt = a/(z - v) with constant
// driving, the ODE whose exact solution slit_forward implements.
Complex ode_forward(Complex z, double v, double a, double dt, int n_sub) {
    double h = dt / n_sub;
    auto f = [&](Complex w) { return a / (w - v); };
    for (int i = 0; i < n_sub; ++i) {
        Complex k1 = f(z);
        Complex k2 = f(z + 0.5 * h * k1);
        Complex k3 = f(z + 0.5 * h * k2);
        Complex k4 = f(z + h * k3);
        z += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return z;
}

} // namespace

TEST_CASE("upper_sqrt picks the nonnegative-imaginary branch") {
    CounterRng rng(11);
    for (int i = 0; i < 1000; ++i) {
        Complex w(-5.0 + 10.0 * rng.uniform(), -5.0 + 10.0 * rng.uniform());
        Complex s = upper_sqrt(w);
        CHECK(s.imag() >= 0.0);
        CHECK(std::abs(s * s - w) <= 1e-12 * std::max(1.0, std::abs(w)));
    }
    CHECK(upper_sqrt(Complex(-4.0, 0.0)).imag() == doctest::Approx(2.0));
}

TEST_CASE("slit_forward closed-form values") {
    // (2i)^2 + 1 = -3
    Complex g = slit_forward(Complex(0.0, 2.0), 0.0, 1.0, 0.5);
    CHECK(g.real() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(g.imag() == doctest::Approx(std::sqrt(3.0)));

    // zero capacity is the identity
    Complex id = slit_forward(Complex(0.0, 1.0), 0.0, 1.0, 1e-15);
    CHECK(std::abs(id - Complex(0.0, 1.0)) < 1e-7);

    // generic interior point against the ODE oracle
    Complex z(1.0, 1.0);
    Complex exact = slit_forward(z, 0.0, 1.0, 0.5);
    Complex ode = ode_forward(z, 0.0, 1.0, 0.5, 20000);
    CHECK(std::abs(exact - ode) <= 1e-8);
}

TEST_CASE("slit_forward_deriv values and finite differences") {
    double d = std::abs(slit_forward_deriv(Complex(0.0, 2.0), 0.0, 1.0, 0.5));
    CHECK(d == doctest::Approx(2.0 / std::sqrt(3.0)));
    CHECK(std::abs(slit_forward_deriv(Complex(0.0, 1.0), 0.0, 1.0, 1e-15) -
                   Complex(1.0, 0.0)) < 1e-7);

    Complex z(1.0, 1.0);
    const double h = 1e-6;
    Complex fd = (slit_forward(z + h, 0.0, 1.0, 0.5) - slit_forward(z - h, 0.0, 1.0, 0.5)) /
                 (2.0 * h);
    CHECK(std::abs(fd - slit_forward_deriv(z, 0.0, 1.0, 0.5)) <= 1e-5);
}

TEST_CASE("slit_reverse inverts slit_forward") {
    Complex z = slit_reverse(Complex(0.0, std::sqrt(3.0)), 0.0, 1.0, 0.5);
    CHECK(std::abs(z - Complex(0.0, 2.0)) < 1e-14);

    Complex w = slit_forward(slit_reverse(Complex(0.0, 1.0), 1.0, 1.0, 0.3), 1.0, 1.0, 0.3);
    CHECK(std::abs(w - Complex(0.0, 1.0)) <= 1e-12);

    CounterRng rng(7);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        Complex zr(-3.0 + 6.0 * rng.uniform(), 1e-3 + 3.0 * rng.uniform());
        double v = -2.0 + 4.0 * rng.uniform();
        double a = 0.25 + 3.75 * rng.uniform();
        double dt = 1e-5 + 0.1 * rng.uniform();
        Complex back = slit_reverse(slit_forward(zr, v, a, dt), v, a, dt);
        worst = std::max(worst, std::abs(back - zr) / std::abs(zr));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("boundary points keep their side; swallowed boundary points throw") {
    Complex right = slit_forward(Complex(2.0, 0.0), 0.0, 1.0, 0.5);
    Complex left = slit_forward(Complex(-2.0, 0.0), 0.0, 1.0, 0.5);
    CHECK(right.real() > 0.0);
    CHECK(left.real() < 0.0);
    CHECK(right.real() == doctest::Approx(-left.real()));
    CHECK_THROWS_AS((void)slit_forward(Complex(0.1, 0.0), 0.0, 1.0, 0.5),
                    std::domain_error);
}
