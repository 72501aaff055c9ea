#include <cmath>

#include "doctest.h"
#include "loewner/flow.hpp"
#include "loewner/rng.hpp"

using namespace loewner;

namespace {

SlitMapChain brownian_chain(double kappa, std::size_t n, double dt, std::uint64_t seed) {
    return chain_from_path(sample_brownian(kappa, n, dt, seed));
}

SlitMapChain slit_chain(std::size_t n, double dt, double a) {
    DriverParams dp;
    dp.n_steps = n;
    dp.dt = dt;
    return chain_from_path(deterministic_driver(DriverKind::Constant, dp), a);
}

} // namespace

TEST_CASE("forward_flow basics") {
    SlitMapChain tiny;
    tiny.a = 1.0;
    tiny.steps = {{1e-15, 0.0}};
    auto r = forward_flow(tiny, HalfPlanePoint(0.0, 1.0));
    CHECK(std::abs(r.value - Complex(0.0, 1.0)) < 1e-7);
    CHECK(std::abs(r.deriv - Complex(1.0, 0.0)) < 1e-7);

    // constant driving composes additively in capacity
    SlitMapChain two;
    two.a = 1.0;
    two.steps = {{0.5, 0.0}, {0.5, 0.0}};
    auto g2 = forward_flow(two, HalfPlanePoint(0.0, 2.0));
    Complex g1 = slit_forward(Complex(0.0, 2.0), 0.0, 1.0, 1.0);
    CHECK(std::abs(g2.value - g1) <= 1e-13);
}

TEST_CASE("hydrodynamic normalization at a far point") {
    auto chain = brownian_chain(2.0, 1000, 1e-3, 31);
    double at = chain.a * chain.total_time();
    Complex z(0.0, 100.0);
    auto g = forward_flow_prefix(chain, chain.size(), z);
    CHECK(std::abs(g.value - z - at / z) <= 1e-3);
}

TEST_CASE("inverse_map roundtrips") {
    Complex w = slit_forward(Complex(0.0, 2.0), 0.0, 1.0, 0.5);
    SlitMapChain one;
    one.a = 1.0;
    one.steps = {{0.5, 0.0}};
    CHECK(std::abs(inverse_map(one, HalfPlanePoint(w.real(), w.imag())).value -
                   Complex(0.0, 2.0)) < 1e-13);

    double worst = 0.0;
    for (int c = 0; c < 20; ++c) {
        auto chain = brownian_chain(8.0 / 3.0, 500, 1e-3, derive_seed(2024, c));
        for (Complex z : {Complex(0.0, 1.0), Complex(-1.0, 0.7)}) {
            auto g = forward_flow_prefix(chain, chain.size(), z);
            if (!g.survived) continue;
            auto f = inverse_map_prefix(chain, chain.size(), g.value);
            worst = std::max(worst, std::abs(f.value - z));
            worst = std::max(worst, std::abs(g.deriv * f.deriv - 1.0));
        }
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("shifted inverse derivative closed forms") {
    auto chain = brownian_chain(2.0, 100, 1e-3, 5);
    CHECK(shifted_inverse_deriv(chain, 0.7, 0) == doctest::Approx(1.0));

    // vertical slit: f_hat(z) = sqrt(z^2 - 2at), |f_hat'(i)| = 1/sqrt(3) at at = 1
    auto slit = slit_chain(1000, 1e-3, 1.0);
    CHECK(shifted_inverse_deriv(slit, 1.0, slit.size()) ==
          doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("tip_profile identities") {
    auto chain = brownian_chain(2.0, 200, 1e-3, 9);
    std::vector<double> grid = {1.0, 0.5, 0.25, 0.125};
    auto prof0 = tip_profile(chain, 0, grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        CHECK(prof0.deriv_mod[k] == doctest::Approx(1.0));
        CHECK(prof0.v_cum[k] == doctest::Approx(grid[k]).epsilon(1e-6));
    }

    // single slit, at = 0.5: |f_hat'(iy)| = y/sqrt(y^2+1), v(y) = sqrt(y^2+1)-1
    auto slit = slit_chain(500, 1e-3, 1.0);
    auto prof = tip_profile(slit, slit.size(), grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        double y = grid[k];
        CHECK(prof.deriv_mod[k] == doctest::Approx(y / std::sqrt(y * y + 1.0)));
        CHECK(prof.v_cum[k] ==
              doctest::Approx(std::sqrt(y * y + 1.0) - 1.0).epsilon(1e-4));
    }

    CHECK_THROWS_AS((void)tip_profile(chain, 0, std::vector<double>{0.5, 0.7}),
                    std::invalid_argument);
}

TEST_CASE("trace points and containment") {
    auto chain = brownian_chain(2.0, 100, 1e-3, 3);
    Complex t0 = trace_point(chain, 0, 0.01);
    CHECK(std::abs(t0 - Complex(0.0, 0.01)) < 1e-14);

    // vertical slit of capacity 0.5: exact tip is i
    auto slit = slit_chain(500, 1e-3, 1.0);
    double ymin = default_trace_ymin(slit);
    Complex tip = trace_point(slit, slit.size(), ymin);
    CHECK(std::abs(tip - Complex(0.0, 1.0)) <= 2.0 * ymin);

    auto sle = brownian_chain(8.0 / 3.0, 1u << 12, 1e-4, 77);
    auto pts = compute_trace(sle);
    CHECK(std::abs(pts.front()) <= 2.0 * default_trace_ymin(sle));
    for (const auto& p : pts) CHECK(p.imag() >= -1e-12);
}

TEST_CASE("reverse flow reproduces the shifted inverse") {
    // T = 0 is the identity
    auto path = sample_brownian(2.0, 100, 1e-3, 12);
    auto r0 = reverse_flow_tip(path, 0, Complex(0.3, 0.7), 1.0);
    CHECK(r0.value == Complex(0.3, 0.7));

    // deterministic driving V_t = t
    DriverParams dp;
    dp.value = 1.0;
    dp.n_steps = 1000;
    dp.dt = 1e-3;
    auto lin = deterministic_driver(DriverKind::Linear, dp);
    auto chain = chain_from_path(lin, 1.0);
    for (Complex z : {Complex(0.0, 0.5), Complex(1.0, 1.0)}) {
        Complex lhs = reverse_flow_tip(lin, 1000, z, 1.0).value;
        Complex rhs = shifted_inverse_map(chain, 1000, z) - lin.values[1000];
        CHECK(std::abs(lhs - rhs) <= 1e-9);
    }

    // Brownian path: derivative magnitude feeds the moment estimator
    auto bp = sample_brownian(2.0, 4000, 1e-3, 8);
    auto bchain = chain_from_path(bp);
    auto rev = reverse_flow_tip(bp, 4000, Complex(0.0, 1.0), bchain.a);
    CHECK(std::abs(rev.deriv) > 0.0);
    Complex rhs = shifted_inverse_map(bchain, 4000, Complex(0.0, 1.0)) - bp.values[4000];
    CHECK(std::abs(rev.value - rhs) <= 1e-9);
}

TEST_CASE("coarsened reverse derivative tracks the exact one") {
    auto path = sample_brownian(2.0, 8192, 1.0 / 8192.0, 21);
    Complex z(0.0, 1.0 / 16.0);
    double exact = std::abs(reverse_flow_tip(path, 8192, z, 1.0).deriv);
    double coarse = reverse_flow_tip_deriv_coarse(path, 8192, z, 1.0);
    CHECK(coarse == doctest::Approx(exact).epsilon(0.02));
}

TEST_CASE("dyadic sum matches a direct evaluation") {
    auto chain = brownian_chain(2.0, 200, 1e-3, 17);
    double direct = 0.0;
    for (int j = 3; j <= 8; ++j)
        direct += std::ldexp(1.0, -j) *
                  shifted_inverse_deriv(chain, std::ldexp(1.0, -j), chain.size());
    CHECK(dyadic_deriv_sum(chain, chain.size(), 3, 8) == doctest::Approx(direct));
}
