#include <cmath>

#include "doctest.h"
#include "loewner/rng.hpp"
#include "loewner/stats.hpp"

using namespace loewner;

TEST_CASE("mean_stderr") {
    auto m = mean_stderr({1.0, 2.0, 3.0, 4.0});
    CHECK(m.mean == doctest::Approx(2.5));
    CHECK(m.stderr_ == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
}

TEST_CASE("regularized incomplete gamma against closed forms") {
    // P(1/2, x) = erf(sqrt(x))
    for (double x : {0.1, 0.5, 1.0, 2.0, 5.0, 20.0})
        CHECK(gamma_p(0.5, x) == doctest::Approx(std::erf(std::sqrt(x))).epsilon(1e-12));
    // Q(1, x) = exp(-x)
    for (double x : {0.1, 1.0, 3.0, 10.0})
        CHECK(gamma_q(1.0, x) == doctest::Approx(std::exp(-x)).epsilon(1e-12));
    CHECK(gamma_p(2.5, 0.0) == 0.0);
    CHECK(gamma_p(3.0, 1e6) == doctest::Approx(1.0));
}

TEST_CASE("chi-square p-values") {
    // dof 2: p = exp(-stat/2)
    CHECK(chi_square_pvalue(3.0, 2) == doctest::Approx(std::exp(-1.5)).epsilon(1e-12));
    // classic 95% point of chi2(1)
    CHECK(chi_square_pvalue(3.841, 1) == doctest::Approx(0.05).epsilon(2e-3));
    CHECK(chi_square_pvalue(0.0, 5) == 1.0);
}

TEST_CASE("weighted least squares recovers exact lines") {
    std::vector<double> x = {0.0, 1.0, 2.0, 3.0};
    std::vector<double> y = {1.0, 3.0, 5.0, 7.0};
    std::vector<double> w = {1.0, 2.0, 0.5, 4.0};
    auto fit = weighted_least_squares(x, y, w);
    CHECK(fit.slope == doctest::Approx(2.0));
    CHECK(fit.intercept == doctest::Approx(1.0));
}

TEST_CASE("log slope jackknife on synthetic power-law data") {
    const double slope = -0.75;
    std::vector<double> x = {std::log(2.0), std::log(4.0), std::log(8.0), std::log(16.0)};
    CounterRng rng(99);
    const int n = 4000;
    std::vector<std::vector<double>> vals(n, std::vector<double>(x.size()));
    for (int i = 0; i < n; ++i)
        for (std::size_t j = 0; j < x.size(); ++j)
            vals[i][j] = std::exp(slope * x[j]) * (1.0 + 0.2 * rng.normal());
    auto fit = log_slope_jackknife(x, vals);
    CHECK(std::abs(fit.slope - slope) <= 4.0 * fit.slope_stderr);
    CHECK(fit.slope_stderr > 0.0);
    CHECK(fit.slope_stderr < 0.02);

    // noiseless data: exact slope, vanishing error
    for (int i = 0; i < 10; ++i)
        for (std::size_t j = 0; j < x.size(); ++j)
            vals[i][j] = std::exp(slope * x[j]);
    std::vector<std::vector<double>> clean(vals.begin(), vals.begin() + 10);
    auto exact = log_slope_jackknife(x, clean);
    CHECK(exact.slope == doctest::Approx(slope).epsilon(1e-12));
    CHECK(exact.slope_stderr <= 1e-10);
}
