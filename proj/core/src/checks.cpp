#include "loewner/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include "loewner/driving.hpp"
#include "loewner/estimators.hpp"
#include "loewner/flow.hpp"
#include "loewner/rng.hpp"
#include "loewner/spectra.hpp"
#include "loewner/stats.hpp"

namespace loewner::checks {

namespace {

constexpr double kPi = 3.14159265358979323846;
const std::vector<double> kKappaGrid = {0.5, 2.0, 8.0 / 3.0, 4.0, 6.0, 8.0 - 1e-6};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

// |A - B| <= tol * max(1, |A|, |B|, scale): absolute tolerance promoted to a
// relative one when the identity's constituent terms are large.
bool close(double a, double b, double tol, double scale, double& worst) {
    double lim = tol * std::max({1.0, std::abs(a), std::abs(b), scale});
    double dev = std::abs(a - b);
    worst = std::max(worst, dev / std::max(lim / tol, 1.0));
    return dev <= lim;
}

// ---------------------------------------------------------------- criterion 1

CheckResult check_exponent_algebra() {
    CheckResult res{1, "exponent-algebra", true, ""};
    const double tol = 1e-10;
    double worst = 0.0;
    auto require = [&](bool ok) { res.passed = res.passed && ok; };

    for (double kappa : kKappaGrid) {
        auto p = spectra::SpectrumParams::for_kappa(kappa);
        require(close(spectra::rho_of_beta(kappa, p.beta_plus), 2.0, tol, 1.0, worst));
        require(close(spectra::rho_of_beta(kappa, p.beta_minus), 2.0, tol, 1.0, worst));
        require(close(spectra::rho_of_beta(kappa, p.beta_hash), 0.0, tol, 1.0, worst));

        // d_{beta_*} = d in cross-multiplied form (2 - rho) = d (1 - beta),
        // which stays conditioned as beta_* -> 1 when kappa -> 8.
        double rho_star = spectra::rho_of_beta(kappa, p.beta_star);
        require(close(2.0 - rho_star, p.d * (1.0 - p.beta_star), tol, 1.0, worst));
        if (1.0 - p.beta_star > 1e-3)
            require(close(spectra::dims_of_beta(kappa, p.beta_star).dbeta, p.d, tol, 1.0,
                          worst));

        // F_tip(alpha) = d_{1 - 1/alpha} over a dense beta grid.
        for (int i = 0; i <= 200; ++i) {
            double beta = p.beta_minus +
                          (p.beta_plus - p.beta_minus) * (0.005 + 0.99 * i / 200.0);
            double alpha = 1.0 / (1.0 - beta);
            double lhs = spectra::f_tip(kappa, alpha);
            double rhs = spectra::dims_of_beta(kappa, beta).dbeta;
            double scale = (kappa / 8.0) * alpha * alpha / (2.0 * alpha - 1.0) +
                           std::abs(alpha * (1.0 - 4.0 / kappa)) + 4.0 / (1.0 - beta);
            require(close(lhs, rhs, tol, scale, worst));
        }

        // 2 - rho_forward(u) = F_tip(u) on (1/2, alpha_*]  (kappa < 8 branch).
        if (kappa < 8.0) {
            for (int i = 1; i <= 200; ++i) {
                double umax = std::min(p.alpha_star, 64.0);
                double u = 0.5 + (umax - 0.5) * i / 200.0;
                auto fe = spectra::forward_exponents(kappa, u);
                double scale = std::abs(fe.lambda) + std::abs(fe.r) + std::abs(fe.xi) +
                               std::abs(fe.rho);
                require(close(2.0 - fe.rho, spectra::f_tip(kappa, u), tol, scale, worst));
            }
        }

        // r-space identities on [r_-, r_c).
        for (int i = 0; i <= 200; ++i) {
            double r = p.r_minus + (p.r_c - 0.02 - p.r_minus) * i / 200.0;
            auto e = spectra::exponents_from_r(kappa, r);
            double scale = std::abs(e.lambda) + std::abs(e.zeta) + std::abs(r) + 1.0;
            // rho = zeta + lambda beta equals the closed form.
            double closed = kappa * kappa * r * r / (8.0 * (4.0 + kappa - kappa * r));
            require(close(e.rho, closed, tol, scale, worst));
            // (1 - 2q)/(1 + 2q) = beta.
            require(close((1.0 - 2.0 * e.q) / (1.0 + 2.0 * e.q), e.beta, tol,
                          std::abs(e.q) + 1.0, worst));
            // r(lambda(r)) = r and r(beta(r)) = r.
            require(close(spectra::exponents_from_lambda(kappa, e.lambda).r, r, tol,
                          scale, worst));
            require(close(spectra::exponents_from_beta(kappa, e.beta).r, r, tol, scale,
                          worst));
        }
    }
    res.detail = fmt("max normalized deviation %.3e (tol 1e-10)", worst);
    return res;
}

// ---------------------------------------------------------------- criterion 2

CheckResult check_duality() {
    CheckResult res{2, "finite-difference-duality", true, ""};
    const double h = 1e-5, tol = 1e-6;
    double worst = 0.0;
    for (double kappa : kKappaGrid) {
        auto p = spectra::SpectrumParams::for_kappa(kappa);
        double lam_hi = p.lambda_c - 0.1;
        for (int i = 0; i <= 40; ++i) {
            double lam = -1.0 + (lam_hi + 1.0) * i / 40.0;
            double z1 = spectra::exponents_from_lambda(kappa, lam + h).zeta;
            double z0 = spectra::exponents_from_lambda(kappa, lam - h).zeta;
            double fd = (z1 - z0) / (2.0 * h);
            double beta = spectra::exponents_from_lambda(kappa, lam).beta;
            worst = std::max(worst, std::abs(fd + beta));
        }
        for (int i = 0; i <= 40; ++i) {
            double beta = -0.9 + 1.8 * i / 40.0;
            double fd = (spectra::rho_of_beta(kappa, beta + h) -
                         spectra::rho_of_beta(kappa, beta - h)) /
                        (2.0 * h);
            double lam = spectra::exponents_from_beta(kappa, beta).lambda;
            worst = std::max(worst, std::abs(fd - lam));
        }
    }
    res.passed = worst <= tol;
    res.detail = fmt("max |fd - analytic| = %.3e (tol %.0e)", worst, tol);
    return res;
}

// ---------------------------------------------------------------- criterion 3

CheckResult check_flow_exactness(bool full) {
    CheckResult res{3, "flow-exactness", true, ""};
    double worst_step = 0.0, worst_chain = 0.0, worst_lemma = 0.0;

    CounterRng rng(0x10aD5EEDULL);
    const int triples = full ? 100000 : 10000;
    for (int i = 0; i < triples; ++i) {
        Complex z(-3.0 + 6.0 * rng.uniform(), 1e-3 + 3.0 * rng.uniform());
        double v = -2.0 + 4.0 * rng.uniform();
        double a = 0.25 + 3.75 * rng.uniform();
        double dt = 1e-5 + 0.1 * rng.uniform();
        Complex w = slit_forward(z, v, a, dt);
        Complex zb = slit_reverse(w, v, a, dt);
        worst_step = std::max(worst_step, std::abs(zb - z) / std::abs(z));
        Complex dprod = slit_forward_deriv(z, v, a, dt) * slit_reverse_deriv(w, v, a, dt);
        worst_step = std::max(worst_step, std::abs(dprod - 1.0));
    }

    const int n_chains = full ? 100 : 20;
    const std::size_t n_steps = 1000;
    const double dt = 1e-3;
    const double kappas[] = {2.0, 8.0 / 3.0, 4.0, 6.0};
    for (int c = 0; c < n_chains; ++c) {
        double kappa = kappas[c % 4];
        auto path = sample_brownian(kappa, n_steps, dt, derive_seed(0xF10ULL, c));
        auto chain = chain_from_path(path);
        const Complex zs[] = {{0.0, 1.0}, {1.0, 0.5}, {-2.0, 2.0}};
        for (Complex z : zs) {
            // A pass within 1e-3 of the singularity is below the resolution
            // of the discrete hull; treat it as swallowed rather than letting
            // the ill-conditioned sqrt cancellation dominate the roundtrip.
            auto g = forward_flow_prefix(chain, n_steps, z, 1e-3);
            if (!g.survived) continue;
            auto f = inverse_map_prefix(chain, n_steps, g.value);
            worst_chain = std::max(worst_chain,
                                   std::abs(f.value - z) / std::max(1.0, std::abs(z)));
            worst_chain = std::max(worst_chain, std::abs(g.deriv * f.deriv - 1.0));
        }
        const Complex zr[] = {{0.0, 0.5}, {0.0, 1.0}};
        for (Complex z : zr) {
            for (std::size_t T : {n_steps / 2, n_steps}) {
                Complex lhs = reverse_flow_tip(path, T, z, chain.a).value;
                Complex rhs = shifted_inverse_map(chain, T, z) - path.values[T];
                worst_lemma = std::max(worst_lemma,
                                       std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
            }
        }
    }

    res.passed = worst_step <= 1e-12 && worst_chain <= 1e-9 && worst_lemma <= 1e-9;
    res.detail = fmt("step %.2e (1e-12), chain %.2e (1e-9), reversal %.2e (1e-9)",
                     worst_step, worst_chain, worst_lemma);
    return res;
}

// ---------------------------------------------------------------- criterion 4

CheckResult check_inequality_suite(bool full) {
    CheckResult res{4, "inequality-suite", true, ""};
    const int n_chains = full ? 1000 : 50;
    const std::size_t n_steps = 400;
    const double dt = 1e-3;
    const double slack = 1.0 + 1e-9; // roundoff allowance on exact theorems
    const double kappas[] = {1.0, 2.0, 8.0 / 3.0, 4.0, 6.0};
    long violations = 0;
    double c_fit = 1e300;

    for (int c = 0; c < n_chains; ++c) {
        double kappa = kappas[c % 5];
        double a = 2.0 / kappa;
        auto path = sample_brownian(kappa, n_steps, dt, derive_seed(0x1EE7ULL, c));
        auto chain = chain_from_path(path);
        const double T = chain.total_time();

        auto hval = [&](Complex z) { return shifted_inverse_map(chain, n_steps, z); };
        auto hder = [&](Complex z) {
            return std::abs(shifted_inverse_deriv_c(chain, n_steps, z));
        };

        const double ys[] = {1.0, 0.5, 1.0 / 16.0, 1.0 / 256.0};
        for (double y : ys) {
            double d0 = hder(Complex(0.0, y));
            Complex h0 = hval(Complex(0.0, y));
            for (double x : {-4.0, -1.0, 1.0, 4.0}) {
                double dz = hder(Complex(y * x, y));
                double bound = (x * x + 4.0) * (x * x + 4.0);
                if (dz > bound * d0 * slack || dz * slack < d0 / bound) ++violations;
                double inc = std::abs(hval(Complex(y * x, y)) - h0);
                double cap = std::pow(x * x + 4.0, 1.5) * std::abs(x) / 2.0 * y * d0;
                if (inc > cap * slack) ++violations;
            }
            for (double r : {1.5, 2.0, 4.0}) {
                double dr = hder(Complex(0.0, y * r));
                if (dr > r * d0 * slack || dr * slack < d0 / (r * r * r)) ++violations;
                double inc = std::abs(hval(Complex(0.0, y * r)) - h0);
                if (inc > (r * r - 1.0) / 2.0 * y * d0 * slack) ++violations;
            }

            // Beurling bounds for a few prefix times.
            for (std::size_t k : {n_steps / 4, n_steps / 2, n_steps}) {
                double t = chain.time_at(k);
                double dmod = shifted_inverse_deriv(chain, y, k);
                double root = std::sqrt(2.0 * a * t + 1.0);
                if (dmod > root / y * slack) ++violations;
                c_fit = std::min(c_fit, dmod * root / y);
            }
        }

        // e^{+-5as/y^2} time stability of |f_t'| at fixed unshifted z.
        for (double y : {0.3, 0.6}) {
            Complex z(0.2, y);
            auto s_steps = static_cast<std::size_t>(y * y / dt);
            std::size_t t0 = n_steps - s_steps;
            double before = std::abs(inverse_map_prefix(chain, t0, z).deriv);
            double after = std::abs(inverse_map_prefix(chain, n_steps, z).deriv);
            double lim = std::exp(5.0 * a);
            if (after > before * lim * slack || after * lim * slack < before) ++violations;
        }

        // v(h; y) >= y |h'(iy)|/2 and the dyadic-sum bracketing of v.
        std::vector<double> grid;
        for (int j = 0; j <= 6; ++j) grid.push_back(std::ldexp(1.0, -j));
        auto prof = tip_profile(chain, n_steps, grid);
        for (std::size_t k = 0; k < grid.size(); ++k)
            if (prof.v_cum[k] * slack < grid[k] * prof.deriv_mod[k] / 2.0) ++violations;
        double v2 = prof.v_cum[2]; // v(h; 1/4)
        double dsum = dyadic_deriv_sum(chain, n_steps, 2, 34);
        if (dsum * slack < 2.0 / 3.0 * v2 || dsum > 8.0 / 3.0 * v2 * slack) ++violations;

        (void)T;
    }

    res.passed = violations == 0 && c_fit > 0.0;
    res.detail = fmt("violations %.0f across corpus, fitted Beurling c = %.3e",
                     static_cast<double>(violations), c_fit);
    return res;
}

// ---------------------------------------------------------------- criterion 5

CheckResult check_moment_scaling(bool full, unsigned workers) {
    CheckResult res{5, "moment-scaling", true, ""};
    const int n = full ? 20000 : 2000;
    const std::vector<double> t_grid = {2.0, 4.0, 8.0, 16.0, 32.0};

    auto m1 = mc::estimate_moment(8.0 / 3.0, 4.0 / 3.0, t_grid, n, 0x5E8ED01ULL, workers);
    double tol1 = std::max(0.07, 3.0 * m1.slope_stderr);
    bool ok1 = std::abs(m1.fitted_slope + 2.0 / 3.0) <= (full ? tol1 : 2.0 * tol1);

    auto m2 = mc::estimate_moment(2.0, 1.25, t_grid, n, 0x5E8ED02ULL, workers);
    bool ok2 = std::abs(m2.fitted_slope + 0.75) <= (full ? 0.08 : 0.16);

    res.passed = ok1 && ok2;
    res.detail = fmt("kappa 8/3: slope %.4f (want -0.6667); kappa 2: slope %.4f (want -0.75)",
                     m1.fitted_slope, m2.fitted_slope);
    return res;
}

// ---------------------------------------------------------------- criterion 6

CheckResult check_martingale_flatness(bool full, unsigned workers) {
    CheckResult res{6, "martingale-flatness", true, ""};
    const int n = full ? 10000 : 1000;

    auto rev = mc::reverse_martingale_test(2.0, 1.0, {1.0, 2.0, 4.0, 8.0, 16.0}, 1.0, n,
                                           0x3A9F001ULL, workers);
    auto fwd = mc::forward_martingale_test(2.0, 0.6, Complex(0.0, 1.0),
                                           {0.25, 0.5, 0.75, 1.0, 1.5}, n, 0x3A9F002ULL,
                                           workers);
    res.passed = rev.max_dev_sigma <= 3.0 && fwd.max_dev_sigma <= 3.0;
    res.detail = fmt("reverse max dev %.2f sigma, forward max dev %.2f sigma (limit 3)",
                     rev.max_dev_sigma, fwd.max_dev_sigma);
    return res;
}

// ---------------------------------------------------------------- criterion 7

CheckResult check_count_scaling(bool full, unsigned workers) {
    CheckResult res{7, "count-scaling", true, ""};
    auto p = spectra::SpectrumParams::for_kappa(2.0);
    const std::vector<int> n_grid = full ? std::vector<int>{3, 4, 5, 6}
                                         : std::vector<int>{3, 4, 5};
    const int n_paths = full ? 50 : 12;
    auto out = mc::estimate_count_scaling_multi(2.0, {0.0, p.beta_hash}, n_grid, n_paths,
                                                9, 1.0, workers);
    // The beta = 0 count is a rare event at these levels (mean counts of
    // order one), so the fast smoke run gates only on the beta_# slope.
    bool ok0 = !full || std::abs(out[0].fitted_slope - 1.0) <= 0.3;
    bool okh = std::abs(out[1].fitted_slope - 2.0) <= (full ? 0.25 : 0.75);
    res.passed = ok0 && okh;
    res.detail = fmt("beta 0: slope %.3f (want 1); beta_#: slope %.3f (want 2)",
                     out[0].fitted_slope, out[1].fitted_slope);
    return res;
}

// ---------------------------------------------------------------- criterion 8

CheckResult check_harmonic_measure(bool full) {
    CheckResult res{8, "harmonic-measure", true, ""};
    DriverParams dp;
    dp.value = 0.0;
    dp.n_steps = 1000;
    dp.dt = 1e-4;
    auto path = deterministic_driver(DriverKind::Constant, dp);
    auto chain = chain_from_path(path, 1.0);
    const double h = std::sqrt(2.0 * chain.total_time());
    const int samples = full ? 4096 : 1024;

    std::vector<double> tip_eps;
    for (int j = 0; j < 7; ++j) tip_eps.push_back(h / 64.0 * std::pow(2.0, j * 0.5));
    auto tip = mc::estimate_tip_harmonic_measure(chain, dp.n_steps, tip_eps, samples);

    std::vector<double> flat_eps = {3.0 * h, 5.0 * h, 8.0 * h};
    auto flat = mc::estimate_tip_harmonic_measure(chain, dp.n_steps, flat_eps, samples);
    double worst_flat = 0.0;
    for (std::size_t j = 0; j < flat_eps.size(); ++j) {
        double ref = 2.0 * flat_eps[j] / kPi;
        worst_flat = std::max(worst_flat, std::abs(flat.mu[j] - ref) / ref);
    }

    res.passed = std::abs(tip.slope - 0.5) <= 0.1 && worst_flat <= 0.10;
    res.detail = fmt("tip slope %.3f (want 0.5 +- 0.1), flat regime max rel dev %.3f",
                     tip.slope, worst_flat);
    return res;
}

// ---------------------------------------------------------------- criterion 9

CheckResult check_theta_sde(bool full, unsigned workers) {
    CheckResult res{9, "radial-sde-stationarity", true, ""};
    const int n = full ? 10000 : 2000;
    auto rep = mc::radial_theta_simulate(2.0, 0.6, kPi / 2.0, 4.0, n, 0x7E7A5DEULL, 32,
                                         1e-3, workers);
    res.passed = rep.p_value > 0.01;
    res.detail = fmt("chi-square %.1f, dof %.0f, p = %.4f (need > 0.01)", rep.chi_square,
                     static_cast<double>(rep.dof), rep.p_value);
    return res;
}

// --------------------------------------------------------------- criterion 10

CheckResult check_figure_curves() {
    CheckResult res{10, "spectrum-figure", true, ""};
    const double tol = 1e-10;
    double worst = 0.0;
    for (double kappa : {2.0, 4.0, 6.0}) {
        auto p = spectra::SpectrumParams::for_kappa(kappa);
        auto tab = spectra::spectrum_table(kappa, 201);
        double peak = -1e300;
        for (const auto& row : tab) peak = std::max(peak, row.f_tip);
        worst = std::max(worst, std::abs(peak - p.d));
        worst = std::max(worst, std::abs(spectra::f_tip(kappa, p.alpha_star) - p.d));
        worst = std::max(worst, std::abs(tab.front().f_tip));
        worst = std::max(worst, std::abs(tab.back().f_tip));
        if (worst > tol) res.passed = false;

        // Concavity: chord slopes nonincreasing along the grid.
        double prev = 1e300;
        for (std::size_t i = 0; i + 1 < tab.size(); ++i) {
            double slope = (tab[i + 1].f_tip - tab[i].f_tip) /
                           (tab[i + 1].alpha - tab[i].alpha);
            if (slope > prev + 1e-8) res.passed = false;
            prev = slope;
        }
    }
    res.detail = fmt("max endpoint/peak deviation %.2e (tol 1e-10), curves concave",
                     worst);
    return res;
}

} // namespace

std::vector<CheckResult> run_checks(Level level, unsigned workers, bool verbose) {
    bool full = level == Level::Full;
    std::vector<CheckResult> out;
    auto emit = [&](CheckResult r) {
        if (verbose)
            std::printf("criterion %2d %-28s %s  %s\n", r.id, r.name.c_str(),
                        r.passed ? "PASS" : "FAIL", r.detail.c_str());
        out.push_back(std::move(r));
    };
    emit(check_exponent_algebra());
    emit(check_duality());
    emit(check_flow_exactness(full));
    emit(check_inequality_suite(full));
    emit(check_moment_scaling(full, workers));
    emit(check_martingale_flatness(full, workers));
    emit(check_count_scaling(full, workers));
    emit(check_harmonic_measure(full));
    emit(check_theta_sde(full, workers));
    emit(check_figure_curves());
    return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
    for (const auto& r : results)
        if (!r.passed) return false;
    return true;
}

} // namespace loewner::checks
