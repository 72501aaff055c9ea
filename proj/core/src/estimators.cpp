#include "loewner/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "loewner/driving.hpp"
#include "loewner/parallel.hpp"
#include "loewner/rng.hpp"
#include "loewner/spectra.hpp"

namespace loewner::mc {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Reverse flow in driving-centered coordinates W = h - U: one Brownian
// increment per adaptive step,
//   W <- sqrt(W^2 - 2 a dt) - dU,   |h'| <- |h'| * |W / sqrt(W^2 - 2 a dt)|,
// with dt = dt0 |W|^2 clamped to land exactly on the requested times.
struct ReverseWalker {
    Complex w;
    double dmod = 1.0;
    double t = 0.0;

    void advance(double target, double a, double dt0, CounterRng& rng) {
        while (t < target) {
            double dt = dt0 * std::norm(w);
            if (t + dt >= target) dt = target - t;
            Complex root = upper_sqrt(w * w - 2.0 * a * dt);
            dmod *= std::abs(w / root);
            w = root - std::sqrt(dt) * rng.normal();
            t = (dt == target - t) ? target : t + dt;
        }
    }
};

} // namespace

MomentEstimate estimate_moment(double kappa, double lambda,
                               const std::vector<double>& t_grid, int n_samples,
                               std::uint64_t master_seed, unsigned workers, double dt0) {
    if (t_grid.size() < 2) throw std::invalid_argument("estimate_moment: need >= 2 grid times");
    if (n_samples < 3) throw std::invalid_argument("estimate_moment: need >= 3 samples");
    for (std::size_t j = 0; j + 1 < t_grid.size(); ++j)
        if (!(t_grid[j] > 0.0 && t_grid[j] < t_grid[j + 1]))
            throw std::invalid_argument("estimate_moment: t_grid must be positive ascending");
    const double a = 2.0 / kappa;
    const std::size_t m = t_grid.size();

    std::vector<std::vector<double>> values(static_cast<std::size_t>(n_samples),
                                            std::vector<double>(m));
    parallel_for(static_cast<std::size_t>(n_samples), workers, [&](std::size_t i) {
        CounterRng rng(derive_seed(master_seed, i));
        ReverseWalker rw;
        rw.w = Complex(0.0, 1.0);
        for (std::size_t j = 0; j < m; ++j) {
            rw.advance(t_grid[j] * t_grid[j], a, dt0, rng);
            values[i][j] = std::pow(rw.dmod, lambda);
        }
    });

    std::vector<double> x(m);
    for (std::size_t j = 0; j < m; ++j) x[j] = std::log(t_grid[j]);
    auto fit = log_slope_jackknife(x, values);

    MomentEstimate est;
    est.kappa = kappa;
    est.lambda = lambda;
    est.t_grid = t_grid;
    est.mean = fit.mean;
    est.stderr_ = fit.stderr_;
    est.fitted_slope = fit.slope;
    est.slope_stderr = fit.slope_stderr;
    est.n_samples = n_samples;
    est.seed = master_seed;
    return est;
}

std::vector<CountScalingResult> estimate_count_scaling_multi(
    double kappa, const std::vector<double>& betas, const std::vector<int>& n_grid,
    int n_paths, std::uint64_t master_seed, double s_lower, unsigned workers, int n_cap) {
    if (betas.empty() || n_grid.size() < 2 || n_paths < 3)
        throw std::invalid_argument("estimate_count_scaling: bad sizes");
    if (!(s_lower >= 0.5 && s_lower < 2.0))
        throw std::invalid_argument("estimate_count_scaling: s_lower out of range");
    for (int n : n_grid)
        if (n < 1 || n > n_cap)
            throw std::invalid_argument("estimate_count_scaling: level outside [1, n_cap]");
    const double a = 2.0 / kappa;
    const double beta_hash = spectra::SpectrumParams::for_kappa(kappa).beta_hash;
    const std::size_t nb = betas.size(), nn = n_grid.size();

    // counts[path][b * nn + j]
    std::vector<std::vector<double>> counts(static_cast<std::size_t>(n_paths),
                                            std::vector<double>(nb * nn, 0.0));
    parallel_for(static_cast<std::size_t>(n_paths), workers, [&](std::size_t p) {
        for (std::size_t jn = 0; jn < nn; ++jn) {
            int n = n_grid[jn];
            double dt = std::ldexp(1.0, -2 * n);
            auto n_steps = static_cast<std::size_t>(1) << (2 * n + 1);
            auto path = sample_brownian(
                kappa, n_steps, dt,
                derive_seed(master_seed, p * 131u + static_cast<std::size_t>(n)));
            Complex z(0.0, std::ldexp(1.0, -n));
            auto j_min = static_cast<std::size_t>(
                std::ceil(s_lower * std::ldexp(1.0, 2 * n) - 1e-9));
            for (std::size_t j = std::max<std::size_t>(j_min, 1); j <= n_steps; ++j) {
                double dmod = reverse_flow_tip_deriv_coarse(path, j - 1, z, a);
                for (std::size_t b = 0; b < nb; ++b) {
                    double thr = std::pow(2.0, static_cast<double>(n) * betas[b]);
                    bool hit = (betas[b] >= beta_hash) ? (dmod >= thr) : (dmod <= thr);
                    if (hit) counts[p][b * nn + jn] += 1.0;
                }
            }
        }
    });

    const double ln2 = std::log(2.0);
    std::vector<double> x(nn);
    for (std::size_t j = 0; j < nn; ++j) x[j] = static_cast<double>(n_grid[j]) * ln2;

    std::vector<CountScalingResult> out;
    out.reserve(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        CountScalingResult res;
        res.kappa = kappa;
        res.beta = betas[b];
        res.seed = master_seed;
        std::vector<double> means(nn, 0.0);
        for (std::size_t j = 0; j < nn; ++j) {
            double s = 0.0;
            for (std::size_t p = 0; p < static_cast<std::size_t>(n_paths); ++p)
                s += counts[p][b * nn + j];
            means[j] = s / static_cast<double>(n_paths);
        }
        // The log-log fit can only use levels that saw at least one hit.
        std::vector<std::size_t> keep;
        for (std::size_t j = 0; j < nn; ++j)
            if (means[j] > 0.0) keep.push_back(j);
        if (keep.size() >= 2) {
            std::vector<double> xk(keep.size());
            std::vector<std::vector<double>> vals(static_cast<std::size_t>(n_paths),
                                                  std::vector<double>(keep.size()));
            for (std::size_t k = 0; k < keep.size(); ++k) {
                xk[k] = x[keep[k]];
                for (std::size_t p = 0; p < static_cast<std::size_t>(n_paths); ++p)
                    vals[p][k] = counts[p][b * nn + keep[k]];
            }
            auto fit = log_slope_jackknife(xk, vals);
            res.fitted_slope = fit.slope;    // in log2 units per unit n
            res.slope_stderr = fit.slope_stderr;
        } else {
            res.fitted_slope = std::numeric_limits<double>::quiet_NaN();
            res.slope_stderr = std::numeric_limits<double>::infinity();
        }
        for (std::size_t j = 0; j < nn; ++j) {
            CountStatistic st;
            st.kappa = kappa;
            st.beta = betas[b];
            st.n = n_grid[j];
            st.s_lower = s_lower;
            st.mean_count = means[j];
            st.per_path_counts.resize(static_cast<std::size_t>(n_paths));
            for (std::size_t p = 0; p < static_cast<std::size_t>(n_paths); ++p)
                st.per_path_counts[p] = counts[p][b * nn + j];
            res.stats.push_back(std::move(st));
        }
        out.push_back(std::move(res));
    }
    return out;
}

CountScalingResult estimate_count_scaling(double kappa, double beta,
                                          const std::vector<int>& n_grid, int n_paths,
                                          std::uint64_t master_seed, double s_lower,
                                          unsigned workers, int n_cap) {
    return estimate_count_scaling_multi(kappa, {beta}, n_grid, n_paths, master_seed,
                                        s_lower, workers, n_cap)
        .front();
}

FlatnessReport reverse_martingale_test(double kappa, double r,
                                       const std::vector<double>& t_grid, double delta,
                                       int n_samples, std::uint64_t seed,
                                       unsigned workers, double dt0) {
    if (t_grid.empty() || n_samples < 3 || !(delta > 0.0))
        throw std::invalid_argument("reverse_martingale_test: bad arguments");
    const double a = 2.0 / kappa;
    auto e = spectra::exponents_from_r(kappa, r);
    const std::size_t m = t_grid.size();

    std::vector<std::vector<double>> values(static_cast<std::size_t>(n_samples),
                                            std::vector<double>(m));
    parallel_for(static_cast<std::size_t>(n_samples), workers, [&](std::size_t i) {
        CounterRng rng(derive_seed(seed, i));
        ReverseWalker rw;
        rw.w = Complex(0.0, delta);
        for (std::size_t j = 0; j < m; ++j) {
            rw.advance(t_grid[j], a, dt0, rng);
            double Y = rw.w.imag();
            double S = Y / std::abs(rw.w);
            values[i][j] = std::pow(rw.dmod, e.lambda) * std::pow(Y, e.zeta) *
                           std::pow(S, -r);
        }
    });

    FlatnessReport rep;
    rep.grid = t_grid;
    rep.initial_value = std::pow(delta, e.zeta);
    rep.n_samples = n_samples;
    rep.mean.resize(m);
    rep.stderr_.resize(m);
    std::vector<double> col(static_cast<std::size_t>(n_samples));
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < col.size(); ++i) col[i] = values[i][j];
        auto ms = mean_stderr(col);
        rep.mean[j] = ms.mean;
        rep.stderr_[j] = ms.stderr_;
        if (ms.stderr_ > 0.0)
            rep.max_dev_sigma = std::max(rep.max_dev_sigma,
                                         std::abs(ms.mean - rep.initial_value) / ms.stderr_);
    }
    return rep;
}

FlatnessReport forward_martingale_test(double kappa, double u, std::complex<double> z,
                                       const std::vector<double>& s_grid, int n_samples,
                                       std::uint64_t seed, unsigned workers,
                                       double t_cap, double dt0) {
    if (s_grid.empty() || n_samples < 3 || !(z.imag() > 0.0))
        throw std::invalid_argument("forward_martingale_test: bad arguments");
    for (std::size_t j = 0; j + 1 < s_grid.size(); ++j)
        if (!(s_grid[j] > 0.0 && s_grid[j] < s_grid[j + 1]))
            throw std::invalid_argument("forward_martingale_test: s_grid must be ascending");
    const double a = 2.0 / kappa;
    auto fe = spectra::forward_exponents(kappa, u);
    const std::size_t m = s_grid.size();
    std::vector<double> threshold(m);
    for (std::size_t j = 0; j < m; ++j) threshold[j] = std::exp(-2.0 * a * s_grid[j]);

    auto martingale = [&](Complex w, double dmod) {
        double Y = w.imag();
        double S = Y / std::abs(w);
        double ups = Y / dmod;
        return std::pow(S, -fe.r) * std::pow(ups, fe.xi + fe.r) *
               std::pow(dmod, fe.lambda + fe.r);
    };

    std::vector<std::vector<double>> values(static_cast<std::size_t>(n_samples),
                                            std::vector<double>(m));
    std::vector<char> reached(static_cast<std::size_t>(n_samples), 0);
    parallel_for(static_cast<std::size_t>(n_samples), workers, [&](std::size_t i) {
        CounterRng rng(derive_seed(seed, i));
        Complex w = z;
        double dmod = 1.0;
        double t = 0.0;
        std::size_t j = 0;
        while (j < m) {
            while (j < m && w.imag() / dmod <= threshold[j]) {
                values[i][j] = martingale(w, dmod);
                ++j;
            }
            if (j >= m) {
                reached[i] = 1;
                break;
            }
            if (t >= t_cap) {
                // Stopped at the cap; M_{t_cap ^ tau_s} freezes here.
                double frozen = martingale(w, dmod);
                for (; j < m; ++j) values[i][j] = frozen;
                break;
            }
            double dt = dt0 * std::norm(w);
            if (t + dt > t_cap) dt = t_cap - t;
            Complex root = upper_sqrt(w * w + 2.0 * a * dt);
            dmod *= std::abs(w / root);
            w = root - std::sqrt(dt) * rng.normal();
            t += dt;
        }
    });

    FlatnessReport rep;
    rep.grid = s_grid;
    rep.initial_value = martingale(z, 1.0);
    rep.n_samples = n_samples;
    rep.mean.resize(m);
    rep.stderr_.resize(m);
    long hit = 0;
    for (char c : reached) hit += c;
    rep.stopped_fraction = static_cast<double>(hit) / static_cast<double>(n_samples);
    std::vector<double> col(static_cast<std::size_t>(n_samples));
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < col.size(); ++i) col[i] = values[i][j];
        auto ms = mean_stderr(col);
        rep.mean[j] = ms.mean;
        rep.stderr_[j] = ms.stderr_;
        if (ms.stderr_ > 0.0)
            rep.max_dev_sigma = std::max(rep.max_dev_sigma,
                                         std::abs(ms.mean - rep.initial_value) / ms.stderr_);
    }
    return rep;
}

HarmonicMeasureEstimate estimate_tip_harmonic_measure(const SlitMapChain& chain,
                                                      std::size_t t_steps,
                                                      const std::vector<double>& eps_grid,
                                                      int circle_samples) {
    if (eps_grid.empty() || circle_samples < 16)
        throw std::invalid_argument("estimate_tip_harmonic_measure: bad arguments");
    Complex tip = trace_point(chain, t_steps, default_trace_ymin(chain));

    HarmonicMeasureEstimate est;
    est.t = chain.time_at(t_steps);
    est.eps_grid = eps_grid;
    est.circle_samples = circle_samples;
    for (double eps : eps_grid) {
        double x_lo = 0.0, x_hi = 0.0;
        bool any = false;
        for (int k = 0; k < circle_samples; ++k) {
            double theta = 2.0 * kPi * (static_cast<double>(k) + 0.5) /
                           static_cast<double>(circle_samples);
            Complex zc = tip + eps * Complex(std::cos(theta), std::sin(theta));
            if (zc.imag() <= 1e-12 * eps) continue;
            auto res = forward_flow_prefix(chain, t_steps, zc);
            if (!res.survived) continue;
            double x = res.value.real();
            if (!any) {
                x_lo = x_hi = x;
                any = true;
            } else {
                x_lo = std::min(x_lo, x);
                x_hi = std::max(x_hi, x);
            }
        }
        est.x_minus.push_back(any ? x_lo : 0.0);
        est.x_plus.push_back(any ? x_hi : 0.0);
        est.mu.push_back(any ? (x_hi - x_lo) / kPi : 0.0);
    }

    std::vector<double> lx, ly, w;
    for (std::size_t j = 0; j < eps_grid.size(); ++j) {
        if (est.mu[j] > 0.0) {
            lx.push_back(std::log(eps_grid[j]));
            ly.push_back(std::log(est.mu[j]));
            w.push_back(1.0);
        }
    }
    if (lx.size() >= 2) est.slope = weighted_least_squares(lx, ly, w).slope;
    return est;
}

BetaHistogram beta_histogram(double kappa, double t, int n_samples, std::uint64_t seed,
                             int n_bins, unsigned workers, double dt0) {
    if (!(t > 1.0) || n_samples < 3 || n_bins < 3)
        throw std::invalid_argument("beta_histogram: bad arguments");
    const double a = 2.0 / kappa;
    const double lo = -1.25, hi = 1.25;
    const double width = (hi - lo) / n_bins;

    std::vector<double> bvals(static_cast<std::size_t>(n_samples));
    parallel_for(static_cast<std::size_t>(n_samples), workers, [&](std::size_t i) {
        CounterRng rng(derive_seed(seed, i));
        ReverseWalker rw;
        rw.w = Complex(0.0, 1.0);
        rw.advance(t * t, a, dt0, rng);
        bvals[i] = std::log(rw.dmod) / std::log(t);
    });

    BetaHistogram h;
    h.kappa = kappa;
    h.t = t;
    h.n_samples = n_samples;
    h.seed = seed;
    h.count.assign(static_cast<std::size_t>(n_bins), 0);
    for (int j = 0; j < n_bins; ++j) {
        h.bin_left.push_back(lo + width * j);
        h.bin_right.push_back(lo + width * (j + 1));
    }
    for (double b : bvals) {
        auto j = static_cast<long>(std::floor((b - lo) / width));
        if (j >= 0 && j < n_bins) ++h.count[static_cast<std::size_t>(j)];
    }
    for (int j = 0; j < n_bins; ++j) {
        long c = h.count[static_cast<std::size_t>(j)];
        h.rate.push_back(c > 0 ? -std::log(static_cast<double>(c) /
                                           static_cast<double>(n_samples)) /
                                     std::log(t)
                               : std::nan(""));
    }
    return h;
}

ThetaSdeReport radial_theta_simulate(double kappa, double u, double theta0, double t_max,
                                     int n_samples, std::uint64_t seed, int n_bins,
                                     double dt, unsigned workers) {
    if (!(theta0 > 0.0 && theta0 < kPi) || n_samples < 3 || n_bins < 4 || !(dt > 0.0))
        throw std::invalid_argument("radial_theta_simulate: bad arguments");
    const double a = 2.0 / kappa;
    auto fe = spectra::forward_exponents(kappa, u);
    const double c = 1.0 - 2.0 * a - fe.r;
    if (!(c > 0.5))
        throw std::invalid_argument("radial_theta_simulate: drift too weak for stationarity");
    const auto steps = static_cast<std::size_t>(std::llround(t_max / dt));
    const double sd = std::sqrt(dt);

    std::vector<double> finals(static_cast<std::size_t>(n_samples));
    std::vector<long> exit_slots(static_cast<std::size_t>(n_samples), 0);
    parallel_for(static_cast<std::size_t>(n_samples), workers, [&](std::size_t i) {
        CounterRng rng(derive_seed(seed, i));
        double th = theta0;
        long ex = 0;
        for (std::size_t k = 0; k < steps; ++k) {
            th += c * (std::cos(th) / std::sin(th)) * dt + sd * rng.normal();
            while (th <= 0.0 || th >= kPi) {
                if (th <= 0.0) th = -th;
                if (th >= kPi) th = 2.0 * kPi - th;
                ++ex;
                if (th <= 0.0 || th >= kPi) th = kPi / 2.0; // degenerate fold
            }
        }
        finals[i] = th;
        exit_slots[i] = ex;
    });

    ThetaSdeReport rep;
    rep.kappa = kappa;
    rep.u = u;
    rep.drift = c;
    rep.n_samples = n_samples;
    for (long e : exit_slots) rep.exits += e;

    const double width = kPi / n_bins;
    rep.count.assign(static_cast<std::size_t>(n_bins), 0);
    for (int j = 0; j < n_bins; ++j) {
        rep.bin_left.push_back(width * j);
        rep.bin_right.push_back(width * (j + 1));
    }
    KahanSum sum_th, sum_sr;
    for (double th : finals) {
        auto j = static_cast<long>(th / width);
        if (j >= n_bins) j = n_bins - 1;
        ++rep.count[static_cast<std::size_t>(j)];
        sum_th.add(th);
        sum_sr.add(std::pow(std::sin(th), fe.r));
    }
    rep.mean_theta = sum_th.value() / n_samples;
    rep.mean_s_pow_r = sum_sr.value() / n_samples;

    // Expected counts from the invariant density ~ sin^{2c}, bin masses by
    // Simpson's rule, normalized over (0, pi).
    auto dens = [&](double th) { return std::pow(std::sin(th), 2.0 * c); };
    std::vector<double> mass(static_cast<std::size_t>(n_bins), 0.0);
    double total = 0.0;
    for (int j = 0; j < n_bins; ++j) {
        const int sub = 8;
        double hsub = width / sub, acc = 0.0;
        for (int q = 0; q < sub; ++q) {
            double x0 = rep.bin_left[static_cast<std::size_t>(j)] + hsub * q;
            acc += hsub / 6.0 * (dens(x0) + 4.0 * dens(x0 + 0.5 * hsub) + dens(x0 + hsub));
        }
        mass[static_cast<std::size_t>(j)] = acc;
        total += acc;
    }
    for (int j = 0; j < n_bins; ++j)
        rep.expected.push_back(mass[static_cast<std::size_t>(j)] / total * n_samples);

    // Chi-square with adjacent bins merged until each group expects >= 5;
    // a short leftover tail is folded into the final group.
    std::vector<double> grp_o, grp_e;
    double go = 0.0, ge = 0.0;
    for (int j = 0; j < n_bins; ++j) {
        go += static_cast<double>(rep.count[static_cast<std::size_t>(j)]);
        ge += rep.expected[static_cast<std::size_t>(j)];
        if (ge >= 5.0) {
            grp_o.push_back(go);
            grp_e.push_back(ge);
            go = ge = 0.0;
        }
    }
    if (ge > 0.0 && !grp_e.empty()) {
        grp_o.back() += go;
        grp_e.back() += ge;
    } else if (ge > 0.0) {
        grp_o.push_back(go);
        grp_e.push_back(ge);
    }
    double stat = 0.0;
    for (std::size_t g = 0; g < grp_e.size(); ++g)
        stat += (grp_o[g] - grp_e[g]) * (grp_o[g] - grp_e[g]) / grp_e[g];
    rep.chi_square = stat;
    rep.dof = std::max(static_cast<int>(grp_e.size()) - 1, 1);
    rep.p_value = chi_square_pvalue(stat, rep.dof);
    return rep;
}

} // namespace loewner::mc
