#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "loewner/flow.hpp"
#include "loewner/observables.hpp"
#include "loewner/stats.hpp"

namespace loewner::mc {

// Relative capacity-step factor for adaptive reverse/forward sampling:
// the step taken at state Z is dt = kAdaptiveDt0 * |Z|^2, which keeps the
// per-step relative change of Y, Delta and Theta of order kAdaptiveDt0.
inline constexpr double kAdaptiveDt0 = 1e-3;

// Hard cap on the count-statistic level n; the cost grows like 2^{4n}.
inline constexpr int kCountLevelCap = 7;

struct MomentEstimate {
    double kappa = 0.0;
    double lambda = 0.0;
    std::vector<double> t_grid;
    std::vector<double> mean;     // Ê[|h'_{t^2}(i)|^lambda]
    std::vector<double> stderr_;
    double fitted_slope = 0.0;    // of log mean vs log t; estimates -zeta
    double slope_stderr = 0.0;
    int n_samples = 0;
    std::uint64_t seed = 0;
};

// Reverse-flow sampling of E[|h'_{t^2}(i)|^lambda] over t_grid with a
// weighted log-log slope fit (delete-one jackknife error).
MomentEstimate estimate_moment(double kappa, double lambda,
                               const std::vector<double>& t_grid,
                               int n_samples, std::uint64_t master_seed,
                               unsigned workers = 0, double dt0 = kAdaptiveDt0);

struct CountStatistic {
    double kappa = 0.0;
    double beta = 0.0;
    int n = 0;
    double s_lower = 1.0;
    double mean_count = 0.0;
    std::vector<double> per_path_counts;
};

struct CountScalingResult {
    double kappa = 0.0;
    double beta = 0.0;
    std::vector<CountStatistic> stats; // one per n in n_grid
    double fitted_slope = 0.0;         // of log2 E[N] vs n; estimates 2 - rho
    double slope_stderr = 0.0;
    std::uint64_t seed = 0;
};

// Counts of dyadic indices j in [s 2^{2n}, 2^{2n+1}] with
// |f_hat'_{(j-1)2^{-2n}}(i 2^{-n})| >= 2^{n beta}  (<= for beta < beta_#).
CountScalingResult estimate_count_scaling(double kappa, double beta,
                                          const std::vector<int>& n_grid,
                                          int n_paths, std::uint64_t master_seed,
                                          double s_lower = 1.0, unsigned workers = 0,
                                          int n_cap = kCountLevelCap);

// Shared-flow variant: one derivative scan per (path, n), thresholded at
// every beta in betas.
std::vector<CountScalingResult> estimate_count_scaling_multi(
    double kappa, const std::vector<double>& betas, const std::vector<int>& n_grid,
    int n_paths, std::uint64_t master_seed, double s_lower = 1.0,
    unsigned workers = 0, int n_cap = kCountLevelCap);

struct FlatnessReport {
    std::vector<double> grid;     // t (reverse) or s (forward)
    std::vector<double> mean;
    std::vector<double> stderr_;
    double initial_value = 0.0;   // closed-form value at the first grid point
    double max_dev_sigma = 0.0;   // max |mean - mean_0| / stderr over the grid
    double stopped_fraction = 0.0;
    int n_samples = 0;
};

// Reverse martingale |h'_t(z)|^lambda Y_t^zeta [sin arg Z_t]^{-r}, started
// at z = i delta.
FlatnessReport reverse_martingale_test(double kappa, double r,
                                       const std::vector<double>& t_grid,
                                       double delta, int n_samples,
                                       std::uint64_t seed, unsigned workers = 0,
                                       double dt0 = kAdaptiveDt0);

// Forward martingale M_{t ^ tau_s} with (r, lambda, xi) = forward_exponents(kappa, u),
// tau_s the first time Upsilon = e^{-2 a s}, evaluated at each s in s_grid.
FlatnessReport forward_martingale_test(double kappa, double u, std::complex<double> z,
                                       const std::vector<double>& s_grid,
                                       int n_samples, std::uint64_t seed,
                                       unsigned workers = 0, double t_cap = 64.0,
                                       double dt0 = kAdaptiveDt0);

struct HarmonicMeasureEstimate {
    double t = 0.0;
    std::vector<double> eps_grid;
    std::vector<double> mu;       // (x_+ - x_-)/pi
    std::vector<double> x_minus;
    std::vector<double> x_plus;
    int circle_samples = 0;
    double slope = 0.0;           // log mu vs log eps
};

// mu(t, eps) via forward images of circle samples around gamma(t): the
// contiguous surviving arc bracketing V_t gives [x_-, x_+].
HarmonicMeasureEstimate estimate_tip_harmonic_measure(const SlitMapChain& chain,
                                                      std::size_t t_steps,
                                                      const std::vector<double>& eps_grid,
                                                      int circle_samples);

struct BetaHistogram {
    double kappa = 0.0;
    double t = 0.0;
    std::vector<double> bin_left, bin_right;
    std::vector<long> count;
    std::vector<double> rate;     // -log P_hat / log t per bin (empty bins: NaN)
    int n_samples = 0;
    std::uint64_t seed = 0;
};

// Histogram of b = log|h'_{t^2}(i)| / log t; diagnostic for the rate
// function rho(b), no hard acceptance.
BetaHistogram beta_histogram(double kappa, double t, int n_samples,
                             std::uint64_t seed, int n_bins = 61,
                             unsigned workers = 0, double dt0 = kAdaptiveDt0);

struct ThetaSdeReport {
    double kappa = 0.0;
    double u = 0.0;
    double drift = 0.0;           // 1 - 2a - r
    std::vector<double> bin_left, bin_right;
    std::vector<long> count;
    std::vector<double> expected; // from the sin^{2 drift} invariant density
    double chi_square = 0.0;
    int dof = 0;
    double p_value = 0.0;
    double mean_theta = 0.0;
    double mean_s_pow_r = 0.0;    // empirical E[S^r] at t_max (diagnostic)
    long exits = 0;               // paths that would have left (0, pi)
    int n_samples = 0;
};

// Euler-Maruyama for d Theta = (1 - 2a - r) cot(Theta) dt + dW on (0, pi),
// histogram of Theta(t_max) against the invariant density.
ThetaSdeReport radial_theta_simulate(double kappa, double u, double theta0,
                                     double t_max, int n_samples, std::uint64_t seed,
                                     int n_bins = 32, double dt = 1e-3,
                                     unsigned workers = 0);

} // namespace loewner::mc
