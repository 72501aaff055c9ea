#pragma once

#include <cstddef>
#include <vector>

namespace loewner {

// Order-independent (sorted-input-free) compensated accumulator.
class KahanSum {
public:
    void add(double x) {
        double y = x - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
};

MeanStderr mean_stderr(const std::vector<double>& x);

// Regularized incomplete gamma functions (series / continued fraction).
double gamma_p(double a, double x); // P(a,x)
double gamma_q(double a, double x); // Q(a,x) = 1 - P(a,x)

// Upper-tail p-value of a chi-square statistic with dof degrees of freedom.
double chi_square_pvalue(double stat, int dof);

struct WlsFit {
    double slope = 0.0;
    double intercept = 0.0;
};

// Weighted least squares of y on x with weights w (typically 1/se^2).
WlsFit weighted_least_squares(const std::vector<double>& x,
                              const std::vector<double>& y,
                              const std::vector<double>& w);

// Fit of log(mean_j) vs x_j from per-sample data, with a delete-one
// jackknife standard error for the slope.  values[i][j] is sample i at
// grid point j; weights are the inverse variances of log(mean_j).
struct SlopeFit {
    double slope = 0.0;
    double slope_stderr = 0.0;
    double intercept = 0.0;
    std::vector<double> mean;     // per grid point
    std::vector<double> stderr_;  // per grid point
};

SlopeFit log_slope_jackknife(const std::vector<double>& x,
                             const std::vector<std::vector<double>>& values);

} // namespace loewner
