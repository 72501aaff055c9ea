#include "loewner/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace loewner {

MeanStderr mean_stderr(const std::vector<double>& x) {
    if (x.empty()) throw std::invalid_argument("mean_stderr: empty sample");
    KahanSum s;
    for (double v : x) s.add(v);
    double n = static_cast<double>(x.size());
    MeanStderr m;
    m.mean = s.value() / n;
    if (x.size() < 2) return m;
    KahanSum ss;
    for (double v : x) ss.add((v - m.mean) * (v - m.mean));
    m.stderr_ = std::sqrt(ss.value() / (n * (n - 1.0)));
    return m;
}

namespace {

// Lower regularized gamma by power series; valid for x < a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized gamma by Lentz continued fraction; valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

} // namespace

double gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_p: bad arguments");
    if (x == 0.0) return 0.0;
    return (x < a + 1.0) ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_q: bad arguments");
    if (x == 0.0) return 1.0;
    return (x < a + 1.0) ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

double chi_square_pvalue(double stat, int dof) {
    if (dof < 1) throw std::invalid_argument("chi_square_pvalue: dof must be >= 1");
    if (stat <= 0.0) return 1.0;
    return gamma_q(0.5 * static_cast<double>(dof), 0.5 * stat);
}

WlsFit weighted_least_squares(const std::vector<double>& x, const std::vector<double>& y,
                              const std::vector<double>& w) {
    if (x.size() != y.size() || x.size() != w.size() || x.size() < 2)
        throw std::invalid_argument("weighted_least_squares: bad input sizes");
    double sw = 0.0, swx = 0.0, swy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sw += w[i];
        swx += w[i] * x[i];
        swy += w[i] * y[i];
    }
    if (sw <= 0.0) throw std::invalid_argument("weighted_least_squares: bad weights");
    // Center on the weighted means; the naive normal equations cancel
    // catastrophically when one weight dominates.
    double xbar = swx / sw, ybar = swy / sw;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += w[i] * (x[i] - xbar) * (x[i] - xbar);
        sxy += w[i] * (x[i] - xbar) * (y[i] - ybar);
    }
    if (sxx == 0.0) throw std::invalid_argument("weighted_least_squares: degenerate design");
    WlsFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = ybar - fit.slope * xbar;
    return fit;
}

SlopeFit log_slope_jackknife(const std::vector<double>& x,
                             const std::vector<std::vector<double>>& values) {
    const std::size_t n = values.size();
    if (n < 3) throw std::invalid_argument("log_slope_jackknife: need >= 3 samples");
    const std::size_t m = x.size();
    for (const auto& row : values)
        if (row.size() != m)
            throw std::invalid_argument("log_slope_jackknife: ragged sample rows");

    SlopeFit fit;
    fit.mean.resize(m);
    fit.stderr_.resize(m);
    std::vector<double> sums(m);
    for (std::size_t j = 0; j < m; ++j) {
        KahanSum s;
        for (std::size_t i = 0; i < n; ++i) s.add(values[i][j]);
        sums[j] = s.value();
        fit.mean[j] = sums[j] / static_cast<double>(n);
    }
    for (std::size_t j = 0; j < m; ++j) {
        KahanSum ss;
        for (std::size_t i = 0; i < n; ++i) {
            double d = values[i][j] - fit.mean[j];
            ss.add(d * d);
        }
        fit.stderr_[j] =
            std::sqrt(ss.value() / (static_cast<double>(n) * (static_cast<double>(n) - 1.0)));
    }

    std::vector<double> logy(m), w(m);
    for (std::size_t j = 0; j < m; ++j) {
        if (!(fit.mean[j] > 0.0))
            throw std::invalid_argument("log_slope_jackknife: nonpositive mean");
        logy[j] = std::log(fit.mean[j]);
        double rel = std::max(fit.stderr_[j] / fit.mean[j], 1e-8);
        w[j] = 1.0 / (rel * rel);
    }
    auto full = weighted_least_squares(x, logy, w);
    fit.slope = full.slope;
    fit.intercept = full.intercept;

    // Delete-one jackknife on the slope; leave-one-out means are updated
    // incrementally from the grid-point sums.
    KahanSum js, jss;
    std::vector<double> ly(m);
    const double nm1 = static_cast<double>(n) - 1.0;
    std::vector<double> slopes(n);
    for (std::size_t i = 0; i < n; ++i) {
        bool ok = true;
        for (std::size_t j = 0; j < m; ++j) {
            double mj = (sums[j] - values[i][j]) / nm1;
            if (!(mj > 0.0)) { ok = false; break; }
            ly[j] = std::log(mj);
        }
        slopes[i] = ok ? weighted_least_squares(x, ly, w).slope : fit.slope;
        js.add(slopes[i]);
    }
    double sbar = js.value() / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) jss.add((slopes[i] - sbar) * (slopes[i] - sbar));
    fit.slope_stderr = std::sqrt(nm1 / static_cast<double>(n) * jss.value());
    return fit;
}

} // namespace loewner
