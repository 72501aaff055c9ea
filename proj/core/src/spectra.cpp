#include "loewner/spectra.hpp"

#include <cmath>
#include <stdexcept>

namespace loewner::spectra {

SpectrumParams SpectrumParams::for_kappa(double kappa) {
    if (!(kappa > 0.0)) throw std::invalid_argument("SpectrumParams: kappa must be positive");
    SpectrumParams p;
    p.kappa = kappa;
    p.a = 2.0 / kappa;
    p.d = std::min(1.0 + kappa / 8.0, 2.0);
    p.r_c = 0.5 + 4.0 / kappa;
    p.r_star = std::min(1.0, 8.0 / kappa);
    p.lambda_c = 1.0 + 3.0 * kappa / 32.0 + 2.0 / kappa;
    p.beta_hash = kappa / (kappa + 4.0) - 1.0;
    p.beta_star = kappa / std::max(4.0, kappa - 4.0) - 1.0;
    double sq = std::sqrt(8.0 + kappa);
    p.beta_plus = -1.0 + kappa / (12.0 + kappa - 4.0 * sq);
    p.beta_minus = -1.0 + kappa / (12.0 + kappa + 4.0 * sq);
    p.r_plus = (4.0 / kappa) * (-2.0 + sq);
    p.r_minus = (4.0 / kappa) * (-2.0 - sq);
    p.alpha_minus = 1.0 / (1.0 - p.beta_minus);
    p.alpha_star = 1.0 / (1.0 - p.beta_star);
    p.alpha_plus = 1.0 / (1.0 - p.beta_plus);
    p.holder_exponent = (1.0 - p.beta_plus) / 2.0;
    return p;
}

ExponentPoint exponents_from_r(double kappa, double r) {
    ExponentPoint e;
    e.r = r;
    e.lambda = r * (1.0 + kappa / 4.0) - kappa * r * r / 8.0;
    e.zeta = r - kappa * r * r / 8.0;
    e.beta = -1.0 + kappa / (4.0 + kappa - kappa * r);
    e.rho = e.zeta + e.lambda * e.beta;
    e.q = (0.5 + 4.0 / kappa) - r;
    return e;
}

ExponentPoint exponents_from_beta(double kappa, double beta) {
    if (!(beta > -1.0)) throw std::invalid_argument("exponents_from_beta: beta must exceed -1");
    double r = (4.0 + kappa) / kappa - 1.0 / (beta + 1.0);
    return exponents_from_r(kappa, r);
}

ExponentPoint exponents_from_lambda(double kappa, double lambda) {
    double disc = (4.0 + kappa) * (4.0 + kappa) - 8.0 * lambda * kappa;
    if (disc < 0.0)
        throw std::invalid_argument("exponents_from_lambda: lambda above the critical value");
    double r = (4.0 + kappa - std::sqrt(disc)) / kappa;
    return exponents_from_r(kappa, r);
}

double rho_of_beta(double kappa, double beta) {
    double b1 = beta + 1.0;
    double t = ((kappa + 4.0) / kappa) * b1 - 1.0;
    return kappa / (8.0 * b1) * t * t;
}

TipDims dims_of_beta(double kappa, double beta) {
    double rho = rho_of_beta(kappa, beta);
    TipDims d;
    d.dhat = (2.0 - rho) / 2.0;
    // beta = 1 (kappa = 8) is a 0/0 point; l'Hopital gives rho'(1) = lambda.
    d.dbeta = (std::abs(1.0 - beta) < 1e-12)
                  ? exponents_from_beta(kappa, beta).lambda
                  : (2.0 - rho) / (1.0 - beta);
    return d;
}

double f_tip(double kappa, double alpha) {
    return alpha * (1.0 - 4.0 / kappa) + (4.0 + kappa) * (4.0 + kappa) / (8.0 * kappa) -
           (kappa / 8.0) * alpha * alpha / (2.0 * alpha - 1.0);
}

double f_bulk(double kappa, double alpha) {
    double c = (4.0 + kappa) * (4.0 + kappa) / (8.0 * kappa);
    return alpha + c - c * alpha * alpha / (2.0 * alpha - 1.0);
}

ForwardExponents forward_exponents(double kappa, double u) {
    if (!(kappa > 0.0 && kappa < 8.0))
        throw std::invalid_argument("forward_exponents: requires 0 < kappa < 8");
    if (!(u > 0.5))
        throw std::invalid_argument("forward_exponents: requires u > 1/2");
    double a = 2.0 / kappa;
    ForwardExponents f;
    f.u = u;
    f.r = 0.5 - 2.0 * a - 1.0 / (4.0 * u - 2.0);
    f.lambda = f.r * f.r / (2.0 * a) + f.r * (1.0 - 1.0 / (2.0 * a));
    f.xi = f.r * f.r / (4.0 * a);
    f.rho = -(u - 1.0) * (f.lambda + f.r) - (f.r + f.xi);
    return f;
}

std::vector<SpectrumRow> spectrum_table(double kappa, int n_points) {
    if (n_points < 2) throw std::invalid_argument("spectrum_table: need at least 2 points");
    auto p = SpectrumParams::for_kappa(kappa);
    std::vector<SpectrumRow> rows;
    rows.reserve(static_cast<std::size_t>(n_points));
    // Uniform in alpha, with the point nearest the maximizer snapped onto
    // alpha_star so the emitted curve attains its maximum exactly.
    double span = p.alpha_plus - p.alpha_minus;
    int i_star = static_cast<int>(
        std::lround((p.alpha_star - p.alpha_minus) / span * (n_points - 1)));
    for (int i = 0; i < n_points; ++i) {
        double alpha = (i == i_star) ? p.alpha_star
                                     : p.alpha_minus + span * static_cast<double>(i) /
                                           static_cast<double>(n_points - 1);
        SpectrumRow row;
        row.alpha = alpha;
        row.beta = 1.0 - 1.0 / alpha;
        row.rho = rho_of_beta(kappa, row.beta);
        auto dims = dims_of_beta(kappa, row.beta);
        row.dhat = dims.dhat;
        row.dbeta = dims.dbeta;
        row.f_tip = f_tip(kappa, alpha);
        row.f_bulk = f_bulk(kappa, alpha);
        rows.push_back(row);
    }
    return rows;
}

} // namespace loewner::spectra
