#pragma once

#include <vector>

namespace loewner::spectra {

// Special parameter values for a given kappa.
struct SpectrumParams {
    double kappa;
    double a;           // 2 / kappa
    double d;           // min(1 + kappa/8, 2)
    double r_c;         // 1/2 + 4/kappa
    double r_star;      // min(1, 8/kappa)
    double lambda_c;    // 1 + 3 kappa/32 + 2/kappa
    double beta_hash;   // kappa/(kappa+4) - 1, maximizer of dhat
    double beta_star;   // kappa/max(4, kappa-4) - 1, maximizer of d_beta
    double beta_plus;
    double beta_minus;  // roots of rho(beta) = 2
    double r_plus;
    double r_minus;
    double alpha_minus; // alpha = 1/(1 - beta)
    double alpha_star;
    double alpha_plus;
    double holder_exponent; // (1 - beta_plus)/2, optimal capacity-param Holder

    static SpectrumParams for_kappa(double kappa);
};

// One consistent tuple of tip exponents.  For r < r_c:
//   lambda = r (1 + kappa/4) - kappa r^2 / 8
//   zeta   = r - kappa r^2 / 8 = lambda - kappa r / 4
//   beta   = -1 + kappa / (4 + kappa - kappa r)
//   rho    = zeta + lambda beta = kappa^2 r^2 / (8 (4 + kappa - kappa r))
//   q      = r_c - r,   (1 - 2q)/(1 + 2q) = beta
struct ExponentPoint {
    double r, lambda, zeta, beta, rho, q;
};

ExponentPoint exponents_from_r(double kappa, double r);
ExponentPoint exponents_from_beta(double kappa, double beta);     // beta in (-1, 1]
ExponentPoint exponents_from_lambda(double kappa, double lambda); // lambda < lambda_c

// rho(beta) = kappa/(8(beta+1)) * [((kappa+4)/kappa)(beta+1) - 1]^2
double rho_of_beta(double kappa, double beta);

struct TipDims {
    double dhat;   // (2 - rho)/2
    double dbeta;  // (2 - rho)/(1 - beta)
};

TipDims dims_of_beta(double kappa, double beta);

// F_tip(alpha) = d_{1 - 1/alpha}
//              = alpha(1 - 4/kappa) + (4+kappa)^2/(8 kappa) - (kappa/8) alpha^2/(2 alpha - 1)
double f_tip(double kappa, double alpha);

// Conjectured bulk spectrum, for comparison plotting only.
double f_bulk(double kappa, double alpha);

// Exponents of the forward-flow argument (kappa < 8):
//   r(u)    = 1/2 - 2a - 1/(4u - 2)
//   lambda  = r^2/(2a) + r (1 - 1/(2a))
//   xi      = r^2/(4a)
//   rho(u)  = -(u - 1)(lambda + r) - (r + xi)
struct ForwardExponents {
    double u, r, lambda, xi, rho;
};

ForwardExponents forward_exponents(double kappa, double u);

// Spectrum table row for emission.
struct SpectrumRow {
    double alpha, beta, rho, dhat, dbeta, f_tip, f_bulk;
};

// Curve over [alpha_minus, alpha_plus] on a uniform grid of n points.
std::vector<SpectrumRow> spectrum_table(double kappa, int n_points);

} // namespace loewner::spectra
