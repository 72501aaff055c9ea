#pragma once

#include <complex>
#include <stdexcept>

namespace loewner {

using Complex = std::complex<double>;

// Square root with nonnegative imaginary part.  This is the branch used by
// every elementary map: it keeps the open upper half plane invariant and is
// continuous there.  Hand-rolled (no inf/nan handling) because it sits in
// the innermost flow loops.
inline Complex upper_sqrt(Complex w) {
    double x = w.real(), y = w.imag();
    double m = std::hypot(x, y);
    if (x >= 0.0) {
        double u = std::sqrt(0.5 * (m + x));
        double v = (u == 0.0) ? 0.0 : y / (2.0 * u);
        return (v >= 0.0) ? Complex(u, v) : Complex(-u, -v);
    }
    double v = std::sqrt(0.5 * (m - x));
    double u = (v == 0.0) ? 0.0 : y / (2.0 * v);
    return (v >= 0.0) ? Complex(u, v) : Complex(-u, -v);
}

// Elementary forward slit map: the exact solution of the chordal Loewner
// equation with driving held constant at v for capacity time dt,
//     g(z) = v + sqrt((z - v)^2 + 2 a dt),
// branch chosen with nonnegative imaginary part.  Boundary points keep the
// sign of z - v so that the two sides of the slit map to the two sides of
// the driving point.
inline Complex slit_forward(Complex z, double v, double a, double dt) {
    Complex zeta = z - v;
    double cap = 2.0 * a * dt;
    if (zeta.imag() == 0.0) {
        double x = zeta.real();
        if (x * x < cap)
            throw std::domain_error("slit_forward: boundary point swallowed within step");
        double s = std::sqrt(x * x + cap);
        return Complex(v + (x >= 0.0 ? s : -s), 0.0);
    }
    return v + upper_sqrt(zeta * zeta + cap);
}

// d/dz of slit_forward: (z - v) / sqrt((z - v)^2 + 2 a dt), same branch.
inline Complex slit_forward_deriv(Complex z, double v, double a, double dt) {
    Complex zeta = z - v;
    double cap = 2.0 * a * dt;
    if (zeta.imag() == 0.0) {
        double x = zeta.real();
        if (x * x < cap)
            throw std::domain_error("slit_forward_deriv: boundary point swallowed within step");
        double s = std::sqrt(x * x + cap);
        return Complex(std::abs(x) / s, 0.0);
    }
    return zeta / upper_sqrt(zeta * zeta + cap);
}

// Elementary reverse map: exact solution of the reverse-time Loewner
// equation with driving held constant at u,
//     h(z) = u + sqrt((z - u)^2 - 2 a dt).
// For Im z > 0 the image has strictly larger imaginary part and the branch
// point is never reached.  Inverse of slit_forward with v = u.
inline Complex slit_reverse(Complex z, double u, double a, double dt) {
    Complex zeta = z - u;
    return u + upper_sqrt(zeta * zeta - 2.0 * a * dt);
}

// d/dz of slit_reverse: (z - u) / sqrt((z - u)^2 - 2 a dt).
inline Complex slit_reverse_deriv(Complex z, double u, double a, double dt) {
    Complex zeta = z - u;
    return zeta / upper_sqrt(zeta * zeta - 2.0 * a * dt);
}

} // namespace loewner
