#pragma once

// Test-only reference computations, kept independent of the library's
// solver path.

#include <cmath>
#include <vector>

#include "fbe/field.hpp"
#include "fbe/rng.hpp"

namespace fbe::testing {

/// Closed-form solution of u_t + u u_x = nu u_xx with u(0,x) = sin(x),
/// via the heat-equation substitution u = -2 nu (d/dx) ln theta. The
/// initial condition maps to theta_0 = exp(cos(x)/(2 nu)) whose Fourier
/// coefficients are modified Bessel functions, so
///   u(t,x) = 4 nu sum_n n I_n(z) e^{-nu n^2 t} sin(n x)
///            / (I_0(z) + 2 sum_n I_n(z) e^{-nu n^2 t} cos(n x)),
/// with z = 1/(2 nu).
inline double viscous_burgers_exact(double nu, double t, double x, int n_terms = 80) {
    const double z = 1.0 / (2.0 * nu);
    double num = 0.0;
    double den = std::cyl_bessel_i(0, z);
    for (int n = 1; n <= n_terms; ++n) {
        const double w = std::cyl_bessel_i(n, z) * std::exp(-nu * n * n * t);
        num += n * w * std::sin(n * x);
        den += 2.0 * w * std::cos(n * x);
    }
    return 4.0 * nu * num / den;
}

/// Same closed form evaluated by quadrature instead of the Bessel series:
///   theta(t,x) = integral of G_t(x-y) exp(cos(y)/(2 nu)) dy,
///   u = -2 nu theta_x / theta,
/// with the periodic heat kernel G_t summed over Gaussian images. Every
/// theta integrand value is positive, so this route keeps relative accuracy
/// near the front where the Fourier series of theta cancels catastrophically
/// for small nu.
inline double viscous_burgers_exact_quadrature(double nu, double t, double x,
                                               std::size_t m_points = 4096) {
    const double z = 1.0 / (2.0 * nu);
    const double four_nu_t = 4.0 * nu * t;
    const double h = kTwoPi / static_cast<double>(m_points);
    double theta = 0.0, theta_x = 0.0;
    for (std::size_t i = 0; i < m_points; ++i) {
        const double y = h * static_cast<double>(i);
        const double f = std::exp(z * std::cos(y));
        for (int img = -3; img <= 3; ++img) {
            const double s = x - y - kTwoPi * static_cast<double>(img);
            const double g = std::exp(-s * s / four_nu_t);
            theta += g * f;
            theta_x += -(2.0 * s / four_nu_t) * g * f;
        }
    }
    return -2.0 * nu * theta_x / theta;
}

/// Random band-limited real field: modes 1..k_max populated with unit-scale
/// complex Gaussians scaled by 1/k.
inline SpectralField random_band_limited(GridSpec grid, std::size_t k_max, Rng& rng) {
    SpectralField field(grid);
    for (std::size_t k = 1; k <= std::min(k_max, grid.num_modes()); ++k) {
        field.mode(k) = std::complex<double>{rng.normal(), rng.normal()} /
                        static_cast<double>(k);
    }
    return field;
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    }
    return (sxy - sx * sy / n) / (sxx - sx * sx / n);
}

}  // namespace fbe::testing
