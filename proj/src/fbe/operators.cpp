#include "fbe/operators.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "fbe/errors.hpp"
#include "fbe/fft.hpp"

namespace fbe {

double dissipation_symbol(std::size_t k, double alpha, double nu) {
    return -nu * std::pow(static_cast<double>(k), 2.0 * alpha);
}

std::vector<double> dissipation_symbols(GridSpec grid, double alpha, double nu) {
    std::vector<double> a(grid.num_modes());
    for (std::size_t k = 1; k <= grid.num_modes(); ++k) {
        a[k - 1] = dissipation_symbol(k, alpha, nu);
    }
    return a;
}

SpectralField fractional_laplacian(const SpectralField& field, double alpha, double nu) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw ConfigError("fractional_laplacian: alpha must be in [0,1], got " +
                          std::to_string(alpha));
    }
    require_finite(field, "fractional_laplacian");
    SpectralField out = field;
    for (std::size_t k = 1; k <= field.num_modes(); ++k) {
        out.mode(k) *= dissipation_symbol(k, alpha, nu);
    }
    return out;
}

void nonlinear_term_into(const SpectralField& field, SpectralField& out) {
    const std::size_t n = field.grid.n;
    const std::size_t m = 3 * n / 2;  // dealiasing grid
    auto& fft = fft_for(m);

    thread_local std::vector<std::complex<double>> padded;
    thread_local std::vector<double> values;
    padded.assign(m / 2 + 1, std::complex<double>{0.0, 0.0});
    values.resize(m);

    for (std::size_t k = 1; k <= n / 2; ++k) padded[k] = field.mode(k);
    fft.to_physical(padded, values);
    for (double& v : values) v *= v;
    fft.to_spectral(values, padded);

    if (out.grid.n != n) out = SpectralField(field.grid);
    out.time_tag = field.time_tag;
    for (std::size_t k = 1; k <= n / 2; ++k) {
        // r_k = -(1/2) i k hat(u^2)_k
        out.mode(k) = std::complex<double>{0.0, -0.5 * static_cast<double>(k)} * padded[k];
    }
    out.mode(n / 2) = {0.0, 0.0};  // Nyquist kept empty after every nonlinear evaluation
    require_finite(out, "nonlinear_term");
}

SpectralField nonlinear_term(const SpectralField& field) {
    require_finite(field, "nonlinear_term");
    SpectralField out(field.grid);
    nonlinear_term_into(field, out);
    return out;
}

double spectral_tail_ratio(const SpectralField& field) {
    const std::size_t n = field.grid.n;
    const std::size_t k_lo = (7 * n) / 16;
    double tail = 0.0, peak = 0.0;
    for (std::size_t k = 1; k <= n / 2; ++k) {
        const double mag = std::abs(field.mode(k));
        peak = std::max(peak, mag);
        if (k >= k_lo) tail = std::max(tail, mag);
    }
    return peak > 0.0 ? tail / peak : 0.0;
}

}  // namespace fbe
