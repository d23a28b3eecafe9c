#pragma once

#include <complex>
#include <span>
#include <vector>

#include "fbe/grid.hpp"

namespace fbe {

/// Truncated Fourier representation of a real, zero-mean periodic function.
///
/// Only wavenumbers k = 1..n/2 are stored (coeffs[k-1] = hat_u_k); the
/// negative half follows from conjugate symmetry and the mean is
/// identically zero. time_tag carries the simulation time of the snapshot.
struct SpectralField {
    GridSpec grid;
    std::vector<std::complex<double>> coeffs;
    double time_tag = 0.0;

    SpectralField() = default;
    explicit SpectralField(GridSpec g)
        : grid(g), coeffs(g.num_modes(), std::complex<double>{0.0, 0.0}) {}

    std::size_t num_modes() const { return coeffs.size(); }

    std::complex<double>& mode(std::size_t k) { return coeffs[k - 1]; }
    const std::complex<double>& mode(std::size_t k) const { return coeffs[k - 1]; }
};

/// Collocation samples (length grid.n, zero mean up to round-off) -> coefficients.
/// The mean of the samples is subtracted before transforming.
SpectralField forward_transform(std::span<const double> samples, GridSpec grid);

/// Coefficients -> collocation values at x_j = 2*pi*j/n.
std::vector<double> inverse_transform(const SpectralField& field);

/// True when every stored coefficient is finite.
bool all_finite(const SpectralField& field);

/// Throws NumericalError when the field contains NaN/Inf.
void require_finite(const SpectralField& field, const char* where);

/// amp * sin(k x) as a spectral field on the given grid.
SpectralField sine_field(GridSpec grid, std::size_t k = 1, double amp = 1.0);

/// Zero-pad to a finer grid (n_new >= current n); new modes are zero.
SpectralField pad_to(const SpectralField& field, std::size_t n_new);

/// Largest |u(x_j)| over the collocation points.
double max_abs_physical(const SpectralField& field);

}  // namespace fbe
