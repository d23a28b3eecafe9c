#pragma once

#include <vector>

#include "fbe/field.hpp"

namespace fbe {

/// Per-mode symbol of the dissipation operator: a_k = -nu * k^(2*alpha).
double dissipation_symbol(std::size_t k, double alpha, double nu);

/// All symbols a_1..a_{n/2} for a grid (precomputed once per resolution).
std::vector<double> dissipation_symbols(GridSpec grid, double alpha, double nu);

/// Applies the diagonal dissipation operator: coefficient k scaled by
/// -nu * k^(2*alpha). alpha must lie in [0, 1].
SpectralField fractional_laplacian(const SpectralField& field, double alpha, double nu);

/// Advection term r(hat_u)_k = -(i k / 2) * hat(u^2)_k with the square
/// evaluated on a 3n/2-point grid (3/2-rule dealiasing). The Nyquist
/// coefficient of the result is forced to zero.
SpectralField nonlinear_term(const SpectralField& field);

/// In-place variant writing into `out` (same grid); avoids allocation in
/// stepping loops.
void nonlinear_term_into(const SpectralField& field, SpectralField& out);

/// Relative magnitude of the spectral tail: max over k in [7n/16, n/2] of
/// |hat_u_k| divided by max over all k. Zero field gives 0.
double spectral_tail_ratio(const SpectralField& field);

}  // namespace fbe
