#pragma once

#include <cstddef>
#include <utility>

#include "fbe/field.hpp"

namespace fbe {

/// Result of fitting |hat_u_k| ~ C * k^alpha_tilde * exp(-delta k) over a
/// wavenumber band. `reliable` is false when delta sits below 3 grid
/// spacings or fewer than 8 modes entered the fit.
struct StripFit {
    double c_amp = 0.0;
    double alpha_tilde = 0.0;
    double delta = 0.0;
    std::pair<std::size_t, std::size_t> k_range{0, 0};
    double residual = 0.0;
    bool reliable = false;
};

/// Spectral enstrophy 4*pi^2 * sum_k k^2 |hat_u_k|^2.
double enstrophy(const SpectralField& field);

/// Least-squares fit of ln|hat_u_k| against (1, ln k, -k) over modes
/// k in [k_lo, k_hi], where k_hi is the largest k with
/// |hat_u_k| > floor * max|hat_u|. Throws FitError when fewer than three
/// usable modes remain.
StripFit strip_fit(const SpectralField& field, double floor = 1e-14,
                   std::size_t k_lo = 4);

}  // namespace fbe
