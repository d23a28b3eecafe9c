#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fbe/deterministic.hpp"
#include "fbe/field.hpp"
#include "fbe/rng.hpp"

namespace fbe {

/// Additive-noise parameters. Per-mode forcing weights are fixed to 1/k
/// (mode zero is never forced, so the mean is preserved).
struct NoiseParams {
    double rho = 0.0;                 ///< noise amplitude
    std::uint64_t master_seed = 1;    ///< ensemble seed; per-sample streams derive from it
    std::size_t n_modes = 0;          ///< noise bandwidth; 0 means "equal to the resolution"
    bool colored_stage_noise = true;  ///< apply the 1/k weights to the auxiliary variate too

    std::size_t half_modes(GridSpec grid) const {
        const std::size_t nm = n_modes == 0 ? grid.n : std::min(n_modes, grid.n);
        return nm / 2;
    }

    bool operator==(const NoiseParams&) const = default;
};

/// One step's worth of Wiener variates: the increment dW_k and the
/// auxiliary time-integral variate beta_k, both per mode k = 1..n_half.
struct WienerIncrement {
    std::vector<std::complex<double>> dw;
    std::vector<std::complex<double>> beta;
    double dt = 0.0;
};

/// Assembles an increment from raw complex draws xi_k = g_cos - i*g_sin
/// (and likewise eta_k), each with E|.|^2 = 2:
///   dW_k   = sqrt(dt) * (sqrt(2)/(2k)) * xi_k
///   beta_k = w_k * (xi_k/2 + (sqrt(3)/6) eta_k),
/// where w_k = sqrt(2)/(2k) when colored, 1/sqrt(2) otherwise.
WienerIncrement assemble_increment(std::span<const std::complex<double>> xi,
                                   std::span<const std::complex<double>> eta,
                                   double dt, bool colored = true);

/// Draws the raw Gaussians from `rng` (per mode: sine then cosine component
/// of xi, then of eta) and assembles the increment.
WienerIncrement sample_increment(Rng& rng, double dt, std::size_t n_half,
                                 bool colored = true);

/// One step of the two-stage stochastic Runge-Kutta scheme (strong order
/// 1.5 for additive noise):
///   Q  = u + (dt/2) f(u)
///   Q* = Q + (3/2) rho sqrt(dt) beta
///   u+ = u + rho dW + (dt/3) [f(Q) + 2 f(Q*)],   f(u) = r(u) + A u.
SpectralField srk_step(const SpectralField& state, double dt,
                       const WienerIncrement& inc, double rho,
                       const SolverConfig& cfg);

/// Integrates one noise realization at fixed resolution (no grid
/// refinement) and fixed dt = cfg.dt_init. The random stream is seeded from
/// (noise.master_seed, sample_index); identical inputs give bit-identical
/// trajectories. Stops at cfg.t_end, on a loud spectral tail
/// (cfg.tail_stop_threshold -> resolution_exhausted) or on non-finite
/// values (numerical_failure).
Trajectory run_realization(const SolverConfig& cfg, const NoiseParams& noise,
                           std::uint64_t sample_index, const SpectralField& initial);

namespace detail {

/// Scheme core over a caller-supplied drift f; used by tests to integrate
/// the linear problem alone.
using DriftFn = std::function<void(const SpectralField&, SpectralField&)>;
SpectralField srk_step_custom(const SpectralField& state, double dt,
                              const WienerIncrement& inc, double rho,
                              const DriftFn& drift);

}  // namespace detail

}  // namespace fbe
