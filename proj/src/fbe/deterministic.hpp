#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fbe/field.hpp"

namespace fbe {

/// Physical and numerical parameters shared by the deterministic and
/// stochastic runs.
struct SolverConfig {
    double nu = 0.11;        ///< viscosity
    double alpha = 1.0;      ///< fractional dissipation exponent in [0,1]
    double t_end = 4.0;      ///< time horizon
    double dt_init = 1e-3;   ///< initial (also: fixed stochastic) step
    double dt_min = 1e-9;    ///< stop guard for the adaptive step
    double cfl = 0.4;        ///< advective step-size safety factor, in (0,1]
    std::size_t n_init = 512;
    std::size_t n_max = 16384;
    double refine_threshold = 1e-13;   ///< spectral tail trigger for doubling N
    double tail_stop_threshold = 1e-3; ///< fixed-grid (stochastic) stop trigger
    std::vector<double> snapshot_times;  ///< sorted; stepped onto exactly

    // analyticity-strip fit cadence and band (0 stride disables the fit)
    std::size_t strip_stride = 4;
    double strip_floor = 1e-14;
    std::size_t strip_k_lo = 4;

    void validate() const;

    bool operator==(const SolverConfig&) const = default;
};

/// One per-step diagnostic row. `delta` is absent on steps where the strip
/// fit was not evaluated (or failed).
struct DiagnosticRecord {
    double t = 0.0;
    double enstrophy = 0.0;
    std::optional<double> delta;
    bool delta_reliable = false;
    std::size_t n_active = 0;
    double dt = 0.0;
};

enum class Termination {
    reached_t_end,
    resolution_exhausted,
    dt_underflow,
    numerical_failure,
};

const char* to_string(Termination t);

/// Full output of one run: per-step diagnostics, requested field snapshots,
/// and the reason stepping stopped.
struct Trajectory {
    std::vector<DiagnosticRecord> records;
    std::vector<SpectralField> snapshots;
    Termination termination = Termination::reached_t_end;
};

/// One hybrid step: three Runge-Kutta substages for the advection term with
/// per-substage Crank-Nicolson treatment of the diagonal dissipation
/// operator. Exactly three nonlinear evaluations. Throws NumericalError if
/// any substage produces non-finite coefficients.
SpectralField imex_step(const SpectralField& state, double dt, const SolverConfig& cfg);

struct RefineResult {
    SpectralField field;
    double dt = 0.0;
    bool refined = false;
};

/// Doubles the resolution (zero-padding) and halves dt when the spectral
/// tail exceeds cfg.refine_threshold; never exceeds cfg.n_max.
RefineResult maybe_refine(const SpectralField& state, double dt, const SolverConfig& cfg);

/// Integrates the deterministic system from `initial` (resolution must equal
/// cfg.n_init) with automatic refinement, CFL-capped steps and exact
/// stepping onto snapshot times.
Trajectory run_deterministic(const SolverConfig& cfg, const SpectralField& initial);

namespace detail {

/// Stepping core with a caller-supplied advection operator and precomputed
/// dissipation symbols; used by tests to disable the nonlinearity.
using AdvectionFn = std::function<void(const SpectralField&, SpectralField&)>;
SpectralField imex_step_custom(const SpectralField& state, double dt,
                               std::span<const double> symbols,
                               const AdvectionFn& advection);

}  // namespace detail

}  // namespace fbe
