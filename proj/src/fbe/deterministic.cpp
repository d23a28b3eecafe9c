#include "fbe/deterministic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fbe/diagnostics.hpp"
#include "fbe/errors.hpp"
#include "fbe/operators.hpp"

namespace fbe {

namespace {

// Three-stage low-storage scheme; the gamma/zeta pairs sum to one.
constexpr double kGamma[3] = {8.0 / 15.0, 5.0 / 12.0, 3.0 / 4.0};
constexpr double kZeta[3] = {0.0, -17.0 / 60.0, -5.0 / 12.0};

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

void SolverConfig::validate() const {
    if (!(nu > 0.0)) throw ConfigError("nu must be positive");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must be in [0,1]");
    if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
    if (!(dt_init > 0.0)) throw ConfigError("dt_init must be positive");
    if (!(dt_min > 0.0 && dt_min < dt_init)) throw ConfigError("require 0 < dt_min < dt_init");
    if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("cfl must be in (0,1]");
    if (!is_power_of_two(n_init) || n_init < 8) throw ConfigError("n_init must be a power of two >= 8");
    if (!is_power_of_two(n_max)) throw ConfigError("n_max must be a power of two");
    if (n_init > n_max) throw ConfigError("require n_init <= n_max");
    if (!(refine_threshold > 0.0)) throw ConfigError("refine_threshold must be positive");
    if (!std::is_sorted(snapshot_times.begin(), snapshot_times.end())) {
        throw ConfigError("snapshot_times must be sorted");
    }
}

const char* to_string(Termination t) {
    switch (t) {
        case Termination::reached_t_end: return "reached_t_end";
        case Termination::resolution_exhausted: return "resolution_exhausted";
        case Termination::dt_underflow: return "dt_underflow";
        case Termination::numerical_failure: return "numerical_failure";
    }
    return "unknown";
}

namespace detail {

SpectralField imex_step_custom(const SpectralField& state, double dt,
                               std::span<const double> symbols,
                               const AdvectionFn& advection) {
    const std::size_t n_half = state.num_modes();
    SpectralField u = state;
    SpectralField r_curr(state.grid), r_prev(state.grid);

    for (int stage = 0; stage < 3; ++stage) {
        advection(u, r_curr);
        const double half = 0.5 * dt * (kGamma[stage] + kZeta[stage]);
        for (std::size_t i = 0; i < n_half; ++i) {
            const double ha = half * symbols[i];
            std::complex<double> rhs = (1.0 + ha) * u.coeffs[i] + dt * kGamma[stage] * r_curr.coeffs[i];
            if (stage > 0) rhs += dt * kZeta[stage] * r_prev.coeffs[i];
            u.coeffs[i] = rhs / (1.0 - ha);
        }
        require_finite(u, "imex_step");
        std::swap(r_prev, r_curr);
    }
    return u;
}

}  // namespace detail

SpectralField imex_step(const SpectralField& state, double dt, const SolverConfig& cfg) {
    if (!(dt > 0.0)) throw ConfigError("imex_step: dt must be positive");
    const auto symbols = dissipation_symbols(state.grid, cfg.alpha, cfg.nu);
    return detail::imex_step_custom(state, dt, symbols, nonlinear_term_into);
}

RefineResult maybe_refine(const SpectralField& state, double dt, const SolverConfig& cfg) {
    if (spectral_tail_ratio(state) > cfg.refine_threshold && state.grid.n < cfg.n_max) {
        return {pad_to(state, 2 * state.grid.n), 0.5 * dt, true};
    }
    return {state, dt, false};
}

Trajectory run_deterministic(const SolverConfig& cfg, const SpectralField& initial) {
    cfg.validate();
    if (initial.grid.n != cfg.n_init) {
        throw ConfigError("run_deterministic: initial resolution " +
                          std::to_string(initial.grid.n) + " != n_init " +
                          std::to_string(cfg.n_init));
    }

    Trajectory traj;
    SpectralField state = initial;
    state.time_tag = 0.0;
    double t = 0.0;
    double dt_cur = cfg.dt_init;
    std::size_t step_index = 0;

    std::vector<double> snaps;
    for (double s : cfg.snapshot_times) {
        if (s >= 0.0 && s <= cfg.t_end) snaps.push_back(s);
    }
    std::size_t snap_idx = 0;

    auto symbols = dissipation_symbols(state.grid, cfg.alpha, cfg.nu);

    auto record = [&](double dt_used) {
        DiagnosticRecord rec;
        rec.t = t;
        rec.enstrophy = enstrophy(state);
        rec.n_active = state.grid.n;
        rec.dt = dt_used;
        if (cfg.strip_stride > 0 && step_index % cfg.strip_stride == 0) {
            try {
                const StripFit fit = strip_fit(state, cfg.strip_floor, cfg.strip_k_lo);
                rec.delta = fit.delta;
                rec.delta_reliable = fit.reliable;
            } catch (const FitError&) {
                // not enough usable modes at this instant; leave delta absent
            }
        }
        traj.records.push_back(std::move(rec));
    };

    auto emit_due_snapshots = [&]() {
        while (snap_idx < snaps.size() && snaps[snap_idx] <= t + 1e-12) {
            SpectralField snap = state;
            snap.time_tag = snaps[snap_idx];
            traj.snapshots.push_back(std::move(snap));
            ++snap_idx;
        }
    };

    record(dt_cur);
    emit_due_snapshots();

    traj.termination = Termination::reached_t_end;
    while (t < cfg.t_end - 1e-12) {
        // marginal resolution: refine, or stop at the cap
        if (spectral_tail_ratio(state) > cfg.refine_threshold) {
            if (state.grid.n >= cfg.n_max) {
                traj.termination = Termination::resolution_exhausted;
                break;
            }
            auto refined = maybe_refine(state, dt_cur, cfg);
            state = std::move(refined.field);
            dt_cur = refined.dt;
            symbols = dissipation_symbols(state.grid, cfg.alpha, cfg.nu);
        }

        const double umax = max_abs_physical(state);
        double dt_step = dt_cur;
        if (umax > 0.0) dt_step = std::min(dt_step, cfg.cfl * state.grid.dx() / umax);
        if (dt_step < cfg.dt_min) {
            traj.termination = Termination::dt_underflow;
            break;
        }

        // step exactly onto the next snapshot time or the horizon
        double target = cfg.t_end;
        if (snap_idx < snaps.size()) target = std::min(target, snaps[snap_idx]);
        bool hit_event = false;
        if (t + dt_step >= target - 1e-12) {
            dt_step = target - t;
            hit_event = true;
        }

        try {
            state = detail::imex_step_custom(state, dt_step, symbols, nonlinear_term_into);
        } catch (const NumericalError&) {
            traj.termination = Termination::numerical_failure;
            break;
        }
        t = hit_event ? target : t + dt_step;
        state.time_tag = t;
        ++step_index;
        record(dt_step);
        emit_due_snapshots();
    }

    return traj;
}

}  // namespace fbe
