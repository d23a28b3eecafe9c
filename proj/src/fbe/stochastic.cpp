#include "fbe/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fbe/diagnostics.hpp"
#include "fbe/errors.hpp"
#include "fbe/operators.hpp"

namespace fbe {

WienerIncrement assemble_increment(std::span<const std::complex<double>> xi,
                                   std::span<const std::complex<double>> eta,
                                   double dt, bool colored) {
    if (xi.size() != eta.size()) throw ConfigError("assemble_increment: xi/eta size mismatch");
    if (!(dt > 0.0)) throw ConfigError("assemble_increment: dt must be positive");

    static const double kSqrt3Over6 = std::sqrt(3.0) / 6.0;
    const double root_dt = std::sqrt(dt);

    WienerIncrement inc;
    inc.dt = dt;
    inc.dw.resize(xi.size());
    inc.beta.resize(xi.size());
    for (std::size_t i = 0; i < xi.size(); ++i) {
        const double k = static_cast<double>(i + 1);
        const double color = std::numbers::sqrt2 / (2.0 * k);
        const double w = colored ? color : 1.0 / std::numbers::sqrt2;
        inc.dw[i] = root_dt * color * xi[i];
        inc.beta[i] = w * (0.5 * xi[i] + kSqrt3Over6 * eta[i]);
    }
    return inc;
}

WienerIncrement sample_increment(Rng& rng, double dt, std::size_t n_half, bool colored) {
    std::vector<std::complex<double>> xi(n_half), eta(n_half);
    for (std::size_t i = 0; i < n_half; ++i) {
        const double xi_sin = rng.normal();
        const double xi_cos = rng.normal();
        xi[i] = {xi_cos, -xi_sin};
        const double eta_sin = rng.normal();
        const double eta_cos = rng.normal();
        eta[i] = {eta_cos, -eta_sin};
    }
    return assemble_increment(xi, eta, dt, colored);
}

namespace detail {

SpectralField srk_step_custom(const SpectralField& state, double dt,
                              const WienerIncrement& inc, double rho,
                              const DriftFn& drift) {
    const std::size_t n_half = state.num_modes();
    const std::size_t n_forced = std::min(inc.dw.size(), n_half);
    const double root_dt = std::sqrt(dt);

    SpectralField f0(state.grid), q(state.grid), q_star(state.grid);
    drift(state, f0);

    for (std::size_t i = 0; i < n_half; ++i) {
        q.coeffs[i] = state.coeffs[i] + 0.5 * dt * f0.coeffs[i];
    }
    q_star = q;
    for (std::size_t i = 0; i < n_forced; ++i) {
        q_star.coeffs[i] += 1.5 * rho * root_dt * inc.beta[i];
    }

    SpectralField fq(state.grid), fq_star(state.grid);
    drift(q, fq);
    drift(q_star, fq_star);

    SpectralField out = state;
    for (std::size_t i = 0; i < n_half; ++i) {
        out.coeffs[i] += (dt / 3.0) * (fq.coeffs[i] + 2.0 * fq_star.coeffs[i]);
    }
    for (std::size_t i = 0; i < n_forced; ++i) {
        out.coeffs[i] += rho * inc.dw[i];
    }
    // The sine partner of the Nyquist mode vanishes at the collocation
    // points, so its imaginary part carries no physical content.
    out.coeffs[n_half - 1].imag(0.0);
    require_finite(out, "srk_step");
    return out;
}

}  // namespace detail

SpectralField srk_step(const SpectralField& state, double dt,
                       const WienerIncrement& inc, double rho,
                       const SolverConfig& cfg) {
    if (!(dt > 0.0)) throw ConfigError("srk_step: dt must be positive");
    if (inc.dt != dt) throw ConfigError("srk_step: increment drawn for a different dt");

    const auto symbols = dissipation_symbols(state.grid, cfg.alpha, cfg.nu);
    auto drift = [&symbols](const SpectralField& u, SpectralField& out) {
        nonlinear_term_into(u, out);
        for (std::size_t i = 0; i < u.coeffs.size(); ++i) {
            out.coeffs[i] += symbols[i] * u.coeffs[i];
        }
    };
    return detail::srk_step_custom(state, dt, inc, rho, drift);
}

Trajectory run_realization(const SolverConfig& cfg, const NoiseParams& noise,
                           std::uint64_t sample_index, const SpectralField& initial) {
    cfg.validate();
    if (initial.grid.n != cfg.n_init) {
        throw ConfigError("run_realization: initial resolution != n_init");
    }

    Rng rng(child_seed(noise.master_seed, sample_index));
    const std::size_t n_forced = noise.half_modes(initial.grid);
    const auto symbols = dissipation_symbols(initial.grid, cfg.alpha, cfg.nu);
    auto drift = [&symbols](const SpectralField& u, SpectralField& out) {
        nonlinear_term_into(u, out);
        for (std::size_t i = 0; i < u.coeffs.size(); ++i) {
            out.coeffs[i] += symbols[i] * u.coeffs[i];
        }
    };

    Trajectory traj;
    SpectralField state = initial;
    state.time_tag = 0.0;
    double t = 0.0;
    const double dt_fixed = cfg.dt_init;

    std::vector<double> snaps;
    for (double s : cfg.snapshot_times) {
        if (s >= 0.0 && s <= cfg.t_end) snaps.push_back(s);
    }
    std::size_t snap_idx = 0;

    auto record = [&](double dt_used) {
        traj.records.push_back(DiagnosticRecord{
            .t = t,
            .enstrophy = enstrophy(state),
            .delta = std::nullopt,  // stochastic solutions are not analytic in x
            .delta_reliable = false,
            .n_active = state.grid.n,
            .dt = dt_used,
        });
    };
    auto emit_due_snapshots = [&]() {
        while (snap_idx < snaps.size() && snaps[snap_idx] <= t + 1e-12) {
            SpectralField snap = state;
            snap.time_tag = snaps[snap_idx];
            traj.snapshots.push_back(std::move(snap));
            ++snap_idx;
        }
    };

    record(dt_fixed);
    emit_due_snapshots();

    traj.termination = Termination::reached_t_end;
    while (t < cfg.t_end - 1e-12) {
        if (spectral_tail_ratio(state) > cfg.tail_stop_threshold) {
            traj.termination = Termination::resolution_exhausted;
            break;
        }

        double dt_step = dt_fixed;
        double target = cfg.t_end;
        if (snap_idx < snaps.size()) target = std::min(target, snaps[snap_idx]);
        bool hit_event = false;
        if (t + dt_step >= target - 1e-12) {
            dt_step = target - t;
            hit_event = true;
        }

        const WienerIncrement inc =
            sample_increment(rng, dt_step, n_forced, noise.colored_stage_noise);
        try {
            state = detail::srk_step_custom(state, dt_step, inc, noise.rho, drift);
        } catch (const NumericalError&) {
            traj.termination = Termination::numerical_failure;
            break;
        }
        t = hit_event ? target : t + dt_step;
        state.time_tag = t;
        record(dt_step);
        emit_due_snapshots();
    }

    return traj;
}

}  // namespace fbe
