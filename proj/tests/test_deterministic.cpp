#include <doctest.h>

#include <cmath>
#include <complex>

#include "fbe/blowup.hpp"
#include "fbe/deterministic.hpp"
#include "fbe/diagnostics.hpp"
#include "fbe/errors.hpp"
#include "fbe/operators.hpp"
#include "oracles.hpp"

using namespace fbe;
using fbe::testing::loglog_slope;
using fbe::testing::random_band_limited;
using fbe::testing::viscous_burgers_exact;
using fbe::testing::viscous_burgers_exact_quadrature;

namespace {

const detail::AdvectionFn kNoAdvection = [](const SpectralField&, SpectralField& out) {
    for (auto& c : out.coeffs) c = {0.0, 0.0};
};

SolverConfig classic_config(std::size_t n) {
    SolverConfig cfg;
    cfg.alpha = 1.0;
    cfg.nu = 0.11;
    cfg.n_init = n;
    cfg.n_max = n;
    return cfg;
}

}  // namespace

TEST_SUITE("deterministic_solver") {

TEST_CASE("one hybrid step is third-order on the linear problem") {
    GridSpec grid(16);
    const auto symbols = dissipation_symbols(grid, 1.0, 0.11);

    std::vector<double> dts{1e-2, 5e-3, 2.5e-3};
    std::vector<double> errs;
    for (double dt : dts) {
        const auto stepped = detail::imex_step_custom(sine_field(grid), dt, symbols, kNoAdvection);
        const double exact = 0.5 * std::exp(-0.11 * dt);
        errs.push_back(std::abs(std::abs(stepped.mode(1)) - exact));
    }
    const double slope = loglog_slope(dts, errs);
    CHECK(slope > 2.7);
    CHECK(slope < 3.3);
    // halving dt cuts the one-step error about eightfold
    CHECK(errs[0] / errs[1] == doctest::Approx(8.0).epsilon(0.15));
}

TEST_CASE("zero field steps to zero field") {
    const SolverConfig cfg = classic_config(32);
    const auto out = imex_step(SpectralField{GridSpec(32)}, 1e-3, cfg);
    for (const auto& c : out.coeffs) CHECK(c == std::complex<double>{0.0, 0.0});
}

TEST_CASE("solution matches the heat-substitution closed form") {
    // smaller sibling of the acceptance check: N=128, t=0.25
    SolverConfig cfg = classic_config(128);
    cfg.dt_init = 5e-4;
    cfg.t_end = 0.25;
    cfg.snapshot_times = {0.25};
    const auto traj = run_deterministic(cfg, sine_field(GridSpec(128)));
    REQUIRE(traj.snapshots.size() == 1);
    const auto u = inverse_transform(traj.snapshots.front());
    double err = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        err = std::max(err, std::abs(u[j] - viscous_burgers_exact(0.11, 0.25,
                                                                  GridSpec(128).point(j))));
    }
    CHECK(err < 1e-7);
}

TEST_CASE("spatial error vs the closed form decays spectrally") {
    // lower viscosity sharpens the front so truncation dominates below n=256
    std::vector<double> errs;
    for (std::size_t n : {64u, 128u, 256u}) {
        SolverConfig cfg = classic_config(n);
        cfg.nu = 0.02;
        cfg.dt_init = 2e-4;
        cfg.t_end = 1.0;
        cfg.snapshot_times = {1.0};
        cfg.refine_threshold = 2.0;  // fixed-grid study: never stop on the tail
        const auto traj = run_deterministic(cfg, sine_field(GridSpec(n)));
        REQUIRE(traj.snapshots.size() == 1);
        const auto u = inverse_transform(traj.snapshots.front());
        double err = 0.0;
        for (std::size_t j = 0; j < u.size(); ++j) {
            err = std::max(err, std::abs(u[j] - viscous_burgers_exact_quadrature(
                                                    0.02, 1.0, GridSpec(n).point(j))));
        }
        errs.push_back(err);
    }
    CHECK(errs[1] < 0.05 * errs[0]);  // far faster than any low-order rate
    CHECK(errs[2] < 0.05 * errs[1]);
    CHECK(errs[2] < 1e-5);
}

TEST_CASE("refinement trigger cases") {
    SolverConfig cfg = classic_config(64);
    cfg.n_max = 256;

    SpectralField quiet{GridSpec(64)};
    quiet.mode(1) = {1.0, 0.0};
    quiet.mode(30) = {1e-16, 0.0};
    auto res = maybe_refine(quiet, 1e-3, cfg);
    CHECK_FALSE(res.refined);
    CHECK(res.field.grid.n == 64);
    CHECK(res.dt == 1e-3);

    SpectralField loud = quiet;
    loud.mode(30) = {1e-10, 0.0};
    res = maybe_refine(loud, 1e-3, cfg);
    CHECK(res.refined);
    CHECK(res.field.grid.n == 128);
    CHECK(res.dt == 0.5e-3);
    CHECK(res.field.mode(30) == std::complex<double>{1e-10, 0.0});
    for (std::size_t k = 33; k <= 64; ++k) {
        CHECK(res.field.mode(k) == std::complex<double>{0.0, 0.0});
    }

    cfg.n_max = 64;  // already at the cap: unchanged
    res = maybe_refine(loud, 1e-3, cfg);
    CHECK_FALSE(res.refined);
    CHECK(res.field.grid.n == 64);
}

TEST_CASE("capped loud tail terminates with resolution_exhausted") {
    SolverConfig cfg = classic_config(16);
    cfg.t_end = 1.0;
    SpectralField initial{GridSpec(16)};
    initial.mode(1) = {0.5, 0.0};
    initial.mode(7) = {1e-8, 0.0};
    const auto traj = run_deterministic(cfg, initial);
    CHECK(traj.termination == Termination::resolution_exhausted);
    CHECK(traj.records.back().t < 1.0);
}

TEST_CASE("zero initial data yields the zero trajectory to t_end") {
    SolverConfig cfg = classic_config(32);
    cfg.alpha = 0.3;
    cfg.t_end = 0.5;
    cfg.dt_init = 1e-2;
    const auto traj = run_deterministic(cfg, SpectralField{GridSpec(32)});
    CHECK(traj.termination == Termination::reached_t_end);
    for (const auto& rec : traj.records) CHECK(rec.enstrophy == 0.0);
    CHECK(traj.records.back().t == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("records are strictly increasing in time") {
    SolverConfig cfg = classic_config(64);
    cfg.t_end = 0.1;
    cfg.dt_init = 1e-3;
    cfg.snapshot_times = {0.0333, 0.05, 0.1};
    const auto traj = run_deterministic(cfg, sine_field(GridSpec(64)));
    for (std::size_t i = 1; i < traj.records.size(); ++i) {
        CHECK(traj.records[i].t > traj.records[i - 1].t);
    }
    REQUIRE(traj.snapshots.size() == 3);
    CHECK(traj.snapshots[0].time_tag == 0.0333);
    CHECK(traj.snapshots[1].time_tag == 0.05);
    CHECK(traj.snapshots[2].time_tag == 0.1);
}

TEST_CASE("refining a well-resolved field does not change the step") {
    // well-resolved: sharply decaying spectrum, so the mode cascade the
    // coarse grid truncates is below the comparison tolerance
    GridSpec coarse(64);
    Rng rng(31);
    SpectralField field(coarse);
    for (std::size_t k = 1; k <= field.num_modes(); ++k) {
        field.mode(k) = std::exp(-0.4 * static_cast<double>(k)) *
                        std::complex<double>{rng.normal(), rng.normal()};
    }
    SolverConfig cfg = classic_config(64);
    const auto stepped_coarse = imex_step(field, 1e-4, cfg);

    SolverConfig cfg_fine = classic_config(128);
    const auto stepped_fine = imex_step(pad_to(field, 128), 1e-4, cfg_fine);

    CHECK(enstrophy(stepped_coarse) ==
          doctest::Approx(enstrophy(stepped_fine)).epsilon(1e-10));
    // the coarse Nyquist mode is zeroed by the dealiasing hygiene rule and
    // is not comparable across resolutions
    for (std::size_t k = 1; k < stepped_coarse.num_modes(); ++k) {
        CHECK(std::abs(stepped_coarse.mode(k) - stepped_fine.mode(k)) < 1e-10);
    }
}

TEST_CASE("supercritical run grows enstrophy past tenfold before the cap") {
    // growth at the stop is resolution-limited; the tenfold mark needs 2^16
    SolverConfig cfg;
    cfg.alpha = 0.4;
    cfg.nu = 0.11;
    cfg.n_init = 512;
    cfg.n_max = 65536;
    cfg.dt_init = 1e-3;
    cfg.t_end = 4.0;
    const auto traj = run_deterministic(cfg, sine_field(GridSpec(512)));
    CHECK(traj.termination == Termination::resolution_exhausted);
    CHECK(traj.records.back().enstrophy > 10.0 * traj.records.front().enstrophy);
}

TEST_CASE("dt underflow stops the run") {
    SolverConfig cfg = classic_config(32);
    cfg.dt_init = 1e-3;
    cfg.dt_min = 1e-2;  // force the guard immediately
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.dt_min = 0.5e-3;
    cfg.cfl = 1e-6;  // CFL cap drives the effective step below dt_min
    cfg.t_end = 1.0;
    const auto traj = run_deterministic(cfg, sine_field(GridSpec(32)));
    CHECK(traj.termination == Termination::dt_underflow);
}

}  // TEST_SUITE

TEST_SUITE("deterministic_solver_integration") {

TEST_CASE("globally well-posed runs never exhaust the refinement cap" *
          doctest::timeout(300)) {
    // alpha above one half: the ladder may reach the cap but the solution
    // stays resolved through the steep-front episode and runs to t_end
    SolverConfig cfg;
    cfg.alpha = 0.6;
    cfg.nu = 0.11;
    cfg.n_init = 512;
    cfg.n_max = 16384;
    cfg.dt_init = 1e-3;
    cfg.t_end = 2.0;
    const auto traj = run_deterministic(cfg, sine_field(GridSpec(512)));
    CHECK(traj.termination == Termination::reached_t_end);
    CHECK(traj.records.back().t == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("supercritical diagnostics: delta shrinks and the estimate settles") {
    SolverConfig cfg;
    cfg.alpha = 0.4;
    cfg.nu = 0.11;
    cfg.n_init = 512;
    cfg.n_max = 4096;
    cfg.dt_init = 1e-3;
    cfg.t_end = 4.0;
    cfg.strip_stride = 2;
    const auto traj = run_deterministic(cfg, sine_field(GridSpec(512)));
    REQUIRE(traj.termination == Termination::resolution_exhausted);

    // strip width decreases monotonically (up to fit noise) until
    // reliability is lost
    std::vector<SeriesPoint> deltas;
    for (const auto& rec : traj.records) {
        if (rec.delta && rec.delta_reliable && *rec.delta > 0.0) {
            deltas.push_back({rec.t, *rec.delta});
        }
    }
    REQUIRE(deltas.size() > 100);
    std::size_t decreases = 0;
    for (std::size_t i = 1; i < deltas.size(); ++i) {
        if (deltas[i].y < deltas[i - 1].y) ++decreases;
    }
    CHECK(static_cast<double>(decreases) / static_cast<double>(deltas.size() - 1) > 0.9);
    CHECK(deltas.back().y < 0.05 * deltas.front().y);

    // successive windows of the enstrophy fit agree near the end of data
    std::vector<SeriesPoint> series;
    for (const auto& rec : traj.records) {
        if (rec.enstrophy > 0.0) series.push_back({rec.t, rec.enstrophy});
    }
    const auto fits = sliding_estimate(series, make_window_plan(series.size(), 50, 10));
    REQUIRE(fits.size() >= 3);
    const double last_change =
        std::abs(fits[fits.size() - 1].t_star - fits[fits.size() - 2].t_star);
    CHECK(last_change < 1e-3);
    CHECK(fits.back().t_star > series.back().t);
}

}  // TEST_SUITE
