#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "fbe/deterministic.hpp"
#include "fbe/diagnostics.hpp"
#include "fbe/errors.hpp"
#include "fbe/field.hpp"
#include "oracles.hpp"

using namespace fbe;
using fbe::testing::random_band_limited;

namespace {

/// |hat_u_k| = c * k^a * exp(-d k) with real positive coefficients.
SpectralField ansatz_field(GridSpec grid, double c, double a, double d) {
    SpectralField field(grid);
    for (std::size_t k = 1; k <= grid.num_modes(); ++k) {
        const double kd = static_cast<double>(k);
        field.mode(k) = {c * std::pow(kd, a) * std::exp(-d * kd), 0.0};
    }
    return field;
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("enstrophy of sin(x) is pi^2") {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    CHECK(enstrophy(sine_field(GridSpec(64))) == doctest::Approx(pi2).epsilon(1e-14));
    CHECK(enstrophy(SpectralField{GridSpec(64)}) == 0.0);

    SpectralField f(GridSpec(64));
    f.mode(2) = {0.0, -0.5};  // sin(2x)
    CHECK(enstrophy(f) == doctest::Approx(4.0 * pi2).epsilon(1e-14));
}

TEST_CASE("enstrophy equals the physical-space quadrature of the derivative") {
    GridSpec grid(256);
    Rng rng(13);
    const auto f = random_band_limited(grid, 40, rng);

    SpectralField dudx(grid);
    for (std::size_t k = 1; k <= f.num_modes(); ++k) {
        dudx.mode(k) = std::complex<double>{0.0, static_cast<double>(k)} * f.mode(k);
    }
    const auto values = inverse_transform(dudx);
    double quad = 0.0;
    for (double v : values) quad += v * v;
    quad *= std::numbers::pi * kTwoPi / static_cast<double>(grid.n);

    CHECK(enstrophy(f) == doctest::Approx(quad).epsilon(1e-10));
}

TEST_CASE("strip fit recovers an exact ansatz to high precision") {
    const auto field = ansatz_field(GridSpec(1024), 3.0, -1.2, 0.05);
    const auto fit = strip_fit(field);
    CHECK(fit.delta == doctest::Approx(0.05).epsilon(1e-10));
    CHECK(fit.alpha_tilde == doctest::Approx(-1.2).epsilon(1e-10));
    CHECK(fit.c_amp == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(fit.residual < 1e-10);
    CHECK(fit.reliable);
}

TEST_CASE("pure exponential spectrum gives delta=1, order zero, unit amplitude") {
    const auto field = ansatz_field(GridSpec(256), 1.0, 0.0, 1.0);
    const auto fit = strip_fit(field);
    CHECK(fit.delta == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(fit.alpha_tilde == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
    CHECK(fit.c_amp == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("strip fit is scale-equivariant") {
    const auto base = ansatz_field(GridSpec(512), 2.0, -0.8, 0.1);
    auto scaled = base;
    for (auto& c : scaled.coeffs) c *= 7.5;
    const auto f0 = strip_fit(base);
    const auto f1 = strip_fit(scaled);
    CHECK(f1.c_amp == doctest::Approx(7.5 * f0.c_amp).epsilon(1e-12));
    CHECK(f1.alpha_tilde == doctest::Approx(f0.alpha_tilde).epsilon(1e-12));
    CHECK(f1.delta == doctest::Approx(f0.delta).epsilon(1e-12));
}

TEST_CASE("strip fit does not depend on k_lo inside the valid band") {
    const auto field = ansatz_field(GridSpec(512), 1.5, -2.0, 0.08);
    const auto a = strip_fit(field, 1e-14, 4);
    const auto b = strip_fit(field, 1e-14, 8);
    CHECK(a.delta == doctest::Approx(b.delta).epsilon(1e-9));
    CHECK(a.alpha_tilde == doctest::Approx(b.alpha_tilde).epsilon(1e-8));
}

TEST_CASE("too few usable modes is a degenerate fit") {
    SpectralField field(GridSpec(64));
    field.mode(1) = {1.0, 0.0};
    field.mode(2) = {0.5, 0.0};
    CHECK_THROWS_AS(strip_fit(field), FitError);  // k_lo = 4 exceeds the content
    CHECK_THROWS_AS(strip_fit(SpectralField{GridSpec(64)}), FitError);
    CHECK_THROWS_AS(strip_fit(field, -1.0, 1), ConfigError);
}

TEST_CASE("reliability flags shallow or narrow fits") {
    // delta below three grid spacings
    GridSpec grid(128);
    const double shallow = 1.0 * grid.dx();
    const auto f = ansatz_field(grid, 1.0, 0.0, shallow);
    const auto fit = strip_fit(f);
    CHECK(fit.delta == doctest::Approx(shallow).epsilon(1e-8));
    CHECK_FALSE(fit.reliable);

    // fewer than 8 modes in the band
    SpectralField narrow(grid);
    for (std::size_t k = 1; k <= 9; ++k) {
        narrow.mode(k) = {std::exp(-1.0 * static_cast<double>(k)), 0.0};
    }
    const auto nfit = strip_fit(narrow);  // usable modes: 4..9 (six of them)
    CHECK_FALSE(nfit.reliable);
}

}  // TEST_SUITE

TEST_CASE("strip width bottoms out when the front is steepest") {
    // subcritical run: the enstrophy maximum and the strip-width minimum
    // mark the same steep-front episode
    SolverConfig cfg;
    cfg.alpha = 0.6;
    cfg.nu = 0.11;
    // the reliability floor 3*dx admits the front episode only from 2^12 up
    cfg.n_init = cfg.n_max = 4096;
    cfg.dt_init = 1e-3;
    cfg.t_end = 2.2;
    cfg.strip_stride = 4;
    cfg.refine_threshold = 1e-3;  // fixed-grid tolerance for the marginal front
    const auto traj = run_deterministic(cfg, sine_field(GridSpec(4096)));
    REQUIRE(traj.termination == Termination::reached_t_end);

    double e_max = 0.0, t_at_emax = 0.0, d_min = 1e300, t_at_dmin = 0.0;
    for (const auto& rec : traj.records) {
        if (rec.enstrophy > e_max) {
            e_max = rec.enstrophy;
            t_at_emax = rec.t;
        }
        // timing uses every fitted delta: at this resolution the front dips
        // marginally below the conservative 3*dx reliability floor
        if (rec.delta && *rec.delta < d_min) {
            d_min = *rec.delta;
            t_at_dmin = rec.t;
        }
    }
    CHECK(std::abs(t_at_dmin - t_at_emax) < 0.1);
    CHECK(std::abs(t_at_emax - 1.71) < 0.1);
    CHECK(d_min > 0.0);
}
