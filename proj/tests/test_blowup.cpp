#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "fbe/blowup.hpp"
#include "fbe/rng.hpp"

using namespace fbe;

namespace {

std::vector<SeriesPoint> synthetic_series(double c, double gamma, double t_star,
                                          double t0, double t1, std::size_t count) {
    std::vector<SeriesPoint> series(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double t = t0 + (t1 - t0) * static_cast<double>(i) /
                                  static_cast<double>(count - 1);
        series[i] = {t, c * std::pow(t_star - t, gamma)};
    }
    return series;
}

}  // namespace

TEST_SUITE("blowup_estimator") {

TEST_CASE("window plan covers the series and abuts the final sample") {
    auto plan = make_window_plan(200, 50, 10);
    CHECK(plan.count == 16);  // starts 0,10,...,150
    plan = make_window_plan(205, 50, 10);
    CHECK(plan.count == 17);  // extra clamped window at start 155
    CHECK_THROWS_AS(make_window_plan(40, 50, 10), ConfigError);
    CHECK_THROWS_AS(make_window_plan(100, 50, 0), ConfigError);
}

TEST_CASE("exact synthetic data is recovered in one window") {
    const auto series = synthetic_series(2.0, -0.7, 1.5, 0.0, 1.2, 120);
    BlowupFit guess;
    guess.c = series.back().y;
    guess.gamma = -1.0;
    guess.t_star = 1.44;
    const auto fit = fit_window(series, guess);
    CHECK(fit.c == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(fit.gamma == doctest::Approx(-0.7).epsilon(1e-6));
    CHECK(fit.t_star == doctest::Approx(1.5).epsilon(1e-6));
    CHECK(fit.objective < 1e-12);
    CHECK(fit.t_star_identifiable);
}

TEST_CASE("every sliding window reproduces the exact parameters") {
    const auto series = synthetic_series(2.0, -0.7, 1.5, 0.0, 1.2, 200);
    const auto fits = sliding_estimate(series, make_window_plan(200, 50, 10));
    REQUIRE(fits.size() == 16);
    for (const auto& f : fits) {
        CHECK(f.t_star == doctest::Approx(1.5).epsilon(1e-6));
        CHECK(f.gamma == doctest::Approx(-0.7).epsilon(1e-6));
        CHECK(f.objective <= 1e-12);
    }
}

TEST_CASE("one percent multiplicative noise still locates the blow-up time") {
    auto series = synthetic_series(2.0, -0.7, 1.5, 0.0, 1.2, 500);
    Rng rng(2025);
    for (auto& p : series) p.y *= 1.0 + 0.01 * rng.normal();
    const auto fits = sliding_estimate(series, make_window_plan(500, 400, 80));
    CHECK(std::abs(fits.back().t_star - 1.5) < 1e-2);
}

TEST_CASE("constant series leaves t_star unidentifiable with near-zero objective") {
    std::vector<SeriesPoint> series;
    for (int i = 0; i < 80; ++i) series.push_back({0.01 * i, 3.0});
    BlowupFit guess;
    guess.c = 3.0;
    guess.gamma = -1.0;
    guess.t_star = 1.2;
    const auto fit = fit_window(series, guess);
    CHECK(std::abs(fit.gamma) < 1e-6);
    CHECK(fit.objective < 1e-12);
    CHECK_FALSE(fit.t_star_identifiable);
}

TEST_CASE("invalid inputs raise domain errors") {
    auto series = synthetic_series(2.0, -0.7, 1.5, 0.0, 1.2, 50);
    BlowupFit guess;
    guess.t_star = 1.4;

    auto bad = series;
    bad[10].y = 0.0;
    CHECK_THROWS_AS(fit_window(bad, guess), std::domain_error);

    guess.t_star = 1.0;  // inside the sampled range
    CHECK_THROWS_AS(fit_window(series, guess), std::domain_error);
}

TEST_CASE("time shift moves t_star by exactly the shift") {
    const auto series = synthetic_series(1.3, -0.9, 2.0, 0.5, 1.7, 150);
    auto shifted = series;
    const double s = 10.0;
    for (auto& p : shifted) p.t += s;

    BlowupFit guess;
    guess.c = series.back().y;
    guess.gamma = -1.0;
    guess.t_star = 1.9;
    const auto f0 = fit_window(series, guess);
    guess.t_star = 1.9 + s;
    const auto f1 = fit_window(shifted, guess);
    CHECK(f1.t_star - f0.t_star == doctest::Approx(s).epsilon(1e-9));
    CHECK(f1.gamma == doctest::Approx(f0.gamma).epsilon(1e-8));
}

TEST_CASE("scaling the series rescales only the amplitude") {
    const auto series = synthetic_series(1.3, -0.9, 2.0, 0.5, 1.7, 150);
    auto scaled = series;
    for (auto& p : scaled) p.y *= 40.0;

    BlowupFit guess;
    guess.c = series.back().y;
    guess.gamma = -1.0;
    guess.t_star = 2.1;
    const auto f0 = fit_window(series, guess);
    const auto f1 = fit_window(scaled, guess);
    CHECK(f1.c == doctest::Approx(40.0 * f0.c).epsilon(1e-9));
    CHECK(f1.gamma == doctest::Approx(f0.gamma).epsilon(1e-10));
    CHECK(f1.t_star == doctest::Approx(f0.t_star).epsilon(1e-10));
}

TEST_CASE("positive-exponent series (strip width analogue) fits cleanly") {
    // y = c (t_star - t)^gamma with gamma > 0, decreasing toward blow-up
    const auto series = synthetic_series(0.8, 1.5, 1.3, 0.0, 1.1, 120);
    const auto fits = sliding_estimate(series, make_window_plan(120, 40, 10));
    CHECK(fits.back().t_star == doctest::Approx(1.3).epsilon(1e-6));
    CHECK(fits.back().gamma == doctest::Approx(1.5).epsilon(1e-6));
}

TEST_CASE("limiting blow-up times") {
    CHECK(limit_blowup_inviscid(-1.0).value() == doctest::Approx(1.0));
    CHECK(limit_blowup_inviscid(-2.0).value() == doctest::Approx(0.5));
    CHECK(limit_blowup_inviscid(-0.5).value() == doctest::Approx(2.0));
    CHECK_FALSE(limit_blowup_inviscid(0.3).has_value());
    CHECK_FALSE(limit_blowup_inviscid(0.0).has_value());

    // nu = 0.11, slope -1: -(1/0.11) ln(0.89) = 1.0594 to four significant figures
    const auto t1 = limit_blowup_alpha_zero(0.11, -1.0);
    REQUIRE(t1.has_value());
    CHECK(*t1 == doctest::Approx(-std::log(0.89) / 0.11).epsilon(1e-15));
    CHECK(*t1 == doctest::Approx(1.0594).epsilon(5e-5));

    // vanishing viscosity recovers the inviscid value
    CHECK(limit_blowup_alpha_zero(1e-8, -1.0).value() == doctest::Approx(1.0).epsilon(1e-6));

    // condition boundary: no blow-up when min g' + nu >= 0
    CHECK_FALSE(limit_blowup_alpha_zero(2.0, -1.0).has_value());
    CHECK_THROWS_AS(limit_blowup_alpha_zero(-1.0, -1.0), ConfigError);
}

}  // TEST_SUITE
