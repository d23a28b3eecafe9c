#include "fbe/blowup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fbe {

WindowPlan make_window_plan(std::size_t size, std::size_t window_len, std::size_t stride) {
    if (window_len < 4) throw ConfigError("window_len must be at least 4");
    if (stride == 0) throw ConfigError("stride must be positive");
    if (size < window_len) {
        throw ConfigError("series too short: " + std::to_string(size) + " < window_len " +
                          std::to_string(window_len));
    }
    WindowPlan plan{window_len, stride, 0};
    const std::size_t last_start = size - window_len;
    plan.count = last_start / stride + 1;
    if (last_start % stride != 0) ++plan.count;  // extra window clamped to the end
    return plan;
}

namespace {

struct LinearPair {
    double ln_c = 0.0;
    double gamma = 0.0;
    double sse = 0.0;
};

// For fixed t_star, (ln c, gamma) solve an ordinary linear regression of
// ln y against ln(t_star - t).
LinearPair profile_linear(std::span<const SeriesPoint> series, double t_star) {
    const double m = static_cast<double>(series.size());
    double sl = 0.0, sy = 0.0;
    for (const auto& p : series) {
        sl += std::log(t_star - p.t);
        sy += std::log(p.y);
    }
    const double lbar = sl / m, ybar = sy / m;
    double sll = 0.0, sly = 0.0;
    for (const auto& p : series) {
        const double dl = std::log(t_star - p.t) - lbar;
        const double dy = std::log(p.y) - ybar;
        sll += dl * dl;
        sly += dl * dy;
    }
    LinearPair out;
    out.gamma = sll > 0.0 ? sly / sll : 0.0;
    out.ln_c = ybar - out.gamma * lbar;
    double sse = 0.0;
    for (const auto& p : series) {
        const double r = out.ln_c + out.gamma * std::log(t_star - p.t) - std::log(p.y);
        sse += r * r;
    }
    out.sse = sse;
    return out;
}

constexpr std::size_t kMaxEvals = 500;
constexpr double kGoldenRatio = 0.6180339887498949;

}  // namespace

BlowupFit fit_window(std::span<const SeriesPoint> series, const BlowupFit& guess) {
    if (series.size() < 4) throw ConfigError("fit_window: need at least 4 samples");
    double t_last = -std::numeric_limits<double>::infinity();
    double t_first = std::numeric_limits<double>::infinity();
    for (const auto& p : series) {
        if (!(p.y > 0.0)) {
            throw std::domain_error("fit_window: series values must be positive");
        }
        t_last = std::max(t_last, p.t);
        t_first = std::min(t_first, p.t);
    }
    const double span = std::max(t_last - t_first, 1e-12);
    const double eps = 1e-6 * span;
    if (!(guess.t_star > t_last)) {
        throw std::domain_error("fit_window: guess t_star must exceed the last sample time");
    }

    // t_star = t_last + eps + e^q keeps the log argument positive
    const double q_cap = std::log(100.0 * span);
    auto q_to_tstar = [&](double q) { return t_last + eps + std::exp(q); };

    std::size_t evals = 0;
    auto phi = [&](double q) {
        ++evals;
        return profile_linear(series, q_to_tstar(q)).sse;
    };

    double q0 = std::log(std::max(guess.t_star - t_last - eps, 1e-3 * span));
    q0 = std::min(q0, q_cap);

    // bracket a minimum around the warm start
    const double h = 0.5;
    double a = q0 - h, b = q0, c = q0 + h;
    double fa = phi(a), fb = phi(b), fc = phi(c);
    bool capped_high = false;
    while (fc < fb && evals < kMaxEvals) {
        a = b; fa = fb;
        b = c; fb = fc;
        c = b + (b - a) * 2.0;
        if (c >= q_cap) {
            c = q_cap;
            fc = phi(c);
            if (fc < fb) capped_high = true;
            break;
        }
        fc = phi(c);
    }
    while (fa < fb && evals < kMaxEvals) {
        c = b; fc = fb;
        b = a; fb = fa;
        a = b - (c - b) * 2.0;
        fa = phi(a);
    }

    const BlowupFit best_so_far = [&] {
        const double q_best = capped_high ? q_cap : b;
        const double ts = q_to_tstar(q_best);
        const LinearPair lp = profile_linear(series, ts);
        BlowupFit fit;
        fit.c = std::exp(lp.ln_c);
        fit.gamma = lp.gamma;
        fit.t_star = ts;
        fit.objective = lp.sse;
        fit.window_center = 0.5 * (t_first + t_last);
        return fit;
    }();

    if (evals >= kMaxEvals) {
        throw BlowupFitFailure("fit_window: iteration budget exhausted while bracketing",
                               best_so_far);
    }

    double q_hat;
    if (capped_high) {
        q_hat = q_cap;  // objective still decreasing at the cap: t_star unidentifiable
    } else {
        // golden-section refinement on [a, c]
        double x1 = c - kGoldenRatio * (c - a);
        double x2 = a + kGoldenRatio * (c - a);
        double f1 = phi(x1), f2 = phi(x2);
        while (std::abs(c - a) > 1e-10 && evals < kMaxEvals) {
            if (f1 < f2) {
                c = x2;
                x2 = x1; f2 = f1;
                x1 = c - kGoldenRatio * (c - a);
                f1 = phi(x1);
            } else {
                a = x1;
                x1 = x2; f1 = f2;
                x2 = a + kGoldenRatio * (c - a);
                f2 = phi(x2);
            }
        }
        q_hat = f1 < f2 ? x1 : x2;
    }

    const double t_star = q_to_tstar(q_hat);
    const LinearPair lp = profile_linear(series, t_star);

    BlowupFit fit;
    fit.c = std::exp(lp.ln_c);
    fit.gamma = lp.gamma;
    fit.t_star = t_star;
    fit.objective = lp.sse;
    fit.window_center = 0.5 * (t_first + t_last);

    // flat objective in t_star (constant series, or minimum pushed to the
    // cap) means the blow-up time is not identifiable from this window
    const double dq = 1e-4;
    const double curv =
        (phi(q_hat + dq) + phi(q_hat - dq) - 2.0 * lp.sse) / (dq * dq);
    fit.t_star_identifiable = !capped_high && curv > 1e-10 * std::max(1.0, lp.sse);

    if (evals >= kMaxEvals && !capped_high) {
        throw BlowupFitFailure("fit_window: iteration budget exhausted", fit);
    }
    return fit;
}

std::vector<BlowupFit> sliding_estimate(std::span<const SeriesPoint> series,
                                        const WindowPlan& plan,
                                        std::optional<BlowupFit> guess) {
    if (plan.count == 0 || series.size() < plan.window_len) {
        throw ConfigError("sliding_estimate: plan does not fit the series");
    }
    for (std::size_t i = 1; i < series.size(); ++i) {
        if (!(series[i].t > series[i - 1].t)) {
            throw ConfigError("sliding_estimate: series times must be strictly increasing");
        }
    }

    BlowupFit warm;
    if (guess) {
        warm = *guess;
    } else {
        const double t_first = series.front().t;
        const double t_last = series.back().t;
        warm.c = series.back().y;
        warm.gamma = -1.0;
        warm.t_star = t_last + 0.2 * std::max(t_last - t_first, 1e-12);
    }

    const std::size_t last_start = series.size() - plan.window_len;
    std::vector<BlowupFit> fits;
    fits.reserve(plan.count);
    for (std::size_t j = 0; j < plan.count; ++j) {
        const std::size_t start = std::min(j * plan.stride, last_start);
        auto window = series.subspan(start, plan.window_len);
        // the warm t_star can sit inside later windows; push it past the end
        if (warm.t_star <= window.back().t) {
            warm.t_star = window.back().t +
                          0.05 * std::max(window.back().t - window.front().t, 1e-12);
        }
        try {
            warm = fit_window(window, warm);
        } catch (const BlowupFitFailure& e) {
            throw BlowupFitFailure("window " + std::to_string(j) + ": " + e.what(), e.best);
        }
        fits.push_back(warm);
    }
    return fits;
}

std::optional<double> limit_blowup_inviscid(double g_min_slope) {
    if (!(g_min_slope < 0.0)) return std::nullopt;
    return -1.0 / g_min_slope;
}

std::optional<double> limit_blowup_alpha_zero(double nu, double g_min_slope) {
    if (!(nu > 0.0)) throw ConfigError("limit_blowup_alpha_zero: nu must be positive");
    if (!(g_min_slope + nu < 0.0)) return std::nullopt;
    return -std::log(nu / g_min_slope + 1.0) / nu;
}

}  // namespace fbe
