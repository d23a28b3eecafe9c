#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fbe/errors.hpp"

namespace fbe {

/// One sample of a positive diagnostic time series.
struct SeriesPoint {
    double t = 0.0;
    double y = 0.0;
};

/// Sliding-window layout over a sampled series: K windows of window_len
/// points, advancing by stride, with the last window ending at the final
/// sample.
struct WindowPlan {
    std::size_t window_len = 50;
    std::size_t stride = 10;
    std::size_t count = 0;

    bool operator==(const WindowPlan&) const = default;
};

/// Derives the window count for a series of `size` samples; the final
/// window is clamped so it abuts the last sample.
WindowPlan make_window_plan(std::size_t size, std::size_t window_len = 50,
                            std::size_t stride = 10);

/// Local power-law fit y ~ c (t_star - t)^gamma on one window, minimizing
/// the squared log-residuals.
struct BlowupFit {
    double c = 0.0;
    double gamma = 0.0;
    double t_star = 0.0;
    double objective = 0.0;
    double window_center = 0.0;
    /// false when the objective is flat in t_star (e.g. constant series)
    bool t_star_identifiable = true;
};

/// Fit failure carrying the best iterate found before giving up.
class BlowupFitFailure : public FitError {
public:
    BlowupFitFailure(const std::string& msg, BlowupFit best_so_far)
        : FitError(msg), best(best_so_far) {}
    BlowupFit best;
};

/// Minimizes sum_i [ln(c (t_star - t_i)^gamma / y_i)]^2 over (c, gamma,
/// t_star) with t_star constrained above the last sample time. For fixed
/// t_star the problem is linear in (ln c, gamma), so the search runs on
/// t_star alone with the linear pair eliminated exactly.
///
/// Throws std::domain_error for non-positive y_i or a guess with t_star
/// inside the sampled range; BlowupFitFailure when the iteration budget is
/// exhausted.
BlowupFit fit_window(std::span<const SeriesPoint> series,
                     const BlowupFit& guess);

/// Warm-started sweep over the plan's windows: each window's fit seeds the
/// next. The last element's t_star is the blow-up time estimate. When no
/// guess is given the first window starts from (y_last, -1, t_last +
/// 0.2*span).
std::vector<BlowupFit> sliding_estimate(std::span<const SeriesPoint> series,
                                        const WindowPlan& plan,
                                        std::optional<BlowupFit> guess = {});

/// Shock formation time -1/min_x g'(x) of the zero-dissipation problem;
/// empty when the initial slope is nowhere negative.
std::optional<double> limit_blowup_inviscid(double g_min_slope);

/// Singularity time -(1/nu) ln(nu / min_x g'(x) + 1) of the alpha -> 0
/// problem; empty when min g' + nu >= 0 (no blow-up).
std::optional<double> limit_blowup_alpha_zero(double nu, double g_min_slope);

}  // namespace fbe
