#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fbe/field.hpp"

namespace fbe {

/// First four sample moments with population (1/m) normalization.
/// sigma is the square root of the (1/m) variance; skew and kurt use the
/// sigma-standardized residuals. When every sample is equal, sigma is zero
/// and skew/kurt are undefined (degenerate = true, values NaN).
struct MomentSet {
    double mu = 0.0;
    double sigma = 0.0;
    double skew = 0.0;
    double kurt = 0.0;
    std::size_t m_used = 0;
    bool degenerate = false;
};

MomentSet moments(std::span<const double> samples);

/// Relative error |X_m - X_M| / |X_M| of the running moment estimates
/// against the all-sample value. Entries where the estimate is undefined
/// are NaN; `valid` is false for a moment whose all-sample value is zero
/// (curve undefined).
struct RunningErrors {
    std::vector<double> mu, sigma, skew, kurt;
    bool mu_valid = true, sigma_valid = true, skew_valid = true, kurt_valid = true;
};

RunningErrors running_errors(std::span<const double> samples);

enum class Statistic { mean, stddev, skewness, kurtosis };

/// Percentile bootstrap interval from b resamples with replacement;
/// deterministic for a given seed.
std::pair<double, double> bootstrap_ci(std::span<const double> samples,
                                       Statistic statistic, double level,
                                       std::size_t b, std::uint64_t seed);

/// Normalized 1D histogram (Riemann sum over bins equals one).
struct Histogram {
    std::vector<double> edges;    ///< size bins+1
    std::vector<double> density;  ///< size bins
};

/// bins == 0 selects Freedman-Diaconis binning.
Histogram histogram_pdf(std::span<const double> samples, std::size_t bins = 0);

/// Normalized 2D histogram; density is row-major over x bins.
struct Histogram2d {
    std::vector<double> x_edges, y_edges;
    std::vector<double> density;
};

Histogram2d joint_pdf(std::span<const double> xs, std::span<const double> ys,
                      std::size_t bins = 0);

/// Nonlinear least-squares fit of y = a x^b + c in linear space. When
/// fix_c is given, c is pinned to that value. x values must be positive.
struct PowerLawFit {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double residual = 0.0;  ///< RMS of y - fit
};

PowerLawFit powerlaw_fit(std::span<const double> x, std::span<const double> y,
                         std::optional<double> fix_c = {});

/// Mean-of-enstrophies vs enstrophy-of-mean-field comparison across an
/// ensemble of fields on identical grids at the same time.
struct JensenCheck {
    double lhs = 0.0;  ///< mean of per-sample enstrophies
    double rhs = 0.0;  ///< enstrophy of the coefficient-wise mean field
    bool holds = false;
};

JensenCheck jensen_check(std::span<const SpectralField> ensemble);

}  // namespace fbe
