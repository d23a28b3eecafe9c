#include "fbe/diagnostics.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "fbe/errors.hpp"

namespace fbe {

double enstrophy(const SpectralField& field) {
    double sum = 0.0;
    for (std::size_t k = 1; k <= field.num_modes(); ++k) {
        sum += static_cast<double>(k) * static_cast<double>(k) * std::norm(field.mode(k));
    }
    return 4.0 * std::numbers::pi * std::numbers::pi * sum;
}

namespace {

// Householder least squares for an m x 3 system; returns the coefficient
// vector and the RMS residual. Normal equations are too ill-conditioned here
// (columns 1, ln k, k over wide k bands).
struct Lsq3Result {
    std::array<double, 3> x;
    double rms;
};

Lsq3Result householder_lsq3(std::vector<std::array<double, 3>> a, std::vector<double> b) {
    const std::size_t m = a.size();
    for (std::size_t col = 0; col < 3; ++col) {
        double norm = 0.0;
        for (std::size_t i = col; i < m; ++i) norm += a[i][col] * a[i][col];
        norm = std::sqrt(norm);
        if (norm == 0.0) throw FitError("strip_fit: rank-deficient design matrix");
        if (a[col][col] > 0.0) norm = -norm;

        std::vector<double> v(m - col);
        v[0] = a[col][col] - norm;
        for (std::size_t i = col + 1; i < m; ++i) v[i - col] = a[i][col];
        double vnorm2 = 0.0;
        for (double vi : v) vnorm2 += vi * vi;
        if (vnorm2 == 0.0) continue;

        for (std::size_t j = col; j < 3; ++j) {
            double dot = 0.0;
            for (std::size_t i = col; i < m; ++i) dot += v[i - col] * a[i][j];
            const double f = 2.0 * dot / vnorm2;
            for (std::size_t i = col; i < m; ++i) a[i][j] -= f * v[i - col];
        }
        double dot = 0.0;
        for (std::size_t i = col; i < m; ++i) dot += v[i - col] * b[i];
        const double f = 2.0 * dot / vnorm2;
        for (std::size_t i = col; i < m; ++i) b[i] -= f * v[i - col];
    }

    Lsq3Result out{};
    for (int col = 2; col >= 0; --col) {
        double s = b[col];
        for (int j = col + 1; j < 3; ++j) s -= a[col][j] * out.x[j];
        out.x[col] = s / a[col][col];
    }
    double ss = 0.0;
    for (std::size_t i = 3; i < m; ++i) ss += b[i] * b[i];
    out.rms = std::sqrt(ss / static_cast<double>(m));
    return out;
}

}  // namespace

StripFit strip_fit(const SpectralField& field, double floor, std::size_t k_lo) {
    if (floor <= 0.0) throw ConfigError("strip_fit: floor must be positive");
    require_finite(field, "strip_fit");

    const std::size_t n_half = field.num_modes();
    double peak = 0.0;
    for (std::size_t k = 1; k <= n_half; ++k) peak = std::max(peak, std::abs(field.mode(k)));
    if (peak == 0.0) throw FitError("strip_fit: zero field");

    std::size_t k_hi = 0;
    for (std::size_t k = 1; k <= n_half; ++k) {
        if (std::abs(field.mode(k)) > floor * peak) k_hi = k;
    }

    std::vector<std::array<double, 3>> design;
    std::vector<double> rhs;
    for (std::size_t k = k_lo; k <= k_hi; ++k) {
        const double mag = std::abs(field.mode(k));
        if (mag <= 0.0) continue;
        const double kd = static_cast<double>(k);
        design.push_back({1.0, std::log(kd), -kd});
        rhs.push_back(std::log(mag));
    }
    if (design.size() < 3) {
        throw FitError("strip_fit: fewer than 3 usable modes in [" +
                       std::to_string(k_lo) + "," + std::to_string(k_hi) + "]");
    }

    const std::size_t modes_used = design.size();
    const auto sol = householder_lsq3(std::move(design), std::move(rhs));
    const double delta_raw = sol.x[2];

    StripFit fit;
    fit.c_amp = std::exp(sol.x[0]);
    fit.alpha_tilde = sol.x[1];
    fit.delta = std::max(0.0, delta_raw);
    fit.k_range = {k_lo, k_hi};
    fit.residual = sol.rms;
    fit.reliable = delta_raw >= 3.0 * field.grid.dx() && modes_used >= 8;
    return fit;
}

}  // namespace fbe
