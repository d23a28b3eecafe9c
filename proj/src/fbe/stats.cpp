#include "fbe/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fbe/diagnostics.hpp"
#include "fbe/errors.hpp"
#include "fbe/rng.hpp"

namespace fbe {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double statistic_value(const MomentSet& m, Statistic s) {
    switch (s) {
        case Statistic::mean: return m.mu;
        case Statistic::stddev: return m.sigma;
        case Statistic::skewness: return m.degenerate ? 0.0 : m.skew;
        case Statistic::kurtosis: return m.degenerate ? 0.0 : m.kurt;
    }
    return kNaN;
}

// type-7 quantile (linear interpolation between order statistics)
double quantile_sorted(std::span<const double> sorted, double p) {
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

MomentSet moments(std::span<const double> samples) {
    if (samples.size() < 2) throw ConfigError("moments: need at least 2 samples");
    const double m = static_cast<double>(samples.size());

    MomentSet out;
    out.m_used = samples.size();
    for (double x : samples) out.mu += x;
    out.mu /= m;

    double v = 0.0;
    for (double x : samples) v += (x - out.mu) * (x - out.mu);
    v /= m;
    out.sigma = std::sqrt(v);

    if (out.sigma == 0.0) {
        out.degenerate = true;
        out.skew = kNaN;
        out.kurt = kNaN;
        return out;
    }
    for (double x : samples) {
        const double z = (x - out.mu) / out.sigma;
        out.skew += z * z * z;
        out.kurt += z * z * z * z;
    }
    out.skew /= m;
    out.kurt /= m;
    return out;
}

RunningErrors running_errors(std::span<const double> samples) {
    if (samples.size() < 10) throw ConfigError("running_errors: need at least 10 samples");
    const std::size_t m_total = samples.size();
    const MomentSet full = moments(samples);

    RunningErrors out;
    out.mu.assign(m_total, kNaN);
    out.sigma.assign(m_total, kNaN);
    out.skew.assign(m_total, kNaN);
    out.kurt.assign(m_total, kNaN);
    out.mu_valid = full.mu != 0.0;
    out.sigma_valid = full.sigma != 0.0;
    out.skew_valid = !full.degenerate && full.skew != 0.0;
    out.kurt_valid = !full.degenerate && full.kurt != 0.0;

    // constant series: every running estimate matches the truth exactly
    if (full.sigma == 0.0) {
        for (std::size_t m = 1; m <= m_total; ++m) {
            if (out.mu_valid) out.mu[m - 1] = 0.0;
            out.sigma[m - 1] = 0.0;
        }
        return out;
    }

    // Streaming pass over samples centered at the all-sample mean; prefix
    // central moments follow from the shifted power sums without the
    // cancellation that raw sums would suffer when mu >> sigma.
    double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
    for (std::size_t m = 1; m <= m_total; ++m) {
        const double z = samples[m - 1] - full.mu;
        s1 += z;
        s2 += z * z;
        s3 += z * z * z;
        s4 += z * z * z * z;
        if (m < 2) {
            if (out.mu_valid) {
                out.mu[m - 1] = std::abs(samples[0] - full.mu) / std::abs(full.mu);
            }
            continue;
        }
        const double md = static_cast<double>(m);
        const double zbar = s1 / md;
        const double mu_m = full.mu + zbar;
        const double var = s2 / md - zbar * zbar;
        const double sig = std::sqrt(std::max(var, 0.0));
        const double m3 = s3 / md - 3.0 * zbar * (s2 / md) + 2.0 * zbar * zbar * zbar;
        const double m4 = s4 / md - 4.0 * zbar * (s3 / md) +
                          6.0 * zbar * zbar * (s2 / md) - 3.0 * zbar * zbar * zbar * zbar;
        if (out.mu_valid) out.mu[m - 1] = std::abs(mu_m - full.mu) / std::abs(full.mu);
        if (out.sigma_valid)
            out.sigma[m - 1] = std::abs(sig - full.sigma) / std::abs(full.sigma);
        if (sig > 0.0) {
            if (out.skew_valid)
                out.skew[m - 1] =
                    std::abs(m3 / (sig * sig * sig) - full.skew) / std::abs(full.skew);
            if (out.kurt_valid)
                out.kurt[m - 1] =
                    std::abs(m4 / (sig * sig * sig * sig) - full.kurt) / std::abs(full.kurt);
        }
    }
    return out;
}

std::pair<double, double> bootstrap_ci(std::span<const double> samples,
                                       Statistic statistic, double level,
                                       std::size_t b, std::uint64_t seed) {
    if (samples.size() < 2) throw ConfigError("bootstrap_ci: need at least 2 samples");
    if (!(level > 0.0 && level < 1.0)) throw ConfigError("bootstrap_ci: level must be in (0,1)");
    if (b < 1000) throw ConfigError("bootstrap_ci: need at least 1000 resamples");

    const std::size_t m = samples.size();
    Rng rng(seed);
    std::vector<double> resample(m);
    std::vector<double> stats(b);
    for (std::size_t rep = 0; rep < b; ++rep) {
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t idx = static_cast<std::size_t>(rng.uniform() * static_cast<double>(m));
            resample[i] = samples[std::min(idx, m - 1)];
        }
        stats[rep] = statistic_value(moments(resample), statistic);
    }
    std::sort(stats.begin(), stats.end());
    const double tail = 0.5 * (1.0 - level);
    return {quantile_sorted(stats, tail), quantile_sorted(stats, 1.0 - tail)};
}

namespace {

struct BinSpec {
    double lo = 0.0;
    double width = 1.0;
    std::size_t bins = 1;
};

BinSpec choose_bins(std::span<const double> samples, std::size_t requested) {
    const auto [mn_it, mx_it] = std::minmax_element(samples.begin(), samples.end());
    const double lo = *mn_it, hi = *mx_it;
    const double range = hi - lo;

    BinSpec spec;
    if (range <= 0.0) {
        // all samples identical: a single delta-like bin
        spec.lo = lo - 0.5e-9 * std::max(1.0, std::abs(lo));
        spec.width = 1e-9 * std::max(1.0, std::abs(lo));
        spec.bins = 1;
        return spec;
    }

    std::size_t bins = requested;
    if (bins == 0) {
        std::vector<double> sorted(samples.begin(), samples.end());
        std::sort(sorted.begin(), sorted.end());
        const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
        const double m = static_cast<double>(samples.size());
        const double h = 2.0 * iqr / std::cbrt(m);  // Freedman-Diaconis
        if (h > 0.0) {
            bins = static_cast<std::size_t>(std::ceil(range / h));
        } else {
            bins = static_cast<std::size_t>(std::ceil(std::sqrt(m)));
        }
        bins = std::clamp<std::size_t>(bins, 1, 4096);
    }
    spec.lo = lo;
    spec.bins = bins;
    spec.width = range / static_cast<double>(bins);
    return spec;
}

}  // namespace

Histogram histogram_pdf(std::span<const double> samples, std::size_t bins) {
    if (samples.size() < 2) throw ConfigError("histogram_pdf: need at least 2 samples");
    const BinSpec spec = choose_bins(samples, bins);

    Histogram h;
    h.edges.resize(spec.bins + 1);
    for (std::size_t i = 0; i <= spec.bins; ++i) {
        h.edges[i] = spec.lo + spec.width * static_cast<double>(i);
    }
    std::vector<std::size_t> counts(spec.bins, 0);
    for (double x : samples) {
        auto idx = static_cast<std::size_t>((x - spec.lo) / spec.width);
        ++counts[std::min(idx, spec.bins - 1)];
    }
    // normalize against the actual edge gaps so the Riemann sum is exact
    const double m = static_cast<double>(samples.size());
    h.density.resize(spec.bins);
    for (std::size_t i = 0; i < spec.bins; ++i) {
        h.density[i] = static_cast<double>(counts[i]) / (m * (h.edges[i + 1] - h.edges[i]));
    }
    return h;
}

Histogram2d joint_pdf(std::span<const double> xs, std::span<const double> ys,
                      std::size_t bins) {
    if (xs.size() != ys.size()) throw ConfigError("joint_pdf: length mismatch");
    if (xs.size() < 2) throw ConfigError("joint_pdf: need at least 2 samples");
    const BinSpec bx = choose_bins(xs, bins);
    const BinSpec by = choose_bins(ys, bins);

    Histogram2d h;
    h.x_edges.resize(bx.bins + 1);
    h.y_edges.resize(by.bins + 1);
    for (std::size_t i = 0; i <= bx.bins; ++i) h.x_edges[i] = bx.lo + bx.width * static_cast<double>(i);
    for (std::size_t i = 0; i <= by.bins; ++i) h.y_edges[i] = by.lo + by.width * static_cast<double>(i);

    std::vector<std::size_t> counts(bx.bins * by.bins, 0);
    for (std::size_t s = 0; s < xs.size(); ++s) {
        auto ix = static_cast<std::size_t>((xs[s] - bx.lo) / bx.width);
        auto iy = static_cast<std::size_t>((ys[s] - by.lo) / by.width);
        ix = std::min(ix, bx.bins - 1);
        iy = std::min(iy, by.bins - 1);
        ++counts[ix * by.bins + iy];
    }
    const double m = static_cast<double>(xs.size());
    h.density.resize(counts.size());
    for (std::size_t ix = 0; ix < bx.bins; ++ix) {
        const double wx = h.x_edges[ix + 1] - h.x_edges[ix];
        for (std::size_t iy = 0; iy < by.bins; ++iy) {
            const double wy = h.y_edges[iy + 1] - h.y_edges[iy];
            h.density[ix * by.bins + iy] =
                static_cast<double>(counts[ix * by.bins + iy]) / (m * wx * wy);
        }
    }
    return h;
}

namespace {

struct ProfiledPowerLaw {
    double a = 0.0;
    double c = 0.0;
    double sse = 0.0;
};

// For fixed exponent b the amplitude and offset solve a linear problem.
ProfiledPowerLaw profile_powerlaw(std::span<const double> x, std::span<const double> y,
                                  double b, std::optional<double> fix_c) {
    const std::size_t m = x.size();
    ProfiledPowerLaw out;
    double sp = 0.0, spp = 0.0, sy = 0.0, spy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double p = std::pow(x[i], b);
        sp += p;
        spp += p * p;
        sy += y[i];
        spy += p * y[i];
    }
    const double md = static_cast<double>(m);
    if (fix_c) {
        out.c = *fix_c;
        out.a = spp > 0.0 ? (spy - out.c * sp) / spp : 0.0;
    } else {
        const double var_p = spp - sp * sp / md;
        if (var_p > 1e-300) {
            out.a = (spy - sp * sy / md) / var_p;
            out.c = (sy - out.a * sp) / md;
        } else {
            out.a = 0.0;
            out.c = sy / md;
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        const double r = y[i] - (out.a * std::pow(x[i], b) + out.c);
        out.sse += r * r;
    }
    return out;
}

}  // namespace

PowerLawFit powerlaw_fit(std::span<const double> x, std::span<const double> y,
                         std::optional<double> fix_c) {
    if (x.size() != y.size()) throw ConfigError("powerlaw_fit: length mismatch");
    if (x.size() < 3) throw ConfigError("powerlaw_fit: need at least 3 points");
    for (double xi : x) {
        if (!(xi > 0.0)) throw ConfigError("powerlaw_fit: x values must be positive");
    }

    // coarse exponent scan, then golden-section refinement
    double best_b = 0.0;
    double best_sse = std::numeric_limits<double>::infinity();
    for (double b = -8.0; b <= 8.0 + 1e-12; b += 0.05) {
        const double sse = profile_powerlaw(x, y, b, fix_c).sse;
        if (sse < best_sse) {
            best_sse = sse;
            best_b = b;
        }
    }
    if (!std::isfinite(best_sse)) {
        throw FitError("powerlaw_fit: no finite objective over the exponent scan");
    }

    double a = best_b - 0.05, c = best_b + 0.05;
    constexpr double kGolden = 0.6180339887498949;
    double x1 = c - kGolden * (c - a);
    double x2 = a + kGolden * (c - a);
    double f1 = profile_powerlaw(x, y, x1, fix_c).sse;
    double f2 = profile_powerlaw(x, y, x2, fix_c).sse;
    while (c - a > 1e-12) {
        if (f1 < f2) {
            c = x2;
            x2 = x1; f2 = f1;
            x1 = c - kGolden * (c - a);
            f1 = profile_powerlaw(x, y, x1, fix_c).sse;
        } else {
            a = x1;
            x1 = x2; f1 = f2;
            x2 = a + kGolden * (c - a);
            f2 = profile_powerlaw(x, y, x2, fix_c).sse;
        }
    }
    const double b_hat = 0.5 * (a + c);
    const ProfiledPowerLaw prof = profile_powerlaw(x, y, b_hat, fix_c);

    PowerLawFit fit;
    fit.a = prof.a;
    fit.b = b_hat;
    fit.c = prof.c;
    fit.residual = std::sqrt(prof.sse / static_cast<double>(x.size()));
    return fit;
}

JensenCheck jensen_check(std::span<const SpectralField> ensemble) {
    if (ensemble.size() < 2) throw ConfigError("jensen_check: need at least 2 realizations");
    const GridSpec grid = ensemble.front().grid;
    const double t0 = ensemble.front().time_tag;
    for (const auto& f : ensemble) {
        if (f.grid != grid) throw ConfigError("jensen_check: grid mismatch across ensemble");
        if (std::abs(f.time_tag - t0) > 1e-12) {
            throw ConfigError("jensen_check: fields sampled at different times");
        }
    }

    SpectralField mean_field(grid);
    mean_field.time_tag = t0;
    JensenCheck out;
    const double inv_m = 1.0 / static_cast<double>(ensemble.size());
    for (const auto& f : ensemble) {
        out.lhs += enstrophy(f);
        for (std::size_t i = 0; i < mean_field.coeffs.size(); ++i) {
            mean_field.coeffs[i] += f.coeffs[i] * inv_m;
        }
    }
    out.lhs *= inv_m;
    out.rhs = enstrophy(mean_field);
    out.holds = out.lhs >= out.rhs - 1e-12;
    return out;
}

}  // namespace fbe
