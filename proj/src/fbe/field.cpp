#include "fbe/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fbe/errors.hpp"
#include "fbe/fft.hpp"

namespace fbe {

SpectralField forward_transform(std::span<const double> samples, GridSpec grid) {
    if (samples.size() != grid.n) {
        throw ConfigError("forward_transform: expected " + std::to_string(grid.n) +
                          " samples, got " + std::to_string(samples.size()));
    }
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= static_cast<double>(grid.n);

    std::vector<double> centered(samples.begin(), samples.end());
    for (double& v : centered) v -= mean;

    std::vector<std::complex<double>> spectrum(grid.n / 2 + 1);
    fft_for(grid.n).to_spectral(centered, spectrum);

    SpectralField field(grid);
    for (std::size_t k = 1; k <= grid.num_modes(); ++k) field.mode(k) = spectrum[k];
    return field;
}

std::vector<double> inverse_transform(const SpectralField& field) {
    require_finite(field, "inverse_transform");
    std::vector<std::complex<double>> spectrum(field.grid.n / 2 + 1,
                                               std::complex<double>{0.0, 0.0});
    for (std::size_t k = 1; k <= field.num_modes(); ++k) spectrum[k] = field.mode(k);
    std::vector<double> values(field.grid.n);
    fft_for(field.grid.n).to_physical(spectrum, values);
    return values;
}

bool all_finite(const SpectralField& field) {
    for (const auto& c : field.coeffs) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    }
    return true;
}

void require_finite(const SpectralField& field, const char* where) {
    if (!all_finite(field)) {
        throw NumericalError(std::string(where) + ": non-finite coefficient at t=" +
                             std::to_string(field.time_tag));
    }
}

SpectralField sine_field(GridSpec grid, std::size_t k, double amp) {
    if (k < 1 || k > grid.num_modes()) {
        throw ConfigError("sine_field: mode " + std::to_string(k) +
                          " out of range for n=" + std::to_string(grid.n));
    }
    SpectralField field(grid);
    // sin(kx) = (e^{ikx} - e^{-ikx}) / (2i) -> hat_u_k = -i/2
    field.mode(k) = std::complex<double>{0.0, -0.5 * amp};
    return field;
}

SpectralField pad_to(const SpectralField& field, std::size_t n_new) {
    if (n_new < field.grid.n) {
        throw ConfigError("pad_to: target grid is coarser than source");
    }
    SpectralField out((GridSpec(n_new)));
    out.time_tag = field.time_tag;
    std::copy(field.coeffs.begin(), field.coeffs.end(), out.coeffs.begin());
    return out;
}

double max_abs_physical(const SpectralField& field) {
    const auto values = inverse_transform(field);
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace fbe
