#pragma once

#include <cstddef>
#include <numbers>
#include <string>

#include "fbe/errors.hpp"

namespace fbe {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Uniform periodic grid on [0, 2*pi) with a power-of-two number of
/// collocation points x_j = 2*pi*j/n.
struct GridSpec {
    std::size_t n = 0;

    GridSpec() = default;
    explicit GridSpec(std::size_t n_points) : n(n_points) {
        if (n < 8 || (n & (n - 1)) != 0) {
            throw ConfigError("grid size must be a power of two >= 8, got " +
                              std::to_string(n_points));
        }
    }

    std::size_t num_modes() const { return n / 2; }  ///< stored wavenumbers 1..n/2
    double dx() const { return kTwoPi / static_cast<double>(n); }
    double point(std::size_t j) const { return dx() * static_cast<double>(j); }

    bool operator==(const GridSpec&) const = default;
};

}  // namespace fbe
