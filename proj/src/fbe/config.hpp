#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fbe/blowup.hpp"
#include "fbe/deterministic.hpp"
#include "fbe/stochastic.hpp"

namespace fbe {

enum class RunMode { deterministic, stochastic, ensemble };
enum class InitKind { sine, zero };

const char* to_string(RunMode m);
const char* to_string(InitKind k);

/// Everything one invocation needs: solver and noise parameters, the
/// blow-up fit window layout, and orchestration settings.
struct RunSetup {
    SolverConfig solver;
    NoiseParams noise;
    WindowPlan windows{50, 10, 0};
    RunMode mode = RunMode::deterministic;
    InitKind init = InitKind::sine;
    std::size_t samples = 1;
    std::size_t threads = 0;          ///< 0 = hardware concurrency
    std::vector<double> rho_grid;     ///< ensemble sweep; empty = single rho
    std::size_t retain_series = 0;    ///< samples whose full series is kept
    std::string out_dir = "out";

    bool operator==(const RunSetup&) const = default;
};

/// Parses `key = value` lines ('#' comments, blank lines ignored). Unknown
/// keys are rejected; alpha is required; everything else falls back to the
/// standard defaults (nu = 0.11, sine initial data). Stochastic and
/// ensemble runs default dt to 2.5e-4 * (1024 / n_init) unless dt is given.
RunSetup parse_config(const std::string& path);
RunSetup parse_config_stream(std::istream& in, const std::string& origin = "<stream>");

/// Emits a config file that parses back to an equal RunSetup.
std::string serialize_config(const RunSetup& setup);

/// Builds the initial condition named in the setup.
SpectralField make_initial(InitKind kind, GridSpec grid);

/// min_x g'(x) of the configured initial condition (closed form).
double initial_min_slope(InitKind kind);

}  // namespace fbe
