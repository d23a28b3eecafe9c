#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fbe/config.hpp"

namespace fbe {

/// Scalar outcomes of one realization: estimated blow-up time (absent for
/// runs without a blow-up signature or when the fit was censored), maximum
/// enstrophy and the time it was attained.
struct OutcomeSample {
    std::uint64_t sample_index = 0;
    std::optional<double> t_star;
    double e_max = 0.0;
    double t_max = 0.0;
    bool censored = false;  ///< blow-up fit attempted but rejected
    Termination termination = Termination::reached_t_end;
};

/// Everything needed to reproduce an ensemble bit-for-bit, plus bookkeeping.
struct RunManifest {
    std::string code_version;
    std::string config_text;  ///< serialized RunSetup
    std::uint64_t master_seed = 0;
    std::vector<std::uint64_t> sample_seeds;
    std::string started_at;
    std::string finished_at;
    std::map<std::string, std::size_t> termination_counts;
};

struct EnsembleResult {
    RunManifest manifest;
    std::vector<OutcomeSample> outcomes;
    /// full trajectories for the first retain_series samples
    std::vector<Trajectory> retained;
    /// per snapshot time: one field per sample (present when the setup
    /// requests snapshot_times)
    std::vector<std::vector<SpectralField>> snapshot_ensembles;
};

/// Derives the scalar outcomes from one trajectory. The blow-up time is
/// fitted only for runs stopped by the resolution trigger; fits with a
/// nonnegative exponent, an unidentifiable t_star or a runaway estimate are
/// censored.
OutcomeSample extract_outcome(const Trajectory& traj, std::uint64_t sample_index,
                              const WindowPlan& windows);

/// Runs setup.samples realizations of the stochastic system (noise.rho may
/// be zero) on a worker pool and gathers outcomes in sample order. Results
/// are deterministic for a given (config, master_seed) regardless of the
/// thread count. Per-sample failures are recorded, never propagated.
EnsembleResult run_ensemble(const RunSetup& setup);

/// Parses the `config` section of a manifest file back into a RunSetup.
RunSetup setup_from_manifest(const std::string& path);

}  // namespace fbe
