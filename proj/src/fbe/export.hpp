#pragma once

#include <string>
#include <vector>

#include "fbe/ensemble.hpp"
#include "fbe/stats.hpp"

namespace fbe {

/// Creates a directory (and parents) if needed.
void ensure_dir(const std::string& dir);

/// Comma-separated outcome table with header
/// sample_index,t_star,e_max,t_max,censored (t_star empty when absent).
void write_outcomes(const std::string& path, const std::vector<OutcomeSample>& outcomes);
std::vector<OutcomeSample> read_outcomes(const std::string& path);

/// Structured-text manifest with [manifest], [seeds] and [config] sections;
/// the [config] section parses back via setup_from_manifest().
void write_manifest(const std::string& path, const RunManifest& manifest);

/// Columnar per-step diagnostics: t, enstrophy, delta (nan when absent),
/// delta_reliable, n_active, dt.
void write_diagnostics(const std::string& path, const std::vector<DiagnosticRecord>& records);
std::vector<SeriesPoint> read_series(const std::string& path);

/// Generic columnar writer: '#'-prefixed header comment, one named column
/// per entry, rows of equal width.
void write_columns(const std::string& path, const std::string& comment,
                   const std::vector<std::string>& names,
                   const std::vector<std::vector<double>>& rows);

void write_histogram(const std::string& path, const Histogram& hist,
                     const std::string& label);
void write_histogram2d(const std::string& path, const Histogram2d& hist,
                       const std::string& x_label, const std::string& y_label);

/// Plot-ready data for one run: solution snapshots in physical space and
/// their spectra, the enstrophy history, the strip-width history (expected
/// only when `expect_strip`). Throws ConfigError listing every absent panel.
void export_figures_data(const std::string& dir, const Trajectory& traj,
                         bool expect_strip);

/// Outcome table, manifest and retained per-sample diagnostics for an
/// ensemble run.
void export_ensemble(const std::string& dir, const EnsembleResult& result);

}  // namespace fbe
