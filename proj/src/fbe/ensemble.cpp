#include "fbe/ensemble.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>
#include <thread>

#include "fbe/errors.hpp"
#include "fbe/rng.hpp"
#include "fbe/version.hpp"

namespace fbe {

namespace {

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

OutcomeSample extract_outcome(const Trajectory& traj, std::uint64_t sample_index,
                              const WindowPlan& windows) {
    OutcomeSample out;
    out.sample_index = sample_index;
    out.termination = traj.termination;

    for (const auto& rec : traj.records) {
        if (rec.enstrophy > out.e_max) {
            out.e_max = rec.enstrophy;
            out.t_max = rec.t;
        }
    }

    // Blow-up time only makes sense for runs the resolution trigger stopped.
    if (traj.termination != Termination::resolution_exhausted) return out;

    std::vector<SeriesPoint> series;
    series.reserve(traj.records.size());
    for (const auto& rec : traj.records) {
        if (rec.enstrophy > 0.0) series.push_back({rec.t, rec.enstrophy});
    }
    if (series.size() < windows.window_len) {
        out.censored = true;
        return out;
    }

    try {
        const WindowPlan plan = make_window_plan(series.size(), windows.window_len,
                                                 windows.stride);
        const auto fits = sliding_estimate(series, plan);
        const BlowupFit& last = fits.back();
        const double t_last = series.back().t;
        const double span = t_last - series.front().t;
        const bool runaway = last.t_star > t_last + 10.0 * span;
        if (!last.t_star_identifiable || last.gamma >= 0.0 || runaway) {
            out.censored = true;
        } else {
            out.t_star = last.t_star;
        }
    } catch (const std::exception&) {
        out.censored = true;
    }
    return out;
}

EnsembleResult run_ensemble(const RunSetup& setup) {
    setup.solver.validate();
    const std::size_t m = setup.samples;
    const GridSpec grid(setup.solver.n_init);
    const SpectralField initial = make_initial(setup.init, grid);

    EnsembleResult result;
    result.manifest.code_version = kVersion;
    result.manifest.config_text = serialize_config(setup);
    result.manifest.master_seed = setup.noise.master_seed;
    result.manifest.started_at = utc_timestamp();
    result.manifest.sample_seeds.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        result.manifest.sample_seeds[i] = child_seed(setup.noise.master_seed, i);
    }

    result.outcomes.resize(m);
    const std::size_t retain = std::min<std::size_t>(setup.retain_series, m);
    result.retained.resize(retain);
    const std::size_t n_snaps = setup.solver.snapshot_times.size();
    result.snapshot_ensembles.assign(n_snaps, {});
    for (auto& per_time : result.snapshot_ensembles) per_time.resize(m);

    std::size_t threads = setup.threads == 0
                              ? std::max(1u, std::thread::hardware_concurrency())
                              : setup.threads;
    threads = std::min(threads, m);

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= m) break;
            Trajectory traj = run_realization(setup.solver, setup.noise, i, initial);
            result.outcomes[i] = extract_outcome(traj, i, setup.windows);
            for (std::size_t s = 0; s < traj.snapshots.size() && s < n_snaps; ++s) {
                result.snapshot_ensembles[s][i] = traj.snapshots[s];
            }
            if (i < retain) result.retained[i] = std::move(traj);
        }
    };

    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // A run stopped early produces fewer snapshots than requested; drop
    // snapshot times that are not populated across the whole ensemble.
    while (!result.snapshot_ensembles.empty()) {
        const auto& last = result.snapshot_ensembles.back();
        bool complete = true;
        for (const auto& f : last) {
            if (f.grid.n == 0) { complete = false; break; }
        }
        if (complete) break;
        result.snapshot_ensembles.pop_back();
    }

    result.manifest.finished_at = utc_timestamp();
    for (const auto& o : result.outcomes) {
        ++result.manifest.termination_counts[to_string(o.termination)];
    }
    return result;
}

RunSetup setup_from_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open manifest: " + path);
    std::string line;
    std::ostringstream config_text;
    bool in_config = false;
    while (std::getline(in, line)) {
        if (line == "[config]") {
            in_config = true;
            continue;
        }
        if (in_config) {
            if (!line.empty() && line.front() == '[') break;  // next section
            config_text << line << "\n";
        }
    }
    if (config_text.str().empty()) {
        throw ConfigError("manifest has no [config] section: " + path);
    }
    std::istringstream ss(config_text.str());
    return parse_config_stream(ss, path);
}

}  // namespace fbe
