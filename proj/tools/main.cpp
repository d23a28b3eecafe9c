#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "fbe/blowup.hpp"
#include "fbe/config.hpp"
#include "fbe/diagnostics.hpp"
#include "fbe/ensemble.hpp"
#include "fbe/errors.hpp"
#include "fbe/export.hpp"
#include "fbe/stats.hpp"
#include "fbe/version.hpp"

namespace {

using namespace fbe;

struct CliOptions {
    std::optional<std::string> config;
    std::optional<double> alpha, nu, rho, dt, t_end;
    std::optional<std::size_t> n, n_max, samples, window_len, window_stride, threads,
        retain, sample_index;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::vector<double> rho_grid;
    std::vector<double> snapshot_times;
};

void add_common_options(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--config", opt.config, "config file (key = value lines)");
    cmd->add_option("--alpha", opt.alpha, "fractional dissipation exponent in [0,1]");
    cmd->add_option("--nu", opt.nu, "viscosity");
    cmd->add_option("--rho", opt.rho, "noise amplitude");
    cmd->add_option("--n", opt.n, "initial resolution (power of two)");
    cmd->add_option("--n-max", opt.n_max, "resolution cap for refinement");
    cmd->add_option("--dt", opt.dt, "time step (initial for deterministic, fixed for stochastic)");
    cmd->add_option("--t-end", opt.t_end, "time horizon");
    cmd->add_option("--seed", opt.seed, "master seed");
    cmd->add_option("--samples", opt.samples, "Monte-Carlo sample count");
    cmd->add_option("--out-dir", opt.out_dir, "output directory (default $FBURGERS_OUT_DIR or ./out)");
    cmd->add_option("--window-len", opt.window_len, "blow-up fit window length (samples)");
    cmd->add_option("--window-stride", opt.window_stride, "blow-up fit window stride (samples)");
    cmd->add_option("--threads", opt.threads, "worker threads (0 = hardware)");
    cmd->add_option("--rho-grid", opt.rho_grid, "comma-separated noise amplitudes")
        ->delimiter(',');
    cmd->add_option("--snapshot-times", opt.snapshot_times, "comma-separated snapshot times")
        ->delimiter(',');
    cmd->add_option("--retain-series", opt.retain, "samples whose full series is written");
}

RunSetup build_setup(const CliOptions& opt, RunMode mode) {
    RunSetup setup;
    if (opt.config) {
        setup = parse_config(*opt.config);
    } else {
        if (!opt.alpha) throw ConfigError("--alpha is required when no config file is given");
        setup.solver.alpha = *opt.alpha;
    }
    setup.mode = mode;
    if (opt.alpha) setup.solver.alpha = *opt.alpha;
    if (opt.nu) setup.solver.nu = *opt.nu;
    if (opt.rho) setup.noise.rho = *opt.rho;
    if (opt.n) setup.solver.n_init = *opt.n;
    if (opt.n_max) setup.solver.n_max = *opt.n_max;
    if (opt.t_end) setup.solver.t_end = *opt.t_end;
    if (opt.seed) setup.noise.master_seed = *opt.seed;
    if (opt.samples) setup.samples = *opt.samples;
    if (opt.window_len) setup.windows.window_len = *opt.window_len;
    if (opt.window_stride) setup.windows.stride = *opt.window_stride;
    if (opt.threads) setup.threads = *opt.threads;
    if (opt.retain) setup.retain_series = *opt.retain;
    if (!opt.rho_grid.empty()) setup.rho_grid = opt.rho_grid;
    if (!opt.snapshot_times.empty()) setup.solver.snapshot_times = opt.snapshot_times;

    if (opt.dt) {
        setup.solver.dt_init = *opt.dt;
    } else if (!opt.config && mode != RunMode::deterministic) {
        setup.solver.dt_init = 2.5e-4 * 1024.0 / static_cast<double>(setup.solver.n_init);
    }

    if (opt.out_dir) {
        setup.out_dir = *opt.out_dir;
    } else if (!opt.config) {
        const char* env = std::getenv("FBURGERS_OUT_DIR");
        if (env && *env) setup.out_dir = env;
    }
    setup.solver.validate();
    return setup;
}

/// Fits the blow-up time from a trajectory's enstrophy history and writes
/// the per-window table; returns the final estimate if one was accepted.
std::optional<double> fit_and_write_blowup(const std::string& dir, const Trajectory& traj,
                                           const WindowPlan& windows) {
    std::vector<SeriesPoint> series;
    for (const auto& rec : traj.records) {
        if (rec.enstrophy > 0.0) series.push_back({rec.t, rec.enstrophy});
    }
    if (series.size() < windows.window_len) return std::nullopt;
    try {
        const auto plan = make_window_plan(series.size(), windows.window_len, windows.stride);
        const auto fits = sliding_estimate(series, plan);
        std::vector<std::vector<double>> rows;
        for (const auto& f : fits) {
            rows.push_back({f.window_center, f.c, f.gamma, f.t_star, f.objective,
                            f.t_star_identifiable ? 1.0 : 0.0});
        }
        write_columns(dir + "/blowup_windows.dat",
                      "sliding-window power-law fits of the enstrophy",
                      {"window_center", "c", "gamma", "t_star", "objective", "identifiable"},
                      rows);
        const auto& last = fits.back();
        if (last.t_star_identifiable && last.gamma < 0.0) return last.t_star;
    } catch (const std::exception& e) {
        std::cerr << "blow-up fit failed: " << e.what() << "\n";
    }
    return std::nullopt;
}

void write_summary(const std::string& dir, const RunSetup& setup, const Trajectory& traj,
                   std::optional<double> t_star) {
    std::ofstream out(dir + "/summary.txt");
    out.precision(17);
    out << "alpha = " << setup.solver.alpha << "\n";
    out << "nu = " << setup.solver.nu << "\n";
    out << "rho = " << setup.noise.rho << "\n";
    out << "termination = " << to_string(traj.termination) << "\n";
    out << "t_last = " << traj.records.back().t << "\n";
    double e_max = 0.0, t_max = 0.0;
    for (const auto& r : traj.records) {
        if (r.enstrophy > e_max) { e_max = r.enstrophy; t_max = r.t; }
    }
    out << "e_max = " << e_max << "\n";
    out << "t_max = " << t_max << "\n";
    if (t_star) out << "t_star = " << *t_star << "\n";
}

int cmd_deterministic(const CliOptions& opt) {
    RunSetup setup = build_setup(opt, RunMode::deterministic);
    ensure_dir(setup.out_dir);
    const SpectralField initial = make_initial(setup.init, GridSpec(setup.solver.n_init));
    const Trajectory traj = run_deterministic(setup.solver, initial);

    write_diagnostics(setup.out_dir + "/diagnostics.dat", traj.records);
    if (!traj.snapshots.empty()) {
        export_figures_data(setup.out_dir, traj, setup.solver.strip_stride > 0);
    }
    std::optional<double> t_star;
    if (traj.termination == Termination::resolution_exhausted) {
        t_star = fit_and_write_blowup(setup.out_dir, traj, setup.windows);
    }
    write_summary(setup.out_dir, setup, traj, t_star);

    std::cout << "deterministic run: alpha=" << setup.solver.alpha
              << " nu=" << setup.solver.nu << " -> " << to_string(traj.termination)
              << " at t=" << traj.records.back().t;
    if (t_star) std::cout << ", estimated t_star=" << *t_star;
    std::cout << "\noutputs in " << setup.out_dir << "\n";
    return 0;
}

int cmd_stochastic(const CliOptions& opt) {
    RunSetup setup = build_setup(opt, RunMode::stochastic);
    ensure_dir(setup.out_dir);
    const SpectralField initial = make_initial(setup.init, GridSpec(setup.solver.n_init));
    const std::uint64_t index = opt.sample_index.value_or(0);
    const Trajectory traj = run_realization(setup.solver, setup.noise, index, initial);

    write_diagnostics(setup.out_dir + "/diagnostics.dat", traj.records);
    if (!traj.snapshots.empty()) export_figures_data(setup.out_dir, traj, false);
    std::optional<double> t_star;
    if (traj.termination == Termination::resolution_exhausted) {
        t_star = fit_and_write_blowup(setup.out_dir, traj, setup.windows);
    }
    write_summary(setup.out_dir, setup, traj, t_star);

    std::cout << "stochastic realization " << index << ": rho=" << setup.noise.rho
              << " -> " << to_string(traj.termination) << " at t=" << traj.records.back().t;
    if (t_star) std::cout << ", estimated t_star=" << *t_star;
    std::cout << "\noutputs in " << setup.out_dir << "\n";
    return 0;
}

std::string rho_dir_name(double rho) {
    std::ostringstream name;
    name << "rho_" << rho;
    return name.str();
}

int cmd_ensemble(const CliOptions& opt, const std::optional<std::string>& manifest_path) {
    RunSetup base = manifest_path ? setup_from_manifest(*manifest_path)
                                  : build_setup(opt, RunMode::ensemble);
    if (manifest_path) {
        base.mode = RunMode::ensemble;
        if (opt.threads) base.threads = *opt.threads;
        if (opt.out_dir) base.out_dir = *opt.out_dir;
    }
    ensure_dir(base.out_dir);

    const std::vector<double> rhos = base.rho_grid.empty()
                                         ? std::vector<double>{base.noise.rho}
                                         : base.rho_grid;
    for (double rho : rhos) {
        RunSetup setup = base;
        setup.noise.rho = rho;
        setup.rho_grid.clear();  // the manifest describes this one ensemble
        const std::string dir = rhos.size() == 1 ? base.out_dir
                                                 : base.out_dir + "/" + rho_dir_name(rho);
        setup.out_dir = dir;
        const EnsembleResult result = run_ensemble(setup);
        export_ensemble(dir, result);

        std::size_t censored = 0, with_tstar = 0;
        for (const auto& o : result.outcomes) {
            censored += o.censored ? 1 : 0;
            with_tstar += o.t_star ? 1 : 0;
        }
        std::cout << "ensemble rho=" << rho << ": " << setup.samples << " samples, "
                  << with_tstar << " blow-up fits, " << censored << " censored -> " << dir
                  << "\n";
    }
    return 0;
}

int cmd_fit_blowup(const std::string& series_path, const CliOptions& opt) {
    const auto series = read_series(series_path);
    std::vector<SeriesPoint> positive;
    for (const auto& p : series) {
        if (p.y > 0.0) positive.push_back(p);
    }
    const std::size_t len = opt.window_len.value_or(50);
    const std::size_t stride = opt.window_stride.value_or(10);
    const auto plan = make_window_plan(positive.size(), len, stride);
    const auto fits = sliding_estimate(positive, plan);

    std::cout << "# window_center c gamma t_star objective\n";
    std::cout.precision(12);
    for (const auto& f : fits) {
        std::cout << f.window_center << ' ' << f.c << ' ' << f.gamma << ' ' << f.t_star
                  << ' ' << f.objective << '\n';
    }
    std::cout << "# final estimate: t_star = " << fits.back().t_star << "\n";
    return 0;
}

/// Moments with bootstrap intervals for one outcome quantity.
std::vector<double> stats_row(std::span<const double> values, std::uint64_t seed) {
    const MomentSet m = moments(values);
    std::vector<double> row{m.mu, m.sigma, m.skew, m.kurt};
    for (auto stat : {Statistic::mean, Statistic::stddev, Statistic::skewness,
                      Statistic::kurtosis}) {
        const auto [lo, hi] = bootstrap_ci(values, stat, 0.95, 2000, seed);
        row.push_back(lo);
        row.push_back(hi);
    }
    return row;
}

int cmd_stats(const std::string& outcomes_path, const CliOptions& opt) {
    const auto outcomes = read_outcomes(outcomes_path);
    if (outcomes.empty()) throw ConfigError("stats: empty outcome table");
    std::string dir = opt.out_dir.value_or(
        std::filesystem::path(outcomes_path).parent_path().string());
    if (dir.empty()) dir = ".";
    ensure_dir(dir);
    const std::uint64_t seed = opt.seed.value_or(1);

    std::vector<double> t_star, e_max, t_max;
    std::size_t censored = 0;
    for (const auto& o : outcomes) {
        if (o.t_star) t_star.push_back(*o.t_star);
        if (o.censored) ++censored;
        e_max.push_back(o.e_max);
        t_max.push_back(o.t_max);
    }

    const std::vector<std::string> cols{
        "mu", "sigma", "skew", "kurt", "mu_lo", "mu_hi", "sigma_lo", "sigma_hi",
        "skew_lo", "skew_hi", "kurt_lo", "kurt_hi"};
    std::vector<std::vector<double>> rows;
    std::vector<std::string> row_names;
    if (t_star.size() >= 2) {
        rows.push_back(stats_row(t_star, seed));
        row_names.push_back("t_star");
        write_histogram(dir + "/pdf_t_star.dat", histogram_pdf(t_star), "t_star");
    }
    rows.push_back(stats_row(e_max, seed + 1));
    row_names.push_back("e_max");
    rows.push_back(stats_row(t_max, seed + 2));
    row_names.push_back("t_max");
    write_histogram(dir + "/pdf_e_max.dat", histogram_pdf(e_max), "e_max");
    write_histogram(dir + "/pdf_t_max.dat", histogram_pdf(t_max), "t_max");
    write_histogram2d(dir + "/jpdf_t_max_e_max.dat", joint_pdf(t_max, e_max), "t_max",
                      "e_max");

    std::ofstream out(dir + "/moments.dat");
    out.precision(17);
    out << "# moment estimates with 95% bootstrap intervals\n";
    out << "# quantity";
    for (const auto& c : cols) out << ' ' << c;
    out << " m_used censored\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out << row_names[i];
        for (double v : rows[i]) out << ' ' << v;
        out << ' ' << (row_names[i] == "t_star" ? t_star.size() : outcomes.size()) << ' '
            << censored << '\n';
    }
    std::cout << "stats for " << outcomes_path << " -> " << dir << " (" << outcomes.size()
              << " samples, " << censored << " censored)\n";
    return 0;
}

int cmd_export(const std::string& root, const CliOptions& opt) {
    namespace fs = std::filesystem;
    const std::uint64_t seed = opt.seed.value_or(1);
    std::vector<std::pair<double, std::string>> rho_dirs;
    std::vector<std::pair<double, double>> alpha_tstar;

    if (!fs::is_directory(root)) throw ConfigError("export: not a directory: " + root);
    for (const auto& entry : fs::directory_iterator(root)) {
        if (!entry.is_directory()) continue;
        const std::string name = entry.path().filename().string();
        if (name.rfind("rho_", 0) == 0 && fs::exists(entry.path() / "outcomes.csv")) {
            rho_dirs.emplace_back(std::stod(name.substr(4)), entry.path().string());
        }
        if (name.rfind("alpha_", 0) == 0 && fs::exists(entry.path() / "summary.txt")) {
            std::ifstream in(entry.path() / "summary.txt");
            std::string line;
            std::optional<double> a, ts;
            while (std::getline(in, line)) {
                std::stringstream ss(line);
                std::string key, eq;
                double value;
                if (ss >> key >> eq >> value) {
                    if (key == "alpha") a = value;
                    if (key == "t_star") ts = value;
                }
            }
            if (a && ts) alpha_tstar.emplace_back(*a, *ts);
        }
    }

    if (rho_dirs.empty() && alpha_tstar.empty()) {
        throw ConfigError(
            "export: nothing to export from " + root +
            "; absent panels: moments_vs_rho (needs rho_*/outcomes.csv),"
            " tstar_vs_alpha (needs alpha_*/summary.txt with a fitted t_star)");
    }

    if (!alpha_tstar.empty()) {
        std::sort(alpha_tstar.begin(), alpha_tstar.end());
        std::vector<std::vector<double>> rows;
        for (const auto& [a, ts] : alpha_tstar) rows.push_back({a, ts});
        write_columns(root + "/tstar_vs_alpha.dat", "estimated blow-up time vs alpha",
                      {"alpha", "t_star"}, rows);
        std::cout << "wrote tstar_vs_alpha.dat (" << rows.size() << " points)\n";
    }

    if (!rho_dirs.empty()) {
        std::sort(rho_dirs.begin(), rho_dirs.end());
        std::vector<std::vector<double>> rows;
        std::vector<double> rho_axis, mu_axis, sigma_axis, skew_axis, kurt_axis;
        for (const auto& [rho, dir] : rho_dirs) {
            const auto outcomes = read_outcomes(dir + "/outcomes.csv");
            std::vector<double> t_star;
            std::size_t censored = 0;
            for (const auto& o : outcomes) {
                if (o.t_star) t_star.push_back(*o.t_star);
                if (o.censored) ++censored;
            }
            if (t_star.size() < 2) continue;
            const MomentSet m = moments(t_star);
            auto row = stats_row(t_star, seed);
            row.insert(row.begin(), rho);
            row.push_back(static_cast<double>(t_star.size()));
            row.push_back(static_cast<double>(censored));
            rows.push_back(row);
            rho_axis.push_back(rho);
            mu_axis.push_back(m.mu);
            sigma_axis.push_back(m.sigma);
            skew_axis.push_back(m.skew);
            kurt_axis.push_back(m.kurt);

            write_histogram(dir + "/pdf_t_star.dat", histogram_pdf(t_star), "t_star");
        }
        if (rows.empty()) {
            throw ConfigError("export: no rho directory carries enough blow-up fits");
        }
        write_columns(root + "/moments_vs_rho.dat",
                      "blow-up time moments per noise amplitude (95% bootstrap bounds)",
                      {"rho", "mu", "sigma", "skew", "kurt", "mu_lo", "mu_hi", "sigma_lo",
                       "sigma_hi", "skew_lo", "skew_hi", "kurt_lo", "kurt_hi", "m_used",
                       "censored"},
                      rows);

        if (rho_axis.size() >= 3) {
            std::vector<std::vector<double>> fit_rows;
            const auto add_fit = [&](const char* name, const std::vector<double>& y,
                                     std::optional<double> fix_c) {
                const PowerLawFit f = powerlaw_fit(rho_axis, y, fix_c);
                fit_rows.push_back({static_cast<double>(fit_rows.size()), f.a, f.b, f.c,
                                    f.residual});
                std::cout << "power-law fit " << name << ": a=" << f.a << " b=" << f.b
                          << " c=" << f.c << "\n";
            };
            add_fit("mu", mu_axis, 0.0);
            add_fit("sigma", sigma_axis, 0.0);
            add_fit("skew", skew_axis, std::nullopt);
            add_fit("kurt", kurt_axis, std::nullopt);
            write_columns(root + "/powerlaw_fits.dat",
                          "rows: 0=mu 1=sigma 2=skew 3=kurt; fit y = a rho^b + c",
                          {"row", "a", "b", "c", "rms_residual"}, fit_rows);
        }
        std::cout << "wrote moments_vs_rho.dat (" << rows.size() << " amplitudes)\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pseudo-spectral solver and ensemble statistics for the 1D fractional "
                 "Burgers equation on a periodic domain"};
    app.set_version_flag("--version", fbe::kVersion);
    app.require_subcommand(1);

    CliOptions opt;
    std::optional<std::string> manifest_path;
    std::string series_path, outcomes_path, export_root;

    auto* det = app.add_subcommand("deterministic", "single deterministic run with refinement");
    add_common_options(det, opt);

    auto* sto = app.add_subcommand("stochastic", "single noise realization at fixed resolution");
    add_common_options(sto, opt);
    sto->add_option("--sample-index", opt.sample_index, "sample index for the seed derivation");

    auto* ens = app.add_subcommand("ensemble", "Monte-Carlo ensemble over one or more rho values");
    add_common_options(ens, opt);
    ens->add_option("--manifest", manifest_path, "rerun the ensemble described by a manifest");

    auto* fit = app.add_subcommand("fit-blowup", "sliding-window blow-up fit of a (t, y) series");
    add_common_options(fit, opt);
    fit->add_option("--series", series_path, "two-column series file")->required();

    auto* sta = app.add_subcommand("stats", "moments, bootstrap intervals and PDFs of an outcome table");
    add_common_options(sta, opt);
    sta->add_option("--outcomes", outcomes_path, "outcomes.csv from an ensemble run")->required();

    auto* exp = app.add_subcommand("export", "assemble plot-ready tables from a sweep directory");
    add_common_options(exp, opt);
    exp->add_option("--run-dir", export_root, "directory holding rho_*/ or alpha_*/ runs")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (det->parsed()) return cmd_deterministic(opt);
        if (sto->parsed()) return cmd_stochastic(opt);
        if (ens->parsed()) return cmd_ensemble(opt, manifest_path);
        if (fit->parsed()) return cmd_fit_blowup(series_path, opt);
        if (sta->parsed()) return cmd_stats(outcomes_path, opt);
        if (exp->parsed()) return cmd_export(export_root, opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
