#include "fbe/export.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "fbe/diagnostics.hpp"
#include "fbe/errors.hpp"

namespace fbe {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out.precision(17);
    return out;
}

}  // namespace

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create directory " + dir + ": " + ec.message());
}

void write_outcomes(const std::string& path, const std::vector<OutcomeSample>& outcomes) {
    auto out = open_out(path);
    out << "sample_index,t_star,e_max,t_max,censored\n";
    for (const auto& o : outcomes) {
        out << o.sample_index << ',';
        if (o.t_star) out << *o.t_star;
        out << ',' << o.e_max << ',' << o.t_max << ',' << (o.censored ? 1 : 0) << '\n';
    }
}

std::vector<OutcomeSample> read_outcomes(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open outcomes table: " + path);
    std::string line;
    if (!std::getline(in, line) || line != "sample_index,t_star,e_max,t_max,censored") {
        throw ConfigError("unexpected outcomes header in " + path);
    }
    std::vector<OutcomeSample> outcomes;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        OutcomeSample o;
        std::getline(ss, cell, ',');
        o.sample_index = std::stoull(cell);
        std::getline(ss, cell, ',');
        if (!cell.empty()) o.t_star = std::stod(cell);
        std::getline(ss, cell, ',');
        o.e_max = std::stod(cell);
        std::getline(ss, cell, ',');
        o.t_max = std::stod(cell);
        std::getline(ss, cell, ',');
        o.censored = cell == "1";
        outcomes.push_back(o);
    }
    return outcomes;
}

void write_manifest(const std::string& path, const RunManifest& m) {
    auto out = open_out(path);
    out << "[manifest]\n";
    out << "version = " << m.code_version << "\n";
    out << "master_seed = " << m.master_seed << "\n";
    out << "started_at = " << m.started_at << "\n";
    out << "finished_at = " << m.finished_at << "\n";
    for (const auto& [name, count] : m.termination_counts) {
        out << "terminated_" << name << " = " << count << "\n";
    }
    out << "\n[config]\n" << m.config_text;
    out << "\n[seeds]\n";
    for (std::size_t i = 0; i < m.sample_seeds.size(); ++i) {
        out << i << ' ' << m.sample_seeds[i] << '\n';
    }
}

void write_diagnostics(const std::string& path, const std::vector<DiagnosticRecord>& records) {
    auto out = open_out(path);
    out << "# per-step diagnostics\n";
    out << "# t enstrophy delta delta_reliable n_active dt\n";
    for (const auto& r : records) {
        out << r.t << ' ' << r.enstrophy << ' ';
        if (r.delta) out << *r.delta;
        else out << "nan";
        out << ' ' << (r.delta_reliable ? 1 : 0) << ' ' << r.n_active << ' ' << r.dt << '\n';
    }
}

std::vector<SeriesPoint> read_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open series file: " + path);
    std::vector<SeriesPoint> series;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        std::stringstream ss(line);
        SeriesPoint p;
        if (ss >> p.t >> p.y) series.push_back(p);
    }
    return series;
}

void write_columns(const std::string& path, const std::string& comment,
                   const std::vector<std::string>& names,
                   const std::vector<std::vector<double>>& rows) {
    auto out = open_out(path);
    if (!comment.empty()) out << "# " << comment << "\n";
    out << "#";
    for (const auto& n : names) out << ' ' << n;
    out << "\n";
    for (const auto& row : rows) {
        if (row.size() != names.size()) {
            throw ConfigError("write_columns: row width mismatch in " + path);
        }
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? " " : "") << row[i];
        out << '\n';
    }
}

void write_histogram(const std::string& path, const Histogram& hist,
                     const std::string& label) {
    auto out = open_out(path);
    out << "# normalized density of " << label << "\n";
    out << "# bin_lo bin_hi density\n";
    for (std::size_t i = 0; i < hist.density.size(); ++i) {
        out << hist.edges[i] << ' ' << hist.edges[i + 1] << ' ' << hist.density[i] << '\n';
    }
}

void write_histogram2d(const std::string& path, const Histogram2d& hist,
                       const std::string& x_label, const std::string& y_label) {
    auto out = open_out(path);
    const std::size_t nx = hist.x_edges.size() - 1;
    const std::size_t ny = hist.y_edges.size() - 1;
    out << "# joint density of " << x_label << " and " << y_label << "\n";
    out << "# x_center y_center density\n";
    for (std::size_t ix = 0; ix < nx; ++ix) {
        const double xc = 0.5 * (hist.x_edges[ix] + hist.x_edges[ix + 1]);
        for (std::size_t iy = 0; iy < ny; ++iy) {
            const double yc = 0.5 * (hist.y_edges[iy] + hist.y_edges[iy + 1]);
            out << xc << ' ' << yc << ' ' << hist.density[ix * ny + iy] << '\n';
        }
    }
}

void export_figures_data(const std::string& dir, const Trajectory& traj,
                         bool expect_strip) {
    std::vector<std::string> absent;
    if (traj.snapshots.empty()) {
        absent.push_back("physical_snapshots");
        absent.push_back("spectrum_snapshots");
    }
    if (traj.records.empty()) absent.push_back("enstrophy");
    if (expect_strip) {
        bool any_delta = false;
        for (const auto& r : traj.records) {
            if (r.delta) { any_delta = true; break; }
        }
        if (!any_delta) absent.push_back("strip_width");
    }
    if (!absent.empty()) {
        std::string msg = "export_figures_data: missing data for panels:";
        for (const auto& p : absent) msg += " " + p;
        throw ConfigError(msg);
    }

    ensure_dir(dir);

    {
        auto out = open_out(dir + "/physical_snapshots.dat");
        out << "# solution snapshots at collocation points; one block per time\n";
        for (const auto& snap : traj.snapshots) {
            const auto values = inverse_transform(snap);
            out << "# t = " << snap.time_tag << " n = " << snap.grid.n << "\n";
            out << "# x u\n";
            for (std::size_t j = 0; j < values.size(); ++j) {
                out << snap.grid.point(j) << ' ' << values[j] << '\n';
            }
            out << '\n';
        }
    }
    {
        auto out = open_out(dir + "/spectrum_snapshots.dat");
        out << "# coefficient magnitudes; one block per time\n";
        for (const auto& snap : traj.snapshots) {
            out << "# t = " << snap.time_tag << " n = " << snap.grid.n << "\n";
            out << "# k abs_u_k\n";
            for (std::size_t k = 1; k <= snap.num_modes(); ++k) {
                out << k << ' ' << std::abs(snap.mode(k)) << '\n';
            }
            out << '\n';
        }
    }
    {
        auto out = open_out(dir + "/enstrophy.dat");
        out << "# t enstrophy\n";
        for (const auto& r : traj.records) out << r.t << ' ' << r.enstrophy << '\n';
    }
    if (expect_strip) {
        auto out = open_out(dir + "/strip_width.dat");
        out << "# t delta reliable\n";
        for (const auto& r : traj.records) {
            if (r.delta) out << r.t << ' ' << *r.delta << ' ' << (r.delta_reliable ? 1 : 0) << '\n';
        }
    }
    write_diagnostics(dir + "/diagnostics.dat", traj.records);
}

void export_ensemble(const std::string& dir, const EnsembleResult& result) {
    ensure_dir(dir);
    write_outcomes(dir + "/outcomes.csv", result.outcomes);
    write_manifest(dir + "/manifest.txt", result.manifest);
    for (std::size_t i = 0; i < result.retained.size(); ++i) {
        std::ostringstream name;
        name << dir << "/diagnostics_sample_" << std::setw(4) << std::setfill('0') << i << ".dat";
        write_diagnostics(name.str(), result.retained[i].records);
    }
}

}  // namespace fbe
