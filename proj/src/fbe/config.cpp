#include "fbe/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "fbe/errors.hpp"

namespace fbe {

const char* to_string(RunMode m) {
    switch (m) {
        case RunMode::deterministic: return "deterministic";
        case RunMode::stochastic: return "stochastic";
        case RunMode::ensemble: return "ensemble";
    }
    return "unknown";
}

const char* to_string(InitKind k) {
    switch (k) {
        case InitKind::sine: return "sin";
        case InitKind::zero: return "zero";
    }
    return "unknown";
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected a number, got '" + value + "'");
    }
}

std::size_t parse_size(const std::string& key, const std::string& value) {
    const double v = parse_double(key, value);
    if (v < 0.0 || v != std::floor(v)) {
        throw ConfigError("key '" + key + "': expected a nonnegative integer, got '" + value + "'");
    }
    return static_cast<std::size_t>(v);
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const auto v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected an unsigned integer, got '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("key '" + key + "': expected true/false, got '" + value + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(key, item));
    }
    return out;
}

void require_power_of_two(const std::string& key, std::size_t n) {
    if (n < 8 || (n & (n - 1)) != 0) {
        throw ConfigError("key '" + key + "': must be a power of two >= 8, got " +
                          std::to_string(n));
    }
}

}  // namespace

RunSetup parse_config_stream(std::istream& in, const std::string& origin) {
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                              ": expected 'key = value', got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (kv.count(key)) {
            throw ConfigError(origin + ": duplicate key '" + key + "'");
        }
        kv[key] = value;
    }

    RunSetup setup;
    bool have_alpha = false;
    bool have_dt = false;

    auto take = [&](const char* key) -> std::string {
        auto it = kv.find(key);
        if (it == kv.end()) return {};
        std::string v = it->second;
        kv.erase(it);
        return v;
    };

    if (auto v = take("mode"); !v.empty()) {
        if (v == "deterministic") setup.mode = RunMode::deterministic;
        else if (v == "stochastic") setup.mode = RunMode::stochastic;
        else if (v == "ensemble") setup.mode = RunMode::ensemble;
        else throw ConfigError("key 'mode': expected deterministic|stochastic|ensemble, got '" + v + "'");
    }
    if (auto v = take("init"); !v.empty()) {
        if (v == "sin") setup.init = InitKind::sine;
        else if (v == "zero") setup.init = InitKind::zero;
        else throw ConfigError("key 'init': expected sin|zero, got '" + v + "'");
    }
    if (auto v = take("alpha"); !v.empty()) {
        setup.solver.alpha = parse_double("alpha", v);
        have_alpha = true;
    }
    if (auto v = take("nu"); !v.empty()) setup.solver.nu = parse_double("nu", v);
    if (auto v = take("t_end"); !v.empty()) setup.solver.t_end = parse_double("t_end", v);
    if (auto v = take("dt"); !v.empty()) {
        setup.solver.dt_init = parse_double("dt", v);
        have_dt = true;
    }
    if (auto v = take("dt_min"); !v.empty()) setup.solver.dt_min = parse_double("dt_min", v);
    if (auto v = take("cfl"); !v.empty()) setup.solver.cfl = parse_double("cfl", v);
    if (auto v = take("n_init"); !v.empty()) {
        setup.solver.n_init = parse_size("n_init", v);
        require_power_of_two("n_init", setup.solver.n_init);
    }
    if (auto v = take("n_max"); !v.empty()) {
        setup.solver.n_max = parse_size("n_max", v);
        require_power_of_two("n_max", setup.solver.n_max);
    }
    if (auto v = take("refine_threshold"); !v.empty()) {
        setup.solver.refine_threshold = parse_double("refine_threshold", v);
    }
    if (auto v = take("tail_stop_threshold"); !v.empty()) {
        setup.solver.tail_stop_threshold = parse_double("tail_stop_threshold", v);
    }
    if (auto v = take("snapshot_times"); !v.empty()) {
        setup.solver.snapshot_times = parse_list("snapshot_times", v);
    }
    if (auto v = take("strip_stride"); !v.empty()) setup.solver.strip_stride = parse_size("strip_stride", v);
    if (auto v = take("strip_floor"); !v.empty()) setup.solver.strip_floor = parse_double("strip_floor", v);
    if (auto v = take("strip_k_lo"); !v.empty()) setup.solver.strip_k_lo = parse_size("strip_k_lo", v);
    if (auto v = take("rho"); !v.empty()) {
        setup.noise.rho = parse_double("rho", v);
        if (setup.noise.rho < 0.0) throw ConfigError("key 'rho': must be nonnegative");
    }
    if (auto v = take("seed"); !v.empty()) setup.noise.master_seed = parse_u64("seed", v);
    if (auto v = take("n_modes"); !v.empty()) setup.noise.n_modes = parse_size("n_modes", v);
    if (auto v = take("colored_stage_noise"); !v.empty()) {
        setup.noise.colored_stage_noise = parse_bool("colored_stage_noise", v);
    }
    if (auto v = take("samples"); !v.empty()) {
        setup.samples = parse_size("samples", v);
        if (setup.samples == 0) throw ConfigError("key 'samples': must be positive");
    }
    if (auto v = take("threads"); !v.empty()) setup.threads = parse_size("threads", v);
    if (auto v = take("rho_grid"); !v.empty()) {
        setup.rho_grid = parse_list("rho_grid", v);
        for (double r : setup.rho_grid) {
            if (r < 0.0) throw ConfigError("key 'rho_grid': entries must be nonnegative");
        }
    }
    if (auto v = take("retain_series"); !v.empty()) setup.retain_series = parse_size("retain_series", v);
    if (auto v = take("window_len"); !v.empty()) setup.windows.window_len = parse_size("window_len", v);
    if (auto v = take("window_stride"); !v.empty()) setup.windows.stride = parse_size("window_stride", v);
    if (auto v = take("out_dir"); !v.empty()) setup.out_dir = v;

    if (!kv.empty()) {
        throw ConfigError(origin + ": unknown key '" + kv.begin()->first + "'");
    }
    if (!have_alpha) {
        throw ConfigError(origin + ": key 'alpha' is required (dissipation exponent in [0,1])");
    }
    if (!have_dt && setup.mode != RunMode::deterministic) {
        // fixed-step stochastic default, scaled inversely with resolution
        setup.solver.dt_init = 2.5e-4 * 1024.0 / static_cast<double>(setup.solver.n_init);
    }
    setup.solver.validate();
    if (setup.windows.window_len < 4) throw ConfigError("key 'window_len': must be at least 4");
    if (setup.windows.stride == 0) throw ConfigError("key 'window_stride': must be positive");
    return setup;
}

RunSetup parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_config_stream(in, path);
}

std::string serialize_config(const RunSetup& s) {
    std::ostringstream out;
    out.precision(17);
    out << "mode = " << to_string(s.mode) << "\n";
    out << "init = " << to_string(s.init) << "\n";
    out << "alpha = " << s.solver.alpha << "\n";
    out << "nu = " << s.solver.nu << "\n";
    out << "t_end = " << s.solver.t_end << "\n";
    out << "dt = " << s.solver.dt_init << "\n";
    out << "dt_min = " << s.solver.dt_min << "\n";
    out << "cfl = " << s.solver.cfl << "\n";
    out << "n_init = " << s.solver.n_init << "\n";
    out << "n_max = " << s.solver.n_max << "\n";
    out << "refine_threshold = " << s.solver.refine_threshold << "\n";
    out << "tail_stop_threshold = " << s.solver.tail_stop_threshold << "\n";
    if (!s.solver.snapshot_times.empty()) {
        out << "snapshot_times = ";
        for (std::size_t i = 0; i < s.solver.snapshot_times.size(); ++i) {
            out << (i ? "," : "") << s.solver.snapshot_times[i];
        }
        out << "\n";
    }
    out << "strip_stride = " << s.solver.strip_stride << "\n";
    out << "strip_floor = " << s.solver.strip_floor << "\n";
    out << "strip_k_lo = " << s.solver.strip_k_lo << "\n";
    out << "rho = " << s.noise.rho << "\n";
    out << "seed = " << s.noise.master_seed << "\n";
    out << "n_modes = " << s.noise.n_modes << "\n";
    out << "colored_stage_noise = " << (s.noise.colored_stage_noise ? "true" : "false") << "\n";
    out << "samples = " << s.samples << "\n";
    out << "threads = " << s.threads << "\n";
    if (!s.rho_grid.empty()) {
        out << "rho_grid = ";
        for (std::size_t i = 0; i < s.rho_grid.size(); ++i) {
            out << (i ? "," : "") << s.rho_grid[i];
        }
        out << "\n";
    }
    out << "retain_series = " << s.retain_series << "\n";
    out << "window_len = " << s.windows.window_len << "\n";
    out << "window_stride = " << s.windows.stride << "\n";
    out << "out_dir = " << s.out_dir << "\n";
    return out.str();
}

SpectralField make_initial(InitKind kind, GridSpec grid) {
    switch (kind) {
        case InitKind::sine: return sine_field(grid);
        case InitKind::zero: return SpectralField(grid);
    }
    throw ConfigError("make_initial: unknown initial condition");
}

double initial_min_slope(InitKind kind) {
    switch (kind) {
        case InitKind::sine: return -1.0;  // d/dx sin(x) attains -1
        case InitKind::zero: return 0.0;
    }
    throw ConfigError("initial_min_slope: unknown initial condition");
}

}  // namespace fbe
