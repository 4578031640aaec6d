#pragma once

// Experiment configuration: a flat key = value file with '#' comments.
// Unknown keys and malformed values are configuration errors (the CLI maps
// ConfigError to exit code 2).  dump_config() emits the same format, so a
// dumped default file parses back unchanged.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "band.hpp"
#include "signal.hpp"

namespace blindsense {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    double omega = detail::kPi;               // full band edge (rad/s)
    double omega_prime = detail::kPi / 8.0;   // occupied-measure budget parameter
    double horizon = 32.0;                    // observation window length T
    double nu = 0.25;                         // oversampling margin for N and S
    double delta = detail::kPi / 8.0;         // allocation endpoint grid pitch
    int grid = 256;                           // time grid points
    int max_subbands = 1;                     // sub-bands per allocation half
    double sigma_e = 0.0;                     // measurement noise level (0 = none)
    int trials = 50;                          // Monte Carlo trials per sweep point
    std::vector<std::uint64_t> seeds = {20260817};
    std::vector<int> m_sweep = {4, 5, 6, 7, 8, 9, 10, 11, 12, 14, 16};
    std::string out = "out";

    int nyquist() const { return nyquist_count(omega, horizon, nu); }
    int sparsity() const { return sparsity_count(omega_prime, horizon, nu); }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("config: bad numeric value for " + key + ": " + v);
    return x;
}

inline long long parse_int(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const long long x = std::strtoll(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("config: bad integer value for " + key + ": " + v);
    return x;
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& v) {
    if (!v.empty() && v[0] == '-')
        throw ConfigError("config: bad integer value for " + key + ": " + v);
    char* end = nullptr;
    const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("config: bad integer value for " + key + ": " + v);
    return static_cast<std::uint64_t>(x);
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& key, const std::string& v, Parse parse) {
    std::vector<T> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(static_cast<T>(parse(key, item)));
    }
    if (out.empty()) throw ConfigError("config: empty list for " + key);
    return out;
}

} // namespace detail

inline void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                               const std::string& value) {
    using namespace detail;
    if (key == "omega") cfg.omega = parse_double(key, value);
    else if (key == "omega_prime") cfg.omega_prime = parse_double(key, value);
    else if (key == "horizon") cfg.horizon = parse_double(key, value);
    else if (key == "nu") cfg.nu = parse_double(key, value);
    else if (key == "delta") cfg.delta = parse_double(key, value);
    else if (key == "grid") cfg.grid = static_cast<int>(parse_int(key, value));
    else if (key == "max_subbands") cfg.max_subbands = static_cast<int>(parse_int(key, value));
    else if (key == "sigma_e") cfg.sigma_e = parse_double(key, value);
    else if (key == "trials") cfg.trials = static_cast<int>(parse_int(key, value));
    else if (key == "seeds")
        cfg.seeds = parse_list<std::uint64_t>(key, value, parse_uint);
    else if (key == "m_sweep")
        cfg.m_sweep = parse_list<int>(key, value, parse_int);
    else if (key == "out") cfg.out = value;
    else throw ConfigError("config: unknown key: " + key);
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) + " is not key = value");
        apply_config_entry(cfg, detail::trim(line.substr(0, eq)),
                           detail::trim(line.substr(eq + 1)));
    }
    return cfg;
}

// Consistency checks shared by every runner.
inline void validate_config(const ExperimentConfig& cfg) {
    if (!(cfg.omega > 0.0)) throw ConfigError("config: omega must be positive");
    if (cfg.omega_prime < 0.0) throw ConfigError("config: omega_prime must be nonnegative");
    if (!(2.0 * cfg.omega_prime < cfg.omega))
        throw ConfigError("config: sparse budget requires 2 * omega_prime < omega");
    if (!(cfg.horizon > 0.0)) throw ConfigError("config: horizon must be positive");
    if (!(cfg.nu > 0.0)) throw ConfigError("config: nu must be positive");
    if (!(cfg.delta > 0.0)) throw ConfigError("config: delta must be positive");
    const double steps = 2.0 * cfg.omega / cfg.delta;
    if (std::abs(steps - std::round(steps)) > 1e-9 * steps)
        throw ConfigError("config: delta must divide 2 * omega");
    if (cfg.grid < min_grid_points(cfg.omega, cfg.horizon))
        throw ConfigError("config: grid must be at least " +
                          std::to_string(min_grid_points(cfg.omega, cfg.horizon)) +
                          " points for this band and horizon");
    if (cfg.max_subbands < 1) throw ConfigError("config: max_subbands must be at least 1");
    if (cfg.sigma_e < 0.0) throw ConfigError("config: sigma_e must be nonnegative");
    if (cfg.trials < 1) throw ConfigError("config: trials must be at least 1");
    if (cfg.seeds.empty()) throw ConfigError("config: seeds must be nonempty");
    if (cfg.m_sweep.empty()) throw ConfigError("config: m_sweep must be nonempty");
    for (int m : cfg.m_sweep)
        if (m < 1) throw ConfigError("config: m_sweep entries must be positive");
}

inline std::string dump_config(const ExperimentConfig& cfg) {
    std::ostringstream out;
    char buf[48];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    out << "omega = " << num(cfg.omega) << "\n";
    out << "omega_prime = " << num(cfg.omega_prime) << "\n";
    out << "horizon = " << num(cfg.horizon) << "\n";
    out << "nu = " << num(cfg.nu) << "\n";
    out << "delta = " << num(cfg.delta) << "\n";
    out << "grid = " << cfg.grid << "\n";
    out << "max_subbands = " << cfg.max_subbands << "\n";
    out << "sigma_e = " << num(cfg.sigma_e) << "\n";
    out << "trials = " << cfg.trials << "\n";
    out << "seeds = ";
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i) out << (i ? "," : "") << cfg.seeds[i];
    out << "\n";
    out << "m_sweep = ";
    for (std::size_t i = 0; i < cfg.m_sweep.size(); ++i) out << (i ? "," : "") << cfg.m_sweep[i];
    out << "\n";
    out << "out = " << cfg.out << "\n";
    return out.str();
}

} // namespace blindsense
