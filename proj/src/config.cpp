#include "trajmine/config.hpp"

#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "trajmine/csv.hpp"
#include "trajmine/errors.hpp"

namespace trajmine {

namespace {

const char* const kModelKeys[] = {"K",          "beta",         "a1",       "b1",
                                  "a2",         "b2",           "alpha",    "th_theta_psi",
                                  "th_theta",   "search_distance", "th_w_theta", "th_w_psi",
                                  "th_w_rho",   "w0",           "sigma",    "cutoff"};

}  // namespace

RunConfig default_config() { return RunConfig{}; }

RunConfig load_config(const std::string& path) {
    RunConfig config;
    std::set<std::string> seen;
    const std::vector<std::string> lines = read_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string line = lines[i];
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string trimmed_line = trim(line);
        if (trimmed_line.empty()) continue;
        const std::size_t eq = trimmed_line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(i + 1) + ": expected 'key = value'");
        }
        const std::string key = trim(trimmed_line.substr(0, eq));
        const std::string value = trim(trimmed_line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError(path + ":" + std::to_string(i + 1) + ": empty key or value");
        }
        if (!seen.insert(key).second) {
            throw ConfigError(path + ":" + std::to_string(i + 1) + ": duplicate key '" + key +
                              "'");
        }
        const auto real = [&](const char* name) {
            const std::optional<double> v = parse_finite(value);
            if (!v) {
                throw ConfigError(path + ":" + std::to_string(i + 1) + ": invalid value for " +
                                  std::string(name) + ": '" + value + "'");
            }
            return *v;
        };
        const auto integer = [&](const char* name) {
            const double v = real(name);
            if (v != std::floor(v)) {
                throw ConfigError(path + ":" + std::to_string(i + 1) + ": " + name +
                                  " must be an integer");
            }
            return static_cast<long long>(v);
        };
        if (key == "K") config.k = static_cast<int>(integer("K"));
        else if (key == "beta") config.beta = real("beta");
        else if (key == "a1") config.a1 = real("a1");
        else if (key == "b1") config.b1 = real("b1");
        else if (key == "a2") config.a2 = real("a2");
        else if (key == "b2") config.b2 = real("b2");
        else if (key == "alpha") config.alpha = real("alpha");
        else if (key == "th_theta_psi") config.th_theta_psi = real("th_theta_psi");
        else if (key == "th_theta") config.th_theta = real("th_theta");
        else if (key == "search_distance") config.search_distance = real("search_distance");
        else if (key == "th_w_theta") config.th_w_theta = real("th_w_theta");
        else if (key == "th_w_psi") config.th_w_psi = real("th_w_psi");
        else if (key == "th_w_rho") config.th_w_rho = real("th_w_rho");
        else if (key == "w0") config.w0 = real("w0");
        else if (key == "sigma") config.sigma = real("sigma");
        else if (key == "cutoff") config.cutoff = real("cutoff");
        else if (key == "seed") config.seed = static_cast<std::uint64_t>(integer("seed"));
        else if (key == "max_iters") config.max_iters = static_cast<int>(integer("max_iters"));
        else if (key == "tol") config.tol = real("tol");
        else if (key == "eps_speed") config.eps_speed = real("eps_speed");
        else if (key == "min_pattern_support") config.min_pattern_support =
            real("min_pattern_support");
        else if (key == "workers") config.workers = static_cast<int>(integer("workers"));
        else if (key == "input") config.input = value;
        else if (key == "out") config.out_dir = value;
        else {
            throw ConfigError(path + ":" + std::to_string(i + 1) + ": unknown key '" + key + "'");
        }
    }
    for (const char* key : kModelKeys) {
        if (seen.find(key) == seen.end()) {
            throw ConfigError(path + ": missing mandatory parameter '" + std::string(key) + "'");
        }
    }
    validate_config(config);
    return config;
}

void validate_config(const RunConfig& config) {
    const auto fail = [](const std::string& message) { throw ConfigError(message); };
    if (config.k < 1) fail("K must be at least 1");
    if (!(config.beta >= 0.0) || !std::isfinite(config.beta)) {
        fail("beta must be finite and non-negative");
    }
    if (!(config.a1 > 0.0)) fail("a1 must be positive");
    if (!(config.b1 > 0.0)) fail("b1 must be positive");
    if (!(config.a2 > 0.0)) fail("a2 must be positive");
    if (!(config.b2 > 0.0)) fail("b2 must be positive");
    if (!std::isfinite(config.alpha)) fail("alpha must be finite");
    if (!(config.th_theta_psi > 0.0 && config.th_theta_psi <= 180.0)) {
        fail("th_theta_psi must lie in (0, 180]");
    }
    if (!(config.th_theta > 0.0 && config.th_theta <= 180.0)) {
        fail("th_theta must lie in (0, 180]");
    }
    if (!(config.search_distance >= 1.0)) fail("search_distance must be at least 1");
    if (!(config.th_w_theta >= 0.0)) fail("th_w_theta must be non-negative");
    if (!(config.th_w_psi >= 0.0)) fail("th_w_psi must be non-negative");
    if (!(config.th_w_rho >= 0.0)) fail("th_w_rho must be non-negative");
    if (!(config.w0 > 0.0)) fail("w0 must be positive");
    if (!(config.sigma > 0.0)) fail("sigma must be positive");
    if (!(config.cutoff >= 0.0 && config.cutoff <= 1.0)) fail("cutoff must lie in [0, 1]");
    if (config.max_iters < 1) fail("max_iters must be at least 1");
    if (!(config.tol >= 0.0)) fail("tol must be non-negative");
    if (!(config.eps_speed >= 0.0)) fail("eps_speed must be non-negative");
    if (!(config.min_pattern_support >= 0.0 && config.min_pattern_support <= 1.0)) {
        fail("min_pattern_support must lie in [0, 1]");
    }
    if (config.workers < 1) fail("workers must be at least 1");
}

std::string config_to_string(const RunConfig& config) {
    std::string out;
    const auto emit = [&out](const char* key, const std::string& value) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    };
    out += "# model parameters\n";
    emit("K", std::to_string(config.k));
    emit("beta", format_double(config.beta));
    emit("a1", format_double(config.a1));
    emit("b1", format_double(config.b1));
    emit("a2", format_double(config.a2));
    emit("b2", format_double(config.b2));
    emit("alpha", format_double(config.alpha));
    emit("th_theta_psi", format_double(config.th_theta_psi));
    emit("th_theta", format_double(config.th_theta));
    emit("search_distance", format_double(config.search_distance));
    emit("th_w_theta", format_double(config.th_w_theta));
    emit("th_w_psi", format_double(config.th_w_psi));
    emit("th_w_rho", format_double(config.th_w_rho));
    emit("w0", format_double(config.w0));
    emit("sigma", format_double(config.sigma));
    emit("cutoff", format_double(config.cutoff));
    out += "# operational settings\n";
    emit("seed", std::to_string(config.seed));
    emit("max_iters", std::to_string(config.max_iters));
    emit("tol", format_double(config.tol));
    emit("eps_speed", format_double(config.eps_speed));
    emit("min_pattern_support", format_double(config.min_pattern_support));
    emit("workers", std::to_string(config.workers));
    return out;
}

}  // namespace trajmine
