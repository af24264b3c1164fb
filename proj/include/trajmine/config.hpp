#ifndef TRAJMINE_CONFIG_HPP
#define TRAJMINE_CONFIG_HPP

#include <cstdint>
#include <string>

namespace trajmine {

/// Full parameter set for one mining run: the 16 model parameters plus
/// operational settings.
struct RunConfig {
    // Model parameters.
    int k = 300;                   // number of motion components
    double beta = 45.0;            // velocity weight in the clustering metric
    double a1 = 30.0;              // forward ellipse semi-axis, along flow
    double b1 = 12.0;              // forward ellipse semi-axis, lateral
    double a2 = 15.0;              // backward ellipse semi-axis, along flow
    double b2 = 12.0;              // backward ellipse semi-axis, lateral
    double alpha = 1.0;            // curve-expectation multiplier
    double th_theta_psi = 12.0;    // degrees
    double th_theta = 30.0;        // degrees
    double search_distance = 2.0;  // unblocking scale bound
    double th_w_theta = 15.0;      // wedge flow-similarity bound, degrees
    double th_w_psi = 120.0;       // wedge sector half-angle, degrees
    double th_w_rho = 25.0;        // wedge sector radius; 0 disables the wedge
    double w0 = 1.0;               // base term of the signature weights
    double sigma = 20.0;           // kernel bandwidth of the signature weights
    double cutoff = 0.3;           // WJD clustering cutoff

    // Operational settings.
    std::uint64_t seed = 1;
    int max_iters = 100;                 // Kmeans iteration cap
    double tol = 1e-9;                   // Kmeans center-shift tolerance
    double eps_speed = 1e-6;             // heading-defined speed threshold
    double min_pattern_support = 0.002;  // noise threshold, fraction of all flow vectors
    int workers = 1;
    std::string input;
    std::string out_dir;
};

/// The documented default profile for normalized [0, 1000] data.
RunConfig default_config();

/// Parses a "key = value" file ('#' starts a comment). All 16 model keys are
/// mandatory; operational keys (seed, max_iters, tol, eps_speed,
/// min_pattern_support, workers, input, out) are optional. Unknown keys are
/// rejected. Throws ConfigError on any parse or validation failure and
/// DataError when the file cannot be read.
RunConfig load_config(const std::string& path);

/// Bounds checks for every field; throws ConfigError on the first violation.
void validate_config(const RunConfig& config);

/// Renders the config in the load_config file format.
std::string config_to_string(const RunConfig& config);

}  // namespace trajmine

#endif
