#ifndef TRAJMINE_CHANGE_DETECT_HPP
#define TRAJMINE_CHANGE_DETECT_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "trajmine/flowfield.hpp"
#include "trajmine/rng.hpp"

namespace trajmine {

struct GaussianComponent {
    double weight = 0.0;
    std::array<double, 4> mean{};
    std::array<double, 16> cov{};   // row-major, symmetric positive-definite
    std::array<double, 16> chol{};  // lower-triangular L with cov = L L^T
    double log_norm = 0.0;          // -0.5 * (4 log(2 pi) + log det cov)
};

/// Gaussian mixture over 4-D flow space fitted to one pattern's flow vectors.
struct PatternDensity {
    int pattern_id = -1;
    std::vector<GaussianComponent> comps;
    std::vector<double> loglik_history;  // mean log-likelihood after each E step
    int iterations = 0;
    bool converged = false;

    double log_pdf(const std::array<double, 4>& x) const;
    std::array<double, 4> sample(Rng& rng) const;
};

/// EM fit with Kmeans initialization. A request for g mixture components is
/// reduced to floor(n/5) (minimum 1) when fewer than 5 g samples exist.
/// Covariances get a ridge of max(1e-6 * trace/4, 1e-12) on the diagonal.
/// Deterministic for a fixed seed. Throws std::invalid_argument on empty
/// input.
PatternDensity fit_density(const std::vector<std::array<double, 4>>& samples, int g,
                           std::uint64_t seed, int pattern_id = -1);
PatternDensity fit_density(const std::vector<FlowVector>& flows, int g, std::uint64_t seed,
                           int pattern_id = -1);

/// Monte-Carlo KL(p || q): mean of log p(x) - log q(x) over n_samples draws
/// from p, with each log-density floored at -700. May be slightly negative
/// from sampling noise.
double estimate_kl(const PatternDensity& p, const PatternDensity& q, int n_samples,
                   std::uint64_t seed);

/// Per-pattern match outcome within one epoch's side of the report.
struct PatternMatch {
    int pattern = -1;     // pattern id in its own epoch
    int matched_to = -1;  // best partner in the other epoch, -1 when unmatched
    double kl = 0.0;      // KL estimate of that best pair (undefined when unmatched)
};

struct ChangeMatch {
    int from = -1;  // epoch-1 pattern id
    int to = -1;    // epoch-2 pattern id
    double kl = 0.0;
};

struct ChangeReport {
    std::vector<PatternMatch> epoch1;  // one entry per epoch-1 density, id order
    std::vector<PatternMatch> epoch2;
    std::vector<int> emerged;          // epoch-2 ids with no partner under the threshold
    std::vector<int> disappeared;      // epoch-1 ids with no partner under the threshold
    std::vector<ChangeMatch> matches;  // one per matched epoch-2 pattern: (argmin g, g', kl)
    std::vector<double> kl_matrix;     // row-major, rows = epoch 1, cols = epoch 2
    std::size_t rows = 0;
    std::size_t cols = 0;
};

/// Compares two epochs' fitted densities. An epoch-2 pattern g' is matched
/// when min over g of KL(g || g') falls below kl_threshold (match goes to the
/// argmin); an epoch-1 pattern g is matched when its row minimum does. One
/// pattern may match several on the other side. KL estimates use seeds
/// derived per pair from the master seed, so results are deterministic for
/// any worker count.
ChangeReport diff(const std::vector<PatternDensity>& epoch1,
                  const std::vector<PatternDensity>& epoch2, double kl_threshold, int n_samples,
                  std::uint64_t seed, int workers = 1);

/// Dump, one row per pattern in both epochs:
/// "pattern_id,epoch,status,matched_to,kl" with status in
/// {matched, emerged, disappeared}; matched_to and kl are empty for
/// unmatched patterns.
void save_change_report_csv(const ChangeReport& report, const std::string& path);

}  // namespace trajmine

#endif
